#include "masim/ao.hpp"

#include <algorithm>
#include <cmath>

#include "masim/metrics.hpp"

namespace masim {

namespace {

SolveReport finalize_report(const Apv& apv, const Beamformer& w,
                            const Scenario& scenario,
                            const ScenarioConfig& cfg,
                            std::vector<double> trace, int iterations) {
  SolveReport rep;
  const std::vector<Vec> h = all_channels(apv, scenario, cfg.wavelength);
  rep.snr = received_snr(w, h[0], cfg.noise_power);
  rep.snr_db = lin_to_db(rep.snr);
  for (int k = 1; k <= scenario.k_prs(); ++k) {
    rep.interference.push_back(
        interference_power(w, h[static_cast<size_t>(k)]));
  }
  rep.objective_trace = std::move(trace);
  rep.feasible = check_feasible(w, apv, scenario, cfg).feasible;
  rep.iterations = iterations;
  return rep;
}

double snr_of(const Vec& h0, const Beamformer& w, const ScenarioConfig& cfg) {
  return std::norm(h0.dot(w.w())) / cfg.noise_power;
}

}  // namespace

Apv random_grid_apv(const ScenarioConfig& cfg, Rng& rng) {
  const SamplingGrid grid(cfg.region_size, cfg.grid_points_per_axis);
  const double d2 = cfg.min_spacing * cfg.min_spacing;
  for (int attempt = 0; attempt < 256; ++attempt) {
    std::vector<Vec2> pos;
    pos.reserve(static_cast<size_t>(cfg.n_antennas));
    int rejections = 0;
    while (static_cast<int>(pos.size()) < cfg.n_antennas &&
           rejections < 4096) {
      const Vec2& p = grid.points()[rng.index(grid.points().size())];
      bool ok = true;
      for (const Vec2& q : pos) {
        if ((p - q).squaredNorm() < d2) {
          ok = false;
          break;
        }
      }
      if (ok) {
        pos.push_back(p);
      } else {
        ++rejections;
      }
    }
    if (static_cast<int>(pos.size()) == cfg.n_antennas) {
      return Apv(std::move(pos), cfg.region_size, cfg.min_spacing);
    }
  }
  throw SolverError("could not draw a spacing-feasible grid APV");
}

AoResult ao_solve(const Scenario& scenario, const ScenarioConfig& cfg,
                  Rng& rng) {
  cfg.validate();
  const SamplingGrid grid(cfg.region_size, cfg.grid_points_per_axis);
  const PointChannelTable table(grid, scenario, cfg.wavelength);

  Apv apv = random_grid_apv(cfg, rng);
  std::vector<Vec> h = all_channels(apv, scenario, cfg.wavelength);
  std::vector<Vec> prs(h.begin() + 1, h.end());
  Beamformer w = feasible_init_w(h[0], prs, cfg);

  std::vector<double> trace;
  double snr = snr_of(h[0], w, cfg);
  trace.push_back(snr);
  int outer = 0;
  bool stuck = false;
  for (; outer < cfg.ao_max_outer; ++outer) {
    auto [w_new, sca_trace] = sca_beamforming(h[0], prs, cfg, w);
    w = w_new;
    SearchStats stats;
    apv = sequential_search(apv, w, scenario, cfg, &stats, &table, &grid);
    stuck = stuck || stats.constraint_stuck;
    h = all_channels(apv, scenario, cfg.wavelength);
    prs.assign(h.begin() + 1, h.end());
    const double snr_new = snr_of(h[0], w, cfg);
    trace.push_back(std::max(snr_new, snr));
    const double improvement = snr_new - snr;
    snr = std::max(snr_new, snr);
    if (improvement <= cfg.ao_tol * std::max(snr, 1e-300)) {
      ++outer;
      break;
    }
  }
  SolveReport rep = finalize_report(apv, w, scenario, cfg, std::move(trace), outer);
  rep.constraint_stuck = stuck;
  return AoResult{std::move(apv), std::move(w), std::move(rep)};
}

AoResult mrt_scheme(const Scenario& scenario, const ScenarioConfig& cfg,
                    Rng& rng) {
  cfg.validate();
  const SamplingGrid grid(cfg.region_size, cfg.grid_points_per_axis);
  const PointChannelTable table(grid, scenario, cfg.wavelength);

  const int n_ant = cfg.n_antennas;
  const int n_rx = scenario.k_prs() + 1;
  const size_t n_pts = grid.points().size();
  const double d2 = cfg.min_spacing * cfg.min_spacing;

  Apv apv = random_grid_apv(cfg, rng);
  std::vector<Vec2> pos = apv.positions();

  // The beamformer is pinned to backed-off MRT, so the end-to-end SNR of any
  // candidate placement has a closed form in the SR array gain g = ||h0||^2
  // and the cross products c_k = h_k^H h0: with full power P the interference
  // at PR k is P |c_k|^2 / g, and if the worst one exceeds Gamma the power is
  // scaled down to Gamma g / max_k |c_k|^2. The coordinate search below ranks
  // every grid candidate by that exact post-backoff SNR, which is what makes
  // the placement steer away from the PRs instead of only chasing gain.
  std::vector<std::vector<cplx>> h(
      static_cast<size_t>(n_rx),
      std::vector<cplx>(static_cast<size_t>(n_ant)));
  double g = 0.0;
  std::vector<cplx> c(static_cast<size_t>(n_rx), cplx{0.0, 0.0});
  auto refresh = [&] {
    g = 0.0;
    std::fill(c.begin(), c.end(), cplx{0.0, 0.0});
    for (int r = 0; r < n_rx; ++r) {
      for (int n = 0; n < n_ant; ++n) {
        h[static_cast<size_t>(r)][static_cast<size_t>(n)] = channel_entry(
            pos[static_cast<size_t>(n)], scenario.receiver(r), cfg.wavelength);
      }
    }
    for (int n = 0; n < n_ant; ++n) {
      g += std::norm(h[0][static_cast<size_t>(n)]);
      for (int k = 1; k < n_rx; ++k) {
        c[static_cast<size_t>(k)] +=
            std::conj(h[static_cast<size_t>(k)][static_cast<size_t>(n)]) *
            h[0][static_cast<size_t>(n)];
      }
    }
  };
  auto objective = [&](double gg, double worst_cross2) {
    if (gg <= 0.0) return 0.0;
    double p_eff = cfg.p_max;
    if (n_rx > 1 && cfg.p_max * worst_cross2 > cfg.it_threshold * gg) {
      p_eff = cfg.it_threshold * gg / worst_cross2;
    }
    return p_eff * gg / cfg.noise_power;
  };
  auto worst_cross = [&] {
    double m2 = 0.0;
    for (int k = 1; k < n_rx; ++k) {
      m2 = std::max(m2, std::norm(c[static_cast<size_t>(k)]));
    }
    return m2;
  };

  refresh();
  double snr = objective(g, worst_cross());
  std::vector<double> trace{snr};
  std::vector<cplx> c_ex(static_cast<size_t>(n_rx));
  int sweeps = 0;
  for (; sweeps < cfg.max_sweeps; ++sweeps) {
    bool moved = false;
    for (int n = 0; n < n_ant; ++n) {
      const double g_ex = g - std::norm(h[0][static_cast<size_t>(n)]);
      for (int k = 1; k < n_rx; ++k) {
        c_ex[static_cast<size_t>(k)] =
            c[static_cast<size_t>(k)] -
            std::conj(h[static_cast<size_t>(k)][static_cast<size_t>(n)]) *
                h[0][static_cast<size_t>(n)];
      }
      double best = snr;
      long best_idx = -1;
      for (size_t idx = 0; idx < n_pts; ++idx) {
        const Vec2& p = grid.points()[idx];
        bool spacing_ok = true;
        for (int m = 0; m < n_ant; ++m) {
          if (m == n) continue;
          if ((p - pos[static_cast<size_t>(m)]).squaredNorm() < d2) {
            spacing_ok = false;
            break;
          }
        }
        if (!spacing_ok) continue;
        const cplx e0 = table.entry(0, idx);
        const double gg = g_ex + std::norm(e0);
        double m2 = 0.0;
        for (int k = 1; k < n_rx; ++k) {
          m2 = std::max(m2, std::norm(c_ex[static_cast<size_t>(k)] +
                                      std::conj(table.entry(k, idx)) * e0));
        }
        const double f = objective(gg, m2);
        if (f > best) {
          best = f;
          best_idx = static_cast<long>(idx);
        }
      }
      if (best_idx >= 0) {
        pos[static_cast<size_t>(n)] =
            grid.points()[static_cast<size_t>(best_idx)];
        for (int r = 0; r < n_rx; ++r) {
          h[static_cast<size_t>(r)][static_cast<size_t>(n)] =
              table.entry(r, static_cast<size_t>(best_idx));
        }
        refresh();
        snr = objective(g, worst_cross());
        moved = true;
      }
    }
    trace.push_back(std::max(trace.back(), snr));
    if (!moved) {
      ++sweeps;
      break;
    }
  }

  apv = Apv(std::move(pos), cfg.region_size, cfg.min_spacing);
  const std::vector<Vec> hv = all_channels(apv, scenario, cfg.wavelength);
  const std::vector<Vec> prs(hv.begin() + 1, hv.end());
  const Beamformer w = feasible_init_w(hv[0], prs, cfg);
  const double backoff = w.w().norm() / std::sqrt(cfg.p_max);
  SolveReport rep =
      finalize_report(apv, w, scenario, cfg, std::move(trace), sweeps);
  rep.mrt_backoff = backoff;
  rep.full_power = backoff >= 1.0 - 1e-9;
  return AoResult{std::move(apv), std::move(w), std::move(rep)};
}

AoResult zf_scheme(const Scenario& scenario, const ScenarioConfig& cfg,
                   Rng& rng) {
  cfg.validate();
  if (cfg.n_antennas <= scenario.k_prs()) {
    throw DimensionError("ZF scheme requires N > K");
  }
  const SamplingGrid grid(cfg.region_size, cfg.grid_points_per_axis);
  const PointChannelTable table(grid, scenario, cfg.wavelength);

  const int n_ant = cfg.n_antennas;
  const int n_pr = scenario.k_prs();
  const size_t n_pts = grid.points().size();
  const double d2 = cfg.min_spacing * cfg.min_spacing;

  Apv apv = random_grid_apv(cfg, rng);
  std::vector<Vec2> pos = apv.positions();

  // The beamformer is pinned to full-power ZF, so a candidate placement is
  // worth exactly the SR gain left after projecting h0 away from the PR
  // channels. The coordinate search below ranks every grid candidate by that
  // projected gain, computed from the per-point channel table with the moving
  // antenna's row swapped in.
  Vec h0(n_ant);
  Eigen::MatrixXcd hp(n_ant, n_pr);
  auto refresh = [&] {
    for (int n = 0; n < n_ant; ++n) {
      h0(n) = channel_entry(pos[static_cast<size_t>(n)], scenario.receiver(0),
                            cfg.wavelength);
      for (int k = 1; k <= n_pr; ++k) {
        hp(n, k - 1) = channel_entry(pos[static_cast<size_t>(n)],
                                     scenario.receiver(k), cfg.wavelength);
      }
    }
  };
  auto projected_gain = [&](const Vec& v0, const Eigen::MatrixXcd& vp) {
    if (n_pr == 0) return v0.squaredNorm();
    const Vec r = v0 - vp * vp.completeOrthogonalDecomposition().solve(v0);
    return r.squaredNorm();
  };

  refresh();
  double snr = cfg.p_max * projected_gain(h0, hp) / cfg.noise_power;
  std::vector<double> trace{snr};
  int sweeps = 0;
  for (; sweeps < cfg.max_sweeps; ++sweeps) {
    bool moved = false;
    for (int n = 0; n < n_ant; ++n) {
      Vec v0 = h0;
      Eigen::MatrixXcd vp = hp;
      double best = snr;
      long best_idx = -1;
      for (size_t idx = 0; idx < n_pts; ++idx) {
        const Vec2& p = grid.points()[idx];
        bool spacing_ok = true;
        for (int m = 0; m < n_ant; ++m) {
          if (m == n) continue;
          if ((p - pos[static_cast<size_t>(m)]).squaredNorm() < d2) {
            spacing_ok = false;
            break;
          }
        }
        if (!spacing_ok) continue;
        v0(n) = table.entry(0, idx);
        for (int k = 1; k <= n_pr; ++k) vp(n, k - 1) = table.entry(k, idx);
        const double f = cfg.p_max * projected_gain(v0, vp) / cfg.noise_power;
        if (f > best) {
          best = f;
          best_idx = static_cast<long>(idx);
        }
      }
      if (best_idx >= 0) {
        pos[static_cast<size_t>(n)] =
            grid.points()[static_cast<size_t>(best_idx)];
        refresh();
        snr = cfg.p_max * projected_gain(h0, hp) / cfg.noise_power;
        moved = true;
      }
    }
    trace.push_back(std::max(trace.back(), snr));
    if (!moved) {
      ++sweeps;
      break;
    }
  }

  apv = Apv(std::move(pos), cfg.region_size, cfg.min_spacing);
  const std::vector<Vec> hv = all_channels(apv, scenario, cfg.wavelength);
  const std::vector<Vec> prs(hv.begin() + 1, hv.end());
  Beamformer w = zf(hv[0], prs, cfg.p_max);
  SolveReport rep =
      finalize_report(apv, w, scenario, cfg, std::move(trace), sweeps);
  return AoResult{std::move(apv), std::move(w), std::move(rep)};
}

AoResult fpa_scheme(const Scenario& scenario, const ScenarioConfig& cfg) {
  cfg.validate();
  Apv apv = fpa_layout(cfg);
  const std::vector<Vec> h = all_channels(apv, scenario, cfg.wavelength);
  const std::vector<Vec> prs(h.begin() + 1, h.end());
  auto [w, sca_trace] =
      sca_beamforming(h[0], prs, cfg, feasible_init_w(h[0], prs, cfg));
  std::vector<double> trace;
  trace.reserve(sca_trace.steps.size());
  for (const ScaStep& s : sca_trace.steps) {
    trace.push_back(s.objective / cfg.noise_power);
  }
  SolveReport rep = finalize_report(apv, w, scenario, cfg, std::move(trace),
                                    static_cast<int>(sca_trace.steps.size()));
  return AoResult{std::move(apv), std::move(w), std::move(rep)};
}

AoResult pso_scheme(const Scenario& scenario, const ScenarioConfig& cfg,
                    Rng& rng) {
  cfg.validate();
  const BeamformerCallback sca_callback =
      [&scenario, &cfg](const Apv& apv, const Beamformer* warm) {
        const std::vector<Vec> h = all_channels(apv, scenario, cfg.wavelength);
        const std::vector<Vec> prs(h.begin() + 1, h.end());
        const Beamformer w0 =
            warm ? *warm : feasible_init_w(h[0], prs, cfg);
        return sca_beamforming(h[0], prs, cfg, w0).first;
      };
  PsoResult res = pso_optimize(sca_callback, scenario, cfg, rng);
  return AoResult{std::move(res.apv), std::move(res.w), std::move(res.report)};
}

std::string scheme_name(Scheme s) {
  switch (s) {
    case Scheme::AO: return "ao";
    case Scheme::PSO: return "pso";
    case Scheme::MRT: return "mrt";
    case Scheme::ZF: return "zf";
    case Scheme::FPA: return "fpa";
  }
  throw ConfigError("unknown scheme");
}

Scheme scheme_from_name(const std::string& name) {
  if (name == "ao") return Scheme::AO;
  if (name == "pso") return Scheme::PSO;
  if (name == "mrt") return Scheme::MRT;
  if (name == "zf") return Scheme::ZF;
  if (name == "fpa") return Scheme::FPA;
  throw ConfigError("unknown scheme '" + name + "'");
}

AoResult run_scheme(Scheme scheme, const Scenario& scenario,
                    const ScenarioConfig& cfg, Rng& rng) {
  switch (scheme) {
    case Scheme::AO: return ao_solve(scenario, cfg, rng);
    case Scheme::PSO: return pso_scheme(scenario, cfg, rng);
    case Scheme::MRT: return mrt_scheme(scenario, cfg, rng);
    case Scheme::ZF: return zf_scheme(scenario, cfg, rng);
    case Scheme::FPA: return fpa_scheme(scenario, cfg);
  }
  throw ConfigError("unknown scheme");
}

}  // namespace masim
