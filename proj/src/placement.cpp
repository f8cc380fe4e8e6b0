#include "masim/placement.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "masim/metrics.hpp"

namespace masim {

SamplingGrid::SamplingGrid(double region_size, int m)
    : region_size_(region_size), m_(m) {
  if (m < 1) throw ConfigError("grid needs M >= 1");
  if (region_size <= 0.0) throw ConfigError("grid needs A > 0");
  points_.reserve(static_cast<size_t>(m) * static_cast<size_t>(m));
  for (int i = 1; i <= m; ++i) {
    for (int j = 1; j <= m; ++j) {
      points_.emplace_back(-region_size / 2.0 + i * region_size / m,
                           -region_size / 2.0 + j * region_size / m);
    }
  }
}

PointChannelTable::PointChannelTable(const SamplingGrid& grid,
                                     const Scenario& sc, double wavelength) {
  entries_.resize(static_cast<size_t>(sc.k_prs()) + 1);
  for (int r = 0; r <= sc.k_prs(); ++r) {
    auto& row = entries_[static_cast<size_t>(r)];
    row.reserve(grid.points().size());
    for (const Vec2& p : grid.points()) {
      row.push_back(channel_entry(p, sc.receiver(r), wavelength));
    }
  }
}

std::vector<Vec2> feasible_points(const SamplingGrid& grid, const Apv& apv,
                                  int moving_index) {
  if (moving_index < 0 || moving_index >= apv.size()) {
    throw DimensionError("moving antenna index out of range");
  }
  const double d2 = apv.min_spacing() * apv.min_spacing();
  std::vector<Vec2> out;
  for (const Vec2& p : grid.points()) {
    bool ok = true;
    for (int m = 0; m < apv.size(); ++m) {
      if (m == moving_index) continue;
      if ((p - apv.position(m)).squaredNorm() < d2) {
        ok = false;
        break;
      }
    }
    if (ok) out.push_back(p);
  }
  return out;
}

Apv sequential_search(const Apv& apv0, const Beamformer& w,
                      const Scenario& scenario, const ScenarioConfig& cfg,
                      SearchStats* stats, const PointChannelTable* table,
                      const SamplingGrid* grid) {
  const int n_ant = apv0.size();
  if (w.size() != n_ant) throw DimensionError("beamformer/APV size mismatch");
  const FeasibilityReport pre = check_feasible(w, apv0, scenario, cfg);
  if (!pre.feasible) {
    throw SolverError("sequential_search: (w, apv0) infeasible: " +
                      pre.violations.front().describe());
  }

  std::optional<SamplingGrid> local_grid;
  if (!grid) {
    local_grid.emplace(cfg.region_size, cfg.grid_points_per_axis);
    grid = &*local_grid;
  }
  std::optional<PointChannelTable> local_table;
  if (!table) {
    local_table.emplace(*grid, scenario, cfg.wavelength);
    table = &*local_table;
  }

  const int n_rx = scenario.k_prs() + 1;
  const size_t n_pts = grid->points().size();
  const double gamma_slack = cfg.it_threshold * (1.0 + cfg.eps_it);
  const double d2 = cfg.min_spacing * cfg.min_spacing;

  std::vector<Vec2> pos = apv0.positions();
  // Per-antenna channel entries and inner products h_r^H w, maintained
  // incrementally as antennas move.
  std::vector<std::vector<cplx>> h(static_cast<size_t>(n_rx));
  std::vector<cplx> s(static_cast<size_t>(n_rx), cplx{0.0, 0.0});
  for (int r = 0; r < n_rx; ++r) {
    auto& hr = h[static_cast<size_t>(r)];
    hr.resize(static_cast<size_t>(n_ant));
    for (int n = 0; n < n_ant; ++n) {
      hr[static_cast<size_t>(n)] =
          channel_entry(pos[static_cast<size_t>(n)], scenario.receiver(r),
                        cfg.wavelength);
      s[static_cast<size_t>(r)] +=
          std::conj(hr[static_cast<size_t>(n)]) * w.w()(n);
    }
  }

  SearchStats local_stats;
  SearchStats& st = stats ? *stats : local_stats;
  st = SearchStats{};
  st.candidates_per_sweep =
      static_cast<long>(n_ant) * static_cast<long>(n_pts);

  std::vector<cplx> s_excl(static_cast<size_t>(n_rx));
  for (int sweep = 0; sweep < cfg.max_sweeps; ++sweep) {
    ++st.sweeps;
    bool moved_this_sweep = false;
    for (int n = 0; n < n_ant; ++n) {
      for (int r = 0; r < n_rx; ++r) {
        s_excl[static_cast<size_t>(r)] =
            s[static_cast<size_t>(r)] -
            std::conj(h[static_cast<size_t>(r)][static_cast<size_t>(n)]) *
                w.w()(n);
      }
      bool cur_feasible = true;
      for (int k = 1; k < n_rx; ++k) {
        if (std::norm(s[static_cast<size_t>(k)]) > gamma_slack) {
          cur_feasible = false;
          break;
        }
      }
      // Incumbent is kept on ties: only a strictly better feasible
      // candidate replaces it. An IT-infeasible incumbent is replaced by
      // the best feasible candidate regardless of objective.
      double best_obj =
          cur_feasible ? std::norm(s[0]) : -1.0;
      long best_idx = -1;
      for (size_t idx = 0; idx < n_pts; ++idx) {
        ++st.candidates_evaluated;
        const Vec2& p = grid->points()[idx];
        bool spacing_ok = true;
        for (int m = 0; m < n_ant; ++m) {
          if (m == n) continue;
          if ((p - pos[static_cast<size_t>(m)]).squaredNorm() < d2) {
            spacing_ok = false;
            break;
          }
        }
        if (!spacing_ok) continue;
        bool it_ok = true;
        for (int k = 1; k < n_rx; ++k) {
          const cplx sk = s_excl[static_cast<size_t>(k)] +
                          std::conj(table->entry(k, idx)) * w.w()(n);
          if (std::norm(sk) > gamma_slack) {
            it_ok = false;
            break;
          }
        }
        if (!it_ok) continue;
        const double obj = std::norm(
            s_excl[0] + std::conj(table->entry(0, idx)) * w.w()(n));
        if (obj > best_obj) {
          best_obj = obj;
          best_idx = static_cast<long>(idx);
        }
      }
      if (best_idx >= 0) {
        pos[static_cast<size_t>(n)] = grid->points()[static_cast<size_t>(best_idx)];
        for (int r = 0; r < n_rx; ++r) {
          const cplx e = table->entry(r, static_cast<size_t>(best_idx));
          h[static_cast<size_t>(r)][static_cast<size_t>(n)] = e;
          s[static_cast<size_t>(r)] =
              s_excl[static_cast<size_t>(r)] + std::conj(e) * w.w()(n);
        }
        moved_this_sweep = true;
        st.moved = true;
      } else if (!cur_feasible) {
        st.constraint_stuck = true;
      }
    }
    if (!moved_this_sweep) break;
  }
  return Apv(std::move(pos), cfg.region_size, cfg.min_spacing);
}

Apv fpa_layout(const ScenarioConfig& cfg) {
  const int n = cfg.n_antennas;
  const double s = cfg.wavelength / 2.0;
  const int cols = static_cast<int>(std::ceil(std::sqrt(static_cast<double>(n))));
  const int rows = (n + cols - 1) / cols;
  std::vector<Vec2> pos;
  pos.reserve(static_cast<size_t>(n));
  const double x_off = (cols - 1) * s / 2.0;
  const double y_off = (rows - 1) * s / 2.0;
  for (int i = 0; i < n; ++i) {
    const int r = i / cols;
    const int c = i % cols;
    pos.emplace_back(c * s - x_off, r * s - y_off);
  }
  const double extent = std::max((cols - 1) * s, (rows - 1) * s);
  if (extent > cfg.region_size) {
    throw ApvError("transmit region too small for the FPA layout");
  }
  return Apv(std::move(pos), cfg.region_size, cfg.min_spacing);
}

namespace {

// Clamp to the region, then greedily push apart the closest violating pair
// until D_min holds. Returns nullopt if the repair does not converge.
std::optional<Apv> repair_positions(std::vector<Vec2> pos,
                                    const ScenarioConfig& cfg) {
  const double half = cfg.region_size / 2.0;
  auto clamp_all = [&] {
    for (Vec2& p : pos) {
      p.x() = std::clamp(p.x(), -half, half);
      p.y() = std::clamp(p.y(), -half, half);
    }
  };
  clamp_all();
  for (int iter = 0; iter < 64; ++iter) {
    double worst = cfg.min_spacing;
    int wa = -1, wb = -1;
    for (size_t a = 0; a < pos.size(); ++a) {
      for (size_t b = a + 1; b < pos.size(); ++b) {
        const double d = (pos[a] - pos[b]).norm();
        if (d < worst) {
          worst = d;
          wa = static_cast<int>(a);
          wb = static_cast<int>(b);
        }
      }
    }
    if (wa < 0) {
      return Apv(std::move(pos), cfg.region_size, cfg.min_spacing);
    }
    Vec2 dir = pos[static_cast<size_t>(wa)] - pos[static_cast<size_t>(wb)];
    const double d = dir.norm();
    if (d < 1e-15) {
      dir = Vec2(1.0, 0.0);  // coincident pair: split along x
    } else {
      dir /= d;
    }
    const double push = (cfg.min_spacing - d) / 2.0 + 1e-12;
    pos[static_cast<size_t>(wa)] += push * dir;
    pos[static_cast<size_t>(wb)] -= push * dir;
    clamp_all();
  }
  return std::nullopt;
}

}  // namespace

PsoResult pso_optimize(const BeamformerCallback& w_update,
                       const Scenario& scenario, const ScenarioConfig& cfg,
                       Rng& rng) {
  const int n = cfg.n_antennas;
  const int dim = 2 * n;
  const double half = cfg.region_size / 2.0;
  const double gamma_slack = cfg.it_threshold * (1.0 + cfg.eps_it);

  auto to_positions = [&](const std::vector<double>& x) {
    std::vector<Vec2> pos;
    pos.reserve(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) {
      pos.emplace_back(x[static_cast<size_t>(2 * i)],
                       x[static_cast<size_t>(2 * i + 1)]);
    }
    return pos;
  };

  struct Particle {
    std::vector<double> x, v, best_x;
    double best_obj = -std::numeric_limits<double>::infinity();
  };
  std::vector<Particle> swarm(static_cast<size_t>(cfg.pso_swarm));
  for (Particle& p : swarm) {
    p.x.resize(static_cast<size_t>(dim));
    p.v.assign(static_cast<size_t>(dim), 0.0);
    for (double& c : p.x) c = rng.uniform(-half, half);
    p.best_x = p.x;
  }

  // Objective of a repaired candidate under a fixed beamformer.
  auto objective_fixed_w = [&](const Apv& apv, const Beamformer& w) {
    const std::vector<Vec> h = all_channels(apv, scenario, cfg.wavelength);
    for (int k = 1; k <= scenario.k_prs(); ++k) {
      if (std::norm(h[static_cast<size_t>(k)].dot(w.w())) > gamma_slack) {
        return -std::numeric_limits<double>::infinity();
      }
    }
    return std::norm(h[0].dot(w.w()));
  };

  std::optional<Apv> gbest_apv;
  std::optional<Beamformer> gbest_w;
  std::vector<double> gbest_x;
  double gbest_obj = -std::numeric_limits<double>::infinity();

  // Initial swarm: each particle gets its own re-optimized beamformer, so
  // the zero-iteration result is already a valid (APV, w) pair.
  for (Particle& p : swarm) {
    const std::optional<Apv> apv = repair_positions(to_positions(p.x), cfg);
    if (!apv) continue;
    const Beamformer w = w_update(*apv, nullptr);
    const double obj = objective_fixed_w(*apv, w);
    p.best_obj = obj;
    if (obj > gbest_obj) {
      gbest_obj = obj;
      gbest_apv = apv;
      gbest_w = w;
      gbest_x = p.x;
    }
  }
  if (!gbest_apv) {
    throw SolverError("PSO could not construct any feasible initial APV");
  }

  SolveReport report;
  report.objective_trace.push_back(gbest_obj / cfg.noise_power);

  for (int iter = 0; iter < cfg.pso_iters; ++iter) {
    for (Particle& p : swarm) {
      for (int d = 0; d < dim; ++d) {
        const double r1 = rng.uniform();
        const double r2 = rng.uniform();
        auto& vd = p.v[static_cast<size_t>(d)];
        vd = cfg.pso_inertia * vd +
             cfg.pso_cognitive * r1 *
                 (p.best_x[static_cast<size_t>(d)] - p.x[static_cast<size_t>(d)]) +
             cfg.pso_social * r2 * (gbest_x[static_cast<size_t>(d)] - p.x[static_cast<size_t>(d)]);
        p.x[static_cast<size_t>(d)] += vd;
      }
      const std::optional<Apv> apv = repair_positions(to_positions(p.x), cfg);
      if (!apv) continue;
      double obj;
      std::optional<Beamformer> w_cand;
      if (cfg.pso_sca_per_candidate) {
        w_cand = w_update(*apv, nullptr);
        obj = objective_fixed_w(*apv, *w_cand);
      } else {
        obj = objective_fixed_w(*apv, *gbest_w);
      }
      if (obj > p.best_obj) {
        p.best_obj = obj;
        p.best_x = p.x;
      }
      if (obj > gbest_obj) {
        gbest_obj = obj;
        gbest_apv = apv;
        gbest_x = p.x;
        if (w_cand) gbest_w = w_cand;
      }
    }
    // Per-round refresh: warm-started from the incumbent beamformer, which
    // is feasible at the accepted gbest APV, so the objective cannot drop.
    if (!cfg.pso_sca_per_candidate) {
      const Beamformer w_new = w_update(*gbest_apv, &*gbest_w);
      const double obj_new = objective_fixed_w(*gbest_apv, w_new);
      if (obj_new >= gbest_obj) {
        gbest_w = w_new;
        gbest_obj = obj_new;
      }
    }
    report.objective_trace.push_back(gbest_obj / cfg.noise_power);
  }

  report.iterations = cfg.pso_iters;
  report.snr = gbest_obj / cfg.noise_power;
  report.snr_db = lin_to_db(report.snr);
  const std::vector<Vec> h = all_channels(*gbest_apv, scenario, cfg.wavelength);
  for (int k = 1; k <= scenario.k_prs(); ++k) {
    report.interference.push_back(
        interference_power(*gbest_w, h[static_cast<size_t>(k)]));
  }
  report.feasible = check_feasible(*gbest_w, *gbest_apv, scenario, cfg).feasible;
  return PsoResult{std::move(*gbest_apv), std::move(*gbest_w),
                   std::move(report)};
}

}  // namespace masim
