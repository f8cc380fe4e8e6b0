#include "masim/beamforming.hpp"

#include <algorithm>
#include <cmath>

namespace masim {

namespace {

using Mat = Eigen::MatrixXd;
using RVec = Eigen::VectorXd;

// Real embedding of w = wr + j*wi as v = [wr; wi]. For a channel h,
// h^H w maps to the 2-vector B v with B = [[hr^T, hi^T], [-hi^T, hr^T]].
Mat real_embed(const Vec& h) {
  const int n = static_cast<int>(h.size());
  Mat b(2, 2 * n);
  b.block(0, 0, 1, n) = h.real().transpose();
  b.block(0, n, 1, n) = h.imag().transpose();
  b.block(1, 0, 1, n) = -h.imag().transpose();
  b.block(1, n, 1, n) = h.real().transpose();
  return b;
}

// Log-barrier interior-point solver for
//   max g^T v  s.t.  ||v||^2 <= 1,  ||B_k v||^2 <= 1.
// g is assumed unit-norm; returns v accurate to ~1e-11 in objective.
RVec barrier_socp(const RVec& g, const std::vector<Mat>& bs) {
  const int dim = static_cast<int>(g.size());
  const int m = static_cast<int>(bs.size()) + 1;
  std::vector<Mat> btb;
  btb.reserve(bs.size());
  for (const Mat& b : bs) btb.push_back(b.transpose() * b);

  RVec v = RVec::Zero(dim);
  auto slacks_ok = [&](const RVec& x, std::vector<double>& s) {
    s[0] = 1.0 - x.squaredNorm();
    if (s[0] <= 0.0) return false;
    for (size_t k = 0; k < bs.size(); ++k) {
      s[k + 1] = 1.0 - (bs[k] * x).squaredNorm();
      if (s[k + 1] <= 0.0) return false;
    }
    return true;
  };
  std::vector<double> s(static_cast<size_t>(m)), s_try(static_cast<size_t>(m));

  double t = 1.0;
  const double t_final = m * 1e11;
  while (true) {
    // Newton centering for phi(v) = -t g^T v - sum log(s_i).
    for (int it = 0; it < 60; ++it) {
      if (!slacks_ok(v, s)) throw SolverError("interior-point iterate left the feasible set");
      RVec grad = -t * g + (2.0 / s[0]) * v;
      Mat hess = (2.0 / s[0]) * Mat::Identity(dim, dim) +
                 (4.0 / (s[0] * s[0])) * (v * v.transpose());
      for (size_t k = 0; k < bs.size(); ++k) {
        const RVec q = btb[k] * v;
        grad += (2.0 / s[k + 1]) * q;
        hess += (2.0 / s[k + 1]) * btb[k] +
                (4.0 / (s[k + 1] * s[k + 1])) * (q * q.transpose());
      }
      const RVec d = hess.ldlt().solve(-grad);
      const double decrement = -grad.dot(d);
      if (!(decrement > 2e-13 * (1.0 + t))) break;

      auto phi = [&](const RVec& x, const std::vector<double>& sl) {
        double val = -t * g.dot(x);
        for (double si : sl) val -= std::log(si);
        return val;
      };
      const double phi0 = phi(v, s);
      double alpha = 1.0;
      for (int ls = 0; ls < 60; ++ls) {
        const RVec v_try = v + alpha * d;
        if (slacks_ok(v_try, s_try) &&
            phi(v_try, s_try) <= phi0 - 0.25 * alpha * decrement) {
          v = v_try;
          break;
        }
        alpha *= 0.5;
      }
    }
    if (static_cast<double>(m) / t < 1e-11) break;
    t = std::min(t * 20.0, t_final * 20.0);
  }
  return v;
}

Vec from_real(const RVec& v) {
  const int n = static_cast<int>(v.size()) / 2;
  Vec w(n);
  w.real() = v.head(n);
  w.imag() = v.tail(n);
  return w;
}

}  // namespace

Beamformer mrt(const Vec& h0, double p_max) {
  const double norm = h0.norm();
  if (!(norm > 0.0)) throw SolverError("MRT undefined for a zero channel");
  return Beamformer(std::sqrt(p_max) / norm * h0, p_max);
}

double mrt_interference(const Apv& apv, const Scenario& scenario,
                        const ScenarioConfig& cfg, int k) {
  if (scenario.k_prs() == 0) {
    throw DimensionError("mrt_interference needs at least one PR");
  }
  if (k < 1 || k > scenario.k_prs()) {
    throw DimensionError("PR index out of range");
  }
  const Vec h0 = channel_vector(apv, scenario.sr_paths, cfg.wavelength);
  const Vec hk = channel_vector(apv, scenario.receiver(k), cfg.wavelength);
  return interference_power(mrt(h0, cfg.p_max), hk);
}

Beamformer zf(const Vec& h0, const std::vector<Vec>& pr_channels,
              double p_max, ZfInfo* info) {
  const int n = static_cast<int>(h0.size());
  const int k = static_cast<int>(pr_channels.size());
  if (k < 1) throw DimensionError("ZF needs at least one PR channel");
  if (n <= k) throw DimensionError("ZF requires N > K");
  Eigen::MatrixXcd r(n, k);
  for (int c = 0; c < k; ++c) {
    if (pr_channels[static_cast<size_t>(c)].size() != n) {
      throw DimensionError("PR channel length mismatch");
    }
    r.col(c) = pr_channels[static_cast<size_t>(c)];
  }
  Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXcd> cod(r);
  cod.setThreshold(1e-12);
  const int rank = static_cast<int>(cod.rank());
  if (info) {
    info->rank = rank;
    info->rank_deficient = rank < k;
  }
  // Projection onto the orthogonal complement of col(R); the pseudo-inverse
  // route also covers rank-deficient R.
  const Vec w_hat = h0 - r * cod.pseudoInverse() * h0;
  const double norm = w_hat.norm();
  if (norm <= 1e-10 * h0.norm()) {
    throw SolverError("ZF direction vanished: h0 lies in the PR channel span");
  }
  return Beamformer(std::sqrt(p_max) / norm * w_hat, p_max);
}

Beamformer solve_p2i(const Vec& h0, const std::vector<Vec>& pr_channels,
                     const Beamformer& w_anchor, double p_max, double gamma,
                     double eps_pow) {
  if (h0.size() != w_anchor.size()) {
    throw DimensionError("anchor/channel length mismatch");
  }
  // Objective Re{w_i^H H0 w} = Re{c^H w} with c = h0 (h0^H w_anchor).
  const Vec c = h0 * (h0.dot(w_anchor.w()));
  const double c_norm = c.norm();
  if (!(c_norm > 0.0)) {
    throw SolverError("zero-gradient anchor: H0 w_i = 0");
  }

  // Closed form when the power ball alone is binding.
  const Vec w_ball = std::sqrt(p_max) / c_norm * c;
  bool ball_feasible = true;
  for (const Vec& hk : pr_channels) {
    if (std::norm(hk.dot(w_ball)) > gamma) {
      ball_feasible = false;
      break;
    }
  }
  if (ball_feasible) return Beamformer(w_ball, p_max, eps_pow);

  // Scaled real embedding: w = sqrt(p_max) u, |h_k^H w|^2 <= gamma becomes
  // ||B_k v||^2 <= 1 with h_k scaled by sqrt(p_max / gamma).
  const int n = static_cast<int>(h0.size());
  RVec g(2 * n);
  g.head(n) = c.real();
  g.tail(n) = c.imag();
  g /= c_norm;
  std::vector<Mat> bs;
  bs.reserve(pr_channels.size());
  const double scale = std::sqrt(p_max / gamma);
  for (const Vec& hk : pr_channels) {
    if (hk.size() != n) throw DimensionError("PR channel length mismatch");
    bs.push_back(real_embed(Vec(scale * hk)));
  }
  const RVec v = barrier_socp(g, bs);
  return Beamformer(std::sqrt(p_max) * from_real(v), p_max, eps_pow);
}

Beamformer feasible_init_w(const Vec& h0, const std::vector<Vec>& pr_channels,
                           const ScenarioConfig& cfg) {
  if (!(h0.norm() > 0.0)) {
    return Beamformer(Vec::Zero(h0.size()), cfg.p_max, cfg.eps_pow);
  }
  const Beamformer w_full = mrt(h0, cfg.p_max);
  double c = 1.0;
  for (const Vec& hk : pr_channels) {
    const double ik = interference_power(w_full, hk);
    if (ik > cfg.it_threshold) {
      c = std::min(c, std::sqrt(cfg.it_threshold / ik) * (1.0 - 1e-12));
    }
  }
  return Beamformer(c * w_full.w(), cfg.p_max, cfg.eps_pow);
}

std::pair<Beamformer, ScaTrace> sca_beamforming(
    const Vec& h0, const std::vector<Vec>& pr_channels,
    const ScenarioConfig& cfg, const Beamformer& w_init) {
  if (w_init.power() > cfg.p_max * (1.0 + cfg.eps_pow)) {
    throw SolverError("sca_beamforming: w_init exceeds the power budget");
  }
  for (size_t k = 0; k < pr_channels.size(); ++k) {
    if (std::norm(pr_channels[k].dot(w_init.w())) >
        cfg.it_threshold * (1.0 + cfg.eps_it)) {
      throw SolverError("sca_beamforming: w_init violates IT constraint " +
                        std::to_string(k + 1));
    }
  }

  ScaTrace trace;
  Beamformer w = w_init;
  double obj = std::norm(h0.dot(w.w()));
  trace.steps.push_back({obj, obj, true});

  const double h0_scale = h0.norm() * std::sqrt(cfg.p_max);
  for (int i = 0; i < cfg.sca_max_iters; ++i) {
    if (std::abs(h0.dot(w.w())) < 1e-14 * h0_scale) {
      // Degenerate anchor: the surrogate gradient vanishes. Restart from the
      // MRT-aligned feasible point, which has a nonzero inner product
      // whenever h0 does.
      const Beamformer w_restart = feasible_init_w(h0, pr_channels, cfg);
      if (std::abs(h0.dot(w_restart.w())) < 1e-14 * h0_scale) break;
      ++trace.restarts;
      w = w_restart;
      obj = std::norm(h0.dot(w.w()));
      trace.steps.push_back({obj, obj, true});
      continue;
    }
    const Beamformer w_next =
        solve_p2i(h0, pr_channels, w, cfg.p_max, cfg.it_threshold, cfg.eps_pow);
    const double surrogate =
        (std::conj(h0.dot(w.w())) * h0.dot(w_next.w())).real();
    const double obj_next = std::norm(h0.dot(w_next.w()));
    if (obj_next < obj) {
      // Guarded acceptance: the Taylor lower bound makes decrease impossible
      // beyond solver tolerance; keep the incumbent and stop.
      trace.steps.push_back({obj, surrogate, false});
      trace.converged = true;
      break;
    }
    trace.steps.push_back({obj_next, surrogate, true});
    const double improvement = obj_next - obj;
    w = w_next;
    obj = obj_next;
    if (improvement <= cfg.sca_tol * std::max(obj, 1e-300)) {
      trace.converged = true;
      break;
    }
  }
  return {w, trace};
}

}  // namespace masim
