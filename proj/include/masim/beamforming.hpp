#pragma once

#include <utility>
#include <vector>

#include "masim/channel.hpp"
#include "masim/config.hpp"
#include "masim/metrics.hpp"
#include "masim/types.hpp"

namespace masim {

struct ScaStep {
  double objective = 0.0;  // true objective w^H H0 w = |h0^H w|^2
  double surrogate = 0.0;  // subproblem value Re{w_i^H H0 w}
  bool accepted = true;
};

struct ScaTrace {
  std::vector<ScaStep> steps;
  bool converged = false;
  int restarts = 0;  // zero-gradient anchor recoveries
};

// Maximum-ratio transmission: w = sqrt(P_max) h0 / ||h0||.
Beamformer mrt(const Vec& h0, double p_max);

// Interference at PR k under full-power MRT, composed from mrt() and
// interference_power(). k in 1..K.
double mrt_interference(const Apv& apv, const Scenario& scenario,
                        const ScenarioConfig& cfg, int k);

struct ZfInfo {
  int rank = 0;
  bool rank_deficient = false;
};

// Zero-forcing: project h0 onto the orthogonal complement of the K PR
// channels, then scale to full power. Requires N > K >= 1. Rank-deficient
// PR matrices fall back to a rank-revealing pseudo-inverse projection
// (threshold 1e-12 relative to the largest singular value) and are flagged
// in *info. Throws SolverError when h0 lies in the PR span.
Beamformer zf(const Vec& h0, const std::vector<Vec>& pr_channels,
              double p_max, ZfInfo* info = nullptr);

// Convex SCA subproblem: maximize Re{w_i^H H0 w} subject to
// ||w||^2 <= p_max and |h_k^H w|^2 <= gamma for all k. Solved in closed
// form when no IT constraint binds, otherwise by a log-barrier
// interior-point method over the real-embedded 2N-dimensional problem.
Beamformer solve_p2i(const Vec& h0, const std::vector<Vec>& pr_channels,
                     const Beamformer& w_anchor, double p_max, double gamma,
                     double eps_pow = 1e-9);

// SCA loop: iterate solve_p2i from a feasible start until the
// relative improvement of the true objective drops below cfg.sca_tol or
// cfg.sca_max_iters is hit. The trace's true objective is non-decreasing.
std::pair<Beamformer, ScaTrace> sca_beamforming(
    const Vec& h0, const std::vector<Vec>& pr_channels,
    const ScenarioConfig& cfg, const Beamformer& w_init);

// Largest feasible scaling of MRT: c * mrt(h0) with the biggest c in (0,1]
// keeping every IT constraint satisfied (w = 0 if h0 vanishes).
Beamformer feasible_init_w(const Vec& h0, const std::vector<Vec>& pr_channels,
                           const ScenarioConfig& cfg);

}  // namespace masim
