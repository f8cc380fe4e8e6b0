#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "masim/channel.hpp"
#include "masim/config.hpp"
#include "masim/rng.hpp"
#include "masim/types.hpp"

namespace masim {

// Angle-difference quantities between every PR path (k, p) and SR path q:
//   a = sin(theta_0q) cos(phi_0q) - sin(theta_kp) cos(phi_kp)   (|a| <= 2)
//   b = cos(theta_0q) - cos(theta_kp)                            (|b| <= 2)
struct AngleDiffs {
  // Indexed [k][p][q]; k in 0..K-1 for PR k+1.
  std::vector<std::vector<std::vector<double>>> a, b;

  std::vector<double> flat_b() const;
  std::vector<double> flat_a() const;
};

AngleDiffs angle_diffs(const Scenario& scenario);

// Beam gain toward (theta, phi) of an MRT-steered array with a single SR
// path: G = |sum_n exp(j (2 pi / lambda)(x_n a + y_n b))|^2 in [0, N^2].
double beam_gain(const Apv& apv, double theta, double phi, double sr_theta,
                 double sr_phi, double wavelength);

// g(b, d) = (1 + cos(2 pi d b)) / 2 in [0, 1]; d counts wavelength units.
double lemma1_g(double b, long d);

// Smallest integer d in [1, d_max] with g(b, d) < delta for every b, or
// nullopt (existence is only guaranteed asymptotically).
std::optional<long> lemma1_spacing_search(const std::vector<double>& b_values,
                                          double delta, long d_max);

// Interference at PR k under full-power MRT via the explicit double-sum
// expansion over path pairs. Independent of the mrt()/interference_power()
// composition; the two routes must agree to roundoff.
double pathsum_interference(const Apv& apv, const Scenario& scenario,
                        const ScenarioConfig& cfg, int k);

struct Theorem1Certificate {
  bool success = false;
  bool via_lemma_bound = false;  // the delta-target search itself succeeded
  long d_y = 0;                  // chosen spacing (units per cfg.dy_in_meters)
  double delta_target = 0.0;     // delta required to certify via the bound
  double delta_achieved = 0.0;   // max over b of g(b, d_y)
  double h_min_estimate = 0.0;   // sampled min of ||h0||^2 (heuristic)
  double gamma_factor = 0.0;     // P_max / min(h_min_estimate, ||h0(T)||^2)
  std::vector<double> exact_pk;      // exact interference, double-sum route
  std::vector<double> bound_coherent;  // per-PR co-phased magnitude bound
  std::vector<double> bound_relaxed;   // per-PR 4*gamma*delta bound
  double tightest_max_pk = 0.0;  // best max_k P_k seen when unsuccessful
  long tightest_d = 0;
};

struct Theorem1Result {
  std::optional<Apv> apv;
  Theorem1Certificate cert;
};

// Two-antenna integer-spacing construction: places t1 = [0,0] and
// t2 = [0, d_y * unit] and searches d_y in [1, d_max] so that every exact
// interference power stays below Gamma. The delta-bound route is tried
// first; when it is exhausted the search falls back to checking the exact
// interference directly. Requires N = 2.
Theorem1Result theorem1_construct(const Scenario& scenario,
                                  const ScenarioConfig& cfg, long d_max,
                                  Rng& rng);

struct Theorem2Report {
  int i_n = 0;                     // number of prime factors of N
  std::vector<int> prime_factors;  // non-decreasing
  bool condition_met = false;      // L_tot <= I_N
  std::optional<Apv> apv;
  double max_gain = 0.0;  // max over PR paths of G at the returned APV
  bool region_bound = false;  // converged nulls landed outside the region
  int starts_used = 0;
};

// Existence check for simultaneous nulls toward all PR paths with a
// single-path SR: fixes y_n = n * D_min (so spacing always holds) and runs
// multi-start damped Gauss-Newton on the horizontal coordinates to drive
// every array-factor sum to zero. A failed search is inconclusive, not a
// refutation.
Theorem2Report theorem2_verify(
    int n_antennas, const std::vector<std::pair<double, double>>& pr_dirs,
    std::pair<double, double> sr_dir, const ScenarioConfig& cfg, Rng& rng);

}  // namespace masim
