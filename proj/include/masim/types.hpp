#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace masim {

using Vec = Eigen::VectorXcd;
using Vec2 = Eigen::Vector2d;
using cplx = std::complex<double>;

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ApvError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct DimensionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct SolverError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct SchemaError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Powers are stored in watts everywhere; dB(m) only at I/O boundaries.
inline double watt_to_dbm(double w) { return 10.0 * std::log10(w * 1000.0); }
inline double dbm_to_watt(double dbm) {
  return std::pow(10.0, dbm / 10.0) / 1000.0;
}
inline double lin_to_db(double x) { return 10.0 * std::log10(x); }

// One propagation path leaving the transmitter: elevation/azimuth angle of
// departure plus its complex gain.
struct Path {
  double theta = 0.0;
  double phi = 0.0;
  cplx gain{0.0, 0.0};
};

// Multipath geometry for one receiver. receiver_id 0 is the SR, 1..K the PRs.
struct PathSet {
  int receiver_id = 0;
  std::vector<Path> paths;
};

// Antenna position matrix: N points inside the square transmit region
// [-A/2, A/2]^2 with pairwise spacing >= D_min. Construction validates both
// invariants and throws ApvError otherwise.
class Apv {
 public:
  Apv(std::vector<Vec2> positions, double region_size, double min_spacing);

  int size() const { return static_cast<int>(pos_.size()); }
  const std::vector<Vec2>& positions() const { return pos_; }
  const Vec2& position(int n) const { return pos_.at(static_cast<size_t>(n)); }
  double region_size() const { return region_size_; }
  double min_spacing() const { return min_spacing_; }

  // Copy with antenna n moved to p; revalidates.
  Apv with_position(int n, const Vec2& p) const;

 private:
  std::vector<Vec2> pos_;
  double region_size_ = 0.0;
  double min_spacing_ = 0.0;
};

// Transmit beamforming vector with the power-budget invariant
// ||w||^2 <= p_max * (1 + eps_pow).
class Beamformer {
 public:
  Beamformer(Vec w, double p_max, double eps_pow = 1e-9);

  const Vec& w() const { return w_; }
  int size() const { return static_cast<int>(w_.size()); }
  double power() const { return w_.squaredNorm(); }
  double p_max() const { return p_max_; }

 private:
  Vec w_;
  double p_max_ = 0.0;
};

// Per-algorithm outcome record.
struct SolveReport {
  double snr = 0.0;     // linear
  double snr_db = 0.0;  // 10*log10(snr)
  std::vector<double> interference;  // watts, one per PR
  std::vector<double> objective_trace;
  bool feasible = false;
  int iterations = 0;
  double wall_time_s = 0.0;
  double mrt_backoff = 1.0;  // MRT scheme only: power scaling c in (0,1]
  bool full_power = true;    // MRT scheme only: backoff inactive
  bool constraint_stuck = false;
};

}  // namespace masim
