#include "masim/metrics.hpp"

#include <cmath>
#include <sstream>

namespace masim {

double received_snr(const Beamformer& w, const Vec& h0, double noise_power) {
  if (w.size() != h0.size()) {
    throw DimensionError("beamformer/channel length mismatch");
  }
  return std::norm(h0.dot(w.w())) / noise_power;
}

double interference_power(const Beamformer& w, const Vec& hk) {
  if (w.size() != hk.size()) {
    throw DimensionError("beamformer/channel length mismatch");
  }
  return std::norm(hk.dot(w.w()));
}

std::string ConstraintViolation::describe() const {
  std::ostringstream os;
  switch (kind) {
    case Kind::Region:
      os << "antenna " << index << " outside region, by " << margin << " m";
      break;
    case Kind::Spacing:
      os << "antenna pair at index " << index << " closer than D_min by "
         << margin << " m";
      break;
    case Kind::Power:
      os << "transmit power over budget by " << margin << " W";
      break;
    case Kind::Interference:
      os << "PR " << index << " interference over Gamma by " << margin << " W";
      break;
  }
  return os.str();
}

FeasibilityReport check_feasible(const Beamformer& w, const Apv& apv,
                                 const Scenario& scenario,
                                 const ScenarioConfig& cfg) {
  FeasibilityReport rep;
  auto flag = [&rep](ConstraintViolation::Kind kind, int index, double margin) {
    rep.feasible = false;
    rep.violations.push_back({kind, index, margin});
  };

  const double half = cfg.region_size / 2.0;
  for (int n = 0; n < apv.size(); ++n) {
    const Vec2& t = apv.position(n);
    const double excess =
        std::max(std::abs(t.x()) - half, std::abs(t.y()) - half);
    if (excess > 0.0) flag(ConstraintViolation::Kind::Region, n, excess);
  }
  for (int n = 0; n < apv.size(); ++n) {
    for (int m = n + 1; m < apv.size(); ++m) {
      const double d = (apv.position(n) - apv.position(m)).norm();
      if (d < cfg.min_spacing) {
        flag(ConstraintViolation::Kind::Spacing, n, cfg.min_spacing - d);
      }
    }
  }
  const double power = w.power();
  if (power > cfg.p_max * (1.0 + cfg.eps_pow)) {
    flag(ConstraintViolation::Kind::Power, -1, power - cfg.p_max);
  }
  for (int k = 1; k <= scenario.k_prs(); ++k) {
    const Vec hk =
        channel_vector(apv, scenario.receiver(k), cfg.wavelength);
    const double ik = interference_power(w, hk);
    if (ik > cfg.it_threshold * (1.0 + cfg.eps_it)) {
      flag(ConstraintViolation::Kind::Interference, k, ik - cfg.it_threshold);
    }
  }
  return rep;
}

}  // namespace masim
