#pragma once

#include <string>
#include <vector>

#include "masim/channel.hpp"
#include "masim/types.hpp"

namespace masim {

// |h0^H w|^2 / sigma^2.
double received_snr(const Beamformer& w, const Vec& h0, double noise_power);

// |hk^H w|^2.
double interference_power(const Beamformer& w, const Vec& hk);

struct ConstraintViolation {
  enum class Kind { Region, Spacing, Power, Interference };
  Kind kind;
  int index;      // antenna or PR index; -1 where inapplicable
  double margin;  // amount by which the constraint is exceeded
  std::string describe() const;
};

struct FeasibilityReport {
  bool feasible = true;
  std::vector<ConstraintViolation> violations;
};

// Full constraint check: region and spacing (via the APV's own
// invariants re-evaluated against cfg), power budget with eps_pow slack,
// per-PR interference against Gamma with eps_it slack.
FeasibilityReport check_feasible(const Beamformer& w, const Apv& apv,
                                 const Scenario& scenario,
                                 const ScenarioConfig& cfg);

}  // namespace masim
