#pragma once

#include <string>
#include <vector>

#include "masim/config.hpp"
#include "masim/rng.hpp"
#include "masim/types.hpp"

namespace masim {

// One random multipath draw: SR geometry, K PR geometries, and the K+1
// ST-receiver distances (index 0 = SR).
struct Scenario {
  PathSet sr_paths;
  std::vector<PathSet> pr_paths;
  std::vector<double> distances;

  int k_prs() const { return static_cast<int>(pr_paths.size()); }
  const PathSet& receiver(int k) const {
    return k == 0 ? sr_paths : pr_paths.at(static_cast<size_t>(k - 1));
  }
};

// Phase advance of a path (theta, phi) at position t relative to the origin:
// (2*pi/lambda) * (x sin(theta) cos(phi) + y cos(theta)).
double path_phase(const Vec2& t, double theta, double phi, double wavelength);

// Array response a(T, theta, phi): entry n = exp(j * path_phase(t_n)).
// Column convention; callers conjugate-transpose for a^H.
Vec array_response(const Apv& apv, double theta, double phi,
                   double wavelength);

// Channel entry at a single candidate position: sum_p beta_p exp(j rho_p(t)).
cplx channel_entry(const Vec2& t, const PathSet& paths, double wavelength);

// h(T) = sum_p beta_p a(T, theta_p, phi_p), column convention.
Vec channel_vector(const Apv& apv, const PathSet& paths, double wavelength);

// All K+1 channel vectors for a scenario, index 0 = SR.
std::vector<Vec> all_channels(const Apv& apv, const Scenario& sc,
                              double wavelength);

// Random scenario: distances uniform in [distance_min, distance_max], AoDs
// i.i.d. uniform over [-pi/2, pi/2], gains CSCG with variance
// rho * d^(-alpha) / L.
Scenario generate_scenario(const ScenarioConfig& cfg, Rng& rng);

// JSON round-trip so a fixed scenario can be replayed across algorithms.
std::string serialize_scenario(const Scenario& sc);
Scenario parse_scenario(const std::string& text);

}  // namespace masim
