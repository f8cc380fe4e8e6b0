#pragma once

#include <cstdint>
#include <string>

#include "masim/types.hpp"

namespace masim {

// All physical and algorithmic parameters. Defaults follow the reference
// simulation setup: N=4 antennas, K=3 PRs, lambda=0.1 m, D_min=lambda/2,
// M=100 grid points per axis, L=4 paths, alpha=2.8, P_max=23 dBm,
// sigma^2 = Gamma = -80 dBm, ST-receiver distances uniform in [20, 100] m.
struct ScenarioConfig {
  int n_antennas = 4;                    // N
  int k_prs = 3;                         // K
  double region_size = 0.4;              // A [m], side of C_t
  double wavelength = 0.1;               // lambda [m]
  double min_spacing = 0.05;             // D_min [m]
  int grid_points_per_axis = 100;        // M
  double p_max = dbm_to_watt(23.0);      // P_max [W]
  double noise_power = dbm_to_watt(-80.0);   // sigma^2 [W]
  double it_threshold = dbm_to_watt(-80.0);  // Gamma [W]
  int paths_per_receiver = 4;            // L
  double path_loss_exponent = 2.8;       // alpha
  double ref_path_loss = 1e-5;           // rho at 1 m (-50 dB)
  double distance_min = 20.0;            // [m]
  double distance_max = 100.0;           // [m]
  std::uint64_t rng_seed = 1;

  // Numerical tolerances and iteration caps.
  double eps_pow = 1e-9;   // relative power-budget slack
  double eps_it = 1e-6;    // relative IT-constraint slack
  double sca_tol = 1e-6;   // SCA relative-improvement stop
  int sca_max_iters = 50;
  double ao_tol = 1e-5;    // AO relative-improvement stop
  int ao_max_outer = 20;
  int max_sweeps = 5;      // sequential-search sweep cap

  // PSO baseline hyperparameters (tunable; these are conventional values).
  int pso_swarm = 50;
  double pso_inertia = 0.72;
  double pso_cognitive = 1.49;
  double pso_social = 1.49;
  int pso_iters = 100;
  bool pso_sca_per_candidate = false;  // false: re-optimize w once per round

  // Integer-spacing construction: spacing unit for d_y. false: d_y counts
  // wavelengths (phase 2*pi*d_y*b); true: d_y counts meters.
  bool dy_in_meters = false;
  long d_max = 10000;

  // Throws ConfigError on any violated invariant, including the joint
  // grid/D_min packing requirement (the M x M grid must admit N points
  // pairwise >= D_min apart).
  void validate() const;
};

// Key-value config format: one "key = value" per line, '#' comments, all
// keys optional. Canonical serialization round-trips losslessly.
ScenarioConfig parse_config(const std::string& text);
ScenarioConfig load_config_file(const std::string& path,
                                bool apply_env = true);
std::string serialize_config(const ScenarioConfig& cfg);

// Environment overrides: MASIM_<KEY> (upper-cased key) replaces the value
// of <key>, e.g. MASIM_GRID_POINTS_PER_AXIS=40.
void apply_env_overrides(ScenarioConfig& cfg);

// Presets: "desk" (M=40, 20 trials) and "paper" (M=100, 100 trials).
ScenarioConfig desk_preset();
ScenarioConfig paper_preset();
int preset_default_trials(const std::string& preset);

}  // namespace masim
