#pragma once

#include <string>

#include "masim/placement.hpp"

namespace masim {

struct AoResult {
  Apv apv;
  Beamformer w;
  SolveReport report;
};

// Random spacing-feasible subset of the sampling grid, drawn by sequential
// rejection.
Apv random_grid_apv(const ScenarioConfig& cfg, Rng& rng);

// Alternating optimization: SCA beamforming and sequential placement search,
// warm-starting the beamformer each round, until the relative SNR
// improvement drops below cfg.ao_tol or cfg.ao_max_outer rounds. The
// objective trace is non-decreasing by construction.
AoResult ao_solve(const Scenario& scenario, const ScenarioConfig& cfg,
                  Rng& rng);

// Benchmark: MRT with maximal feasible power backoff, positions via
// sequential search.
AoResult mrt_scheme(const Scenario& scenario, const ScenarioConfig& cfg,
                    Rng& rng);

// Benchmark: ZF nulling of all PR channels, positions via sequential search.
// Requires N > K.
AoResult zf_scheme(const Scenario& scenario, const ScenarioConfig& cfg,
                   Rng& rng);

// Benchmark: fixed half-wavelength layout, SCA beamforming only.
AoResult fpa_scheme(const Scenario& scenario, const ScenarioConfig& cfg);

// Benchmark: PSO over continuous positions with SCA beamforming.
AoResult pso_scheme(const Scenario& scenario, const ScenarioConfig& cfg,
                    Rng& rng);

enum class Scheme { AO, PSO, MRT, ZF, FPA };

std::string scheme_name(Scheme s);
Scheme scheme_from_name(const std::string& name);

AoResult run_scheme(Scheme scheme, const Scenario& scenario,
                    const ScenarioConfig& cfg, Rng& rng);

}  // namespace masim
