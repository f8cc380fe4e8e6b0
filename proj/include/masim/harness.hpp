#pragma once

#include <string>
#include <vector>

#include "masim/ao.hpp"
#include "masim/config.hpp"

namespace masim {

// Sweep axes: "region" varies A/lambda, "it" varies Gamma in dBm, "paths"
// varies L. Everything else comes from the base config.
struct SweepSpec {
  std::string axis = "region";
  std::vector<double> values;  // empty: axis defaults
  int trials = 20;
  std::uint64_t seed = 1;
  std::vector<Scheme> schemes = {Scheme::AO, Scheme::PSO, Scheme::MRT,
                                 Scheme::ZF, Scheme::FPA};
  bool save_scenarios = false;
  // Wall-clock measurement is off by default so repeated runs stay
  // byte-identical; --timing turns the column into real measurements.
  bool timing = false;
};

struct SweepRow {
  std::string axis;
  double axis_value = 0.0;
  Scheme scheme = Scheme::AO;
  int trial = 0;
  std::uint64_t seed = 0;
  double snr_db = 0.0;
  double max_interference_dbm = 0.0;
  int iterations = 0;
  double wall_time_s = 0.0;
  bool feasible = false;
};

struct Aggregate {
  double axis_value = 0.0;
  Scheme scheme = Scheme::AO;
  int n = 0;
  double mean_snr_db = 0.0;
  double ci95_db = 0.0;
};

struct SweepResult {
  std::vector<SweepRow> rows;
  std::string results_csv_path;
  std::string aggregate_csv_path;
};

std::vector<double> default_axis_values(const std::string& axis);

// Base config with one axis value applied.
ScenarioConfig apply_axis(const ScenarioConfig& base, const std::string& axis,
                          double value);

// Per (axis value, trial), every requested scheme runs on the same seeded
// scenario; rows come out in canonical order (axis value, scheme, trial).
// Writes results.csv and aggregate.csv into out_dir, plus scenarios/*.json
// when spec.save_scenarios is set.
SweepResult run_sweep(const ScenarioConfig& base, const SweepSpec& spec,
                      const std::string& out_dir);

std::vector<Aggregate> aggregate_rows(const std::vector<SweepRow>& rows);

std::string rows_to_csv(const std::vector<SweepRow>& rows);

// Re-run one scheme on a persisted scenario file; deterministic, so the
// report matches the original run exactly.
SolveReport replay(const std::string& scenario_file,
                   const std::string& scheme);

// Aggregate a results CSV into (axis value, scheme, mean SNR dB, 95% CI)
// plot data.
void emit_plotdata(const std::string& results_csv_path,
                   const std::string& out_path);

}  // namespace masim
