#include <cstdio>
#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "masim/harness.hpp"

namespace {

masim::ScenarioConfig resolve_config(const std::string& config_path,
                                     const std::string& preset) {
  masim::ScenarioConfig cfg;
  if (!config_path.empty()) {
    cfg = masim::load_config_file(config_path);
  } else {
    cfg = preset == "paper" ? masim::paper_preset() : masim::desk_preset();
    masim::apply_env_overrides(cfg);
    cfg.validate();
  }
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "masim: movable-antenna spectrum-sharing simulator (beamforming + "
      "antenna placement)"};
  app.require_subcommand(1);

  // sweep
  auto* sweep = app.add_subcommand(
      "sweep", "Monte-Carlo sweep over region size, IT threshold, or paths");
  std::string config_path, axis = "region", out_dir = "out", preset = "desk";
  std::vector<std::string> scheme_names;
  std::vector<double> axis_values;
  int trials = -1;
  std::uint64_t seed = 1;
  bool save_scenarios = false, timing = false;
  sweep->add_option("--config", config_path,
                    "Config file (key = value lines); MASIM_* env vars "
                    "override individual keys");
  sweep->add_option("--sweep", axis, "Sweep axis: region | it | paths")
      ->check(CLI::IsMember({"region", "it", "paths"}));
  sweep->add_option("--values", axis_values,
                    "Axis values (A/lambda, Gamma dBm, or L); default per axis")
      ->delimiter(',');
  sweep->add_option("--trials", trials, "Channel realizations per axis value");
  sweep->add_option("--seed", seed, "Base RNG seed");
  sweep->add_option("--out", out_dir, "Output directory");
  sweep->add_option("--schemes", scheme_names,
                    "Schemes to run (ao, pso, mrt, zf, fpa)")
      ->delimiter(',');
  sweep->add_option("--preset", preset, "Config preset when --config absent")
      ->check(CLI::IsMember({"desk", "paper"}));
  sweep->add_flag("--save-scenarios", save_scenarios,
                  "Persist per-trial scenario files for replay");
  sweep->add_flag("--timing", timing,
                  "Record wall time per run (breaks byte-identical reruns)");

  // replay
  auto* rep = app.add_subcommand("replay", "Re-run a scheme on a saved scenario");
  std::string scenario_file, replay_scheme = "ao";
  rep->add_option("--scenario", scenario_file, "Scenario JSON from a sweep")
      ->required();
  rep->add_option("--scheme", replay_scheme, "Scheme to replay");

  // plotdata
  auto* plot = app.add_subcommand("plotdata",
                                  "Aggregate a results CSV into mean/CI plot data");
  std::string csv_in, plot_out = "aggregate.csv";
  plot->add_option("--in", csv_in, "results.csv from a sweep")->required();
  plot->add_option("--out", plot_out, "Aggregate CSV to write");

  CLI11_PARSE(app, argc, argv);

  try {
    if (sweep->parsed()) {
      const masim::ScenarioConfig cfg = resolve_config(config_path, preset);
      masim::SweepSpec spec;
      spec.axis = axis;
      spec.values = axis_values;
      spec.trials = trials > 0 ? trials : masim::preset_default_trials(preset);
      spec.seed = seed;
      if (!scheme_names.empty()) {
        spec.schemes.clear();
        for (const std::string& s : scheme_names) {
          spec.schemes.push_back(masim::scheme_from_name(s));
        }
      }
      spec.save_scenarios = save_scenarios;
      spec.timing = timing;
      const masim::SweepResult res = masim::run_sweep(cfg, spec, out_dir);
      std::cout << "wrote " << res.results_csv_path << " ("
                << res.rows.size() << " rows) and " << res.aggregate_csv_path
                << "\n";
    } else if (rep->parsed()) {
      const masim::SolveReport r = masim::replay(scenario_file, replay_scheme);
      std::printf("scheme=%s snr_db=%.9g feasible=%d iterations=%d\n",
                  replay_scheme.c_str(), r.snr_db, r.feasible ? 1 : 0,
                  r.iterations);
      for (size_t k = 0; k < r.interference.size(); ++k) {
        std::printf("interference_pr%zu_dbm=%.9g\n", k + 1,
                    r.interference[k] > 0.0 ? masim::watt_to_dbm(r.interference[k])
                                            : -std::numeric_limits<double>::infinity());
      }
    } else if (plot->parsed()) {
      masim::emit_plotdata(csv_in, plot_out);
      std::cout << "wrote " << plot_out << "\n";
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
