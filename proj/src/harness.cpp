#include "masim/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "json.hpp"
#include "masim/channel.hpp"

namespace masim {

namespace {

std::string fmt(double v, const char* spec = "%.9g") {
  char buf[64];
  std::snprintf(buf, sizeof(buf), spec, v);
  return buf;
}

// Stable stream ids: scenario generation and each scheme get disjoint
// streams per (axis index, trial), independent of which schemes run.
std::uint64_t scenario_stream(size_t axis_idx, int trial) {
  return (static_cast<std::uint64_t>(axis_idx) * 1000003ull +
          static_cast<std::uint64_t>(trial)) *
         16ull;
}

std::uint64_t scheme_stream(size_t axis_idx, int trial, Scheme s) {
  return scenario_stream(axis_idx, trial) + 1ull +
         static_cast<std::uint64_t>(s);
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw SchemaError("cannot write " + path);
  f << content;
}

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw SchemaError("cannot read " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

}  // namespace

std::vector<double> default_axis_values(const std::string& axis) {
  if (axis == "region") return {1.0, 2.0, 3.0, 4.0};
  if (axis == "it") return {-90.0, -80.0, -70.0, -60.0, -50.0};
  if (axis == "paths") return {2.0, 3.0, 4.0, 5.0, 6.0};
  throw ConfigError("unknown sweep axis '" + axis + "'");
}

ScenarioConfig apply_axis(const ScenarioConfig& base, const std::string& axis,
                          double value) {
  ScenarioConfig cfg = base;
  if (axis == "region") {
    cfg.region_size = value * cfg.wavelength;
  } else if (axis == "it") {
    cfg.it_threshold = dbm_to_watt(value);
  } else if (axis == "paths") {
    cfg.paths_per_receiver = static_cast<int>(value);
  } else {
    throw ConfigError("unknown sweep axis '" + axis + "'");
  }
  cfg.validate();
  return cfg;
}

std::string rows_to_csv(const std::vector<SweepRow>& rows) {
  std::ostringstream os;
  os << "sweep_axis,axis_value,scheme,trial,seed,snr_db,"
        "max_interference_dbm,iterations,wall_time_s,feasible\n";
  for (const SweepRow& r : rows) {
    os << r.axis << ',' << fmt(r.axis_value) << ',' << scheme_name(r.scheme)
       << ',' << r.trial << ',' << r.seed << ',' << fmt(r.snr_db) << ','
       << fmt(r.max_interference_dbm) << ',' << r.iterations << ','
       << fmt(r.wall_time_s, "%.6f") << ',' << (r.feasible ? 1 : 0) << '\n';
  }
  return os.str();
}

SweepResult run_sweep(const ScenarioConfig& base, const SweepSpec& spec,
                      const std::string& out_dir) {
  base.validate();
  if (spec.trials < 1) throw ConfigError("sweep needs at least one trial");
  if (spec.schemes.empty()) throw ConfigError("sweep needs at least one scheme");
  std::vector<double> values =
      spec.values.empty() ? default_axis_values(spec.axis) : spec.values;
  // Canonical output order regardless of how the inputs were given.
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());
  std::vector<Scheme> schemes = spec.schemes;
  std::sort(schemes.begin(), schemes.end());
  schemes.erase(std::unique(schemes.begin(), schemes.end()), schemes.end());

  namespace fs = std::filesystem;
  fs::create_directories(out_dir);
  if (spec.save_scenarios) fs::create_directories(out_dir + "/scenarios");

  SweepResult result;
  for (size_t vi = 0; vi < values.size(); ++vi) {
    const ScenarioConfig cfg = apply_axis(base, spec.axis, values[vi]);
    for (Scheme scheme : schemes) {
      for (int trial = 0; trial < spec.trials; ++trial) {
        Rng scenario_rng(spec.seed, scenario_stream(vi, trial));
        const Scenario scenario = generate_scenario(cfg, scenario_rng);
        Rng scheme_rng(spec.seed, scheme_stream(vi, trial, scheme));
        const auto t0 = std::chrono::steady_clock::now();
        const AoResult res = run_scheme(scheme, scenario, cfg, scheme_rng);
        const auto t1 = std::chrono::steady_clock::now();

        SweepRow row;
        row.axis = spec.axis;
        row.axis_value = values[vi];
        row.scheme = scheme;
        row.trial = trial;
        row.seed = spec.seed;
        row.snr_db = res.report.snr_db;
        double max_i = -std::numeric_limits<double>::infinity();
        for (double ik : res.report.interference) max_i = std::max(max_i, ik);
        row.max_interference_dbm =
            res.report.interference.empty() || max_i <= 0.0
                ? -std::numeric_limits<double>::infinity()
                : watt_to_dbm(max_i);
        row.iterations = res.report.iterations;
        row.wall_time_s =
            spec.timing ? std::chrono::duration<double>(t1 - t0).count() : 0.0;
        row.feasible = res.report.feasible;
        result.rows.push_back(row);

        if (spec.save_scenarios && scheme == schemes.front()) {
          nlohmann::json j;
          j["config"] = serialize_config(cfg);
          j["axis"] = spec.axis;
          j["axis_value"] = values[vi];
          j["trial"] = trial;
          j["seed"] = spec.seed;
          for (Scheme s : {Scheme::AO, Scheme::PSO, Scheme::MRT, Scheme::ZF,
                           Scheme::FPA}) {
            j["scheme_streams"][scheme_name(s)] = scheme_stream(vi, trial, s);
          }
          j["scenario"] = nlohmann::json::parse(serialize_scenario(scenario));
          std::ostringstream name;
          name << out_dir << "/scenarios/" << spec.axis << '_' << vi << '_'
               << trial << ".json";
          write_file(name.str(), j.dump(2));
        }
      }
    }
  }

  result.results_csv_path = out_dir + "/results.csv";
  write_file(result.results_csv_path, rows_to_csv(result.rows));
  result.aggregate_csv_path = out_dir + "/aggregate.csv";
  emit_plotdata(result.results_csv_path, result.aggregate_csv_path);
  return result;
}

std::vector<Aggregate> aggregate_rows(const std::vector<SweepRow>& rows) {
  if (rows.empty()) throw SchemaError("no rows to aggregate");
  std::vector<Aggregate> out;
  std::map<std::pair<double, int>, size_t> index;
  std::map<std::pair<double, int>, std::vector<double>> samples;
  for (const SweepRow& r : rows) {
    const auto key = std::make_pair(r.axis_value, static_cast<int>(r.scheme));
    if (!index.count(key)) {
      index[key] = out.size();
      out.push_back({r.axis_value, r.scheme, 0, 0.0, 0.0});
    }
    samples[key].push_back(r.snr_db);
  }
  for (auto& [key, vals] : samples) {
    Aggregate& a = out[index[key]];
    a.n = static_cast<int>(vals.size());
    double mean = 0.0;
    for (double v : vals) mean += v;
    mean /= a.n;
    a.mean_snr_db = mean;
    if (a.n > 1) {
      double ss = 0.0;
      for (double v : vals) ss += (v - mean) * (v - mean);
      a.ci95_db = 1.96 * std::sqrt(ss / (a.n - 1)) / std::sqrt(a.n);
    }
  }
  return out;
}

SolveReport replay(const std::string& scenario_file,
                   const std::string& scheme) {
  const Scheme s = scheme_from_name(scheme);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(read_file(scenario_file));
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError(std::string("scenario file parse error: ") + e.what());
  }
  try {
    const ScenarioConfig cfg = parse_config(j.at("config").get<std::string>());
    const Scenario scenario =
        parse_scenario(j.at("scenario").dump());
    const std::uint64_t seed = j.at("seed").get<std::uint64_t>();
    const std::uint64_t stream =
        j.at("scheme_streams").at(scheme).get<std::uint64_t>();
    Rng rng(seed, stream);
    return run_scheme(s, scenario, cfg, rng).report;
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError(std::string("scenario file schema error: ") + e.what());
  }
}

void emit_plotdata(const std::string& results_csv_path,
                   const std::string& out_path) {
  std::istringstream in(read_file(results_csv_path));
  std::string line;
  if (!std::getline(in, line) ||
      line.rfind("sweep_axis,", 0) != 0) {
    throw SchemaError("malformed results CSV: bad header");
  }
  std::vector<SweepRow> rows;
  std::string axis;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (cells.size() != 10) {
      throw SchemaError("malformed results CSV row: " + line);
    }
    try {
      SweepRow r;
      r.axis = cells[0];
      r.axis_value = std::stod(cells[1]);
      r.scheme = scheme_from_name(cells[2]);
      r.trial = std::stoi(cells[3]);
      r.seed = std::stoull(cells[4]);
      r.snr_db = std::stod(cells[5]);
      rows.push_back(r);
    } catch (const std::exception& e) {
      throw SchemaError("malformed results CSV row: " + line);
    }
    axis = cells[0];
  }
  const std::vector<Aggregate> aggs = aggregate_rows(rows);
  std::ostringstream os;
  os << "sweep_axis,axis_value,scheme,n,mean_snr_db,ci95_db\n";
  for (const Aggregate& a : aggs) {
    os << axis << ',' << fmt(a.axis_value) << ',' << scheme_name(a.scheme)
       << ',' << a.n << ',' << fmt(a.mean_snr_db) << ',' << fmt(a.ci95_db)
       << '\n';
  }
  write_file(out_path, os.str());
}

}  // namespace masim
