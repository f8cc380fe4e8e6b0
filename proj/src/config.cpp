#include "masim/config.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <sstream>
#include <vector>

namespace masim {

namespace {

std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

struct Field {
  const char* key;
  std::function<std::string(const ScenarioConfig&)> get;
  std::function<void(ScenarioConfig&, const std::string&)> set;
};

double to_double(const std::string& key, const std::string& v) {
  try {
    size_t pos = 0;
    const double x = std::stod(v, &pos);
    while (pos < v.size() && std::isspace(static_cast<unsigned char>(v[pos]))) ++pos;
    if (pos != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw ConfigError("bad numeric value for '" + key + "': " + v);
  }
}

long to_long(const std::string& key, const std::string& v) {
  const double x = to_double(key, v);
  const long n = static_cast<long>(x);
  if (static_cast<double>(n) != x) {
    throw ConfigError("expected integer for '" + key + "': " + v);
  }
  return n;
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  throw ConfigError("expected boolean for '" + key + "': " + v);
}

#define MASIM_FIELD_D(name) \
  Field{#name, [](const ScenarioConfig& c) { return fmt_double(c.name); }, \
        [](ScenarioConfig& c, const std::string& v) { c.name = to_double(#name, v); }}
#define MASIM_FIELD_I(name) \
  Field{#name, [](const ScenarioConfig& c) { return std::to_string(c.name); }, \
        [](ScenarioConfig& c, const std::string& v) { c.name = static_cast<int>(to_long(#name, v)); }}
#define MASIM_FIELD_L(name) \
  Field{#name, [](const ScenarioConfig& c) { return std::to_string(c.name); }, \
        [](ScenarioConfig& c, const std::string& v) { c.name = to_long(#name, v); }}
#define MASIM_FIELD_B(name) \
  Field{#name, [](const ScenarioConfig& c) { return c.name ? std::string("true") : std::string("false"); }, \
        [](ScenarioConfig& c, const std::string& v) { c.name = to_bool(#name, v); }}

const std::vector<Field>& fields() {
  static const std::vector<Field> f = {
      MASIM_FIELD_I(n_antennas),
      MASIM_FIELD_I(k_prs),
      MASIM_FIELD_D(region_size),
      MASIM_FIELD_D(wavelength),
      MASIM_FIELD_D(min_spacing),
      MASIM_FIELD_I(grid_points_per_axis),
      MASIM_FIELD_D(p_max),
      MASIM_FIELD_D(noise_power),
      MASIM_FIELD_D(it_threshold),
      MASIM_FIELD_I(paths_per_receiver),
      MASIM_FIELD_D(path_loss_exponent),
      MASIM_FIELD_D(ref_path_loss),
      MASIM_FIELD_D(distance_min),
      MASIM_FIELD_D(distance_max),
      Field{"rng_seed",
            [](const ScenarioConfig& c) { return std::to_string(c.rng_seed); },
            [](ScenarioConfig& c, const std::string& v) {
              try {
                c.rng_seed = std::stoull(v);
              } catch (const std::exception&) {
                throw ConfigError("bad value for 'rng_seed': " + v);
              }
            }},
      MASIM_FIELD_D(eps_pow),
      MASIM_FIELD_D(eps_it),
      MASIM_FIELD_D(sca_tol),
      MASIM_FIELD_I(sca_max_iters),
      MASIM_FIELD_D(ao_tol),
      MASIM_FIELD_I(ao_max_outer),
      MASIM_FIELD_I(max_sweeps),
      MASIM_FIELD_I(pso_swarm),
      MASIM_FIELD_D(pso_inertia),
      MASIM_FIELD_D(pso_cognitive),
      MASIM_FIELD_D(pso_social),
      MASIM_FIELD_I(pso_iters),
      MASIM_FIELD_B(pso_sca_per_candidate),
      MASIM_FIELD_B(dy_in_meters),
      MASIM_FIELD_L(d_max),
  };
  return f;
}

#undef MASIM_FIELD_D
#undef MASIM_FIELD_I
#undef MASIM_FIELD_L
#undef MASIM_FIELD_B

std::string trim(const std::string& s) {
  size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

// Convenience dBm aliases accepted on input only; canonical form is watts.
bool apply_dbm_alias(ScenarioConfig& cfg, const std::string& key,
                     const std::string& value) {
  if (key == "p_max_dbm") {
    cfg.p_max = dbm_to_watt(to_double(key, value));
  } else if (key == "noise_power_dbm") {
    cfg.noise_power = dbm_to_watt(to_double(key, value));
  } else if (key == "it_threshold_dbm") {
    cfg.it_threshold = dbm_to_watt(to_double(key, value));
  } else {
    return false;
  }
  return true;
}

void apply_key(ScenarioConfig& cfg, const std::string& key,
               const std::string& value) {
  for (const Field& f : fields()) {
    if (key == f.key) {
      f.set(cfg, value);
      return;
    }
  }
  if (apply_dbm_alias(cfg, key, value)) return;
  throw ConfigError("unknown config key '" + key + "'");
}

}  // namespace

void ScenarioConfig::validate() const {
  auto require = [](bool ok, const char* what) {
    if (!ok) throw ConfigError(std::string("invalid config: ") + what);
  };
  require(n_antennas >= 1, "N >= 1");
  require(k_prs >= 0, "K >= 0");
  require(grid_points_per_axis >= 1, "M >= 1");
  require(region_size > 0.0, "A > 0");
  require(wavelength > 0.0, "lambda > 0");
  require(min_spacing >= 0.0, "D_min >= 0");
  require(p_max > 0.0, "P_max > 0");
  require(noise_power > 0.0, "sigma^2 > 0");
  require(it_threshold > 0.0, "Gamma > 0");
  require(paths_per_receiver >= 1, "L >= 1");
  require(path_loss_exponent > 0.0, "alpha > 0");
  require(ref_path_loss > 0.0, "rho > 0");
  require(distance_min > 0.0 && distance_max >= distance_min,
          "distance range");
  require(eps_pow >= 0.0 && eps_it >= 0.0, "tolerances non-negative");
  require(sca_tol > 0.0 && ao_tol > 0.0, "stopping thresholds positive");
  require(sca_max_iters >= 1 && ao_max_outer >= 1 && max_sweeps >= 1,
          "iteration caps positive");
  require(pso_swarm >= 1 && pso_iters >= 0, "PSO sizes");
  require(d_max >= 1, "d_max >= 1");

  // Grid/D_min joint satisfiability: greedy packing over the M^2 sampling
  // points must admit N pairwise-spaced points.
  const int m = grid_points_per_axis;
  const double a = region_size;
  std::vector<Vec2> accepted;
  accepted.reserve(static_cast<size_t>(n_antennas));
  const double d2 = min_spacing * min_spacing;
  for (int i = 1; i <= m && static_cast<int>(accepted.size()) < n_antennas; ++i) {
    for (int j = 1; j <= m; ++j) {
      const Vec2 p(-a / 2.0 + i * a / m, -a / 2.0 + j * a / m);
      bool ok = true;
      for (const Vec2& q : accepted) {
        if ((p - q).squaredNorm() < d2) {
          ok = false;
          break;
        }
      }
      if (ok) {
        accepted.push_back(p);
        if (static_cast<int>(accepted.size()) == n_antennas) break;
      }
    }
  }
  require(static_cast<int>(accepted.size()) == n_antennas,
          "grid cannot hold N points pairwise >= D_min apart");
}

ScenarioConfig parse_config(const std::string& text) {
  ScenarioConfig cfg;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const size_t eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(lineno) +
                        ": expected 'key = value'");
    }
    apply_key(cfg, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  cfg.validate();
  return cfg;
}

ScenarioConfig load_config_file(const std::string& path, bool apply_env) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot open config file: " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  ScenarioConfig cfg = parse_config(ss.str());
  if (apply_env) {
    apply_env_overrides(cfg);
    cfg.validate();
  }
  return cfg;
}

std::string serialize_config(const ScenarioConfig& cfg) {
  std::ostringstream os;
  for (const Field& f : fields()) {
    os << f.key << " = " << f.get(cfg) << "\n";
  }
  return os.str();
}

void apply_env_overrides(ScenarioConfig& cfg) {
  for (const Field& f : fields()) {
    std::string env_name = "MASIM_";
    for (const char* p = f.key; *p; ++p) {
      env_name += static_cast<char>(std::toupper(static_cast<unsigned char>(*p)));
    }
    if (const char* v = std::getenv(env_name.c_str())) {
      f.set(cfg, v);
    }
  }
}

ScenarioConfig desk_preset() {
  ScenarioConfig cfg;
  cfg.grid_points_per_axis = 40;
  cfg.pso_iters = 40;
  cfg.pso_swarm = 30;
  return cfg;
}

ScenarioConfig paper_preset() { return ScenarioConfig{}; }

int preset_default_trials(const std::string& preset) {
  if (preset == "desk") return 20;
  if (preset == "paper") return 100;
  throw ConfigError("unknown preset '" + preset + "'");
}

}  // namespace masim
