#include "masim/channel.hpp"

#include <cmath>

#include "json.hpp"

namespace masim {

double path_phase(const Vec2& t, double theta, double phi, double wavelength) {
  return 2.0 * M_PI / wavelength *
         (t.x() * std::sin(theta) * std::cos(phi) + t.y() * std::cos(theta));
}

Vec array_response(const Apv& apv, double theta, double phi,
                   double wavelength) {
  Vec a(apv.size());
  for (int n = 0; n < apv.size(); ++n) {
    a(n) = std::polar(1.0, path_phase(apv.position(n), theta, phi, wavelength));
  }
  return a;
}

cplx channel_entry(const Vec2& t, const PathSet& paths, double wavelength) {
  cplx h{0.0, 0.0};
  for (const Path& p : paths.paths) {
    h += p.gain * std::polar(1.0, path_phase(t, p.theta, p.phi, wavelength));
  }
  return h;
}

Vec channel_vector(const Apv& apv, const PathSet& paths, double wavelength) {
  if (paths.paths.empty()) throw DimensionError("path set is empty");
  Vec h = Vec::Zero(apv.size());
  for (const Path& p : paths.paths) {
    h += p.gain * array_response(apv, p.theta, p.phi, wavelength);
  }
  return h;
}

std::vector<Vec> all_channels(const Apv& apv, const Scenario& sc,
                              double wavelength) {
  std::vector<Vec> h;
  h.reserve(static_cast<size_t>(sc.k_prs()) + 1);
  h.push_back(channel_vector(apv, sc.sr_paths, wavelength));
  for (const PathSet& ps : sc.pr_paths) {
    h.push_back(channel_vector(apv, ps, wavelength));
  }
  return h;
}

Scenario generate_scenario(const ScenarioConfig& cfg, Rng& rng) {
  cfg.validate();
  Scenario sc;
  sc.distances.resize(static_cast<size_t>(cfg.k_prs) + 1);
  auto draw_receiver = [&](int receiver_id) {
    PathSet ps;
    ps.receiver_id = receiver_id;
    const double d = rng.uniform(cfg.distance_min, cfg.distance_max);
    sc.distances[static_cast<size_t>(receiver_id)] = d;
    const double var = cfg.ref_path_loss *
                       std::pow(d, -cfg.path_loss_exponent) /
                       cfg.paths_per_receiver;
    ps.paths.resize(static_cast<size_t>(cfg.paths_per_receiver));
    for (Path& p : ps.paths) {
      p.theta = rng.uniform(-M_PI / 2.0, M_PI / 2.0);
      p.phi = rng.uniform(-M_PI / 2.0, M_PI / 2.0);
      p.gain = rng.cnormal(var);
    }
    return ps;
  };
  sc.sr_paths = draw_receiver(0);
  sc.pr_paths.reserve(static_cast<size_t>(cfg.k_prs));
  for (int k = 1; k <= cfg.k_prs; ++k) {
    sc.pr_paths.push_back(draw_receiver(k));
  }
  return sc;
}

namespace {

nlohmann::json pathset_to_json(const PathSet& ps) {
  nlohmann::json j;
  j["receiver_id"] = ps.receiver_id;
  j["paths"] = nlohmann::json::array();
  for (const Path& p : ps.paths) {
    j["paths"].push_back({{"theta", p.theta},
                          {"phi", p.phi},
                          {"gain_re", p.gain.real()},
                          {"gain_im", p.gain.imag()}});
  }
  return j;
}

PathSet pathset_from_json(const nlohmann::json& j) {
  PathSet ps;
  ps.receiver_id = j.at("receiver_id").get<int>();
  for (const auto& jp : j.at("paths")) {
    Path p;
    p.theta = jp.at("theta").get<double>();
    p.phi = jp.at("phi").get<double>();
    p.gain = {jp.at("gain_re").get<double>(), jp.at("gain_im").get<double>()};
    ps.paths.push_back(p);
  }
  if (ps.paths.empty()) throw SchemaError("path set without paths");
  return ps;
}

}  // namespace

std::string serialize_scenario(const Scenario& sc) {
  nlohmann::json j;
  j["sr_paths"] = pathset_to_json(sc.sr_paths);
  j["pr_paths"] = nlohmann::json::array();
  for (const PathSet& ps : sc.pr_paths) {
    j["pr_paths"].push_back(pathset_to_json(ps));
  }
  j["distances"] = sc.distances;
  return j.dump(2);
}

Scenario parse_scenario(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError(std::string("scenario parse error: ") + e.what());
  }
  try {
    Scenario sc;
    sc.sr_paths = pathset_from_json(j.at("sr_paths"));
    for (const auto& jp : j.at("pr_paths")) {
      sc.pr_paths.push_back(pathset_from_json(jp));
    }
    sc.distances = j.at("distances").get<std::vector<double>>();
    if (sc.distances.size() != sc.pr_paths.size() + 1) {
      throw SchemaError("distance count does not match receiver count");
    }
    return sc;
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError(std::string("scenario schema error: ") + e.what());
  }
}

}  // namespace masim
