#pragma once

#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "serialize.hpp"
#include "suites.hpp"

namespace chiral {

// Validation failure; the message starts with the offending field path.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline const std::vector<std::string>& plot_names() {
  static const std::vector<std::string> names{"greens_profile", "holonomy", "beta"};
  return names;
}

struct ScenarioConfig {
  SuiteConfig suite;
  std::string backend = "exact";
  std::vector<std::string> suites;
  std::string output;
  std::vector<std::string> plots;
};

namespace config_detail {

inline const Json& need(const Json& j, const std::string& key, const std::string& path) {
  if (!j.contains(key)) throw ConfigError(path + "." + key + ": missing");
  return j[key];
}

inline std::string string_at(const Json& j, const std::string& path) {
  if (!j.is_string()) throw ConfigError(path + ": expected a string");
  return j.get<std::string>();
}

inline long positive_int(const Json& j, const std::string& path) {
  if (!j.is_number_integer() || j.get<long>() <= 0) throw ConfigError(path + ": expected a positive integer");
  return j.get<long>();
}

inline Rational rational_at(const Json& j, const std::string& path) {
  try {
    return rational_from_json(j, path);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

inline std::vector<std::string> name_list(const Json& j, const std::string& path, const std::vector<std::string>& allowed) {
  if (!j.is_array()) throw ConfigError(path + ": expected a list");
  std::vector<std::string> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    std::string p = path + "[" + std::to_string(i) + "]";
    auto s = string_at(j[i], p);
    if (std::find(allowed.begin(), allowed.end(), s) == allowed.end()) throw ConfigError(p + ": unknown name '" + s + "'");
    if (std::find(out.begin(), out.end(), s) == out.end()) out.push_back(s);
  }
  return out;
}

inline Region region_at(const Json& j, const Geometry& g, const std::string& path) {
  try {
    auto r = region_from_json(j, g, path);
    if (r.space() != Space::Bulk) throw ConfigError(path + ".space: regions must lie in the bulk");
    if (r.boxes().empty()) throw ConfigError(path + ".boxes: empty region");
    return r;
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

}  // namespace config_detail

inline ScenarioConfig parse_config(const Json& j) {
  using namespace config_detail;
  const std::string root = "config";
  if (!j.is_object()) throw ConfigError(root + ": expected an object");
  static const std::set<std::string> known{"geometry", "chirality", "inner_radius", "backend", "float_tolerance", "seed", "samples", "suites",
                                           "regions", "holonomy", "bumps", "output", "plots"};
  for (const auto& [k, v] : j.items())
    if (!known.count(k)) throw ConfigError(root + "." + k + ": unknown field");

  ScenarioConfig out;
  auto& s = out.suite;
  Json gj{{"kind", string_at(need(j, "geometry", root), root + ".geometry")}, {"chirality", j.contains("chirality") ? j["chirality"] : Json("+")}};
  if (j.contains("inner_radius")) gj["inner_radius"] = j["inner_radius"];
  try {
    std::string kind = gj["kind"];
    if (kind != "half_space" && kind != "cylinder") throw ConfigError(root + ".geometry: expected \"half_space\" or \"cylinder\"");
    int e = parse_chirality(gj["chirality"], root + ".chirality");
    if (kind == "half_space") {
      if (j.contains("inner_radius")) throw ConfigError(root + ".inner_radius: only the cylinder has an inner radius");
      s.geometry = Geometry::half_space(e);
    } else {
      Rational r0 = j.contains("inner_radius") ? rational_at(j["inner_radius"], root + ".inner_radius") : Rational(1, 4);
      if (r0 <= 0 || r0 >= Rational(1, 2)) throw ConfigError(root + ".inner_radius: must lie in (0, 1/2)");
      s.geometry = Geometry::cylinder(e, r0);
    }
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }

  if (j.contains("backend")) {
    out.backend = string_at(j["backend"], root + ".backend");
    if (out.backend != "exact" && out.backend != "float") throw ConfigError(root + ".backend: expected \"exact\" or \"float\"");
  }
  if (j.contains("float_tolerance")) {
    const auto& t = j["float_tolerance"];
    if (!t.is_number() || t.get<double>() <= 0) throw ConfigError(root + ".float_tolerance: expected a positive number");
    s.float_tolerance = t.get<double>();
  }
  if (j.contains("seed")) {
    const auto& v = j["seed"];
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0)) throw ConfigError(root + ".seed: expected a non-negative integer");
    s.seed = v.get<std::uint64_t>();
  }
  if (j.contains("samples")) {
    const auto& sm = j["samples"];
    if (!sm.is_object()) throw ConfigError(root + ".samples: expected an object");
    for (const auto& [k, v] : sm.items()) {
      std::string p = root + ".samples." + k;
      if (k == "default")
        s.default_samples = static_cast<int>(positive_int(v, p));
      else if (is_suite(k))
        s.samples[k] = static_cast<int>(positive_int(v, p));
      else
        throw ConfigError(p + ": unknown suite");
    }
  }
  if (j.contains("suites")) {
    out.suites = name_list(j["suites"], root + ".suites", suite_names());
  } else {
    out.suites = suite_names();
    if (s.geometry.kind != Kind::Cylinder) out.suites.pop_back();
  }
  if (std::find(out.suites.begin(), out.suites.end(), "holonomy") != out.suites.end() && s.geometry.kind != Kind::Cylinder)
    throw ConfigError(root + ".suites: holonomy needs geometry \"cylinder\"");

  if (j.contains("regions")) {
    const auto& rj = j["regions"];
    std::string rp = root + ".regions";
    if (!rj.is_object()) throw ConfigError(rp + ": expected an object");
    for (const auto& [k, v] : rj.items())
      if (k != "causality" && k != "naturality") throw ConfigError(rp + "." + k + ": unknown field");
    if (rj.contains("causality")) {
      const auto& c = rj["causality"];
      if (!c.is_array() || c.size() != 2) throw ConfigError(rp + ".causality: expected two regions");
      auto a = region_at(c[0], s.geometry, rp + ".causality[0]"), b = region_at(c[1], s.geometry, rp + ".causality[1]");
      if (a.boxes().size() != 1 || b.boxes().size() != 1) throw ConfigError(rp + ".causality: each region must be a single box");
      if (!is_disjoint(a, b)) throw ConfigError(rp + ".causality: regions are not disjoint");
      s.causality_regions = std::make_pair(a, b);
    }
    if (rj.contains("naturality")) {
      const auto& c = rj["naturality"];
      if (!c.is_array() || c.size() < 2) throw ConfigError(rp + ".naturality: expected a chain of at least two regions");
      std::vector<Region> chain;
      for (std::size_t i = 0; i < c.size(); ++i) chain.push_back(region_at(c[i], s.geometry, rp + ".naturality[" + std::to_string(i) + "]"));
      for (std::size_t i = 1; i < chain.size(); ++i)
        if (!region_subset(chain[i - 1], chain[i])) throw ConfigError(rp + ".naturality[" + std::to_string(i) + "]: does not contain the previous region");
      s.naturality_chain = chain;
    }
  }
  if (j.contains("holonomy")) {
    const auto& h = j["holonomy"];
    std::string hp = root + ".holonomy";
    if (!h.is_object()) throw ConfigError(hp + ": expected an object");
    for (const auto& [k, v] : h.items())
      if (k != "alphas") throw ConfigError(hp + "." + k + ": unknown field");
    if (h.contains("alphas")) {
      const auto& a = h["alphas"];
      if (!a.is_array() || a.empty()) throw ConfigError(hp + ".alphas: expected a non-empty list");
      s.holonomy_alphas.clear();
      for (std::size_t i = 0; i < a.size(); ++i) s.holonomy_alphas.push_back(rational_at(a[i], hp + ".alphas[" + std::to_string(i) + "]"));
    }
  }
  if (j.contains("bumps")) {
    const auto& b = j["bumps"];
    if (!b.is_array() || b.empty()) throw ConfigError(root + ".bumps: expected a non-empty list");
    s.bumps.clear();
    for (std::size_t i = 0; i < b.size(); ++i) {
      std::string p = root + ".bumps[" + std::to_string(i) + "]";
      if (!b[i].is_array() || b[i].size() != 2) throw ConfigError(p + ": expected [lo, hi]");
      Rational lo = rational_at(b[i][0], p + "[0]"), hi = rational_at(b[i][1], p + "[1]");
      if (!(0 <= lo && lo < hi && hi <= 1)) throw ConfigError(p + ": need 0 <= lo < hi <= 1");
      s.bumps.emplace_back(lo, hi);
    }
  }
  if (j.contains("output")) out.output = string_at(j["output"], root + ".output");
  out.plots = j.contains("plots") ? name_list(j["plots"], root + ".plots", plot_names()) : plot_names();
  if (s.geometry.kind != Kind::Cylinder) out.plots.erase(std::remove(out.plots.begin(), out.plots.end(), "holonomy"), out.plots.end());
  return out;
}

inline ScenarioConfig load_config(const std::string& file) {
  std::ifstream in(file);
  if (!in) throw ConfigError(file + ": cannot open");
  std::stringstream buf;
  buf << in.rdbuf();
  auto j = Json::parse(buf.str(), nullptr, false);
  if (j.is_discarded()) throw ConfigError(file + ": not valid JSON");
  return parse_config(j);
}

}  // namespace chiral
