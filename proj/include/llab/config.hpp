#pragma once

#include <cstdlib>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>

#include <json.hpp>

#include "llab/errors.hpp"
#include "llab/rational.hpp"

// Run configuration loaded from JSON.  Schema (all keys optional):
//   {
//     "spec":        {"a_plus": "p/q", "a_minus": "p/q"},
//     "bundle":      {"k": int, "base_area": "p/q"},
//     "tolerances":  {"pullback": "1e-6", "integrator": "1e-9",
//                     "root_find": "1e-10"},
//     "grid":        {"samples": int},          // per-axis resolution
//     "output":      {"path": str, "format": "json" | "csv"},
//     "epsilon":     "p/q"                       // conic point-area slack
//   }
// Reals are serialized as decimal strings, rationals as "p/q".  Unknown keys
// are rejected.  The environment variable LLAB_CONFIG names a default file.

namespace llab {

struct RunConfig {
  Rational a_plus{17, 10};
  Rational a_minus{41, 100};
  int k = 1;
  Rational base_area{1};
  double tol_pullback = 1e-6;
  double tol_integrator = 1e-9;
  double tol_root_find = 1e-10;
  int grid_samples = 32;
  std::string output_path;
  std::string format = "json";
  std::optional<Rational> epsilon;
};

namespace config_detail {

inline void require_keys(const nlohmann::json& obj, const std::string& where,
                         std::initializer_list<const char*> allowed) {
  for (const auto& [key, value] : obj.items()) {
    bool ok = false;
    for (const char* a : allowed)
      if (key == a) ok = true;
    if (!ok) throw ConfigError("unknown key \"" + key + "\" in " + where);
  }
}

inline Rational rational_field(const nlohmann::json& obj, const char* key,
                               const Rational& fallback) {
  if (!obj.contains(key)) return fallback;
  if (!obj[key].is_string())
    throw ConfigError(std::string("\"") + key + "\" must be a \"p/q\" string");
  try {
    return Rational::parse(obj[key].get<std::string>());
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("\"") + key + "\": " + e.what());
  }
}

inline double real_field(const nlohmann::json& obj, const char* key, double fallback) {
  if (!obj.contains(key)) return fallback;
  if (!obj[key].is_string())
    throw ConfigError(std::string("\"") + key + "\" must be a decimal string");
  std::istringstream in(obj[key].get<std::string>());
  double v = 0.0;
  in >> v;
  if (in.fail()) throw ConfigError(std::string("cannot parse real \"") + key + "\"");
  return v;
}

}  // namespace config_detail

inline RunConfig parse_config(const nlohmann::json& j) {
  using config_detail::rational_field;
  using config_detail::real_field;
  using config_detail::require_keys;
  RunConfig cfg;
  if (!j.is_object()) throw ConfigError("config root must be an object");
  require_keys(j, "config", {"spec", "bundle", "tolerances", "grid", "output", "epsilon"});
  if (j.contains("spec")) {
    const auto& s = j["spec"];
    require_keys(s, "spec", {"a_plus", "a_minus"});
    cfg.a_plus = rational_field(s, "a_plus", cfg.a_plus);
    cfg.a_minus = rational_field(s, "a_minus", cfg.a_minus);
  }
  if (j.contains("bundle")) {
    const auto& b = j["bundle"];
    require_keys(b, "bundle", {"k", "base_area"});
    if (b.contains("k")) {
      if (!b["k"].is_number_integer()) throw ConfigError("\"k\" must be an integer");
      cfg.k = b["k"].get<int>();
    }
    cfg.base_area = rational_field(b, "base_area", cfg.base_area);
  }
  if (j.contains("tolerances")) {
    const auto& t = j["tolerances"];
    require_keys(t, "tolerances", {"pullback", "integrator", "root_find"});
    cfg.tol_pullback = real_field(t, "pullback", cfg.tol_pullback);
    cfg.tol_integrator = real_field(t, "integrator", cfg.tol_integrator);
    cfg.tol_root_find = real_field(t, "root_find", cfg.tol_root_find);
  }
  if (j.contains("grid")) {
    const auto& g = j["grid"];
    require_keys(g, "grid", {"samples"});
    if (g.contains("samples")) {
      if (!g["samples"].is_number_integer() || g["samples"].get<int>() < 1)
        throw ConfigError("\"samples\" must be a positive integer");
      cfg.grid_samples = g["samples"].get<int>();
    }
  }
  if (j.contains("output")) {
    const auto& o = j["output"];
    require_keys(o, "output", {"path", "format"});
    if (o.contains("path")) cfg.output_path = o["path"].get<std::string>();
    if (o.contains("format")) {
      cfg.format = o["format"].get<std::string>();
      if (cfg.format != "json" && cfg.format != "csv")
        throw ConfigError("\"format\" must be \"json\" or \"csv\"");
    }
  }
  if (j.contains("epsilon")) {
    cfg.epsilon = config_detail::rational_field(j, "epsilon", Rational(0));
  }
  return cfg;
}

inline RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("config is not valid JSON: " + std::string(e.what()));
  }
  return parse_config(j);
}

// Default config: LLAB_CONFIG if set, otherwise built-in defaults.
inline RunConfig default_config() {
  if (const char* env = std::getenv("LLAB_CONFIG")) return load_config(env);
  return RunConfig{};
}

}  // namespace llab
