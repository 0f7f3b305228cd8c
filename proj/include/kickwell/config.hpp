// Copyright 2026 The kickwell Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <type_traits>
#include <variant>

#include "json.hpp"

#include "kickwell/dephase.hpp"
#include "kickwell/error.hpp"
#include "kickwell/kick_operator.hpp"
#include "kickwell/potential.hpp"

namespace kickwell {

struct Tolerances {
  double leak_fail = 1e-4;
  double cross_tol = 1e-6;
  friend bool operator==(const Tolerances&, const Tolerances&) = default;
};

struct AsymptoticSettings {
  bool enabled = false;
  int steps = 2000;
  friend bool operator==(const AsymptoticSettings&, const AsymptoticSettings&) = default;
};

struct OutputSettings {
  std::string dir;  // empty: nothing written
  int n_show = 16;
  friend bool operator==(const OutputSettings&, const OutputSettings&) = default;
};

struct ExperimentConfig {
  std::string id = "run";
  KickPotential potential = FourierSeries{};
  int n_max = 256;
  int n_steps = 100;
  double hbar = 1.0;
  int initial_level = 1;
  KickMethod method = KickMethod::Quadrature;
  std::optional<DephasingSchedule> dephasing;
  AsymptoticSettings asymptotics;
  OutputSettings output;
  Tolerances tolerances;
  std::optional<std::int64_t> seed;  // reserved; nothing in the core is random

  friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

namespace config_detail {

using nlohmann::json;

inline void fail(const std::string& field, const std::string& msg) {
  throw ConfigError("field '" + field + "': " + msg);
}

inline void reject_unknown(const json& obj, const std::string& where, std::initializer_list<const char*> known) {
  for (const auto& [key, _] : obj.items()) {
    bool ok = false;
    for (const char* k : known) ok = ok || key == k;
    if (!ok) fail(where.empty() ? key : where + "." + key, "unknown key");
  }
}

inline double number(const json& obj, const char* key, const std::string& where, std::optional<double> fallback = {}) {
  const std::string field = where.empty() ? key : where + "." + key;
  if (!obj.contains(key)) {
    if (fallback) return *fallback;
    fail(field, "missing");
  }
  const auto& v = obj.at(key);
  if (v.is_string()) {
    const auto s = v.get<std::string>();
    if (s == "inf" || s == "infinity") return std::numeric_limits<double>::infinity();
    fail(field, "expected a number, got string \"" + s + "\"");
  }
  if (!v.is_number()) fail(field, "expected a number");
  const double d = v.get<double>();
  if (std::isnan(d)) fail(field, "NaN is not allowed");
  return d;
}

inline double finite_number(const json& obj, const char* key, const std::string& where,
                            std::optional<double> fallback = {}) {
  const double d = number(obj, key, where, fallback);
  if (!std::isfinite(d)) fail(where.empty() ? key : where + "." + key, "must be finite");
  return d;
}

inline int integer(const json& obj, const char* key, const std::string& where, std::optional<int> fallback = {}) {
  const std::string field = where.empty() ? key : where + "." + key;
  if (!obj.contains(key)) {
    if (fallback) return *fallback;
    fail(field, "missing");
  }
  const auto& v = obj.at(key);
  if (!v.is_number_integer()) fail(field, "expected an integer");
  const auto i = v.get<std::int64_t>();
  if (i < std::numeric_limits<int>::min() || i > std::numeric_limits<int>::max()) fail(field, "out of range");
  return static_cast<int>(i);
}

inline std::vector<double> number_list(const json& obj, const char* key, const std::string& where) {
  const std::string field = where + "." + key;
  std::vector<double> out;
  if (!obj.contains(key)) return out;
  const auto& v = obj.at(key);
  if (!v.is_array()) fail(field, "expected an array of numbers");
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!v[i].is_number()) fail(field + "[" + std::to_string(i) + "]", "expected a number");
    const double d = v[i].get<double>();
    if (!std::isfinite(d)) fail(field + "[" + std::to_string(i) + "]", "must be finite");
    out.push_back(d);
  }
  return out;
}

inline KickPotential parse_potential(const json& p) {
  const std::string where = "potential";
  if (!p.is_object()) fail(where, "expected an object");
  if (!p.contains("type") || !p.at("type").is_string()) fail(where + ".type", "missing or not a string");
  const auto type = p.at("type").get<std::string>();
  if (type == "cos_shifted") {
    reject_unknown(p, where, {"type", "k_over_hbar", "alpha"});
    return CosShifted{finite_number(p, "k_over_hbar", where), finite_number(p, "alpha", where, 0.0)};
  }
  if (type == "cos_ratio") {
    reject_unknown(p, where, {"type", "k_over_hbar", "r"});
    const CosRatio c{finite_number(p, "k_over_hbar", where), finite_number(p, "r", where)};
    if (!(c.r > 0.0)) fail(where + ".r", "must be positive");
    return c;
  }
  if (type == "fourier") {
    reject_unknown(p, where, {"type", "c0", "cos", "sin"});
    return FourierSeries{finite_number(p, "c0", where, 0.0), number_list(p, "cos", where), number_list(p, "sin", where)};
  }
  if (type == "null") {
    reject_unknown(p, where, {"type"});
    return FourierSeries{};
  }
  fail(where + ".type", "unknown potential type \"" + type + "\" (cos_shifted, cos_ratio, fourier, null)");
  return {};
}

inline json potential_to_json(const KickPotential& pot) {
  return std::visit(
      [](const auto& p) -> json {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, CosShifted>) {
          return {{"type", "cos_shifted"}, {"k_over_hbar", p.k}, {"alpha", p.alpha}};
        } else if constexpr (std::is_same_v<T, CosRatio>) {
          return {{"type", "cos_ratio"}, {"k_over_hbar", p.k}, {"r", p.r}};
        } else {
          return {{"type", "fourier"}, {"c0", p.c0}, {"cos", p.cos_coeffs}, {"sin", p.sin_coeffs}};
        }
      },
      pot);
}

inline DephasingSchedule parse_dephasing(const json& d) {
  const std::string where = "dephasing";
  if (!d.is_object()) fail(where, "expected an object");
  if (!d.contains("mode") || !d.at("mode").is_string()) fail(where + ".mode", "missing or not a string");
  const auto mode = d.at("mode").get<std::string>();
  DephasingSchedule s;
  if (mode == "continuous") {
    reject_unknown(d, where, {"mode", "gamma0", "period", "offset"});
    s.mode = ContinuousDephasing{finite_number(d, "gamma0", where)};
  } else if (mode == "kicked") {
    reject_unknown(d, where, {"mode", "epsilon0", "period", "offset"});
    s.mode = KickedDephasing{number(d, "epsilon0", where)};
  } else {
    fail(where + ".mode", "unknown mode \"" + mode + "\" (continuous, kicked)");
  }
  s.period = finite_number(d, "period", where, 1.0);
  s.offset = finite_number(d, "offset", where, 0.5);
  try {
    s.validate();
  } catch (const DomainError& e) {
    fail(where, e.what());
  }
  return s;
}

inline json number_or_inf(double v) { return std::isinf(v) ? json("inf") : json(v); }

}  // namespace config_detail

inline void validate(const ExperimentConfig& c) {
  using config_detail::fail;
  if (c.id.empty()) fail("id", "must not be empty");
  if (c.n_max < 2) fail("n_max", "must be >= 2");
  if (c.n_steps < 1) fail("n_steps", "must be >= 1");
  if (!(c.hbar > 0.0) || !std::isfinite(c.hbar)) fail("hbar", "must be positive and finite");
  if (c.initial_level < 1 || c.initial_level > c.n_max) fail("initial_level", "must lie in [1, n_max]");
  if (c.method == KickMethod::BesselSeries && !std::holds_alternative<CosRatio>(c.potential)) {
    fail("method", "the bessel route needs a cos_ratio potential");
  }
  if (c.asymptotics.steps < 4) fail("asymptotics.steps", "must be >= 4");
  if (c.output.n_show < 0) fail("output.n_show", "must be >= 0");
  if (!(c.tolerances.leak_fail > 0.0)) fail("tolerances.leak_fail", "must be positive");
  if (!(c.tolerances.cross_tol > 0.0)) fail("tolerances.cross_tol", "must be positive");
  try {
    validate(c.potential);
    if (c.dephasing) c.dephasing->validate();
  } catch (const DomainError& e) {
    throw ConfigError(e.what());
  }
}

inline ExperimentConfig config_from_json(const nlohmann::json& j) {
  using namespace config_detail;
  if (!j.is_object()) throw ConfigError("config: top level must be an object");
  reject_unknown(j, "", {"id", "potential", "n_max", "n_steps", "hbar", "initial_level", "method", "dephasing",
                         "asymptotics", "output", "tolerances", "seed"});
  ExperimentConfig c;
  if (j.contains("id")) {
    if (!j.at("id").is_string()) fail("id", "expected a string");
    c.id = j.at("id").get<std::string>();
  }
  if (!j.contains("potential")) fail("potential", "missing");
  c.potential = parse_potential(j.at("potential"));
  c.n_max = integer(j, "n_max", "", 256);
  c.n_steps = integer(j, "n_steps", "", 100);
  c.hbar = finite_number(j, "hbar", "", 1.0);
  c.initial_level = integer(j, "initial_level", "", 1);
  if (j.contains("method")) {
    const auto& m = j.at("method");
    if (!m.is_string()) fail("method", "expected a string");
    const auto s = m.get<std::string>();
    if (s == "quadrature") c.method = KickMethod::Quadrature;
    else if (s == "bessel") c.method = KickMethod::BesselSeries;
    else fail("method", "unknown method \"" + s + "\" (quadrature, bessel)");
  }
  if (j.contains("dephasing") && !j.at("dephasing").is_null()) c.dephasing = parse_dephasing(j.at("dephasing"));
  if (j.contains("asymptotics")) {
    const auto& a = j.at("asymptotics");
    if (!a.is_object()) fail("asymptotics", "expected an object");
    reject_unknown(a, "asymptotics", {"enabled", "steps"});
    if (a.contains("enabled")) {
      if (!a.at("enabled").is_boolean()) fail("asymptotics.enabled", "expected true or false");
      c.asymptotics.enabled = a.at("enabled").get<bool>();
    }
    c.asymptotics.steps = integer(a, "steps", "asymptotics", 2000);
  }
  if (j.contains("output")) {
    const auto& o = j.at("output");
    if (!o.is_object()) fail("output", "expected an object");
    reject_unknown(o, "output", {"dir", "n_show"});
    if (o.contains("dir")) {
      if (!o.at("dir").is_string()) fail("output.dir", "expected a string");
      c.output.dir = o.at("dir").get<std::string>();
    }
    c.output.n_show = integer(o, "n_show", "output", 16);
  }
  if (j.contains("tolerances")) {
    const auto& t = j.at("tolerances");
    if (!t.is_object()) fail("tolerances", "expected an object");
    reject_unknown(t, "tolerances", {"leak_fail", "cross_tol"});
    c.tolerances.leak_fail = finite_number(t, "leak_fail", "tolerances", 1e-4);
    c.tolerances.cross_tol = finite_number(t, "cross_tol", "tolerances", 1e-6);
  }
  if (j.contains("seed") && !j.at("seed").is_null()) {
    if (!j.at("seed").is_number_integer()) fail("seed", "expected an integer");
    c.seed = j.at("seed").get<std::int64_t>();
  }
  validate(c);
  return c;
}

inline nlohmann::json config_to_json(const ExperimentConfig& c) {
  using config_detail::json;
  json j;
  j["id"] = c.id;
  j["potential"] = config_detail::potential_to_json(c.potential);
  j["n_max"] = c.n_max;
  j["n_steps"] = c.n_steps;
  j["hbar"] = c.hbar;
  j["initial_level"] = c.initial_level;
  j["method"] = to_string(c.method);
  if (c.dephasing) {
    json d;
    if (const auto* cont = std::get_if<ContinuousDephasing>(&c.dephasing->mode)) {
      d["mode"] = "continuous";
      d["gamma0"] = cont->gamma0;
    } else {
      d["mode"] = "kicked";
      d["epsilon0"] = config_detail::number_or_inf(std::get<KickedDephasing>(c.dephasing->mode).epsilon0);
    }
    d["period"] = c.dephasing->period;
    d["offset"] = c.dephasing->offset;
    j["dephasing"] = d;
  }
  j["asymptotics"] = {{"enabled", c.asymptotics.enabled}, {"steps", c.asymptotics.steps}};
  j["output"] = {{"dir", c.output.dir}, {"n_show", c.output.n_show}};
  j["tolerances"] = {{"leak_fail", c.tolerances.leak_fail}, {"cross_tol", c.tolerances.cross_tol}};
  if (c.seed) j["seed"] = *c.seed;
  return j;
}

/// Parses JSON text; syntax errors carry the line and column.
inline nlohmann::json parse_json_text(const std::string& text, const std::string& origin) {
  try {
    return nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(origin + ": " + e.what());
  }
}

inline nlohmann::json load_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_json_text(buf.str(), path.string());
}

inline ExperimentConfig parse_config(const std::string& text, const std::string& origin = "<config>") {
  const auto j = parse_json_text(text, origin);
  try {
    return config_from_json(j);
  } catch (const ConfigError& e) {
    throw ConfigError(origin + ": " + e.what());
  }
}

inline ExperimentConfig load_config(const std::filesystem::path& path) {
  const auto j = load_json_file(path);
  try {
    return config_from_json(j);
  } catch (const ConfigError& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

}  // namespace kickwell
