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

#include "kickwell/config.hpp"

#include <cmath>
#include <filesystem>
#include <limits>
#include <string>

#include "gtest/gtest.h"

using namespace kickwell;

namespace {

std::string error_of(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return {};
}

bool contains(const std::string& haystack, const std::string& needle) { return haystack.find(needle) != std::string::npos; }

}  // namespace

TEST(Config, MinimalDefaults) {
  const auto c = parse_config(R"({"potential": {"type": "cos_shifted", "k_over_hbar": 2.0}})");
  EXPECT_EQ(c.id, "run");
  EXPECT_EQ(c.n_max, 256);
  EXPECT_EQ(c.n_steps, 100);
  EXPECT_EQ(c.hbar, 1.0);
  EXPECT_EQ(c.initial_level, 1);
  EXPECT_EQ(c.method, KickMethod::Quadrature);
  EXPECT_FALSE(c.dephasing.has_value());
  EXPECT_EQ(c.tolerances.leak_fail, 1e-4);
  EXPECT_EQ(c.tolerances.cross_tol, 1e-6);
  EXPECT_EQ(c.output.n_show, 16);
  const auto& p = std::get<CosShifted>(c.potential);
  EXPECT_EQ(p.k, 2.0);
  EXPECT_EQ(p.alpha, 0.0);
}

TEST(Config, AllPotentialTypes) {
  EXPECT_TRUE(std::holds_alternative<CosRatio>(
      parse_config(R"({"potential": {"type": "cos_ratio", "k_over_hbar": 1, "r": 0.75}})").potential));
  const auto f = parse_config(R"({"potential": {"type": "fourier", "c0": 1, "cos": [0.5, 0.25], "sin": [0.1]}})");
  const auto& fs = std::get<FourierSeries>(f.potential);
  EXPECT_EQ(fs.cos_coeffs, (std::vector<double>{0.5, 0.25}));
  EXPECT_EQ(fs.sin_coeffs, (std::vector<double>{0.1}));
  EXPECT_TRUE(is_null(parse_config(R"({"potential": {"type": "null"}})").potential));
}

TEST(Config, DephasingModes) {
  const auto c = parse_config(
      R"({"potential": {"type": "null"}, "dephasing": {"mode": "continuous", "gamma0": 0.2, "period": 2, "offset": 0.5}})");
  ASSERT_TRUE(c.dephasing.has_value());
  EXPECT_EQ(std::get<ContinuousDephasing>(c.dephasing->mode).gamma0, 0.2);
  EXPECT_EQ(c.dephasing->period, 2.0);
  const auto k = parse_config(R"({"potential": {"type": "null"}, "dephasing": {"mode": "kicked", "epsilon0": "inf"}})");
  EXPECT_TRUE(std::isinf(std::get<KickedDephasing>(k.dephasing->mode).epsilon0));
  EXPECT_EQ(k.dephasing->offset, 0.5);
}

TEST(Config, FieldDiagnostics) {
  EXPECT_TRUE(contains(error_of(R"({"potential": {"type": "cos_ratio", "k_over_hbar": 1, "r": -2}})"),
                       "field 'potential.r'"));
  EXPECT_TRUE(contains(error_of(R"({"potential": {"type": "null"}, "n_max": 1})"), "field 'n_max'"));
  EXPECT_TRUE(contains(error_of(R"({"potential": {"type": "null"}, "n_max": 2.5})"), "field 'n_max': expected an integer"));
  EXPECT_TRUE(contains(error_of(R"({"potential": {"type": "null"}, "n_steps": 0})"), "field 'n_steps'"));
  EXPECT_TRUE(contains(error_of(R"({"potential": {"type": "null"}, "n_max": 4, "initial_level": 5})"),
                       "field 'initial_level'"));
  EXPECT_TRUE(contains(error_of(R"({"potential": {"type": "null"}, "nmax": 4})"), "field 'nmax': unknown key"));
  EXPECT_TRUE(contains(error_of(R"({"potential": {"type": "wave"}})"), "field 'potential.type'"));
  EXPECT_TRUE(contains(error_of(R"({"n_max": 4})"), "field 'potential': missing"));
  EXPECT_TRUE(contains(error_of(R"({"potential": {"type": "cos_shifted", "k_over_hbar": "big"}})"),
                       "field 'potential.k_over_hbar'"));
  EXPECT_TRUE(contains(error_of(R"({"potential": {"type": "null"}, "dephasing": {"mode": "kicked", "epsilon0": 1, "offset": 1.5}})"),
                       "field 'dephasing'"));
  EXPECT_TRUE(contains(error_of(R"({"potential": {"type": "null"}, "method": "bessel"})"), "field 'method'"));
  EXPECT_TRUE(contains(error_of(R"({"potential": {"type": "null"}, "hbar": -1})"), "field 'hbar'"));
  EXPECT_TRUE(contains(error_of(R"({"potential": {"type": "null"}, "tolerances": {"leak_fail": 0}})"),
                       "field 'tolerances.leak_fail'"));
}

TEST(Config, SyntaxErrorsReportPosition) {
  const auto msg = error_of("{\n  \"potential\": {\"type\": \"null\"},\n  \"n_max\": ,\n}");
  EXPECT_TRUE(contains(msg, "line 3")) << msg;
  EXPECT_TRUE(contains(msg, "column")) << msg;
}

TEST(Config, EchoRoundTrip) {
  const std::vector<std::string> texts{
      R"({"id": "a", "potential": {"type": "cos_shifted", "k_over_hbar": 1.5, "alpha": 0.7853981633974483}, "n_max": 64, "seed": 7})",
      R"({"id": "b", "potential": {"type": "cos_ratio", "k_over_hbar": 1, "r": 1.5707963267948966}, "method": "bessel",
          "asymptotics": {"enabled": true, "steps": 500}, "output": {"dir": "x", "n_show": 4}})",
      R"({"id": "c", "potential": {"type": "fourier", "c0": 0.1, "cos": [1e-3], "sin": []}, "hbar": 0.5,
          "dephasing": {"mode": "kicked", "epsilon0": "inf", "period": 3, "offset": 1}})",
      R"({"id": "d", "potential": {"type": "null"}, "dephasing": {"mode": "continuous", "gamma0": 0.125},
          "tolerances": {"leak_fail": 1e-3, "cross_tol": 1e-5}})"};
  for (const auto& t : texts) {
    const auto c = parse_config(t);
    const auto again = parse_config(config_to_json(c).dump());
    EXPECT_EQ(c, again) << t;
  }
}

TEST(Config, LoadFromFile) {
  const auto path = std::filesystem::path(KICKWELL_SOURCE_DIR) / "configs" / "constant_rate.json";
  const auto c = load_config(path);
  EXPECT_EQ(c.id, "constant_rate");
  EXPECT_EQ(c.n_max, 256);
  EXPECT_THROW(load_config("/nonexistent/kickwell.json"), ConfigError);
  const auto bad = std::filesystem::path(KICKWELL_SOURCE_DIR) / "tests" / "data" / "bad_config.json";
  try {
    load_config(bad);
    FAIL() << "expected ConfigError";
  } catch (const ConfigError& e) {
    EXPECT_TRUE(contains(e.what(), "bad_config.json"));
    EXPECT_TRUE(contains(e.what(), "field 'potential.r'"));
  }
}
