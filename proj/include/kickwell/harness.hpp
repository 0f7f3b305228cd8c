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

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "json.hpp"

#include "kickwell/basis.hpp"
#include "kickwell/config.hpp"
#include "kickwell/csv.hpp"
#include "kickwell/dephase.hpp"
#include "kickwell/entangle.hpp"
#include "kickwell/error.hpp"
#include "kickwell/evolve.hpp"
#include "kickwell/kick_operator.hpp"
#include "kickwell/potential.hpp"

namespace kickwell {

struct RunRecord {
  std::string id;
  nlohmann::json config_echo;
  std::string version = kVersion;
  double wall_seconds = 0.0;

  double unitarity_defect = 0.0;
  double max_column_leakage = 0.0;
  double max_step_loss = 0.0;
  double final_total_prob = 1.0;
  double closed_form_rate = 0.0;
  double energy_cross_discrepancy = 0.0;
  bool cross_check_passed = true;
  std::vector<ResonanceFlag> resonance_flags;

  Trajectory trajectory;
  EntanglementSeries entanglement;
  std::optional<AsymptoticReport> asymptotics;
  std::vector<DephasingRecord> dephasing;
  std::vector<std::string> files;
};

inline KickOperator build_kick_operator(const ExperimentConfig& c, const BoxBasis& basis) {
  if (c.method == KickMethod::BesselSeries) return kick_operator_bessel(basis, std::get<CosRatio>(c.potential));
  return kick_operator_quadrature(basis, c.potential);
}

namespace harness_detail {

inline std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  return out;
}

inline nlohmann::json asymptotics_json(const AsymptoticReport& a) {
  return {{"closed_form_rate", a.closed_form_rate},
          {"numeric_rate", a.numeric_rate},
          {"geometric_correction", a.geometric_correction},
          {"converged", a.converged},
          {"used_partial_sums", a.used_partial_sums},
          {"partial_sum_terms", a.partial_sum_terms},
          {"partial_sums_converged", a.partial_sums_converged},
          {"final_total_prob", a.final_total_prob}};
}

}  // namespace harness_detail

inline void write_asymptotics_csv(std::ostream& out, const AsymptoticReport& a) {
  csv::Writer w(out, {"closed_form_rate", "numeric_rate", "geometric_correction", "converged", "used_partial_sums"});
  w.row({csv::format(a.closed_form_rate), csv::format(a.numeric_rate), csv::format(a.geometric_correction),
         a.converged ? "1" : "0", a.used_partial_sums ? "1" : "0"});
}

/// Structured run record (JSON). Tables live in the CSV files it lists.
inline nlohmann::json record_to_json(const RunRecord& r) {
  nlohmann::json j;
  j["id"] = r.id;
  j["version"] = r.version;
  j["config"] = r.config_echo;
  j["wall_seconds"] = r.wall_seconds;
  j["leakage"] = {{"unitarity_defect", r.unitarity_defect},
                  {"max_column_leakage", r.max_column_leakage},
                  {"max_step_loss", r.max_step_loss},
                  {"final_total_prob", r.final_total_prob}};
  j["energy_cross_check"] = {{"max_relative_discrepancy", r.energy_cross_discrepancy}, {"passed", r.cross_check_passed}};
  j["closed_form_rate"] = r.closed_form_rate;
  nlohmann::json flags = nlohmann::json::array();
  for (const auto& f : r.resonance_flags) flags.push_back({{"j", f.j}, {"l", f.l}, {"gap", f.gap}});
  j["resonance_flags"] = flags;
  const auto& t = r.trajectory;
  if (t.steps > 0) {
    j["final"] = {{"N", t.steps},
                  {"E_N", t.energies.back()},
                  {"D_N", t.diffusion_rate.back()},
                  {"S_V", r.entanglement.s_v.empty() ? 0.0 : r.entanglement.s_v.back()}};
  }
  if (r.asymptotics) j["asymptotics"] = harness_detail::asymptotics_json(*r.asymptotics);
  j["files"] = r.files;
  return j;
}

/// basis → operator → Z → trajectory → entanglement (→ asymptotics, dephasing),
/// writing CSV tables and a record when config.output.dir is set.
inline RunRecord run(const ExperimentConfig& config) {
  validate(config);
  const auto started = std::chrono::steady_clock::now();

  RunRecord rec;
  rec.id = config.id;
  rec.config_echo = config_to_json(config);

  const BoxBasis basis(config.n_max, config.hbar);
  const KickOperator u = build_kick_operator(config, basis);
  const TransitionMatrix z = transition_matrix(u);
  const auto spectrum = spectrum_for_basis(config.potential, config.n_max, config.hbar);
  rec.unitarity_defect = u.unitarity_defect;
  rec.max_column_leakage = z.max_leakage();
  rec.resonance_flags = u.resonance_flags;
  rec.closed_form_rate = spectrum.mean_rate();

  TrajectoryOptions topts{config.tolerances.leak_fail, config.tolerances.cross_tol};
  rec.trajectory = run_trajectory(z, basis, basis.basis_state(config.initial_level), config.n_steps, spectrum, topts);
  rec.entanglement = entanglement_series(rec.trajectory);
  rec.max_step_loss = rec.trajectory.max_step_loss;
  rec.final_total_prob = rec.trajectory.total_prob.back();
  rec.energy_cross_discrepancy = rec.trajectory.max_cross_discrepancy;
  rec.cross_check_passed = rec.trajectory.cross_check_passed;

  if (config.asymptotics.enabled) {
    AsymptoticOptions aopts;
    aopts.n_steps = config.asymptotics.steps;
    aopts.leak_fail = config.tolerances.leak_fail;
    rec.asymptotics = asymptotic_rate(z, spectrum, basis, aopts);
  }
  if (config.dephasing) {
    rec.dephasing = run_dephasing(DensityMatrix::pure_level(basis.dim(), config.initial_level), u, *config.dephasing,
                                  basis, config.n_steps);
  }

  if (!config.output.dir.empty()) {
    namespace fs = std::filesystem;
    const fs::path dir(config.output.dir);
    fs::create_directories(dir);
    auto emit = [&](const std::string& suffix, auto&& writer) {
      const fs::path p = dir / (config.id + suffix);
      auto out = harness_detail::open_output(p);
      writer(out);
      rec.files.push_back(p.filename().string());
    };
    emit("_trajectory.csv", [&](std::ostream& o) { write_trajectory_csv(o, rec.trajectory, config.output.n_show); });
    emit("_entanglement.csv", [&](std::ostream& o) { write_entanglement_csv(o, rec.entanglement); });
    if (rec.asymptotics) emit("_asymptotics.csv", [&](std::ostream& o) { write_asymptotics_csv(o, *rec.asymptotics); });
    if (config.dephasing) {
      emit("_dephasing.csv", [&](std::ostream& o) { write_dephasing_csv(o, rec.dephasing, config.output.n_show); });
    }
    rec.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    rec.files.push_back(config.id + "_record.json");
    auto out = harness_detail::open_output(dir / (config.id + "_record.json"));
    out << record_to_json(rec).dump(2) << '\n';
  } else {
    rec.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  }
  return rec;
}

struct SweepEntry {
  std::string id;
  std::optional<RunRecord> record;
  std::string error;  // set when the run threw

  bool ok() const { return record.has_value(); }
};

/// Runs every config on up to `workers` threads. A failing config is recorded
/// in its own entry and never disturbs the others. Order follows `configs`.
inline std::vector<SweepEntry> sweep(const std::vector<ExperimentConfig>& configs, int workers = 1) {
  if (configs.empty()) throw DomainError("sweep: no configs");
  std::vector<SweepEntry> entries(configs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < configs.size(); i = next++) {
      entries[i].id = configs[i].id;
      try {
        entries[i].record = run(configs[i]);
      } catch (const std::exception& e) {
        entries[i].error = e.what();
      }
    }
  };
  const int n = std::clamp(workers, 1, static_cast<int>(configs.size()));
  {
    std::vector<std::jthread> pool;
    for (int w = 1; w < n; ++w) pool.emplace_back(worker);
    worker();
  }
  return entries;
}

/// Summary: id, status, closed_form_rate, numeric_rate, final_S_V, max_step_loss, error.
inline void write_sweep_summary_csv(std::ostream& out, const std::vector<SweepEntry>& entries) {
  csv::Writer w(out, {"id", "status", "closed_form_rate", "numeric_rate", "final_S_V", "max_step_loss", "error"});
  for (const auto& e : entries) {
    if (e.ok()) {
      const auto& r = *e.record;
      w.row({e.id, "ok", csv::format(r.closed_form_rate),
             r.asymptotics ? csv::format(r.asymptotics->numeric_rate) : std::string{},
             csv::format(r.entanglement.s_v.back()), csv::format(r.max_step_loss), ""});
    } else {
      std::string msg = e.error;
      std::replace(msg.begin(), msg.end(), ',', ';');
      std::replace(msg.begin(), msg.end(), '\n', ' ');
      w.row({e.id, "error", "", "", "", "", msg});
    }
  }
}

/// Sweep description: either {"configs": [...]} or {"base": {...}, "grid":
/// {"key": "potential.r", "values": [...]}} where "values" may be replaced by
/// "start"/"stop"/"step".
inline std::vector<ExperimentConfig> sweep_configs_from_json(const nlohmann::json& j) {
  using config_detail::fail;
  if (!j.is_object()) throw ConfigError("sweep: top level must be an object");
  std::vector<nlohmann::json> raw;
  if (j.contains("configs")) {
    const auto& list = j.at("configs");
    if (!list.is_array() || list.empty()) fail("configs", "expected a non-empty array");
    for (const auto& c : list) raw.push_back(c);
  } else if (j.contains("base") && j.contains("grid")) {
    const auto& base = j.at("base");
    const auto& grid = j.at("grid");
    if (!grid.is_object() || !grid.contains("key") || !grid.at("key").is_string()) fail("grid.key", "missing");
    std::vector<double> values;
    if (grid.contains("values")) {
      values = config_detail::number_list(grid, "values", "grid");
    } else {
      const double start = config_detail::finite_number(grid, "start", "grid");
      const double stop = config_detail::finite_number(grid, "stop", "grid");
      const double stride = config_detail::finite_number(grid, "step", "grid");
      if (!(stride > 0.0)) fail("grid.step", "must be positive");
      const int count = static_cast<int>(std::floor((stop - start) / stride + 1e-9)) + 1;
      for (int i = 0; i < count; ++i) values.push_back(start + i * stride);
    }
    if (values.empty()) fail("grid.values", "empty grid");
    std::string pointer = "/" + grid.at("key").get<std::string>();
    std::replace(pointer.begin(), pointer.end(), '.', '/');
    const std::string base_id = base.contains("id") && base.at("id").is_string() ? base.at("id").get<std::string>() : "sweep";
    for (std::size_t i = 0; i < values.size(); ++i) {
      nlohmann::json c = base;
      c[nlohmann::json::json_pointer(pointer)] = values[i];
      c["id"] = base_id + "_" + std::to_string(i);
      raw.push_back(std::move(c));
    }
  } else {
    throw ConfigError("sweep: expected \"configs\" or \"base\" + \"grid\"");
  }
  std::vector<ExperimentConfig> out;
  for (std::size_t i = 0; i < raw.size(); ++i) {
    try {
      out.push_back(config_from_json(raw[i]));
    } catch (const ConfigError& e) {
      throw ConfigError("sweep config " + std::to_string(i) + ": " + e.what());
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Figure data

struct FigureOverrides {
  std::optional<int> n_max;
  std::optional<int> steps;
  std::optional<int> n_show;
  std::optional<double> hbar;
  std::optional<double> alpha;
  std::optional<std::vector<double>> k_values;
  std::optional<std::vector<double>> r_values;
};

struct FigureTable {
  std::string name;  // file stem
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;

  std::vector<double> column(std::size_t c) const {
    std::vector<double> out;
    for (const auto& r : rows) out.push_back(r.at(c));
    return out;
  }
};

namespace harness_detail {

inline Trajectory figure_trajectory(const KickPotential& pot, int n_max, int steps, double hbar) {
  const BoxBasis basis(n_max, hbar);
  const auto z = transition_matrix(kick_operator_quadrature(basis, pot));
  const auto spec = spectrum_for_basis(pot, n_max, hbar);
  TrajectoryOptions opts;
  return run_trajectory(z, basis, basis.basis_state(1), steps, spec, opts);
}

inline std::string label(double v) { return csv::format(v); }

}  // namespace harness_detail

/// Data behind the five standard figures (ground-state start):
///   1: P_n after each kick, V = k cos(x + 1), one table per k (default 4, 10)
///   2: P_1(N), V = k cos(x + 1), k = 0.5, 1, 2
///   3: P_1(N), V = cos(2 R x), R = π/4, π/2, π
///   4: S_V(N), same potentials as 3
///   5: E_r(N), same potentials as 3
inline std::vector<FigureTable> figure_data(int figure_id, const FigureOverrides& o = {}) {
  using harness_detail::figure_trajectory;
  using harness_detail::label;
  const double hbar = o.hbar.value_or(1.0);
  std::vector<FigureTable> tables;
  constexpr double pi = std::numbers::pi;

  switch (figure_id) {
    case 1: {
      const int n_max = o.n_max.value_or(512);
      const int steps = o.steps.value_or(10);
      const int n_show = std::min(o.n_show.value_or(64), n_max);
      for (double k : o.k_values.value_or(std::vector<double>{4.0, 10.0})) {
        const auto t = figure_trajectory(CosShifted{k, o.alpha.value_or(1.0)}, n_max, steps, hbar);
        FigureTable tab{"fig1_k" + label(k), {"N"}, {}};
        for (int n = 1; n <= n_show; ++n) tab.header.push_back("P_" + std::to_string(n));
        for (int s = 0; s <= steps; ++s) {
          std::vector<double> row{static_cast<double>(s)};
          for (int n = 0; n < n_show; ++n) row.push_back(t.populations[static_cast<std::size_t>(s)](n));
          tab.rows.push_back(std::move(row));
        }
        tables.push_back(std::move(tab));
      }
      break;
    }
    case 2:
    case 3:
    case 4:
    case 5: {
      const int n_max = o.n_max.value_or(256);
      const int steps = o.steps.value_or(50);
      std::vector<KickPotential> pots;
      std::vector<std::string> labels;
      if (figure_id == 2) {
        for (double k : o.k_values.value_or(std::vector<double>{0.5, 1.0, 2.0})) {
          pots.push_back(CosShifted{k, o.alpha.value_or(1.0)});
          labels.push_back("k" + label(k));
        }
      } else {
        const double k = o.k_values && !o.k_values->empty() ? o.k_values->front() : 1.0;
        for (double r : o.r_values.value_or(std::vector<double>{pi / 4, pi / 2, pi})) {
          pots.push_back(CosRatio{k, r});
          labels.push_back("r" + label(r));
        }
      }
      const char* quantity = figure_id == 4 ? "S_V_" : (figure_id == 5 ? "E_r_" : "P1_");
      FigureTable tab{"fig" + std::to_string(figure_id), {"N"}, {}};
      for (const auto& l : labels) tab.header.push_back(quantity + l);
      std::vector<std::vector<double>> cols;
      for (const auto& pot : pots) {
        const auto t = figure_trajectory(pot, n_max, steps, hbar);
        std::vector<double> col;
        if (figure_id == 2 || figure_id == 3) {
          for (const auto& p : t.populations) col.push_back(p(0));
        } else {
          const auto ent = entanglement_series(t);
          col = figure_id == 4 ? ent.s_v : ent.e_r;
        }
        cols.push_back(std::move(col));
      }
      const int first = figure_id == 5 ? 1 : 0;
      for (int s = first; s <= steps; ++s) {
        std::vector<double> row{static_cast<double>(s)};
        for (const auto& c : cols) row.push_back(c[static_cast<std::size_t>(s - first)]);
        tab.rows.push_back(std::move(row));
      }
      tables.push_back(std::move(tab));
      break;
    }
    default:
      throw DomainError("unknown figure id " + std::to_string(figure_id) + " (expected 1..5)");
  }
  return tables;
}

inline void write_figure_table_csv(std::ostream& out, const FigureTable& t) {
  csv::Writer w(out, t.header);
  for (const auto& r : t.rows) {
    std::vector<std::string> fields;
    fields.reserve(r.size());
    fields.push_back(csv::format(static_cast<int>(r.front())));
    for (std::size_t i = 1; i < r.size(); ++i) fields.push_back(csv::format(r[i]));
    w.row(fields);
  }
}

inline std::vector<std::filesystem::path> emit_figure(int figure_id, const FigureOverrides& o,
                                                      const std::filesystem::path& out_dir) {
  const auto tables = figure_data(figure_id, o);
  std::filesystem::create_directories(out_dir);
  std::vector<std::filesystem::path> paths;
  for (const auto& t : tables) {
    const auto p = out_dir / (t.name + ".csv");
    auto out = harness_detail::open_output(p);
    write_figure_table_csv(out, t);
    paths.push_back(p);
  }
  return paths;
}

}  // namespace kickwell
