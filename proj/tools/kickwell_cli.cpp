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

// kickwell command-line driver.
//
//   kickwell kick-matrix --config c.json --out DIR
//   kickwell evolve      --config c.json --out DIR [--n-max N] [--steps N]
//   kickwell asymptote   --config c.json --out DIR [--steps N]
//   kickwell dephase     --config c.json --out DIR
//   kickwell figure      --id 1..5 --out DIR [--n-max N] [--steps N]
//   kickwell sweep       --config sweep.json --out DIR [--workers K]

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"

#include "kickwell/kickwell.hpp"

namespace fs = std::filesystem;
using namespace kickwell;

namespace {

struct CommonFlags {
  std::string config;
  std::string out = "out";
  std::optional<int> n_max;
  std::optional<int> steps;
  std::optional<std::int64_t> seed;
};

void add_common(CLI::App* app, CommonFlags& f, bool needs_config) {
  auto* opt = app->add_option("--config", f.config, "Experiment config (JSON)");
  if (needs_config) opt->required()->check(CLI::ExistingFile);
  app->add_option("--out", f.out, "Output directory")->capture_default_str();
  app->add_option("--n-max", f.n_max, "Override the basis truncation")->check(CLI::Range(2, 1 << 16));
  app->add_option("--steps", f.steps, "Override the number of kicks")->check(CLI::PositiveNumber);
  app->add_option("--seed", f.seed, "Reserved; the core paths use no randomness");
}

ExperimentConfig load_with_overrides(const CommonFlags& f) {
  auto c = load_config(f.config);
  if (f.n_max) c.n_max = *f.n_max;
  if (f.steps) c.n_steps = *f.steps;
  if (f.seed) c.seed = *f.seed;
  c.output.dir = f.out;
  validate(c);
  return c;
}

void print_summary(const RunRecord& r) {
  std::cout << "id=" << r.id << " N=" << r.trajectory.steps << " E_N=" << csv::format(r.trajectory.energies.back())
            << " D_N=" << csv::format(r.trajectory.diffusion_rate.back())
            << " S_V=" << csv::format(r.entanglement.s_v.back())
            << " total_prob=" << csv::format(r.final_total_prob) << '\n';
  if (!r.cross_check_passed) {
    std::cout << "note: direct and recursed energies differ by " << csv::format(r.energy_cross_discrepancy)
              << " (relative); raise n_max for tighter agreement\n";
  }
  for (const auto& f : r.resonance_flags) {
    std::cout << "warning: near-resonant series term j=" << f.j << " l=" << f.l << " gap=" << csv::format(f.gap) << '\n';
  }
}

int cmd_kick_matrix(const CommonFlags& f) {
  const auto c = load_with_overrides(f);
  const BoxBasis basis(c.n_max, c.hbar);
  const auto u = build_kick_operator(c, basis);
  const auto z = transition_matrix(u);
  fs::create_directories(f.out);
  {
    std::ofstream out(fs::path(f.out) / "kick_matrix.csv", std::ios::binary);
    write_kick_operator_csv(out, u);
  }
  {
    std::ofstream out(fs::path(f.out) / "transition_matrix.csv", std::ios::binary);
    write_transition_csv(out, z, u);
  }
  std::cout << "dim=" << u.dim() << " method=" << to_string(u.method)
            << " unitarity_defect=" << csv::format(u.unitarity_defect)
            << " max_column_leakage=" << csv::format(z.max_leakage()) << '\n';
  return 0;
}

int cmd_evolve(const CommonFlags& f) {
  const auto r = run(load_with_overrides(f));
  print_summary(r);
  return 0;
}

int cmd_asymptote(const CommonFlags& f) {
  auto c = load_config(f.config);
  if (f.n_max) c.n_max = *f.n_max;
  c.asymptotics.enabled = true;
  if (f.steps) c.asymptotics.steps = *f.steps;
  c.output.dir = f.out;
  const auto r = run(c);
  const auto& a = *r.asymptotics;
  std::cout << "closed_form_rate=" << csv::format(a.closed_form_rate) << " numeric_rate=" << csv::format(a.numeric_rate)
            << " geometric_correction=" << csv::format(a.geometric_correction)
            << " converged=" << (a.converged ? "yes" : "no") << '\n';
  return 0;
}

int cmd_dephase(const CommonFlags& f) {
  const auto c = load_with_overrides(f);
  if (!c.dephasing) throw ConfigError(f.config + ": field 'dephasing': required by the dephase subcommand");
  const auto r = run(c);
  const auto& last = r.dephasing.back();
  std::cout << "cycles=" << last.cycle << " trace=" << csv::format(last.trace) << " purity=" << csv::format(last.purity)
            << " max_offdiag=" << csv::format(last.max_offdiagonal) << '\n';
  return 0;
}

int cmd_figure(int id, const CommonFlags& f) {
  FigureOverrides o;
  o.n_max = f.n_max;
  o.steps = f.steps;
  for (const auto& p : emit_figure(id, o, f.out)) std::cout << p.string() << '\n';
  return 0;
}

int cmd_sweep(const CommonFlags& f, int workers) {
  auto configs = sweep_configs_from_json(load_json_file(f.config));
  for (auto& c : configs) {
    if (f.n_max) c.n_max = *f.n_max;
    if (f.steps) c.n_steps = *f.steps;
    c.output.dir = (fs::path(f.out) / c.id).string();
  }
  const auto entries = sweep(configs, workers);
  fs::create_directories(f.out);
  std::ofstream out(fs::path(f.out) / "sweep_summary.csv", std::ios::binary);
  write_sweep_summary_csv(out, entries);
  int failed = 0;
  for (const auto& e : entries) {
    if (!e.ok()) {
      ++failed;
      std::cerr << e.id << ": " << e.error << '\n';
    }
  }
  std::cout << entries.size() - failed << "/" << entries.size() << " runs succeeded\n";
  return failed == 0 ? 0 : 3;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Measured kicked particle in an infinite square well"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kVersion));

  CommonFlags kick, evolve, asym, deph, fig, swp;
  int figure_id = 0;
  int workers = 1;

  add_common(app.add_subcommand("kick-matrix", "Dump the kick operator and transition matrix"), kick, true);
  add_common(app.add_subcommand("evolve", "Population, energy and entanglement trajectory"), evolve, true);
  add_common(app.add_subcommand("asymptote", "Closed-form vs fitted asymptotic diffusion rate"), asym, true);
  add_common(app.add_subcommand("dephase", "Density-matrix evolution with dephasing"), deph, true);
  auto* figure = app.add_subcommand("figure", "Emit the data behind one figure");
  add_common(figure, fig, false);
  figure->add_option("--id", figure_id, "Figure number")->required()->check(CLI::Range(1, 5));
  auto* sweep_cmd = app.add_subcommand("sweep", "Run a list or grid of configs");
  add_common(sweep_cmd, swp, true);
  sweep_cmd->add_option("--workers", workers, "Concurrent runs")->check(CLI::PositiveNumber);

  CLI11_PARSE(app, argc, argv);

  try {
    if (app.got_subcommand("kick-matrix")) return cmd_kick_matrix(kick);
    if (app.got_subcommand("evolve")) return cmd_evolve(evolve);
    if (app.got_subcommand("asymptote")) return cmd_asymptote(asym);
    if (app.got_subcommand("dephase")) return cmd_dephase(deph);
    if (app.got_subcommand("figure")) return cmd_figure(figure_id, fig);
    if (app.got_subcommand("sweep")) return cmd_sweep(swp, workers);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
