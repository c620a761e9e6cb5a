// Copyright 2026 The vcdn-migrate Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// vcdn: generate scenarios, run the placement solvers over |F| sweeps, and
// summarize the resulting CSV.

#include "vcdn/harness.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

namespace {

using namespace vcdn;

struct ScenarioFlags {
  std::string scenario_file;
  std::string generator = "three-tier";
  std::uint64_t seed = 1;
  std::size_t n = 100, m = 200;
  std::size_t access = 10, aggregate = 6, core = 4;
  std::size_t vcdns = 0;
};

void add_scenario_flags(CLI::App* app, ScenarioFlags& f, bool allow_file) {
  if (allow_file) app->add_option("--scenario", f.scenario_file, "Scenario JSON file")->check(CLI::ExistingFile);
  app->add_option("--generator", f.generator, "Scenario generator")
      ->check(CLI::IsMember({"three-tier", "er"}))
      ->capture_default_str();
  app->add_option("--seed", f.seed, "Generator seed")->capture_default_str();
  app->add_option("--n", f.n, "Erdos-Renyi node count")->capture_default_str();
  app->add_option("--m", f.m, "Erdos-Renyi edge count")->capture_default_str();
  app->add_option("--access", f.access, "Three-tier access (client) nodes")->capture_default_str();
  app->add_option("--aggregate", f.aggregate, "Three-tier aggregation nodes")->capture_default_str();
  app->add_option("--core", f.core, "Three-tier core nodes")->capture_default_str();
  app->add_option("--vcdns", f.vcdns, "Number of generated vCDNs (default: largest sweep value)");
}

GeneratorConfig to_generator(const ScenarioFlags& f) {
  GeneratorConfig g;
  g.kind = f.generator == "er" ? GeneratorKind::ErdosRenyi : GeneratorKind::ThreeTier;
  g.seed = f.seed;
  g.n = f.n;
  g.m = f.m;
  g.access = f.access;
  g.aggregate = f.aggregate;
  g.core = f.core;
  if (f.vcdns > 0) g.vcdns = f.vcdns;
  return g;
}

Scenario load_or_generate(const ScenarioFlags& f) {
  RunConfig config;
  if (!f.scenario_file.empty()) config.scenario_file = f.scenario_file;
  config.generator = to_generator(f);
  return base_scenario(config);
}

int write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return kExitOk;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out || !(out << text)) {
    std::cerr << "error: cannot write " << path << '\n';
    return kExitData;
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"vCDN placement and migration experiments"};
  app.require_subcommand(1);

  ScenarioFlags run_flags;
  std::string solver = "both", sweep, mode = "replicate", timing = "on", out_path, name;
  double budget = 60;
  auto* run_cmd = app.add_subcommand("run", "Run solvers over a |F| sweep and write CSV");
  add_scenario_flags(run_cmd, run_flags, true);
  run_cmd->add_option("--solver", solver, "Solver selection")->check(CLI::IsMember({"opac", "hpac", "both"}))->capture_default_str();
  run_cmd->add_option("--sweep", sweep, "Sweep of |F| values: A..B or a comma separated list");
  run_cmd->add_option("--budget", budget, "Time budget per exact solve, seconds")->capture_default_str();
  run_cmd->add_option("--out", out_path, "CSV output file (default: stdout)");
  run_cmd->add_option("--mode", mode, "Heuristic migration mode")->check(CLI::IsMember({"move", "replicate"}))->capture_default_str();
  run_cmd->add_option("--timing", timing, "Record wall-clock runtime (off writes NA)")
      ->check(CLI::IsMember({"on", "off"}))
      ->capture_default_str();
  run_cmd->add_option("--name", name, "Scenario label in the CSV");

  std::string report_path;
  auto* report_cmd = app.add_subcommand("report", "Summarize a CSV written by run");
  report_cmd->add_option("csv", report_path, "CSV file")->required()->check(CLI::ExistingFile);

  ScenarioFlags gen_flags;
  std::string gen_out;
  auto* gen_cmd = app.add_subcommand("generate", "Write a generated scenario as JSON");
  add_scenario_flags(gen_cmd, gen_flags, false);
  gen_cmd->add_option("--out", gen_out, "Output file (default: stdout)");

  ScenarioFlags tree_flags;
  std::string tree_out;
  auto* tree_cmd = app.add_subcommand("tree", "Print the Gomory-Hu tree of a scenario as an edge list");
  add_scenario_flags(tree_cmd, tree_flags, true);
  tree_cmd->add_option("--out", tree_out, "Output file (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*run_cmd) {
      RunConfig config;
      if (!run_flags.scenario_file.empty()) config.scenario_file = run_flags.scenario_file;
      config.generator = to_generator(run_flags);
      config.solver = solver == "opac" ? SolverSelection::Opac : solver == "hpac" ? SolverSelection::Hpac : SolverSelection::Both;
      if (run_cmd->count("--sweep") > 0) config.sweep = parse_sweep(sweep);
      config.budget_seconds = budget;
      config.mode = mode == "move" ? MigrationMode::Move : MigrationMode::Replicate;
      config.timing = timing == "on";
      config.scenario_name = name;
      const RunOutcome outcome = run(config);
      for (const auto& w : outcome.warnings) std::cerr << "warning: " << w << '\n';
      std::ostringstream csv;
      write_csv(csv, outcome.rows);
      if (int rc = write_output(out_path, csv.str()); rc != kExitOk) return rc;
      return outcome.exit_code;
    }
    if (*report_cmd) {
      std::ifstream in(report_path, std::ios::binary);
      std::cout << render_report(parse_csv(in));
      return kExitOk;
    }
    if (*gen_cmd) return write_output(gen_out, serialize_scenario(load_or_generate(gen_flags)));
    if (*tree_cmd) {
      std::ostringstream os;
      write_edge_list(os, gomory_hu(undirected_flow_graph(load_or_generate(tree_flags))));
      return write_output(tree_out, os.str());
    }
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const CsvError& e) {
    std::cerr << "malformed CSV: " << e.what() << '\n';
    return kExitData;
  } catch (const ScenarioError& e) {
    std::cerr << "invalid scenario: " << e.what() << '\n';
    return kExitData;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInternal;
  }
  return kExitUsage;
}
