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

// Acceptance runner: one PASS/FAIL line per criterion. Exit status is the
// number of failed criteria (0 when all pass).
//
//   vcdn_acceptance [criterion ...]   run only the listed criteria (1-8)

#include "support/oracles.hpp"
#include "vcdn/harness.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <memory>
#include <random>
#include <set>
#include <sstream>
#include <string>

namespace {

using namespace vcdn;
using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) { return std::chrono::duration<double>(Clock::now() - start).count(); }

struct Verdict {
  bool pass = false;
  std::string detail;
};

std::string fixed(double v, int digits = 2) {
  std::ostringstream os;
  os.setf(std::ios::fixed);
  os.precision(digits);
  os << v;
  return os.str();
}

// 1. All-pairs min cuts of the Gomory-Hu tree against subset enumeration.
Verdict gomory_hu_correctness() {
  const auto start = Clock::now();
  std::mt19937_64 rng(20260101);
  std::size_t pairs = 0, mismatches = 0;
  for (int g = 0; g < 200; ++g) {
    const int n = 2 + static_cast<int>(rng() % 11);
    const auto ug = oracle::random_connected_graph(rng, n, 1, 20);
    const GomoryHuTree t = gomory_hu(oracle::to_flow_graph(ug));
    if (t.edges().size() != static_cast<std::size_t>(n - 1)) ++mismatches;
    for (int a = 0; a < n; ++a)
      for (int b = a + 1; b < n; ++b) {
        ++pairs;
        if (tree_min_cut(t, NodeId{a}, NodeId{b}) != oracle::brute_min_cut(ug, a, b)) ++mismatches;
      }
  }
  const double secs = seconds_since(start);
  return {mismatches == 0 && secs < 60,
          "200 graphs, " + std::to_string(pairs) + " pairs, " + std::to_string(mismatches) + " mismatches, " + fixed(secs) +
              " s (limit 60 s)"};
}

// 2. Tree of the 100-node, 200-edge random graph has 99 edges.
Verdict tree_size() {
  bool ok = true;
  std::string sizes;
  for (std::uint64_t seed = 1; seed <= 5; ++seed)
    for (int repeat = 0; repeat < 2; ++repeat) {
      const std::size_t e = gomory_hu(undirected_flow_graph(gen_erdos_renyi(100, 200, seed))).edges().size();
      ok = ok && e == 99;
      if (repeat == 0) sizes += (sizes.empty() ? "" : ",") + std::to_string(e);
    }
  return {ok, "edge counts for seeds 1-5 (each built twice): " + sizes};
}

struct TinyRun {
  Scenario scenario;
  std::optional<std::int64_t> oracle_cost;
  ExactResult exact;
};

std::vector<TinyRun>& tiny_runs(double* seconds = nullptr) {
  static std::vector<TinyRun> runs;
  static double elapsed = 0;
  if (runs.empty()) {
    const auto start = Clock::now();
    for (std::uint64_t seed = 1; seed <= 100; ++seed) {
      Scenario s = oracle::random_tiny_scenario(seed);
      auto expected = oracle::brute_force_min_cost(s);
      ExactResult r = solve_exact(s);
      runs.push_back({std::move(s), expected, std::move(r)});
    }
    elapsed = seconds_since(start);
  }
  if (seconds) *seconds = elapsed;
  return runs;
}

// 3. Exact solver against exhaustive enumeration.
Verdict exact_optimality() {
  double secs = 0;
  const auto& runs = tiny_runs(&secs);
  int feasible = 0, mismatches = 0;
  for (const auto& r : runs) {
    if (r.oracle_cost) ++feasible;
    const bool match = r.oracle_cost ? r.exact.status == ExactStatus::Optimal && r.exact.solution->objective.milli() == *r.oracle_cost
                                     : r.exact.status == ExactStatus::Infeasible;
    if (!match) ++mismatches;
  }
  return {mismatches == 0 && secs < 600,
          "100 instances (" + std::to_string(feasible) + " feasible), " + std::to_string(mismatches) + " mismatches, " +
              fixed(secs) + " s including oracle (limit 600 s)"};
}

// 4. Heuristic never beats the optimum; median gap on the small family.
Verdict gap_property() {
  int compared = 0, negative = 0;
  for (const auto& r : tiny_runs()) {
    const HpacResult h = hpac_solve(r.scenario);
    if (h.status != HpacStatus::Solved) continue;
    const auto routed = reroute_on_graph(r.scenario, h.solution);
    if (!routed || !check_feasibility(r.scenario, *routed).feasible()) continue;
    if (r.exact.status != ExactStatus::Optimal) {
      ++negative;  // a feasible heuristic answer contradicts an infeasibility claim
      continue;
    }
    ++compared;
    if (routed->objective < r.exact.solution->objective) ++negative;
  }

  std::vector<Rational> gaps;
  std::map<std::string, int> other;
  for (std::uint64_t seed = 1; seed <= 8; ++seed) {
    RunConfig config;
    config.generator.seed = seed;
    config.sweep = parse_sweep("3..11");
    config.timing = false;
    for (const auto& row : run(config).rows) {
      if (row.solver != "gap") continue;
      if (row.status == "ok") gaps.push_back(*row.migration_cost);
      else ++other[row.status];
    }
  }
  std::sort(gaps.begin(), gaps.end());
  Rational median = -1;
  if (!gaps.empty())
    median = gaps.size() % 2 ? gaps[gaps.size() / 2] : (gaps[gaps.size() / 2 - 1] + gaps[gaps.size() / 2]) / 2;
  const bool sign_ok = negative == 0;
  const bool median_ok = !gaps.empty() && median <= 10;

  std::ostringstream os;
  os << "sign: " << compared << " comparable tiny instances, " << negative << " below optimum; "
     << "median gap " << (gaps.empty() ? std::string("NA") : format_rational(median, 2)) << "% over " << gaps.size()
     << " defined points (limit 10%); distribution:";
  std::map<std::string, int> histogram;
  for (const auto& g : gaps) ++histogram[format_rational(g, 2)];
  std::vector<std::pair<Rational, std::string>> ordered;
  for (const auto& [k, n] : histogram) ordered.push_back({*parse_decimal(k), k + "%x" + std::to_string(n)});
  std::sort(ordered.begin(), ordered.end());
  for (const auto& [v, text] : ordered) os << ' ' << text;
  for (const auto& [status, n] : other) os << "; " << status << " x" << n;
  return {sign_ok && median_ok, os.str()};
}

// 5. Heuristic scale and exact-solver blow-up on the 100-node random graph.
Verdict scalability() {
  RunConfig config;
  config.generator.kind = GeneratorKind::ErdosRenyi;
  config.sweep = parse_sweep("20..100");
  const Scenario base = base_scenario(config);
  double worst = 0;
  std::size_t worst_k = 0;
  std::map<std::string, int> statuses;
  for (std::size_t k = 20; k <= 100; ++k) {
    const Scenario s = base.with_vcdn_prefix(k);
    const auto start = Clock::now();
    const HpacResult h = hpac_solve(s);
    const double secs = seconds_since(start);
    ++statuses[h.status == HpacStatus::Solved ? "solved" : "infeasible"];
    if (secs > worst) {
      worst = secs;
      worst_k = k;
    }
  }
  bool exact_ok = true;
  std::string exact_detail;
  for (std::size_t k : {20, 50, 100}) {
    ExactLimits limits;
    limits.time_budget = std::chrono::seconds(60);
    const auto start = Clock::now();
    const ExactResult r = solve_exact(base.with_vcdn_prefix(k), limits);
    exact_ok = exact_ok && r.status == ExactStatus::BudgetExceeded;
    exact_detail += " |F|=" + std::to_string(k) + ":" + status_name(r.status) + "(" + fixed(seconds_since(start), 1) + "s)";
  }
  std::ostringstream os;
  os << "heuristic |F|=20..100: slowest " << fixed(worst, 3) << " s at |F|=" << worst_k << " (limit 60 s), solved x"
     << statuses["solved"] << ", infeasible x" << statuses["infeasible"] << "; exact, 60 s budget:" << exact_detail;
  return {worst <= 60 && exact_ok, os.str()};
}

// 6. Metric properties on random feasible solutions.
Verdict metric_properties() {
  std::mt19937_64 rng(6);
  int checked = 0, failures = 0, attempts = 0;
  while (checked < 500 && attempts < 200000) {
    ++attempts;
    const Scenario s = oracle::random_tiny_scenario(1000000 + static_cast<std::uint64_t>(attempts));
    auto sol = oracle::random_feasible_solution(s, rng);
    if (!sol || !check_feasibility(s, *sol).feasible()) continue;
    ++checked;
    const CostReport r = evaluate(s, *sol);
    int migrations = 0;
    for (const auto& p : sol->x) migrations += p.server != s.vcdn(p.vcdn).origin ? 1 : 0;
    const bool ok = r.migration_time_parallel <= r.migration_time_sequential &&
                    (r.migration_time_parallel == r.migration_time_sequential) == (migrations <= 1) &&
                    r.vcache_cost >= 0 && r.vcache_cost <= 1 && r.vstream_cost >= 0 && r.vstream_cost <= 1 &&
                    r.replica_number == migrations;
    if (!ok) ++failures;
  }
  return {checked == 500 && failures == 0,
          std::to_string(checked) + " solutions, " + std::to_string(failures) + " violations"};
}

std::set<ConstraintFamily> flagged(const FeasibilityReport& r) {
  std::set<ConstraintFamily> out;
  for (auto f : kAllFamilies)
    if (!r.passed(f)) out.insert(f);
  return out;
}

// 7. Audit of single-bit perturbations against independent recomputation.
Verdict audit_soundness() {
  int solutions = 0, perturbations = 0, mismatches = 0, caught = 0;
  std::string first_mismatch;
  auto compare = [&](const Scenario& s, const PlacementSolution& p, const std::string& what) {
    ++perturbations;
    const auto got = flagged(check_feasibility(s, p));
    const auto want = oracle::violated_families(s, p);
    if (!got.empty()) ++caught;
    if (got != want) {
      ++mismatches;
      if (first_mismatch.empty()) first_mismatch = what;
    }
  };
  for (std::uint64_t seed = 1; solutions < 50 && seed < 10000; ++seed) {
    const Scenario s = oracle::random_tiny_scenario(5000 + seed);
    const ExactResult r = solve_exact(s);
    if (r.status != ExactStatus::Optimal || s.demands().empty()) continue;
    ++solutions;
    const PlacementSolution& opt = *r.solution;
    const std::string tag = "instance " + std::to_string(5000 + seed);
    for (const auto& sv : s.servers())
      for (const auto& v : s.vcdns()) {
        PlacementSolution p = opt;
        if (!p.x.erase({sv.node, v.id})) p.x.insert({sv.node, v.id});
        compare(s, p, tag + " x");
      }
    for (const auto& d : s.demands())
      for (const auto& sv : s.servers()) {
        PlacementSolution p = opt;
        const Assignment bit{sv.node, d.client, d.vcdn};
        if (!p.y.erase(bit)) p.y.insert(bit);
        compare(s, p, tag + " y");
      }
    for (const auto& [key, path] : opt.z)
      for (const auto& l : s.links()) {
        PlacementSolution p = opt;
        auto& edges = p.z[key];
        auto it = std::find_if(edges.begin(), edges.end(), [&](const DirectedEdge& e) { return e.from == l.from && e.to == l.to; });
        if (it != edges.end()) edges.erase(it);
        else edges.push_back({l.from, l.to});
        compare(s, p, tag + " z");
      }
  }
  return {solutions == 50 && mismatches == 0,
          std::to_string(solutions) + " optimal solutions, " + std::to_string(perturbations) + " perturbations (" +
              std::to_string(caught) + " infeasible), " + std::to_string(mismatches) + " mismatches" +
              (first_mismatch.empty() ? "" : ", first: " + first_mismatch)};
}

std::optional<std::string> capture(const std::string& command, int* status) {
  std::unique_ptr<FILE, int (*)(FILE*)> pipe(popen(command.c_str(), "r"), pclose);
  if (!pipe) return std::nullopt;
  std::string out;
  std::array<char, 4096> buf{};
  std::size_t n = 0;
  while ((n = fread(buf.data(), 1, buf.size(), pipe.get())) > 0) out.append(buf.data(), n);
  *status = pclose(pipe.release());
  return out;
}

// 8. Two identical CLI sweeps write identical bytes.
Verdict determinism() {
  const std::string base = std::string("\"") + VCDN_CLI_PATH + "\" run --sweep 3..11 --timing off";
  const std::vector<std::string> commands{
      base + " --solver both --scenario \"" + std::string(VCDN_DATA_DIR) + "/small_three_tier.json\"",
      base + " --solver both --seed 4", base + " --solver hpac --generator er --n 40 --m 80 --seed 2"};
  int identical = 0;
  std::size_t bytes = 0;
  for (const auto& c : commands) {
    int s1 = -1, s2 = -1;
    const auto a = capture(c + " 2>/dev/null", &s1), b = capture(c + " 2>/dev/null", &s2);
    if (a && b && *a == *b && s1 == s2 && a->size() > std::string(kCsvHeader).size()) ++identical;
    if (a) bytes += a->size();
  }
  return {identical == static_cast<int>(commands.size()),
          std::to_string(identical) + "/" + std::to_string(commands.size()) + " sweeps byte-identical (" +
              std::to_string(bytes) + " bytes per pass)"};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria{
      {"gomory-hu all-pairs correctness", gomory_hu_correctness},
      {"tree size on 100-node random graph", tree_size},
      {"exact solver optimality", exact_optimality},
      {"heuristic gap sign and median", gap_property},
      {"scalability", scalability},
      {"metric properties", metric_properties},
      {"feasibility audit soundness", audit_soundness},
      {"cli determinism", determinism}};
  std::set<int> only;
  for (int i = 1; i < argc; ++i) only.insert(std::atoi(argv[i]));

  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i) + 1;
    if (!only.empty() && !only.contains(id)) continue;
    Verdict v;
    try {
      v = criteria[i].second();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    failed += v.pass ? 0 : 1;
    std::cout << (v.pass ? "PASS" : "FAIL") << " [" << id << "] " << criteria[i].first << ": " << v.detail << std::endl;
  }
  return failed;
}
