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

// Experiment driver behind the command-line tool: sweeps the number of vCDNs,
// runs the solvers, audits what they return and renders CSV and summaries.

#pragma once

#include "vcdn/generators.hpp"
#include "vcdn/hpac.hpp"
#include "vcdn/metrics.hpp"
#include "vcdn/opac.hpp"
#include "vcdn/scenario_io.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <charconv>
#include <chrono>
#include <filesystem>
#include <iomanip>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace vcdn {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInfeasible = 2;
inline constexpr int kExitBudget = 3;
inline constexpr int kExitUsage = 64;
inline constexpr int kExitData = 65;
inline constexpr int kExitInternal = 70;

/// Invalid configuration; maps to exit code 64.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed report input; maps to exit code 65.
class CsvError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class GeneratorKind { ThreeTier, ErdosRenyi };
enum class SolverSelection { Opac, Hpac, Both };

struct GeneratorConfig {
  GeneratorKind kind = GeneratorKind::ThreeTier;
  std::uint64_t seed = 1;
  std::size_t access = 10, aggregate = 6, core = 4;  // three-tier
  std::size_t n = 100, m = 200;                       // Erdos-Renyi
  std::optional<std::size_t> vcdns;                   // default: max of the sweep
};

struct RunConfig {
  std::optional<std::filesystem::path> scenario_file;
  GeneratorConfig generator;
  SolverSelection solver = SolverSelection::Both;
  std::optional<std::vector<std::size_t>> sweep;  // unset: one point with every vCDN
  double budget_seconds = 60;
  MigrationMode mode = MigrationMode::Replicate;
  bool timing = true;
  std::string scenario_name;  // defaults to the file stem or generator tag
};

/// "A..B" (inclusive) or a comma separated list. Throws UsageError when the
/// result is empty or holds a value below 1.
inline std::vector<std::size_t> parse_sweep(std::string_view text) {
  auto number = [&](std::string_view part) {
    std::size_t v = 0;
    while (!part.empty() && part.front() == ' ') part.remove_prefix(1);
    while (!part.empty() && part.back() == ' ') part.remove_suffix(1);
    auto [ptr, ec] = std::from_chars(part.data(), part.data() + part.size(), v);
    if (part.empty() || ec != std::errc() || ptr != part.data() + part.size())
      throw UsageError("sweep: '" + std::string(part) + "' is not a non-negative integer");
    if (v < 1) throw UsageError("sweep: values must be >= 1");
    return v;
  };
  std::vector<std::size_t> out;
  if (auto dots = text.find(".."); dots != std::string_view::npos) {
    const std::size_t lo = number(text.substr(0, dots)), hi = number(text.substr(dots + 2));
    if (hi < lo) throw UsageError("sweep: empty range " + std::string(text));
    for (std::size_t k = lo; k <= hi; ++k) out.push_back(k);
    return out;
  }
  std::size_t start = 0;
  while (start <= text.size() && !text.empty()) {
    const std::size_t comma = std::min(text.find(',', start), text.size());
    out.push_back(number(text.substr(start, comma - start)));
    start = comma + 1;
  }
  if (out.empty()) throw UsageError("sweep: empty list");
  return out;
}

/// Decimal rendering rounded half away from zero.
inline std::string format_rational(const Rational& r, int digits = 6) {
  using boost::multiprecision::cpp_int;
  cpp_int scale = 1;
  for (int i = 0; i < digits; ++i) scale *= 10;
  cpp_int num = boost::multiprecision::numerator(r) * scale;
  const cpp_int den = boost::multiprecision::denominator(r);
  const bool negative = num < 0;
  if (negative) num = -num;
  cpp_int q = num / den;
  if ((num % den) * 2 >= den) ++q;
  const cpp_int whole_part = q / scale, frac_part = q % scale;
  std::string whole = whole_part.str(), frac = frac_part.str();
  if (digits == 0) return (negative && q != 0 ? "-" : "") + whole;
  frac.insert(0, static_cast<std::size_t>(digits) - frac.size(), '0');
  return (negative && q != 0 ? "-" : "") + whole + "." + frac;
}

/// Exact value of a plain decimal literal such as "-12.50".
inline std::optional<Rational> parse_decimal(std::string_view text) {
  using boost::multiprecision::cpp_int;
  if (text.empty()) return std::nullopt;
  bool negative = false;
  if (text.front() == '-') {
    negative = true;
    text.remove_prefix(1);
  }
  cpp_int num = 0, den = 1;
  bool digits = false, point = false;
  for (char c : text) {
    if (c == '.' && !point) {
      point = true;
    } else if (c >= '0' && c <= '9') {
      num = num * 10 + (c - '0');
      if (point) den *= 10;
      digits = true;
    } else {
      return std::nullopt;
    }
  }
  if (!digits) return std::nullopt;
  Rational r(num, den);
  return negative ? Rational(-r) : r;
}

/// One CSV line. Empty optionals print as NA.
struct ResultRow {
  std::string scenario;
  std::string solver;  // opac | hpac | gap
  std::size_t vcdn_count = 0;
  std::optional<Rational> migration_cost;  // gap rows: gap of migration cost in percent
  std::optional<Rational> seq_time;
  std::optional<Rational> par_time;
  std::optional<std::int64_t> replicas;
  std::optional<Rational> vcache;
  std::optional<Rational> vstream;
  std::optional<Rational> runtime_ms;
  std::string status;
};

inline const char* kCsvHeader = "scenario,solver,|F|,migration_cost,seq_time,par_time,replicas,vcache,vstream,runtime_ms,status";

inline void write_csv(std::ostream& os, const std::vector<ResultRow>& rows) {
  auto cell = [](const std::optional<Rational>& v) { return v ? format_rational(*v) : std::string("NA"); };
  os << kCsvHeader << '\n';
  for (const auto& r : rows) {
    os << r.scenario << ',' << r.solver << ',' << r.vcdn_count << ',' << cell(r.migration_cost) << ','
       << cell(r.seq_time) << ',' << cell(r.par_time) << ',' << (r.replicas ? std::to_string(*r.replicas) : "NA") << ','
       << cell(r.vcache) << ',' << cell(r.vstream) << ','
       << (r.runtime_ms ? format_rational(*r.runtime_ms, 3) : std::string("NA")) << ',' << r.status << '\n';
  }
}

struct RunOutcome {
  int exit_code = kExitOk;
  std::vector<ResultRow> rows;
  std::vector<std::string> warnings;
};

namespace harness_detail {

inline void fill_metrics(ResultRow& row, const Scenario& s, const PlacementSolution& sol) {
  const CostReport r = evaluate(s, sol);
  row.migration_cost = r.migration_cost;
  row.seq_time = r.migration_time_sequential;
  row.par_time = r.migration_time_parallel;
  row.replicas = r.replica_number;
  row.vcache = r.vcache_cost;
  row.vstream = r.vstream_cost;
}

inline Rational elapsed_ms(std::chrono::steady_clock::time_point start) {
  const auto ns = std::chrono::duration_cast<std::chrono::nanoseconds>(std::chrono::steady_clock::now() - start).count();
  return Rational(static_cast<long long>(ns), 1000000LL);
}

}  // namespace harness_detail

/// The scenario every sweep point is cut from.
inline Scenario base_scenario(const RunConfig& config) {
  if (config.scenario_file) return load_scenario(*config.scenario_file);
  const GeneratorConfig& g = config.generator;
  WorkloadOptions workload;
  if (g.kind == GeneratorKind::ErdosRenyi) {
    ErdosRenyiOptions options;
    if (g.vcdns) options.workload.vcdn_count = *g.vcdns;
    else if (config.sweep) options.workload.vcdn_count = *std::max_element(config.sweep->begin(), config.sweep->end());
    return gen_erdos_renyi(g.n, g.m, g.seed, kErdosRenyiCapacity, options);
  }
  if (g.vcdns) workload.vcdn_count = *g.vcdns;
  else if (config.sweep) workload.vcdn_count = *std::max_element(config.sweep->begin(), config.sweep->end());
  return gen_three_tier(g.access, g.aggregate, g.core, g.seed, kThreeTierCapacity, workload);
}

inline std::string scenario_label(const RunConfig& config) {
  if (!config.scenario_name.empty()) return config.scenario_name;
  if (config.scenario_file) return config.scenario_file->stem().string();
  const GeneratorConfig& g = config.generator;
  if (g.kind == GeneratorKind::ErdosRenyi)
    return "er-" + std::to_string(g.n) + "-" + std::to_string(g.m) + "-s" + std::to_string(g.seed);
  return "three-tier-" + std::to_string(g.access) + "-" + std::to_string(g.aggregate) + "-" + std::to_string(g.core) + "-s" +
         std::to_string(g.seed);
}

/// Runs the configured solvers at every sweep point. Each point uses the first
/// k vCDNs of the base scenario, so points are nested. Exit code: 3 if any
/// exact solve ran out of budget, else 2 if any solve was infeasible, else 0;
/// 70 if a solver returned a solution that fails its feasibility audit.
inline RunOutcome run(const RunConfig& config) {
  if (!(config.budget_seconds > 0)) throw UsageError("budget must be > 0 seconds");
  if (config.sweep && config.sweep->empty()) throw UsageError("sweep: empty list");
  const Scenario base = base_scenario(config);
  const std::string label = scenario_label(config);
  const std::vector<std::size_t> sweep = config.sweep ? *config.sweep : std::vector<std::size_t>{base.vcdns().size()};
  for (std::size_t k : sweep) {
    if (k < 1) throw UsageError("sweep: values must be >= 1");
    if (k > base.vcdns().size())
      throw UsageError("sweep: |F| = " + std::to_string(k) + " exceeds the scenario's " + std::to_string(base.vcdns().size()) +
                       " vCDNs");
  }

  RunOutcome out;
  bool budget_hit = false, infeasible = false, audit_failed = false;
  const bool want_opac = config.solver != SolverSelection::Hpac;
  const bool want_hpac = config.solver != SolverSelection::Opac;

  for (std::size_t k : sweep) {
    const Scenario s = base.with_vcdn_prefix(k);
    for (const auto& w : validate_solution_inputs(s)) out.warnings.push_back("|F|=" + std::to_string(k) + ": " + w);

    std::optional<ExactResult> exact;
    if (want_opac) {
      ResultRow row;
      row.scenario = label;
      row.solver = "opac";
      row.vcdn_count = k;
      const auto start = std::chrono::steady_clock::now();
      ExactLimits limits;
      limits.time_budget = std::chrono::duration<double>(config.budget_seconds);
      exact = solve_exact(s, limits);
      const Rational ms = harness_detail::elapsed_ms(start);
      if (config.timing) row.runtime_ms = ms;
      row.status = status_name(exact->status);
      if (exact->status == ExactStatus::BudgetExceeded) budget_hit = true;
      if (exact->status == ExactStatus::Infeasible) infeasible = true;
      if (exact->solution) {
        const FeasibilityReport audit = check_feasibility(s, *exact->solution);
        if (audit.feasible()) {
          harness_detail::fill_metrics(row, s, *exact->solution);
        } else {
          row.status = "audit_failed:" + audit.failed_families();
          audit_failed = true;
        }
      }
      out.rows.push_back(std::move(row));
    }

    std::optional<PlacementSolution> heuristic;
    if (want_hpac) {
      ResultRow row;
      row.scenario = label;
      row.solver = "hpac";
      row.vcdn_count = k;
      HpacOptions options;
      options.mode = config.mode;
      const auto start = std::chrono::steady_clock::now();
      HpacResult h = hpac_solve(s, options);
      const Rational ms = harness_detail::elapsed_ms(start);
      if (config.timing) row.runtime_ms = ms;
      if (h.status == HpacStatus::Infeasible) {
        row.status = "infeasible";
        infeasible = true;
      } else {
        const FeasibilityReport audit = check_feasibility(s, h.solution, h.tree);
        if (audit.feasible()) {
          row.status = "solved";
          harness_detail::fill_metrics(row, s, h.solution);
          heuristic = std::move(h.solution);
        } else {
          row.status = "audit_failed:" + audit.failed_families();
          audit_failed = true;
        }
      }
      out.rows.push_back(std::move(row));
    }

    if (config.solver == SolverSelection::Both) {
      ResultRow row;
      row.scenario = label;
      row.solver = "gap";
      row.vcdn_count = k;
      if (!exact || exact->status != ExactStatus::Optimal) {
        row.status = "no_optimum";
      } else if (!heuristic) {
        row.status = "no_heuristic";
      } else {
        const Rational c_opac = migration_cost(s, *exact->solution);
        const Rational c_hpac = migration_cost(s, *heuristic);
        row.migration_cost = gap(c_hpac, c_opac);
        // Only a heuristic solution that also routes over the real links is
        // comparable with the exact optimum.
        if (!reroute_on_graph(s, *heuristic)) row.status = "not_comparable";
        else row.status = row.migration_cost ? "ok" : "undefined";
      }
      out.rows.push_back(std::move(row));
    }
  }

  if (audit_failed) out.exit_code = kExitInternal;
  else if (budget_hit) out.exit_code = kExitBudget;
  else if (infeasible) out.exit_code = kExitInfeasible;
  return out;
}

/// Rows read back from a CSV written by write_csv.
inline std::vector<ResultRow> parse_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw CsvError("empty input");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kCsvHeader) throw CsvError("unexpected header: " + line);
  std::vector<ResultRow> rows;
  std::size_t line_no = 1;
  while (std::getline(is, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    const std::string where = "line " + std::to_string(line_no);
    if (cells.size() != 11) throw CsvError(where + ": expected 11 fields, got " + std::to_string(cells.size()));

    auto rational = [&](const std::string& text, const char* column) -> std::optional<Rational> {
      if (text == "NA") return std::nullopt;
      auto v = parse_decimal(text);
      if (!v) throw CsvError(where + ": bad " + column + " value '" + text + "'");
      return v;
    };
    ResultRow r;
    r.scenario = cells[0];
    r.solver = cells[1];
    if (r.solver != "opac" && r.solver != "hpac" && r.solver != "gap") throw CsvError(where + ": unknown solver " + r.solver);
    auto count = parse_decimal(cells[2]);
    if (!count || boost::multiprecision::denominator(*count) != 1 || *count < 1)
      throw CsvError(where + ": bad |F| value '" + cells[2] + "'");
    r.vcdn_count = static_cast<std::size_t>(std::stoull(cells[2]));
    r.migration_cost = rational(cells[3], "migration_cost");
    r.seq_time = rational(cells[4], "seq_time");
    r.par_time = rational(cells[5], "par_time");
    if (auto rep = rational(cells[6], "replicas")) {
      if (boost::multiprecision::denominator(*rep) != 1) throw CsvError(where + ": replicas must be an integer");
      r.replicas = std::stoll(cells[6]);
    }
    r.vcache = rational(cells[7], "vcache");
    r.vstream = rational(cells[8], "vstream");
    r.runtime_ms = rational(cells[9], "runtime_ms");
    r.status = cells[10];
    if (r.status.empty()) throw CsvError(where + ": empty status");
    rows.push_back(std::move(r));
  }
  return rows;
}

/// Mean, min and max of one column over the rows that define it.
struct ColumnStats {
  std::size_t count = 0;
  Rational mean, min, max;
};

struct SummaryRow {
  std::string solver;
  std::size_t vcdn_count = 0;
  std::size_t rows = 0;
  std::map<std::string, ColumnStats> columns;
};

inline const std::vector<std::string>& summary_columns() {
  static const std::vector<std::string> names{"migration_cost", "seq_time", "par_time", "replicas",
                                              "vcache",         "vstream",  "runtime_ms"};
  return names;
}

/// Groups rows by (solver, |F|), ordered by solver then |F|.
inline std::vector<SummaryRow> summarize(const std::vector<ResultRow>& rows) {
  std::map<std::pair<std::string, std::size_t>, std::vector<const ResultRow*>> groups;
  for (const auto& r : rows) groups[{r.solver, r.vcdn_count}].push_back(&r);
  std::vector<SummaryRow> out;
  for (const auto& [key, members] : groups) {
    SummaryRow sr{key.first, key.second, members.size(), {}};
    for (const auto& name : summary_columns()) {
      ColumnStats st;
      Rational total = 0;
      for (const ResultRow* r : members) {
        std::optional<Rational> v;
        if (name == "migration_cost") v = r->migration_cost;
        else if (name == "seq_time") v = r->seq_time;
        else if (name == "par_time") v = r->par_time;
        else if (name == "replicas" && r->replicas) v = Rational(*r->replicas);
        else if (name == "vcache") v = r->vcache;
        else if (name == "vstream") v = r->vstream;
        else if (name == "runtime_ms") v = r->runtime_ms;
        if (!v) continue;
        if (st.count == 0 || *v < st.min) st.min = *v;
        if (st.count == 0 || *v > st.max) st.max = *v;
        total += *v;
        ++st.count;
      }
      if (st.count > 0) {
        st.mean = total / static_cast<long long>(st.count);
        sr.columns[name] = st;
      }
    }
    out.push_back(std::move(sr));
  }
  return out;
}

/// Plain-text summary: one block per solver with mean/min/max per |F|, then
/// the |F| vs gap table when gap rows are present.
inline std::string render_report(const std::vector<ResultRow>& rows) {
  const auto summary = summarize(rows);
  std::ostringstream os;
  std::string current;
  for (const auto& sr : summary) {
    if (sr.solver == "gap") continue;
    if (sr.solver != current) {
      current = sr.solver;
      os << "== " << current << '\n';
      os << std::left << std::setw(5) << "|F|" << std::setw(16) << "metric" << std::right << std::setw(16) << "mean"
         << std::setw(16) << "min" << std::setw(16) << "max" << '\n';
    }
    for (const auto& name : summary_columns()) {
      auto it = sr.columns.find(name);
      if (it == sr.columns.end()) continue;
      os << std::left << std::setw(5) << sr.vcdn_count << std::setw(16) << name << std::right << std::setw(16)
         << format_rational(it->second.mean) << std::setw(16) << format_rational(it->second.min) << std::setw(16)
         << format_rational(it->second.max) << '\n';
    }
  }
  bool header = false;
  for (const auto& sr : summary) {
    if (sr.solver != "gap") continue;
    if (!header) {
      os << "== gap (migration cost, %)\n" << std::left << std::setw(5) << "|F|" << std::right << std::setw(16) << "gap%" << '\n';
      header = true;
    }
    auto it = sr.columns.find("migration_cost");
    os << std::left << std::setw(5) << sr.vcdn_count << std::right << std::setw(16)
       << (it == sr.columns.end() ? std::string("NA") : format_rational(it->second.mean, 2)) << '\n';
  }
  return os.str();
}

}  // namespace vcdn
