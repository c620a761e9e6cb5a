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

#pragma once

#include "vcdn/solution.hpp"

#include <algorithm>
#include <cstdint>
#include <optional>
#include <stdexcept>

namespace vcdn {

/// The six evaluation metrics of one solution. Times are in seconds; vcache
/// and vstream are fractions of the total storage / stream capacity.
struct CostReport {
  Rational migration_cost;
  Rational migration_time_sequential;
  Rational migration_time_parallel;
  std::int64_t replica_number = 0;
  Rational vcache_cost;
  Rational vstream_cost;
};

enum class TimeMode { Sequential, Parallel };

/// GB to Gb.
inline constexpr std::int64_t kBitsPerByte = 8;

inline Rational migration_cost(const Scenario& s, const PlacementSolution& sol) {
  return objective_value(s, sol).to_rational();
}

namespace metrics_detail {

/// f_size * max over the path of 1/L, in seconds: (8 * size Gb) / (L Mbps / 1000).
inline Rational transfer_seconds(const Scenario& s, const Placement& p, const PlacementSolution& sol) {
  auto it = sol.migration_paths.find(p);
  if (it == sol.migration_paths.end())
    throw std::invalid_argument("migration_time: no migration path for vcdn " + std::to_string(p.vcdn.value) +
                                " to server " + std::to_string(p.server.value));
  const auto& caps = it->second.capacities;
  if (caps.empty()) throw std::invalid_argument("migration_time: empty migration path");
  const Capacity narrowest = *std::min_element(caps.begin(), caps.end());
  if (narrowest <= 0) throw std::invalid_argument("migration_time: path edge with zero capacity");
  const std::int64_t size_milli = s.vcdn(p.vcdn).size.milli();
  // size_milli/1000 GB * 8 / (narrowest/1000 Mbps * 1e-3) s
  return Rational(size_milli) * kBitsPerByte * 1000 / Rational(narrowest);
}

}  // namespace metrics_detail

/// Sequential: sum over migrated (s, f); parallel: the slowest single transfer.
/// Placements at a vCDN's origin involve no transfer.
inline Rational migration_time(const Scenario& s, const PlacementSolution& sol, TimeMode mode) {
  Rational total = 0, slowest = 0;
  for (const auto& p : sol.x) {
    if (p.server == s.vcdn(p.vcdn).origin) continue;
    const Rational t = metrics_detail::transfer_seconds(s, p, sol);
    total += t;
    slowest = std::max(slowest, t);
  }
  return mode == TimeMode::Sequential ? total : slowest;
}

inline std::int64_t replica_number(const Scenario& s, const PlacementSolution& sol) {
  std::int64_t count = 0;
  for (const auto& p : sol.x) count += p.server != s.vcdn(p.vcdn).origin ? 1 : 0;
  return count;
}

inline Rational vcache_cost(const Scenario& s, const PlacementSolution& sol) {
  Quantity used, total;
  for (const auto& p : sol.x) used += s.vcdn(p.vcdn).size;
  for (const auto& sv : s.servers()) total += sv.storage;
  if (total == Quantity{}) {
    if (used == Quantity{}) return 0;
    throw std::invalid_argument("vcache_cost: zero total storage");
  }
  return Rational(used.milli(), total.milli());
}

/// Summed over every serving server, so it is bounded by 1 for feasible solutions.
inline Rational vstream_cost(const Scenario& s, const PlacementSolution& sol) {
  Quantity used, total;
  for (const auto& a : sol.y) used += s.demand(a.client, a.vcdn);
  for (const auto& sv : s.servers()) total += sv.stream;
  if (total == Quantity{}) {
    if (used == Quantity{}) return 0;
    throw std::invalid_argument("vstream_cost: zero total stream capacity");
  }
  return Rational(used.milli(), total.milli());
}

/// Relative excess of the heuristic over the exact cost, in percent;
/// nullopt when the exact cost is zero.
inline std::optional<Rational> gap(const Rational& heuristic, const Rational& exact) {
  if (exact == 0) return std::nullopt;
  return 100 * (heuristic - exact) / exact;
}

inline CostReport evaluate(const Scenario& s, const PlacementSolution& sol) {
  CostReport r;
  r.migration_cost = migration_cost(s, sol);
  r.migration_time_sequential = migration_time(s, sol, TimeMode::Sequential);
  r.migration_time_parallel = migration_time(s, sol, TimeMode::Parallel);
  r.replica_number = replica_number(s, sol);
  r.vcache_cost = vcache_cost(s, sol);
  r.vstream_cost = vstream_cost(s, sol);
  return r;
}

}  // namespace vcdn
