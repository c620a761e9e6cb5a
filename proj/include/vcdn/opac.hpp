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

// Exact placement/migration solver.
//
// The integer program has binaries x (placement), y (assignment) and z (per
// demand routing). Its objective sum(x * m) depends on x only, and with
// m >= 0 an optimal x opens exactly the placements some assignment uses. The
// search therefore branches over assignments (demand -> server) in
// depth-first order, pruning with storage/stream residuals and a per-vCDN
// lower bound. A complete assignment that beats the incumbent is handed to an
// exact router, which backtracks over simple paths for every demand until all
// link loads fit (any binary z satisfying conservation contains such a path,
// and extra cycles only add load). Both stages are exhaustive, so the first
// incumbent that survives a finished search is optimal.

#pragma once

#include "vcdn/flow.hpp"
#include "vcdn/solution.hpp"

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <unordered_set>
#include <vector>

namespace vcdn {

struct ExactLimits {
  std::chrono::duration<double> time_budget = std::chrono::seconds(60);
  std::uint64_t node_budget = std::numeric_limits<std::uint64_t>::max();
};

enum class ExactStatus { Optimal, Infeasible, BudgetExceeded };

inline const char* status_name(ExactStatus s) {
  switch (s) {
    case ExactStatus::Optimal: return "optimal";
    case ExactStatus::Infeasible: return "infeasible";
    case ExactStatus::BudgetExceeded: return "budget_exceeded";
  }
  return "?";
}

struct ExactResult {
  ExactStatus status = ExactStatus::Infeasible;
  std::optional<PlacementSolution> solution;  // optimum, or best incumbent on budget exhaustion
  Quantity lower_bound;                       // proven bound on the optimum
  std::uint64_t nodes = 0;

  /// (incumbent - bound) / incumbent; nullopt without an incumbent or when it is 0.
  std::optional<Rational> relative_gap() const {
    if (!solution || solution->objective == Quantity{}) return std::nullopt;
    return Rational(solution->objective.milli() - lower_bound.milli(), solution->objective.milli());
  }
};

/// Fewest-hop path from `from` to `to` over scenario links; among those, the
/// one with the largest bottleneck (ties: smaller predecessor id).
inline MigrationPath widest_shortest_path(const Scenario& s, NodeId from, NodeId to) {
  MigrationPath mp;
  if (from == to) return mp;
  const int dist = s.hops(from, to);
  if (dist == Scenario::kUnreachable)
    throw ScenarioError("no path from " + std::to_string(from.value) + " to " + std::to_string(to.value));
  // best[u]: widest bottleneck from `from` to u along a fewest-hop path.
  std::map<NodeId, Capacity> best{{from, std::numeric_limits<Capacity>::max()}};
  std::map<NodeId, NodeId> pred;
  std::vector<NodeId> layer{from};
  for (int h = 1; h <= dist; ++h) {
    std::vector<NodeId> next;
    for (NodeId u : layer)
      for (NodeId w : s.successors(u)) {
        if (s.hops(from, w) != h || s.hops(w, to) != dist - h) continue;
        const Capacity width = std::min(best[u], s.link_capacity(u, w)->milli());
        auto it = best.find(w);
        if (it == best.end()) {
          best[w] = width;
          pred[w] = u;
          next.push_back(w);
        } else if (width > it->second) {
          it->second = width;
          pred[w] = u;
        }
      }
    std::sort(next.begin(), next.end());
    layer = std::move(next);
  }
  std::vector<NodeId> nodes{to};
  while (nodes.back() != from) nodes.push_back(pred.at(nodes.back()));
  std::reverse(nodes.begin(), nodes.end());
  for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
    mp.edges.push_back({nodes[i], nodes[i + 1]});
    mp.capacities.push_back(s.link_capacity(nodes[i], nodes[i + 1])->milli());
  }
  return mp;
}

namespace opac_detail {

using Clock = std::chrono::steady_clock;

/// Exhaustive unsplittable router: one simple path per demand such that the
/// summed throughput on every directed link stays within its capacity.
class Router {
 public:
  enum class Outcome { Routed, Unroutable, OutOfTime };

  struct Request {
    std::size_t source;  // dense node index
    std::size_t target;
    Capacity amount;
  };

  Router(const Scenario& s, Clock::time_point deadline) : s_(s), deadline_(deadline), n_(s.node_count()) {
    for (const auto& l : s.links()) {
      links_.push_back({s.index_of(l.from), s.index_of(l.to), l.capacity.milli()});
    }
    out_.assign(n_, {});
    for (std::size_t e = 0; e < links_.size(); ++e) out_[links_[e].from].push_back(e);
    hop_.assign(n_ * n_, Scenario::kUnreachable);
    for (std::size_t a = 0; a < n_; ++a)
      for (std::size_t b = 0; b < n_; ++b) hop_[a * n_ + b] = s.hops(s.nodes()[a], s.nodes()[b]);
    by_target_.assign(n_, {});
  }

  Outcome route(const std::vector<Request>& requests, std::vector<std::vector<DirectedEdge>>* paths) {
    requests_ = &requests;
    residual_.clear();
    for (const auto& l : links_) residual_.push_back(l.capacity);
    on_path_.assign(requests.size() * n_, 0);
    chosen_.assign(requests.size(), {});
    steps_ = 0;
    timed_out_ = false;
    failed_.clear();
    const bool ok = route_from(0);
    if (timed_out_) return Outcome::OutOfTime;
    if (!ok) return Outcome::Unroutable;
    if (paths) {
      paths->clear();
      for (const auto& edges : chosen_) {
        std::vector<DirectedEdge> p;
        for (std::size_t e : edges) p.push_back({s_.nodes()[links_[e].from], s_.nodes()[links_[e].to]});
        paths->push_back(std::move(p));
      }
    }
    return Outcome::Routed;
  }

 private:
  struct DenseLink {
    std::size_t from, to;
    Capacity capacity;
  };

  const std::vector<std::size_t>& ordered_out(std::size_t target, std::size_t u) {
    auto& table = by_target_[target];
    if (table.empty()) {
      table.assign(n_, {});
      for (std::size_t v = 0; v < n_; ++v) {
        std::vector<std::size_t> arcs;
        for (std::size_t e : out_[v])
          if (hop_[links_[e].to * n_ + target] != Scenario::kUnreachable) arcs.push_back(e);
        std::sort(arcs.begin(), arcs.end(), [&](std::size_t a, std::size_t b) {
          return std::pair(hop_[links_[a].to * n_ + target], links_[a].to) <
                 std::pair(hop_[links_[b].to * n_ + target], links_[b].to);
        });
        table[v] = std::move(arcs);
      }
    }
    return table[u];
  }

  bool out_of_time() {
    if (timed_out_) return true;
    if ((++steps_ & 0x3FF) == 0 && Clock::now() > deadline_) timed_out_ = true;
    return timed_out_;
  }

  /// Every request from i on can still reach its target over arcs with
  /// enough residual capacity for it alone.
  bool remaining_reachable(std::size_t i) {
    std::vector<char> seen(n_);
    std::vector<std::size_t> stack;
    for (std::size_t j = i; j < requests_->size(); ++j) {
      const Request& r = (*requests_)[j];
      if (j > i && r.source == (*requests_)[j - 1].source && r.target == (*requests_)[j - 1].target &&
          r.amount <= (*requests_)[j - 1].amount)
        continue;
      std::fill(seen.begin(), seen.end(), 0);
      stack.assign(1, r.source);
      seen[r.source] = 1;
      bool found = r.source == r.target;
      while (!stack.empty() && !found) {
        const std::size_t u = stack.back();
        stack.pop_back();
        for (std::size_t e : out_[u]) {
          const std::size_t w = links_[e].to;
          if (seen[w] || residual_[e] < r.amount) continue;
          if (w == r.target) found = true;
          seen[w] = 1;
          stack.push_back(w);
        }
      }
      if (!found) return false;
    }
    return true;
  }

  std::string memo_key(std::size_t i) const {
    std::string key(reinterpret_cast<const char*>(&i), sizeof i);
    key.append(reinterpret_cast<const char*>(residual_.data()), residual_.size() * sizeof(Capacity));
    return key;
  }

  bool route_from(std::size_t i) {
    if (i == requests_->size()) return true;
    if (!remaining_reachable(i)) return false;
    std::string key = memo_key(i);
    if (failed_.contains(key)) return false;
    const Request& r = (*requests_)[i];
    bool ok;
    if (r.source == r.target) {
      chosen_[i].clear();
      ok = route_from(i + 1);
    } else {
      on_path_[i * n_ + r.source] = 1;
      ok = extend(i, r.source);
      on_path_[i * n_ + r.source] = 0;
    }
    if (!ok && !timed_out_ && failed_.size() < kMemoLimit) failed_.insert(std::move(key));
    return ok;
  }

  bool extend(std::size_t i, std::size_t u) {
    if (out_of_time()) return false;
    const Request& r = (*requests_)[i];
    if (u == r.target) return route_from(i + 1);
    for (std::size_t e : ordered_out(r.target, u)) {
      const std::size_t w = links_[e].to;
      if (on_path_[i * n_ + w] || residual_[e] < r.amount) continue;
      residual_[e] -= r.amount;
      on_path_[i * n_ + w] = 1;
      chosen_[i].push_back(e);
      if (extend(i, w)) return true;
      chosen_[i].pop_back();
      on_path_[i * n_ + w] = 0;
      residual_[e] += r.amount;
      if (timed_out_) return false;
    }
    return false;
  }

  const Scenario& s_;
  Clock::time_point deadline_;
  std::size_t n_;
  std::vector<DenseLink> links_;
  std::vector<std::vector<std::size_t>> out_;
  std::vector<int> hop_;
  std::vector<std::vector<std::vector<std::size_t>>> by_target_;
  const std::vector<Request>* requests_ = nullptr;
  std::vector<Capacity> residual_;
  std::vector<char> on_path_;  // per request: nodes on its partial path
  std::vector<std::vector<std::size_t>> chosen_;
  std::uint64_t steps_ = 0;
  bool timed_out_ = false;
  static constexpr std::size_t kMemoLimit = 1 << 20;
  std::unordered_set<std::string> failed_;  // (request index, residuals) known to be unroutable
};

/// Splittable relaxation of a routing problem: for each target, all requests
/// ending there must fit as one flow from their sources, and for each source,
/// all requests leaving it as one flow to their targets. Necessary for an
/// unsplittable routing to exist.
inline bool relaxation_routable(const Scenario& s, const std::vector<Router::Request>& requests) {
  FlowGraph base(s.nodes());
  for (const auto& l : s.links()) base.add_arc(s.index_of(l.from), s.index_of(l.to), l.capacity.milli());
  std::map<std::size_t, std::map<std::size_t, Capacity>> into, out_of;
  for (const auto& r : requests) {
    if (r.source == r.target) continue;
    into[r.target][r.source] += r.amount;
    out_of[r.source][r.target] += r.amount;
  }
  auto fits = [&](std::size_t fixed, const std::map<std::size_t, Capacity>& others, bool fixed_is_sink) {
    FlowGraph g = base;
    const std::size_t super = g.add_node({NodeId{-1}});
    Capacity total = 0;
    for (const auto& [u, amount] : others) {
      if (fixed_is_sink) g.add_arc(super, u, amount);
      else g.add_arc(u, super, amount);
      total += amount;
    }
    const Capacity flow = fixed_is_sink ? max_flow(g, super, fixed).value : max_flow(g, fixed, super).value;
    return flow >= total;
  };
  for (const auto& [t, sources] : into)
    if (!fits(t, sources, true)) return false;
  for (const auto& [src, targets] : out_of)
    if (!fits(src, targets, false)) return false;
  return true;
}

inline void fill_migration_paths(const Scenario& s, PlacementSolution& sol) {
  sol.migration_paths.clear();
  for (const auto& p : sol.x) {
    const NodeId origin = s.vcdn(p.vcdn).origin;
    if (p.server != origin) sol.migration_paths[p] = widest_shortest_path(s, origin, p.server);
  }
}

class BranchAndBound {
 public:
  static constexpr Capacity kInfinite = std::numeric_limits<Capacity>::max() / 4;

  BranchAndBound(const Scenario& s, const ExactLimits& limits)
      : s_(s),
        limits_(limits),
        deadline_(Clock::now() + std::chrono::duration_cast<Clock::duration>(limits.time_budget)),
        router_(s, deadline_) {
    for (const auto& sv : s.servers()) {
      servers_.push_back(sv.node);
      stream_res_.push_back(sv.stream.milli());
      storage_res_.push_back(sv.storage.milli());
      Capacity out = 0;
      for (NodeId w : s.successors(sv.node)) out += s.link_capacity(sv.node, w)->milli();
      egress_res_.push_back(out);
    }
    for (const auto& v : s.vcdns()) {
      vcdns_.push_back(v.id);
      sizes_.push_back(v.size.milli());
    }
    cost_.assign(servers_.size() * vcdns_.size(), 0);
    for (std::size_t si = 0; si < servers_.size(); ++si)
      for (std::size_t fi = 0; fi < vcdns_.size(); ++fi)
        cost_[si * vcdns_.size() + fi] = s.migration_cost(servers_[si], vcdns_[fi]).milli();
    open_.assign(servers_.size() * vcdns_.size(), 0);

    for (const auto& d : s.demands()) {
      if (d.throughput == Quantity{}) continue;
      Item item;
      item.client = d.client;
      item.vcdn = static_cast<std::size_t>(std::find(vcdns_.begin(), vcdns_.end(), d.vcdn) - vcdns_.begin());
      item.amount = d.throughput.milli();
      for (std::size_t si = 0; si < servers_.size(); ++si) {
        const ServerSpec& sv = s.servers()[si];
        if (sv.stream.milli() < item.amount || sv.storage.milli() < sizes_[item.vcdn]) continue;
        if (!reachable_with(servers_[si], d.client, item.amount)) continue;
        item.candidates.push_back(si);
      }
      items_.push_back(std::move(item));
    }
    std::stable_sort(items_.begin(), items_.end(), [](const Item& a, const Item& b) {
      if (a.amount != b.amount) return a.amount > b.amount;
      return std::pair(a.client, a.vcdn) < std::pair(b.client, b.vcdn);
    });
    assign_.assign(items_.size(), 0);
  }

  ExactResult solve() {
    ExactResult result;
    const Capacity root_bound = lower_bound(0);
    if (root_bound >= kInfinite || !clients_supplied()) {
      result.status = ExactStatus::Infeasible;
      return result;
    }
    descend(0, 0);
    result.nodes = nodes_;
    if (exhausted_) {
      result.status = ExactStatus::BudgetExceeded;
      result.lower_bound = Quantity::from_milli(root_bound);
    } else {
      result.status = best_ ? ExactStatus::Optimal : ExactStatus::Infeasible;
      if (best_) result.lower_bound = best_->objective;
    }
    result.solution = best_;
    return result;
  }

 private:
  struct Item {
    NodeId client;
    std::size_t vcdn = 0;
    Capacity amount = 0;
    std::vector<std::size_t> candidates;  // server indices passing static checks
  };

  /// Each client's total demand fits through the network from its candidate
  /// servers taken together.
  bool clients_supplied() const {
    std::map<NodeId, std::pair<Capacity, std::set<std::size_t>>> need;
    for (const auto& it : items_) {
      auto& [total, sources] = need[it.client];
      total += it.amount;
      sources.insert(it.candidates.begin(), it.candidates.end());
    }
    FlowGraph base(s_.nodes());
    for (const auto& l : s_.links()) base.add_arc(s_.index_of(l.from), s_.index_of(l.to), l.capacity.milli());
    for (const auto& [client, entry] : need) {
      FlowGraph g = base;
      const std::size_t super = g.add_node({NodeId{-1}});
      for (std::size_t si : entry.second) g.add_arc(super, s_.index_of(servers_[si]), kInfinite);
      if (max_flow(g, super, s_.index_of(client)).value < entry.first) return false;
    }
    return true;
  }

  bool reachable_with(NodeId from, NodeId to, Capacity amount) const {
    std::set<NodeId> seen{from};
    std::vector<NodeId> stack{from};
    while (!stack.empty()) {
      const NodeId u = stack.back();
      stack.pop_back();
      if (u == to) return true;
      for (NodeId w : s_.successors(u))
        if (!seen.contains(w) && s_.link_capacity(u, w)->milli() >= amount) {
          seen.insert(w);
          stack.push_back(w);
        }
    }
    return false;
  }

  Capacity& open(std::size_t si, std::size_t fi) { return open_[si * vcdns_.size() + fi]; }
  Capacity cost(std::size_t si, std::size_t fi) const { return cost_[si * vcdns_.size() + fi]; }

  /// Incremental cost of serving item k from server si now, or kInfinite.
  Capacity step_cost(std::size_t k, std::size_t si) {
    const Item& it = items_[k];
    if (stream_res_[si] < it.amount || egress_res_[si] < it.amount) return kInfinite;
    if (open(si, it.vcdn) > 0) return 0;
    if (storage_res_[si] < sizes_[it.vcdn]) return kInfinite;
    return cost(si, it.vcdn);
  }

  /// Every remaining demand of f needs some host of f; the cheapest such host
  /// for the hardest-to-serve demand bounds f's remaining cost.
  Capacity lower_bound(std::size_t k) {
    std::vector<Capacity> per_vcdn(vcdns_.size(), 0);
    for (std::size_t j = k; j < items_.size(); ++j) {
      Capacity cheapest = kInfinite;
      for (std::size_t si : items_[j].candidates) cheapest = std::min(cheapest, step_cost(j, si));
      if (cheapest >= kInfinite) return kInfinite;
      per_vcdn[items_[j].vcdn] = std::max(per_vcdn[items_[j].vcdn], cheapest);
    }
    Capacity total = 0;
    for (Capacity c : per_vcdn) total += c;
    return total;
  }

  bool budget_hit() {
    if (exhausted_) return true;
    if (nodes_ >= limits_.node_budget || ((nodes_ & 0xFF) == 0 && Clock::now() > deadline_)) exhausted_ = true;
    return exhausted_;
  }

  void descend(std::size_t k, Capacity spent) {
    ++nodes_;
    if (budget_hit()) return;
    if (k == items_.size()) {
      evaluate_leaf(spent);
      return;
    }
    const Capacity bound = lower_bound(k);
    if (bound >= kInfinite || (best_ && spent + bound >= best_->objective.milli())) return;

    std::vector<std::pair<Capacity, std::size_t>> order;
    for (std::size_t si : items_[k].candidates) {
      const Capacity c = step_cost(k, si);
      if (c < kInfinite) order.emplace_back(c, si);
    }
    std::sort(order.begin(), order.end(), [&](const auto& a, const auto& b) {
      return std::pair(a.first, servers_[a.second]) < std::pair(b.first, servers_[b.second]);
    });
    const Item& it = items_[k];
    for (const auto& [c, si] : order) {
      if (best_ && spent + c >= best_->objective.milli()) continue;
      const bool opening = open(si, it.vcdn) == 0;
      stream_res_[si] -= it.amount;
      egress_res_[si] -= it.amount;
      if (opening) storage_res_[si] -= sizes_[it.vcdn];
      ++open(si, it.vcdn);
      assign_[k] = si;
      descend(k + 1, spent + c);
      --open(si, it.vcdn);
      if (opening) storage_res_[si] += sizes_[it.vcdn];
      stream_res_[si] += it.amount;
      egress_res_[si] += it.amount;
      if (exhausted_) return;
    }
  }

  void evaluate_leaf(Capacity spent) {
    std::vector<Router::Request> requests;
    for (std::size_t k = 0; k < items_.size(); ++k)
      requests.push_back({s_.index_of(servers_[assign_[k]]), s_.index_of(items_[k].client), items_[k].amount});
    if (!relaxation_routable(s_, requests)) return;
    std::vector<std::vector<DirectedEdge>> paths;
    switch (router_.route(requests, &paths)) {
      case Router::Outcome::OutOfTime: exhausted_ = true; return;
      case Router::Outcome::Unroutable: return;
      case Router::Outcome::Routed: break;
    }
    PlacementSolution sol;
    for (std::size_t k = 0; k < items_.size(); ++k) {
      const NodeId server = servers_[assign_[k]];
      const VcdnId f = vcdns_[items_[k].vcdn];
      sol.x.insert({server, f});
      sol.y.insert({server, items_[k].client, f});
      sol.z[{items_[k].client, f}] = std::move(paths[k]);
    }
    sol.objective = Quantity::from_milli(spent);
    fill_migration_paths(s_, sol);
    best_ = std::move(sol);
  }

  const Scenario& s_;
  ExactLimits limits_;
  Clock::time_point deadline_;
  Router router_;
  std::vector<NodeId> servers_;
  std::vector<VcdnId> vcdns_;
  std::vector<Capacity> sizes_;
  std::vector<Capacity> cost_;
  std::vector<Capacity> open_;
  std::vector<Capacity> stream_res_;
  std::vector<Capacity> storage_res_;
  std::vector<Capacity> egress_res_;  // outgoing link capacity not yet claimed by assigned streams
  std::vector<Item> items_;
  std::vector<std::size_t> assign_;
  std::optional<PlacementSolution> best_;
  std::uint64_t nodes_ = 0;
  bool exhausted_ = false;
};

}  // namespace opac_detail

/// Provably optimal placement for the integer program, or Infeasible, or
/// BudgetExceeded carrying the best incumbent and the root lower bound.
inline ExactResult solve_exact(const Scenario& s, const ExactLimits& limits = {}) {
  return opac_detail::BranchAndBound(s, limits).solve();
}

/// Re-routes a solution's assignments over scenario links (exact search).
/// Returns a graph-semantics copy, or nullopt if no routing fits within the
/// time budget.
inline std::optional<PlacementSolution> reroute_on_graph(const Scenario& s, const PlacementSolution& sol,
                                                         std::chrono::duration<double> budget = std::chrono::seconds(10)) {
  using opac_detail::Router;
  const auto deadline = opac_detail::Clock::now() + std::chrono::duration_cast<opac_detail::Clock::duration>(budget);
  Router router(s, deadline);
  std::vector<Assignment> order(sol.y.begin(), sol.y.end());
  std::stable_sort(order.begin(), order.end(), [&](const Assignment& a, const Assignment& b) {
    return s.demand(a.client, a.vcdn) > s.demand(b.client, b.vcdn);
  });
  std::vector<Router::Request> requests;
  for (const auto& a : order)
    requests.push_back({s.index_of(a.server), s.index_of(a.client), s.demand(a.client, a.vcdn).milli()});
  std::vector<std::vector<DirectedEdge>> paths;
  if (router.route(requests, &paths) != Router::Outcome::Routed) return std::nullopt;
  PlacementSolution out = sol;
  out.semantics = RoutingSemantics::Graph;
  out.z.clear();
  for (std::size_t i = 0; i < order.size(); ++i) out.z[{order[i].client, order[i].vcdn}] = std::move(paths[i]);
  opac_detail::fill_migration_paths(s, out);
  return out;
}

}  // namespace vcdn
