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

#include "vcdn/types.hpp"

#include <algorithm>
#include <cstdint>
#include <limits>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace vcdn {

/// Integral capacity; scenario quantities enter as thousandths of a Mbps.
using Capacity = std::int64_t;

/// Capacitated directed multigraph over dense node indices. Each node stands
/// for a non-empty set of original NodeIds (a singleton until contracted).
/// Parallel arcs are merged on insertion.
class FlowGraph {
 public:
  FlowGraph() = default;

  explicit FlowGraph(const std::vector<NodeId>& labels) {
    for (NodeId id : labels) add_node({id});
  }

  std::size_t add_node(std::vector<NodeId> members) {
    if (members.empty()) throw std::invalid_argument("FlowGraph: node needs at least one member");
    std::sort(members.begin(), members.end());
    members_.push_back(std::move(members));
    out_.emplace_back();
    return members_.size() - 1;
  }

  void add_arc(std::size_t from, std::size_t to, Capacity cap) {
    check(from);
    check(to);
    if (cap < 0) throw std::invalid_argument("FlowGraph: negative capacity");
    if (from == to) return;
    out_[from][to] += cap;
  }

  /// Undirected edge, i.e. one arc each way with the same capacity.
  void add_edge(std::size_t a, std::size_t b, Capacity cap) {
    add_arc(a, b, cap);
    add_arc(b, a, cap);
  }

  std::size_t size() const { return members_.size(); }
  const std::vector<NodeId>& members(std::size_t i) const { return members_.at(i); }
  NodeId label(std::size_t i) const { return members_.at(i).front(); }
  const std::map<std::size_t, Capacity>& out_arcs(std::size_t i) const { return out_.at(i); }

  Capacity capacity(std::size_t from, std::size_t to) const {
    const auto& arcs = out_.at(from);
    auto it = arcs.find(to);
    return it == arcs.end() ? 0 : it->second;
  }

  /// Index of the node whose member set contains `id`.
  std::size_t index_of(NodeId id) const {
    for (std::size_t i = 0; i < members_.size(); ++i)
      if (std::binary_search(members_[i].begin(), members_[i].end(), id)) return i;
    throw std::out_of_range("FlowGraph: node " + std::to_string(id.value) + " absent");
  }

  void check(std::size_t i) const {
    if (i >= members_.size()) throw std::out_of_range("FlowGraph: node index " + std::to_string(i) + " absent");
  }

 private:
  std::vector<std::vector<NodeId>> members_;
  std::vector<std::map<std::size_t, Capacity>> out_;
};

/// A bipartition of the node indices; capacity counts arcs from side_a to side_b.
struct Cut {
  std::vector<std::size_t> side_a;
  std::vector<std::size_t> side_b;
  Capacity capacity = 0;
};

struct FlowResult {
  Capacity value = 0;
  Cut cut;
};

/// Sum of arc capacities leaving the set marked in `in_a`.
inline Capacity cut_capacity(const FlowGraph& g, const std::vector<bool>& in_a) {
  Capacity total = 0;
  for (std::size_t u = 0; u < g.size(); ++u) {
    if (!in_a[u]) continue;
    for (const auto& [v, cap] : g.out_arcs(u))
      if (!in_a[v]) total += cap;
  }
  return total;
}

namespace flow_detail {

/// Dinic's blocking-flow algorithm on a private residual copy.
class Dinic {
 public:
  explicit Dinic(const FlowGraph& g) : head_(g.size(), -1), level_(g.size()), next_arc_(g.size()) {
    for (std::size_t u = 0; u < g.size(); ++u)
      for (const auto& [v, cap] : g.out_arcs(u)) {
        push_arc(u, v, cap);
        push_arc(v, u, 0);
      }
  }

  Capacity run(std::size_t s, std::size_t t) {
    Capacity flow = 0;
    while (bfs(s, t)) {
      next_arc_ = head_;
      while (Capacity pushed = dfs(s, t, std::numeric_limits<Capacity>::max())) flow += pushed;
    }
    return flow;
  }

  /// Nodes reachable from s in the residual graph after run().
  std::vector<bool> source_side(std::size_t s) const {
    std::vector<bool> seen(head_.size(), false);
    std::vector<std::size_t> stack{s};
    seen[s] = true;
    while (!stack.empty()) {
      const std::size_t u = stack.back();
      stack.pop_back();
      for (int e = head_[u]; e != -1; e = arcs_[e].next)
        if (arcs_[e].residual > 0 && !seen[arcs_[e].to]) {
          seen[arcs_[e].to] = true;
          stack.push_back(arcs_[e].to);
        }
    }
    return seen;
  }

 private:
  struct Arc {
    std::size_t to;
    Capacity residual;
    int next;
  };

  void push_arc(std::size_t u, std::size_t v, Capacity cap) {
    arcs_.push_back({v, cap, head_[u]});
    head_[u] = static_cast<int>(arcs_.size()) - 1;
  }

  bool bfs(std::size_t s, std::size_t t) {
    std::fill(level_.begin(), level_.end(), -1);
    std::vector<std::size_t> queue{s};
    level_[s] = 0;
    for (std::size_t qi = 0; qi < queue.size(); ++qi) {
      const std::size_t u = queue[qi];
      for (int e = head_[u]; e != -1; e = arcs_[e].next)
        if (arcs_[e].residual > 0 && level_[arcs_[e].to] < 0) {
          level_[arcs_[e].to] = level_[u] + 1;
          queue.push_back(arcs_[e].to);
        }
    }
    return level_[t] >= 0;
  }

  Capacity dfs(std::size_t u, std::size_t t, Capacity limit) {
    if (u == t) return limit;
    for (int& e = next_arc_[u]; e != -1; e = arcs_[e].next) {
      Arc& arc = arcs_[e];
      if (arc.residual <= 0 || level_[arc.to] != level_[u] + 1) continue;
      if (Capacity pushed = dfs(arc.to, t, std::min(limit, arc.residual))) {
        arc.residual -= pushed;
        arcs_[e ^ 1].residual += pushed;
        return pushed;
      }
    }
    return 0;
  }

  std::vector<Arc> arcs_;
  std::vector<int> head_;
  std::vector<int> level_;
  std::vector<int> next_arc_;
};

}  // namespace flow_detail

/// Maximum s-t flow and the minimum cut closest to s.
inline FlowResult max_flow(const FlowGraph& g, std::size_t s, std::size_t t) {
  g.check(s);
  g.check(t);
  if (s == t) throw std::invalid_argument("max_flow: source equals sink");
  flow_detail::Dinic dinic(g);
  FlowResult result;
  result.value = dinic.run(s, t);
  const std::vector<bool> in_a = dinic.source_side(s);
  for (std::size_t u = 0; u < g.size(); ++u) (in_a[u] ? result.cut.side_a : result.cut.side_b).push_back(u);
  result.cut.capacity = cut_capacity(g, in_a);
  return result;
}

/// Cheapest cut splitting `steiner` into two non-empty parts. Computed as the
/// minimum over s-t max-flows from the smallest-label terminal to each other
/// terminal, scanned in label order; the first minimum wins. `cut.side_a`
/// holds the fixed terminal.
struct SteinerCut {
  Cut cut;
  std::vector<std::size_t> terminals_a;
  std::vector<std::size_t> terminals_b;
};

inline SteinerCut min_steiner_cut(const FlowGraph& g, std::span<const std::size_t> steiner) {
  if (steiner.size() < 2) throw std::invalid_argument("min_steiner_cut: need at least two terminals");
  std::vector<std::size_t> terms(steiner.begin(), steiner.end());
  for (std::size_t t : terms) g.check(t);
  std::sort(terms.begin(), terms.end(), [&](std::size_t a, std::size_t b) { return g.label(a) < g.label(b); });
  if (std::adjacent_find(terms.begin(), terms.end()) != terms.end())
    throw std::invalid_argument("min_steiner_cut: duplicate terminal");

  SteinerCut best;
  bool have = false;
  for (std::size_t i = 1; i < terms.size(); ++i) {
    FlowResult r = max_flow(g, terms.front(), terms[i]);
    if (!have || r.value < best.cut.capacity) {
      best.cut = std::move(r.cut);
      have = true;
    }
  }
  std::vector<bool> in_a(g.size(), false);
  for (std::size_t u : best.cut.side_a) in_a[u] = true;
  for (std::size_t t : terms) (in_a[t] ? best.terminals_a : best.terminals_b).push_back(t);
  return best;
}

/// Merges each group into one super-node (members united, parallel arcs
/// summed, self-loops dropped). Groups must be disjoint. Surviving nodes keep
/// their relative order; a group takes the position of its first member.
/// `image`, if given, receives old-index -> new-index.
inline FlowGraph contract_groups(const FlowGraph& g, const std::vector<std::vector<std::size_t>>& groups,
                                 std::vector<std::size_t>* image = nullptr) {
  constexpr std::size_t kUnset = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> group_of(g.size(), kUnset);
  for (std::size_t gi = 0; gi < groups.size(); ++gi) {
    if (groups[gi].empty()) throw std::invalid_argument("contract: empty group");
    for (std::size_t u : groups[gi]) {
      g.check(u);
      if (group_of[u] != kUnset) throw std::invalid_argument("contract: groups overlap");
      group_of[u] = gi;
    }
  }
  FlowGraph out;
  std::vector<std::size_t> map(g.size(), kUnset);
  std::vector<std::size_t> group_index(groups.size(), kUnset);
  for (std::size_t u = 0; u < g.size(); ++u) {
    if (group_of[u] == kUnset) {
      map[u] = out.add_node(g.members(u));
      continue;
    }
    const std::size_t gi = group_of[u];
    if (group_index[gi] == kUnset) {
      std::vector<NodeId> merged;
      for (std::size_t w : groups[gi]) merged.insert(merged.end(), g.members(w).begin(), g.members(w).end());
      group_index[gi] = out.add_node(std::move(merged));
    }
    map[u] = group_index[gi];
  }
  for (std::size_t u = 0; u < g.size(); ++u)
    for (const auto& [v, cap] : g.out_arcs(u)) out.add_arc(map[u], map[v], cap);
  if (image) *image = std::move(map);
  return out;
}

inline FlowGraph contract(const FlowGraph& g, std::span<const std::size_t> group) {
  if (group.empty()) throw std::invalid_argument("contract: empty group");
  return contract_groups(g, {std::vector<std::size_t>(group.begin(), group.end())});
}

}  // namespace vcdn
