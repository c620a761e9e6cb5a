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

#include "vcdn/flow.hpp"
#include "vcdn/model.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

namespace vcdn {

struct TreeEdge {
  NodeId a;
  NodeId b;
  Capacity capacity = 0;

  friend bool operator==(const TreeEdge&, const TreeEdge&) = default;
};

/// Weighted spanning tree whose path bottlenecks equal the all-pairs minimum
/// cuts of the graph it was built from. Immutable once constructed.
class GomoryHuTree {
 public:
  GomoryHuTree(std::vector<NodeId> nodes, std::vector<TreeEdge> edges) : nodes_(std::move(nodes)), edges_(std::move(edges)) {
    std::sort(nodes_.begin(), nodes_.end());
    for (auto& e : edges_)
      if (e.b < e.a) std::swap(e.a, e.b);
    std::sort(edges_.begin(), edges_.end(), [](const TreeEdge& x, const TreeEdge& y) {
      return std::pair(x.a, x.b) < std::pair(y.a, y.b);
    });
    if (nodes_.empty()) throw std::invalid_argument("GomoryHuTree: no nodes");
    if (edges_.size() != nodes_.size() - 1) throw std::invalid_argument("GomoryHuTree: need exactly |V|-1 edges");
    for (std::size_t i = 0; i < nodes_.size(); ++i) index_[nodes_[i]] = i;
    adjacency_.assign(nodes_.size(), {});
    for (std::size_t e = 0; e < edges_.size(); ++e) {
      adjacency_[index(edges_[e].a)].push_back(e);
      adjacency_[index(edges_[e].b)].push_back(e);
    }
    root();
  }

  const std::vector<NodeId>& nodes() const { return nodes_; }
  const std::vector<TreeEdge>& edges() const { return edges_; }
  bool contains(NodeId id) const { return index_.contains(id); }

  /// Edge indices incident to a node.
  const std::vector<std::size_t>& incident(NodeId id) const { return adjacency_[index(id)]; }

  /// The unique simple path from `from` to `to`, each edge oriented along the walk.
  std::vector<TreeEdge> path(NodeId from, NodeId to) const {
    std::size_t u = index(from), v = index(to);
    std::vector<TreeEdge> head, tail;
    while (depth_[u] > depth_[v]) {
      head.push_back(step_up(u));
      u = parent_[u];
    }
    while (depth_[v] > depth_[u]) {
      tail.push_back(step_up(v));
      v = parent_[v];
    }
    while (u != v) {
      head.push_back(step_up(u));
      tail.push_back(step_up(v));
      u = parent_[u];
      v = parent_[v];
    }
    for (auto it = tail.rbegin(); it != tail.rend(); ++it) head.push_back({it->b, it->a, it->capacity});
    return head;
  }

 private:
  std::size_t index(NodeId id) const {
    auto it = index_.find(id);
    if (it == index_.end()) throw std::out_of_range("GomoryHuTree: node " + std::to_string(id.value) + " absent");
    return it->second;
  }

  TreeEdge step_up(std::size_t u) const { return {nodes_[u], nodes_[parent_[u]], parent_cap_[u]}; }

  void root() {
    const std::size_t n = nodes_.size();
    parent_.assign(n, n);
    parent_cap_.assign(n, 0);
    depth_.assign(n, -1);
    std::deque<std::size_t> queue{0};
    depth_[0] = 0;
    std::size_t seen = 1;
    while (!queue.empty()) {
      const std::size_t u = queue.front();
      queue.pop_front();
      for (std::size_t e : adjacency_[u]) {
        const std::size_t w = index(edges_[e].a) == u ? index(edges_[e].b) : index(edges_[e].a);
        if (depth_[w] >= 0) continue;
        depth_[w] = depth_[u] + 1;
        parent_[w] = u;
        parent_cap_[w] = edges_[e].capacity;
        queue.push_back(w);
        ++seen;
      }
    }
    if (seen != n) throw std::invalid_argument("GomoryHuTree: edges do not span a tree");
  }

  std::vector<NodeId> nodes_;
  std::vector<TreeEdge> edges_;
  std::map<NodeId, std::size_t> index_;
  std::vector<std::vector<std::size_t>> adjacency_;
  std::vector<std::size_t> parent_;
  std::vector<Capacity> parent_cap_;
  std::vector<int> depth_;
};

struct GomoryHuStats {
  std::size_t steiner_cuts = 0;
};

/// Builds the Gomory-Hu tree by repeated set splitting. A FIFO queue holds the
/// tree's multi-node sets; each pulled set S is split by a minimum Steiner cut
/// of S in the graph where every subtree hanging off S is contracted to one
/// node. S is replaced by its two parts joined by an edge of the cut's
/// capacity, and the hanging subtrees follow the side their contracted node
/// fell on. Parts with more than one node are queued again.
inline GomoryHuTree gomory_hu(const FlowGraph& g, GomoryHuStats* stats = nullptr) {
  const std::size_t n = g.size();
  if (n == 0) throw std::invalid_argument("gomory_hu: empty graph");
  {
    std::vector<std::vector<std::size_t>> undirected(n);
    for (std::size_t u = 0; u < n; ++u)
      for (const auto& [v, cap] : g.out_arcs(u)) {
        undirected[u].push_back(v);
        undirected[v].push_back(u);
      }
    std::vector<bool> seen(n, false);
    std::vector<std::size_t> stack{0};
    seen[0] = true;
    std::size_t count = 1;
    while (!stack.empty()) {
      const std::size_t u = stack.back();
      stack.pop_back();
      for (std::size_t w : undirected[u])
        if (!seen[w]) {
          seen[w] = true;
          ++count;
          stack.push_back(w);
        }
    }
    if (count != n) throw std::invalid_argument("gomory_hu: graph is disconnected");
  }

  struct SetEdge {
    std::size_t u, v;
    Capacity capacity;
  };
  std::vector<std::vector<std::size_t>> sets(1);
  for (std::size_t i = 0; i < n; ++i) sets[0].push_back(i);
  std::vector<SetEdge> set_edges;
  std::deque<std::size_t> queue;
  if (n > 1) queue.push_back(0);

  while (!queue.empty()) {
    const std::size_t s = queue.front();
    queue.pop_front();

    // One contraction group per subtree hanging off s.
    std::vector<std::size_t> hanging;  // indices into set_edges
    std::vector<std::vector<std::size_t>> groups;
    for (std::size_t e = 0; e < set_edges.size(); ++e) {
      if (set_edges[e].u != s && set_edges[e].v != s) continue;
      const std::size_t start = set_edges[e].u == s ? set_edges[e].v : set_edges[e].u;
      std::vector<std::size_t> group;
      std::vector<std::size_t> frontier{start};
      std::vector<bool> visited(sets.size(), false);
      visited[s] = visited[start] = true;
      while (!frontier.empty()) {
        const std::size_t cur = frontier.back();
        frontier.pop_back();
        group.insert(group.end(), sets[cur].begin(), sets[cur].end());
        for (const auto& se : set_edges) {
          std::size_t other = sets.size();
          if (se.u == cur) other = se.v;
          if (se.v == cur) other = se.u;
          if (other < sets.size() && !visited[other]) {
            visited[other] = true;
            frontier.push_back(other);
          }
        }
      }
      hanging.push_back(e);
      groups.push_back(std::move(group));
    }

    std::vector<std::size_t> image;
    const FlowGraph contracted = contract_groups(g, groups, &image);
    std::vector<std::size_t> terminals;
    for (std::size_t u : sets[s]) terminals.push_back(image[u]);
    const SteinerCut split = min_steiner_cut(contracted, terminals);
    if (stats) ++stats->steiner_cuts;

    std::vector<bool> in_a(contracted.size(), false);
    for (std::size_t u : split.cut.side_a) in_a[u] = true;
    std::vector<std::size_t> part_a, part_b;
    for (std::size_t u : sets[s]) (in_a[image[u]] ? part_a : part_b).push_back(u);

    const std::size_t t = sets.size();
    sets[s] = std::move(part_a);
    sets.push_back(std::move(part_b));
    for (std::size_t h = 0; h < hanging.size(); ++h) {
      if (in_a[image[groups[h].front()]]) continue;
      SetEdge& se = set_edges[hanging[h]];
      (se.u == s ? se.u : se.v) = t;
    }
    set_edges.push_back({s, t, split.cut.capacity});
    if (sets[s].size() > 1) queue.push_back(s);
    if (sets[t].size() > 1) queue.push_back(t);
  }

  std::vector<NodeId> nodes;
  for (std::size_t i = 0; i < n; ++i) nodes.push_back(g.label(i));
  std::vector<TreeEdge> edges;
  for (const auto& se : set_edges) edges.push_back({g.label(sets[se.u].front()), g.label(sets[se.v].front()), se.capacity});
  return GomoryHuTree(std::move(nodes), std::move(edges));
}

/// Minimum edge capacity on the tree path between a and b.
inline Capacity tree_min_cut(const GomoryHuTree& t, NodeId a, NodeId b) {
  if (a == b) throw std::invalid_argument("tree_min_cut: endpoints coincide");
  const auto p = t.path(a, b);
  return std::min_element(p.begin(), p.end(), [](const TreeEdge& x, const TreeEdge& y) {
           return x.capacity < y.capacity;
         })->capacity;
}

inline std::vector<TreeEdge> tree_path(const GomoryHuTree& t, NodeId a, NodeId b) {
  if (a == b) throw std::invalid_argument("tree_path: endpoints coincide");
  return t.path(a, b);
}

/// Undirected view of a scenario: each node pair carries L(i,j) + L(j,i), in
/// thousandths of a Mbps.
inline FlowGraph undirected_flow_graph(const Scenario& s) {
  FlowGraph g(s.nodes());
  std::map<std::pair<std::size_t, std::size_t>, Capacity> sums;
  for (const auto& l : s.links()) {
    std::size_t a = s.index_of(l.from), b = s.index_of(l.to);
    if (b < a) std::swap(a, b);
    sums[{a, b}] += l.capacity.milli();
  }
  for (const auto& [key, cap] : sums) g.add_edge(key.first, key.second, cap);
  return g;
}

/// One "a b capacity" line per edge, capacity in Mbps.
inline void write_edge_list(std::ostream& os, const GomoryHuTree& t) {
  for (const auto& e : t.edges()) os << e.a << ' ' << e.b << ' ' << Quantity::from_milli(e.capacity) << '\n';
}

}  // namespace vcdn
