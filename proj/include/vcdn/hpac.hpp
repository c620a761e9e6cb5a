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

// Gomory-Hu based placement heuristic.
//
// The operator graph is collapsed to its Gomory-Hu tree, so every client has a
// unique path to every server. Demands are served one at a time, largest
// first. For each demand the path from the client to a current host of the
// vCDN is explored; where capacity runs out along the way (the rupture), the
// vCDN is replicated, or moved, to the node nearest the host from which the
// rest of the path to the client still carries the demand. Capacities are
// tracked as residuals on tree edges and on server stream/storage budgets.

#pragma once

#include "vcdn/ghtree.hpp"
#include "vcdn/solution.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace vcdn {

enum class MigrationMode { Replicate, Move };

struct HpacOptions {
  MigrationMode mode = MigrationMode::Replicate;
};

/// A tree path from the client end to a hosting server.
struct PathReport {
  std::vector<TreeEdge> path;  // path.front().a is the client end, path.back().b the host
  Capacity bottleneck = 0;
  std::size_t bottleneck_edge = 0;

  NodeId client_end() const { return path.front().a; }
  NodeId host() const { return path.back().b; }
};

inline PathReport explore_path(const GomoryHuTree& t, NodeId from, NodeId host) {
  PathReport report;
  report.path = tree_path(t, from, host);
  report.bottleneck = std::numeric_limits<Capacity>::max();
  for (std::size_t i = 0; i < report.path.size(); ++i)
    if (report.path[i].capacity < report.bottleneck) {
      report.bottleneck = report.path[i].capacity;
      report.bottleneck_edge = i;
    }
  return report;
}

/// Remaining capacity of tree edges and servers during one heuristic run.
/// Servers start with their origin catalog already stored.
class ResidualState {
 public:
  ResidualState(const Scenario& s, const GomoryHuTree& t) : s_(&s) {
    for (const auto& e : t.edges()) edges_[key(e.a, e.b)] = e.capacity;
    for (const auto& sv : s.servers()) {
      stream_[sv.node] = sv.stream;
      storage_[sv.node] = sv.storage;
    }
    for (const auto& v : s.vcdns()) {
      held_.insert({v.origin, v.id});
      storage_[v.origin] -= v.size;
    }
  }

  Capacity edge(NodeId a, NodeId b) const { return edges_.at(key(a, b)); }
  void consume_edge(NodeId a, NodeId b, Capacity amount) { edges_.at(key(a, b)) -= amount; }

  bool is_server(NodeId id) const { return stream_.contains(id); }
  Quantity stream(NodeId id) const { return stream_.at(id); }
  Quantity storage(NodeId id) const { return storage_.at(id); }
  bool holds(NodeId id, VcdnId f) const { return held_.contains({id, f}); }
  const std::set<Placement>& holdings() const { return held_; }

  /// A server can take on this stream of f if its stream budget covers the
  /// demand and f is already stored there or fits in the remaining storage.
  bool admits(NodeId id, VcdnId f, Quantity demand) const {
    if (!is_server(id) || stream_.at(id) < demand) return false;
    return holds(id, f) || storage_.at(id) >= s_->vcdn(f).size;
  }

  void place(NodeId id, VcdnId f) {
    if (held_.insert({id, f}).second) storage_.at(id) -= s_->vcdn(f).size;
  }
  void remove(NodeId id, VcdnId f) {
    if (held_.erase({id, f})) storage_.at(id) += s_->vcdn(f).size;
  }
  void consume_stream(NodeId id, Quantity amount) { stream_.at(id) -= amount; }

  Capacity bottleneck(const std::vector<TreeEdge>& path) const {
    Capacity b = std::numeric_limits<Capacity>::max();
    for (const auto& e : path) b = std::min(b, edge(e.a, e.b));
    return b;
  }

 private:
  static std::pair<NodeId, NodeId> key(NodeId a, NodeId b) { return a < b ? std::pair(a, b) : std::pair(b, a); }

  const Scenario* s_;
  std::map<std::pair<NodeId, NodeId>, Capacity> edges_;
  std::map<NodeId, Quantity> stream_;
  std::map<NodeId, Quantity> storage_;
  std::set<Placement> held_;
};

/// Walks from the host toward the client and returns the first server u such
/// that every edge between u and the client has residual >= demand and u can
/// host f. Returns the host itself when nothing is short.
inline std::optional<NodeId> find_rupture_node(const PathReport& p, Quantity demand, const ResidualState& res, VcdnId f) {
  // Node i of the path is path[i].a (i < size) or the host (i == size).
  const std::size_t k = p.path.size();
  std::vector<Capacity> prefix_min(k + 1, std::numeric_limits<Capacity>::max());
  for (std::size_t i = 0; i < k; ++i)
    prefix_min[i + 1] = std::min(prefix_min[i], res.edge(p.path[i].a, p.path[i].b));
  for (std::size_t i = k; i >= 1; --i) {
    const NodeId u = i == k ? p.host() : p.path[i].a;
    if (prefix_min[i] >= demand.milli() && res.admits(u, f, demand)) return u;
  }
  return std::nullopt;
}

enum class HpacStatus { Solved, Infeasible };

struct HpacResult {
  GomoryHuTree tree;
  GomoryHuStats tree_stats;
  HpacStatus status = HpacStatus::Solved;
  std::string message;
  PlacementSolution solution;  // tree semantics; partial when infeasible
};

inline HpacResult hpac_solve(const Scenario& s, const HpacOptions& options = {}) {
  GomoryHuStats stats;
  HpacResult result{gomory_hu(undirected_flow_graph(s), &stats), stats, HpacStatus::Solved, {}, {}};
  const GomoryHuTree& tree = result.tree;
  PlacementSolution& sol = result.solution;
  sol.semantics = RoutingSemantics::Tree;

  ResidualState res(s, tree);
  for (const auto& sv : s.servers()) {
    if (res.storage(sv.node) < Quantity{}) {
      result.status = HpacStatus::Infeasible;
      result.message = "origin catalog overflows storage of server " + std::to_string(sv.node.value);
      return result;
    }
  }

  std::vector<Demand> order;
  for (const auto& d : s.demands())
    if (d.throughput > Quantity{}) order.push_back(d);
  std::stable_sort(order.begin(), order.end(), [](const Demand& a, const Demand& b) {
    if (a.throughput != b.throughput) return a.throughput > b.throughput;
    return std::pair(a.client, a.vcdn) < std::pair(b.client, b.vcdn);
  });

  std::map<Placement, int> serving;
  for (const auto& d : order) {
    struct Candidate {
      Capacity bottleneck;
      std::size_t hops;
      NodeId host;
      PathReport report;
    };
    std::vector<Candidate> hosts;
    for (const auto& p : res.holdings()) {
      if (p.vcdn != d.vcdn) continue;
      PathReport report = explore_path(tree, d.client, p.server);
      hosts.push_back({res.bottleneck(report.path), report.path.size(), p.server, std::move(report)});
    }
    std::sort(hosts.begin(), hosts.end(), [](const Candidate& a, const Candidate& b) {
      if (a.bottleneck != b.bottleneck) return a.bottleneck > b.bottleneck;
      if (a.hops != b.hops) return a.hops < b.hops;
      return a.host < b.host;
    });

    std::optional<NodeId> target;
    std::optional<NodeId> source;
    std::vector<TreeEdge> client_to_target;
    for (const auto& c : hosts) {
      if (auto u = find_rupture_node(c.report, d.throughput, res, d.vcdn)) {
        target = u;
        source = c.host;
        for (const auto& e : c.report.path) {
          if (e.a == *u) break;
          client_to_target.push_back(e);
        }
        break;
      }
    }
    if (!target) {
      const NodeId attach = s.attachment(d.client);
      auto path = tree_path(tree, d.client, attach);
      if (res.bottleneck(path) >= d.throughput.milli() && res.admits(attach, d.vcdn, d.throughput)) {
        target = attach;
        client_to_target = std::move(path);
        if (!hosts.empty()) source = hosts.front().host;
      }
    }
    if (!target) {
      result.status = HpacStatus::Infeasible;
      result.message = "no host can serve client " + std::to_string(d.client.value) + " vcdn " +
                       std::to_string(d.vcdn.value) + " at " + d.throughput.to_string() + " Mbps";
      break;
    }

    std::vector<DirectedEdge> route;
    for (auto it = client_to_target.rbegin(); it != client_to_target.rend(); ++it) {
      res.consume_edge(it->a, it->b, d.throughput.milli());
      route.push_back({it->b, it->a});
    }
    res.consume_stream(*target, d.throughput);
    if (!res.holds(*target, d.vcdn)) {
      res.place(*target, d.vcdn);
      if (options.mode == MigrationMode::Move && source && serving[{*source, d.vcdn}] == 0)
        res.remove(*source, d.vcdn);
    }
    ++serving[{*target, d.vcdn}];
    sol.y.insert({*target, d.client, d.vcdn});
    sol.z[{d.client, d.vcdn}] = std::move(route);
  }

  sol.x = res.holdings();
  for (const auto& p : sol.x) {
    const NodeId origin = s.vcdn(p.vcdn).origin;
    if (p.server == origin) continue;
    MigrationPath mp;
    for (const auto& e : tree_path(tree, origin, p.server)) {
      mp.edges.push_back({e.a, e.b});
      mp.capacities.push_back(e.capacity);
    }
    sol.migration_paths[p] = std::move(mp);
  }
  sol.objective = objective_value(s, sol);
  return result;
}

}  // namespace vcdn
