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
#include <cstddef>
#include <deque>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace vcdn {

/// Raised for any malformed or inconsistent problem instance.
class ScenarioError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Directed link; capacity in Mbps from `from` to `to`.
struct Link {
  NodeId from;
  NodeId to;
  Quantity capacity;

  friend bool operator==(const Link&, const Link&) = default;
};

struct ServerSpec {
  NodeId node;
  Quantity storage;  // GB
  Quantity stream;   // Mbps

  friend bool operator==(const ServerSpec&, const ServerSpec&) = default;
};

/// A client group and the server it is initially attached to. When the
/// attachment is left empty the nearest server (by hops, then id) is used.
struct ClientGroup {
  NodeId node;
  std::optional<NodeId> attachment;

  friend bool operator==(const ClientGroup&, const ClientGroup&) = default;
};

struct Vcdn {
  VcdnId id;
  Quantity size;  // GB, vRAM/vCPU/vDISK footprint collapsed to one scalar
  NodeId origin;

  friend bool operator==(const Vcdn&, const Vcdn&) = default;
};

struct Demand {
  NodeId client;
  VcdnId vcdn;
  Quantity throughput;  // Mbps

  friend bool operator==(const Demand&, const Demand&) = default;
};

enum class CostMode { HopDistanceTimesSize, ExplicitMatrix };

/// Cost of placing vCDN f on server s. The default charges the vCDN size
/// times the hop distance from its origin, so keeping f at home is free.
struct MigrationCostPolicy {
  CostMode mode = CostMode::HopDistanceTimesSize;
  std::map<std::pair<NodeId, VcdnId>, Quantity> explicit_costs;

  friend bool operator==(const MigrationCostPolicy&, const MigrationCostPolicy&) = default;
};

/// Immutable, validated problem instance. All lookups are by handle; dense
/// indices are an internal detail of the solvers.
class Scenario {
 public:
  static constexpr int kUnreachable = -1;

  Scenario(std::vector<NodeId> nodes, std::vector<Link> links, std::vector<ServerSpec> servers,
           std::vector<ClientGroup> client_groups, std::vector<Vcdn> vcdns,
           std::vector<Demand> demands, MigrationCostPolicy cost_policy = {})
      : nodes_(std::move(nodes)),
        links_(std::move(links)),
        servers_(std::move(servers)),
        clients_(std::move(client_groups)),
        vcdns_(std::move(vcdns)),
        demands_(std::move(demands)),
        policy_(std::move(cost_policy)) {
    canonicalize();
    build_indices();
    validate();
    resolve_attachments();
  }

  const std::vector<NodeId>& nodes() const { return nodes_; }
  const std::vector<Link>& links() const { return links_; }
  const std::vector<ServerSpec>& servers() const { return servers_; }
  const std::vector<ClientGroup>& client_groups() const { return clients_; }
  const std::vector<Vcdn>& vcdns() const { return vcdns_; }
  const std::vector<Demand>& demands() const { return demands_; }
  const MigrationCostPolicy& cost_policy() const { return policy_; }

  std::size_t node_count() const { return nodes_.size(); }
  bool has_node(NodeId id) const { return index_.contains(id); }

  std::size_t index_of(NodeId id) const {
    auto it = index_.find(id);
    if (it == index_.end()) throw ScenarioError("unknown node " + std::to_string(id.value));
    return it->second;
  }

  bool is_server(NodeId id) const { return server_pos_.contains(id); }
  bool is_client(NodeId id) const { return client_pos_.contains(id); }
  bool has_vcdn(VcdnId id) const { return vcdn_pos_.contains(id); }

  const ServerSpec& server(NodeId id) const {
    auto it = server_pos_.find(id);
    if (it == server_pos_.end()) throw ScenarioError("node " + std::to_string(id.value) + " is not a server");
    return servers_[it->second];
  }

  const Vcdn& vcdn(VcdnId id) const {
    auto it = vcdn_pos_.find(id);
    if (it == vcdn_pos_.end()) throw ScenarioError("unknown vcdn " + std::to_string(id.value));
    return vcdns_[it->second];
  }

  NodeId attachment(NodeId client) const {
    auto it = client_pos_.find(client);
    if (it == client_pos_.end()) throw ScenarioError("node " + std::to_string(client.value) + " is not a client group");
    return *clients_[it->second].attachment;
  }

  std::optional<Quantity> link_capacity(NodeId from, NodeId to) const {
    auto it = link_pos_.find({from, to});
    if (it == link_pos_.end()) return std::nullopt;
    return links_[it->second].capacity;
  }

  /// Outgoing neighbours of a node, ascending by id.
  const std::vector<NodeId>& successors(NodeId id) const { return successors_[index_of(id)]; }

  /// Directed hop count, or kUnreachable.
  int hops(NodeId from, NodeId to) const { return hops_[index_of(from) * nodes_.size() + index_of(to)]; }

  Quantity migration_cost(NodeId server_id, VcdnId f) const {
    const Vcdn& v = vcdn(f);
    if (!is_server(server_id)) throw ScenarioError("node " + std::to_string(server_id.value) + " is not a server");
    if (policy_.mode == CostMode::ExplicitMatrix) return policy_.explicit_costs.at({server_id, f});
    return v.size * hops(v.origin, server_id);
  }

  /// Demand d^f_v, zero if the pair was never listed.
  Quantity demand(NodeId client, VcdnId f) const {
    auto it = demand_pos_.find({client, f});
    return it == demand_pos_.end() ? Quantity{} : demands_[it->second].throughput;
  }

  /// Restricts the catalog to the first `count` vCDNs (ascending id) and
  /// drops demands and explicit costs that referenced the rest.
  Scenario with_vcdn_prefix(std::size_t count) const {
    std::vector<Vcdn> kept(vcdns_.begin(), vcdns_.begin() + std::min(count, vcdns_.size()));
    std::set<VcdnId> ids;
    for (const auto& v : kept) ids.insert(v.id);
    std::vector<Demand> demands;
    for (const auto& d : demands_)
      if (ids.contains(d.vcdn)) demands.push_back(d);
    MigrationCostPolicy policy = policy_;
    std::erase_if(policy.explicit_costs, [&](const auto& kv) { return !ids.contains(kv.first.second); });
    return Scenario(nodes_, links_, servers_, clients_, std::move(kept), std::move(demands), std::move(policy));
  }

  friend bool operator==(const Scenario& a, const Scenario& b) {
    return a.nodes_ == b.nodes_ && a.links_ == b.links_ && a.servers_ == b.servers_ &&
           a.clients_ == b.clients_ && a.vcdns_ == b.vcdns_ && a.demands_ == b.demands_ &&
           a.policy_ == b.policy_;
  }

 private:
  void canonicalize() {
    std::sort(nodes_.begin(), nodes_.end());
    auto by_link = [](const Link& a, const Link& b) { return std::pair(a.from, a.to) < std::pair(b.from, b.to); };
    std::sort(links_.begin(), links_.end(), by_link);
    std::sort(servers_.begin(), servers_.end(), [](const auto& a, const auto& b) { return a.node < b.node; });
    std::sort(clients_.begin(), clients_.end(), [](const auto& a, const auto& b) { return a.node < b.node; });
    std::sort(vcdns_.begin(), vcdns_.end(), [](const auto& a, const auto& b) { return a.id < b.id; });
    std::sort(demands_.begin(), demands_.end(), [](const Demand& a, const Demand& b) {
      return std::pair(a.client, a.vcdn) < std::pair(b.client, b.vcdn);
    });
  }

  void build_indices() {
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
      if (!index_.emplace(nodes_[i], i).second)
        throw ScenarioError("nodes: duplicate id " + std::to_string(nodes_[i].value));
    }
    for (std::size_t i = 0; i < servers_.size(); ++i) {
      if (!server_pos_.emplace(servers_[i].node, i).second)
        throw ScenarioError("servers: duplicate node " + std::to_string(servers_[i].node.value));
    }
    for (std::size_t i = 0; i < clients_.size(); ++i) {
      if (!client_pos_.emplace(clients_[i].node, i).second)
        throw ScenarioError("client_groups: duplicate node " + std::to_string(clients_[i].node.value));
    }
    for (std::size_t i = 0; i < vcdns_.size(); ++i) {
      if (!vcdn_pos_.emplace(vcdns_[i].id, i).second)
        throw ScenarioError("vcdns: duplicate id " + std::to_string(vcdns_[i].id.value));
    }
    for (std::size_t i = 0; i < links_.size(); ++i) {
      if (!link_pos_.emplace(std::pair(links_[i].from, links_[i].to), i).second)
        throw ScenarioError("links: duplicate link " + std::to_string(links_[i].from.value) + "->" +
                            std::to_string(links_[i].to.value));
    }
    for (std::size_t i = 0; i < demands_.size(); ++i) {
      if (!demand_pos_.emplace(std::pair(demands_[i].client, demands_[i].vcdn), i).second)
        throw ScenarioError("demands: duplicate (client " + std::to_string(demands_[i].client.value) +
                            ", vcdn " + std::to_string(demands_[i].vcdn.value) + ")");
    }
  }

  void validate() {
    auto node_name = [](NodeId id) { return std::to_string(id.value); };
    if (nodes_.empty()) throw ScenarioError("nodes: at least one node is required");
    for (NodeId id : nodes_) {
      const bool s = server_pos_.contains(id);
      const bool c = client_pos_.contains(id);
      if (s == c)
        throw ScenarioError("node " + node_name(id) + " must be exactly one of server or client group");
    }
    for (const auto& s : servers_) {
      if (!index_.contains(s.node)) throw ScenarioError("servers: dangling node " + node_name(s.node));
      if (s.storage < Quantity{}) throw ScenarioError("servers: negative storage_gb at " + node_name(s.node));
      if (s.stream < Quantity{}) throw ScenarioError("servers: negative stream_mbps at " + node_name(s.node));
    }
    for (const auto& c : clients_) {
      if (!index_.contains(c.node)) throw ScenarioError("client_groups: dangling node " + node_name(c.node));
      if (c.attachment && !server_pos_.contains(*c.attachment))
        throw ScenarioError("client_groups: attachment of " + node_name(c.node) + " is not a server");
    }
    for (const auto& l : links_) {
      if (!index_.contains(l.from) || !index_.contains(l.to))
        throw ScenarioError("links: dangling endpoint in " + node_name(l.from) + "->" + node_name(l.to));
      if (l.from == l.to) throw ScenarioError("links: self-loop at " + node_name(l.from));
      if (l.capacity < Quantity{}) throw ScenarioError("links: negative capacity_mbps");
    }
    for (const auto& v : vcdns_) {
      if (v.size <= Quantity{}) throw ScenarioError("vcdns: size_gb of " + std::to_string(v.id.value) + " must be positive");
      if (!server_pos_.contains(v.origin))
        throw ScenarioError("vcdns: origin of " + std::to_string(v.id.value) + " is not a server");
    }
    for (const auto& d : demands_) {
      if (!client_pos_.contains(d.client)) throw ScenarioError("demands: dangling client " + node_name(d.client));
      if (!vcdn_pos_.contains(d.vcdn)) throw ScenarioError("demands: dangling vcdn " + std::to_string(d.vcdn.value));
      if (d.throughput < Quantity{}) throw ScenarioError("demands: negative mbps");
    }
    if (!index_graph_connected()) throw ScenarioError("graph is not connected");
    if (policy_.mode == CostMode::ExplicitMatrix) {
      for (const auto& [key, cost] : policy_.explicit_costs) {
        if (!server_pos_.contains(key.first) || !vcdn_pos_.contains(key.second))
          throw ScenarioError("cost_policy: dangling entry (" + node_name(key.first) + ", " +
                              std::to_string(key.second.value) + ")");
        if (cost < Quantity{}) throw ScenarioError("cost_policy: negative cost");
      }
      for (const auto& s : servers_) {
        for (const auto& v : vcdns_) {
          auto it = policy_.explicit_costs.find({s.node, v.id});
          if (it == policy_.explicit_costs.end())
            throw ScenarioError("cost_policy: missing entry (" + node_name(s.node) + ", " + std::to_string(v.id.value) + ")");
          if (s.node == v.origin && it->second != Quantity{})
            throw ScenarioError("cost_policy: cost at origin of vcdn " + std::to_string(v.id.value) + " must be 0");
        }
      }
    } else {
      if (!policy_.explicit_costs.empty()) throw ScenarioError("cost_policy: entries given in hop-distance mode");
      for (const auto& v : vcdns_)
        for (const auto& s : servers_)
          if (hops(v.origin, s.node) == kUnreachable)
            throw ScenarioError("server " + node_name(s.node) + " unreachable from origin of vcdn " +
                                std::to_string(v.id.value));
    }
  }

  bool index_graph_connected() {
    const std::size_t n = nodes_.size();
    successors_.assign(n, {});
    std::vector<std::vector<std::size_t>> undirected(n);
    for (const auto& l : links_) {
      const std::size_t a = index_.at(l.from), b = index_.at(l.to);
      successors_[a].push_back(l.to);
      undirected[a].push_back(b);
      undirected[b].push_back(a);
    }
    for (auto& s : successors_) std::sort(s.begin(), s.end());
    hops_.assign(n * n, kUnreachable);
    for (std::size_t src = 0; src < n; ++src) {
      int* row = &hops_[src * n];
      std::deque<std::size_t> queue{src};
      row[src] = 0;
      while (!queue.empty()) {
        const std::size_t u = queue.front();
        queue.pop_front();
        for (NodeId w : successors_[u]) {
          const std::size_t wi = index_.at(w);
          if (row[wi] == kUnreachable) {
            row[wi] = row[u] + 1;
            queue.push_back(wi);
          }
        }
      }
    }
    std::vector<bool> seen(n, false);
    std::vector<std::size_t> stack{0};
    seen[0] = true;
    std::size_t count = 1;
    while (!stack.empty()) {
      const std::size_t u = stack.back();
      stack.pop_back();
      for (std::size_t w : undirected[u]) {
        if (!seen[w]) {
          seen[w] = true;
          ++count;
          stack.push_back(w);
        }
      }
    }
    return count == n;
  }

  void resolve_attachments() {
    for (auto& c : clients_) {
      if (c.attachment) continue;
      std::optional<NodeId> best;
      int best_hops = 0;
      for (const auto& s : servers_) {
        int h = hops(c.node, s.node);
        if (h == kUnreachable) h = hops(s.node, c.node);
        if (h == kUnreachable) continue;
        if (!best || h < best_hops) {
          best = s.node;
          best_hops = h;
        }
      }
      if (!best) throw ScenarioError("client group " + std::to_string(c.node.value) + " has no reachable server");
      c.attachment = best;
    }
  }

  std::vector<NodeId> nodes_;
  std::vector<Link> links_;
  std::vector<ServerSpec> servers_;
  std::vector<ClientGroup> clients_;
  std::vector<Vcdn> vcdns_;
  std::vector<Demand> demands_;
  MigrationCostPolicy policy_;

  std::map<NodeId, std::size_t> index_;
  std::map<NodeId, std::size_t> server_pos_;
  std::map<NodeId, std::size_t> client_pos_;
  std::map<VcdnId, std::size_t> vcdn_pos_;
  std::map<std::pair<NodeId, NodeId>, std::size_t> link_pos_;
  std::map<std::pair<NodeId, VcdnId>, std::size_t> demand_pos_;
  std::vector<std::vector<NodeId>> successors_;
  std::vector<int> hops_;
};

/// Warns about instances that are infeasible on their face. Never throws.
inline std::vector<std::string> validate_solution_inputs(const Scenario& s) {
  std::vector<std::string> warnings;
  Quantity total_demand, total_stream, max_stream;
  for (const auto& sv : s.servers()) {
    total_stream += sv.stream;
    max_stream = std::max(max_stream, sv.stream);
  }
  for (const auto& d : s.demands()) total_demand += d.throughput;
  if (total_demand > total_stream) {
    warnings.push_back("total demand " + total_demand.to_string() + " Mbps exceeds total stream capacity " +
                       total_stream.to_string() + " Mbps");
  }
  for (const auto& d : s.demands()) {
    if (d.throughput > max_stream) {
      warnings.push_back("demand unsatisfiable: client " + std::to_string(d.client.value) + " vcdn " +
                         std::to_string(d.vcdn.value) + " needs " + d.throughput.to_string() +
                         " Mbps, above every server's stream capacity");
    }
  }
  return warnings;
}

}  // namespace vcdn
