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

#include "vcdn/ghtree.hpp"
#include "vcdn/model.hpp"

#include <nlohmann/json.hpp>

#include <array>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace vcdn {

/// x^s_f = 1: vCDN f is hosted on server s.
struct Placement {
  NodeId server;
  VcdnId vcdn;
  friend auto operator<=>(const Placement&, const Placement&) = default;
};

/// y^s_{v,f} = 1: client group v is served f by server s.
struct Assignment {
  NodeId server;
  NodeId client;
  VcdnId vcdn;
  friend auto operator<=>(const Assignment&, const Assignment&) = default;
};

struct DemandKey {
  NodeId client;
  VcdnId vcdn;
  friend auto operator<=>(const DemandKey&, const DemandKey&) = default;
};

struct DirectedEdge {
  NodeId from;
  NodeId to;
  friend auto operator<=>(const DirectedEdge&, const DirectedEdge&) = default;
};

/// Path a vCDN image travels from its origin to a new host, with the capacity
/// (Mbps, thousandths) of each hop.
struct MigrationPath {
  std::vector<DirectedEdge> edges;
  std::vector<Capacity> capacities;
  friend bool operator==(const MigrationPath&, const MigrationPath&) = default;
};

/// Whether routing paths (z) run over scenario links or over Gomory-Hu tree edges.
enum class RoutingSemantics { Graph, Tree };

struct PlacementSolution {
  std::set<Placement> x;
  std::set<Assignment> y;
  std::map<DemandKey, std::vector<DirectedEdge>> z;  // ordered server -> client
  std::map<Placement, MigrationPath> migration_paths;  // one per non-origin placement
  Quantity objective;
  RoutingSemantics semantics = RoutingSemantics::Graph;

  friend bool operator==(const PlacementSolution&, const PlacementSolution&) = default;
};

/// The six constraint families of the placement model, in order: assignment
/// implies placement, single serving server, stream capacity, storage
/// capacity, flow conservation, link capacity.
enum class ConstraintFamily { PlacementCoversAssignment, SingleServer, StreamCapacity, StorageCapacity,
                              FlowConservation, LinkCapacity };

inline constexpr std::array<ConstraintFamily, 6> kAllFamilies = {
    ConstraintFamily::PlacementCoversAssignment, ConstraintFamily::SingleServer,
    ConstraintFamily::StreamCapacity,            ConstraintFamily::StorageCapacity,
    ConstraintFamily::FlowConservation,          ConstraintFamily::LinkCapacity};

inline const char* family_name(ConstraintFamily f) {
  switch (f) {
    case ConstraintFamily::PlacementCoversAssignment: return "placement-covers-assignment";
    case ConstraintFamily::SingleServer: return "single-server";
    case ConstraintFamily::StreamCapacity: return "stream-capacity";
    case ConstraintFamily::StorageCapacity: return "storage-capacity";
    case ConstraintFamily::FlowConservation: return "flow-conservation";
    case ConstraintFamily::LinkCapacity: return "link-capacity";
  }
  return "?";
}

struct FeasibilityReport {
  std::array<std::vector<std::string>, 6> violations;

  bool passed(ConstraintFamily f) const { return violations[static_cast<std::size_t>(f)].empty(); }
  bool feasible() const {
    for (const auto& v : violations)
      if (!v.empty()) return false;
    return true;
  }
  void flag(ConstraintFamily f, std::string what) { violations[static_cast<std::size_t>(f)].push_back(std::move(what)); }

  /// Names of the violated families joined by '+', or "ok".
  std::string failed_families() const {
    std::string out;
    for (auto f : kAllFamilies)
      if (!passed(f)) out += (out.empty() ? "" : "+") + std::string(family_name(f));
    return out.empty() ? "ok" : out;
  }
};

namespace audit_detail {

inline std::string key_name(NodeId client, VcdnId f) {
  return "(client " + std::to_string(client.value) + ", vcdn " + std::to_string(f.value) + ")";
}

inline void check_references(const Scenario& s, const PlacementSolution& sol) {
  auto fail = [](const std::string& what) { throw ScenarioError("solution references " + what); };
  for (const auto& p : sol.x) {
    if (!s.is_server(p.server)) fail("non-server " + std::to_string(p.server.value) + " in x");
    if (!s.has_vcdn(p.vcdn)) fail("unknown vcdn " + std::to_string(p.vcdn.value) + " in x");
  }
  for (const auto& a : sol.y) {
    if (!s.is_server(a.server)) fail("non-server " + std::to_string(a.server.value) + " in y");
    if (!s.is_client(a.client)) fail("non-client " + std::to_string(a.client.value) + " in y");
    if (!s.has_vcdn(a.vcdn)) fail("unknown vcdn " + std::to_string(a.vcdn.value) + " in y");
  }
  for (const auto& [key, path] : sol.z) {
    if (!s.is_client(key.client) || !s.has_vcdn(key.vcdn)) fail("unknown demand " + key_name(key.client, key.vcdn) + " in z");
    for (const auto& e : path)
      if (!s.has_node(e.from) || !s.has_node(e.to)) fail("unknown node in z path");
  }
}

/// Families 3-6 do not depend on routing semantics.
inline void audit_placement(const Scenario& s, const PlacementSolution& sol, FeasibilityReport& report) {
  for (const auto& a : sol.y)
    if (!sol.x.contains({a.server, a.vcdn}))
      report.flag(ConstraintFamily::PlacementCoversAssignment,
                  "y(server " + std::to_string(a.server.value) + ", client " + std::to_string(a.client.value) +
                      ", vcdn " + std::to_string(a.vcdn.value) + ") = 1 but x = 0");

  for (const auto& d : s.demands()) {
    if (d.throughput == Quantity{}) continue;
    int serving = 0;
    for (const auto& sv : s.servers()) serving += sol.y.contains({sv.node, d.client, d.vcdn}) ? 1 : 0;
    if (serving != 1)
      report.flag(ConstraintFamily::SingleServer,
                  key_name(d.client, d.vcdn) + " served by " + std::to_string(serving) + " servers");
  }

  std::map<NodeId, Quantity> streamed, stored;
  for (const auto& a : sol.y) streamed[a.server] += s.demand(a.client, a.vcdn);
  for (const auto& p : sol.x) stored[p.server] += s.vcdn(p.vcdn).size;
  for (const auto& sv : s.servers()) {
    if (streamed[sv.node] > sv.stream)
      report.flag(ConstraintFamily::StreamCapacity, "server " + std::to_string(sv.node.value) + " streams " +
                                                        streamed[sv.node].to_string() + " > " + sv.stream.to_string());
    if (stored[sv.node] > sv.storage)
      report.flag(ConstraintFamily::StorageCapacity, "server " + std::to_string(sv.node.value) + " stores " +
                                                         stored[sv.node].to_string() + " > " + sv.storage.to_string());
  }
}

/// Conservation: net outflow is y^i_{v,f} at servers, -1 at the client v, 0
/// elsewhere. z is binary, so a repeated edge counts once.
inline void audit_conservation(const Scenario& s, const PlacementSolution& sol, FeasibilityReport& report) {
  for (const auto& d : s.demands()) {
    if (d.throughput == Quantity{}) continue;
    std::map<NodeId, int> net;
    auto it = sol.z.find({d.client, d.vcdn});
    if (it != sol.z.end()) {
      const std::set<DirectedEdge> used(it->second.begin(), it->second.end());
      for (const auto& e : used) {
        ++net[e.from];
        --net[e.to];
      }
    }
    for (NodeId i : s.nodes()) {
      int expected = 0;
      if (i == d.client) expected = -1;
      else if (s.is_server(i)) expected = sol.y.contains({i, d.client, d.vcdn}) ? 1 : 0;
      if (net[i] != expected) {
        report.flag(ConstraintFamily::FlowConservation, key_name(d.client, d.vcdn) + " unbalanced at node " +
                                                            std::to_string(i.value));
        break;
      }
    }
  }
}

}  // namespace audit_detail

/// Evaluates every constraint family literally, with z over scenario links.
inline FeasibilityReport check_feasibility(const Scenario& s, const PlacementSolution& sol) {
  audit_detail::check_references(s, sol);
  FeasibilityReport report;
  audit_detail::audit_placement(s, sol, report);
  audit_detail::audit_conservation(s, sol, report);

  std::map<DirectedEdge, Quantity> load;
  for (const auto& [key, path] : sol.z) {
    const std::set<DirectedEdge> used(path.begin(), path.end());
    for (const auto& e : used) load[e] += s.demand(key.client, key.vcdn);
  }
  for (const auto& [e, amount] : load) {
    const Quantity cap = s.link_capacity(e.from, e.to).value_or(Quantity{});
    const bool exists = s.link_capacity(e.from, e.to).has_value();
    if (amount > cap || (!exists && amount > Quantity{}))
      report.flag(ConstraintFamily::LinkCapacity, "link " + std::to_string(e.from.value) + "->" +
                                                      std::to_string(e.to.value) + " carries " + amount.to_string() +
                                                      (exists ? " > " + cap.to_string() : " but does not exist"));
  }
  return report;
}

/// Same audit with z over Gomory-Hu tree edges: each undirected tree edge's
/// capacity bounds the total demand crossing it in either direction.
inline FeasibilityReport check_feasibility(const Scenario& s, const PlacementSolution& sol, const GomoryHuTree& tree) {
  audit_detail::check_references(s, sol);
  FeasibilityReport report;
  audit_detail::audit_placement(s, sol, report);
  audit_detail::audit_conservation(s, sol, report);

  std::map<std::pair<NodeId, NodeId>, Capacity> capacity;
  for (const auto& e : tree.edges()) capacity[{e.a, e.b}] = e.capacity;
  std::map<std::pair<NodeId, NodeId>, Capacity> load;
  for (const auto& [key, path] : sol.z) {
    const std::set<DirectedEdge> used(path.begin(), path.end());
    for (const auto& e : used) load[{std::min(e.from, e.to), std::max(e.from, e.to)}] += s.demand(key.client, key.vcdn).milli();
  }
  for (const auto& [edge, amount] : load) {
    auto it = capacity.find(edge);
    if (it == capacity.end() || amount > it->second)
      report.flag(ConstraintFamily::LinkCapacity,
                  "tree edge " + std::to_string(edge.first.value) + "-" + std::to_string(edge.second.value) +
                      " carries " + Quantity::from_milli(amount).to_string() +
                      (it == capacity.end() ? " but is not a tree edge"
                                            : " > " + Quantity::from_milli(it->second).to_string()));
  }
  return report;
}

/// Sum of x^s_f * m^s_f under the scenario's cost policy.
inline Quantity objective_value(const Scenario& s, const PlacementSolution& sol) {
  Quantity total;
  for (const auto& p : sol.x) total += s.migration_cost(p.server, p.vcdn);
  return total;
}

inline nlohmann::json solution_to_json(const PlacementSolution& sol) {
  using nlohmann::json;
  json doc;
  doc["semantics"] = sol.semantics == RoutingSemantics::Graph ? "graph" : "tree";
  doc["objective"] = sol.objective.to_double();
  json x = json::array();
  for (const auto& p : sol.x) x.push_back({{"server", p.server.value}, {"vcdn", p.vcdn.value}});
  doc["x"] = std::move(x);
  json y = json::array();
  for (const auto& a : sol.y) y.push_back({{"server", a.server.value}, {"client", a.client.value}, {"vcdn", a.vcdn.value}});
  doc["y"] = std::move(y);
  json z = json::array();
  for (const auto& [key, path] : sol.z) {
    json edges = json::array();
    for (const auto& e : path) edges.push_back({e.from.value, e.to.value});
    z.push_back({{"client", key.client.value}, {"vcdn", key.vcdn.value}, {"path", std::move(edges)}});
  }
  doc["z"] = std::move(z);
  json moves = json::array();
  for (const auto& [p, mp] : sol.migration_paths) {
    json edges = json::array();
    for (std::size_t i = 0; i < mp.edges.size(); ++i)
      edges.push_back({mp.edges[i].from.value, mp.edges[i].to.value, Quantity::from_milli(mp.capacities[i]).to_double()});
    moves.push_back({{"server", p.server.value}, {"vcdn", p.vcdn.value}, {"path", std::move(edges)}});
  }
  doc["migration_paths"] = std::move(moves);
  return doc;
}

inline PlacementSolution solution_from_json(const nlohmann::json& doc) {
  PlacementSolution sol;
  try {
    const auto sem = doc.at("semantics").get<std::string>();
    if (sem != "graph" && sem != "tree") throw ScenarioError("solution.semantics: unknown value " + sem);
    sol.semantics = sem == "graph" ? RoutingSemantics::Graph : RoutingSemantics::Tree;
    sol.objective = Quantity::from_double(doc.at("objective").get<double>());
    for (const auto& p : doc.at("x")) sol.x.insert({NodeId{p.at("server").get<int>()}, VcdnId{p.at("vcdn").get<int>()}});
    for (const auto& a : doc.at("y"))
      sol.y.insert({NodeId{a.at("server").get<int>()}, NodeId{a.at("client").get<int>()}, VcdnId{a.at("vcdn").get<int>()}});
    for (const auto& r : doc.at("z")) {
      std::vector<DirectedEdge> path;
      for (const auto& e : r.at("path")) path.push_back({NodeId{e.at(0).get<int>()}, NodeId{e.at(1).get<int>()}});
      sol.z[{NodeId{r.at("client").get<int>()}, VcdnId{r.at("vcdn").get<int>()}}] = std::move(path);
    }
    for (const auto& m : doc.at("migration_paths")) {
      MigrationPath mp;
      for (const auto& e : m.at("path")) {
        mp.edges.push_back({NodeId{e.at(0).get<int>()}, NodeId{e.at(1).get<int>()}});
        mp.capacities.push_back(Quantity::from_double(e.at(2).get<double>()).milli());
      }
      sol.migration_paths[{NodeId{m.at("server").get<int>()}, VcdnId{m.at("vcdn").get<int>()}}] = std::move(mp);
    }
  } catch (const nlohmann::json::exception& e) {
    throw ScenarioError(std::string("solution: ") + e.what());
  }
  return sol;
}

}  // namespace vcdn
