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

// Brute-force reference implementations used by the tests and the acceptance
// runner. They share no code with the library beyond its data types.

#pragma once

#include "vcdn/flow.hpp"
#include "vcdn/model.hpp"
#include "vcdn/solution.hpp"

#include <algorithm>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <tuple>
#include <vector>

namespace vcdn::oracle {

// ---------------------------------------------------------------- graphs

struct UEdge {
  int a, b;
  std::int64_t capacity;
};

struct UGraph {
  int n = 0;
  std::vector<UEdge> edges;
};

/// Random connected undirected graph: a random spanning tree plus extra edges.
inline UGraph random_connected_graph(std::mt19937_64& rng, int n, std::int64_t cap_lo, std::int64_t cap_hi,
                                     double extra_density = 0.3) {
  UGraph g;
  g.n = n;
  std::uniform_int_distribution<std::int64_t> cap(cap_lo, cap_hi);
  std::set<std::pair<int, int>> used;
  for (int v = 1; v < n; ++v) {
    const int u = std::uniform_int_distribution<int>(0, v - 1)(rng);
    used.insert({u, v});
    g.edges.push_back({u, v, cap(rng)});
  }
  std::bernoulli_distribution extra(extra_density);
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b)
      if (!used.contains({a, b}) && extra(rng)) {
        used.insert({a, b});
        g.edges.push_back({a, b, cap(rng)});
      }
  return g;
}

inline FlowGraph to_flow_graph(const UGraph& g) {
  std::vector<NodeId> ids;
  for (int i = 0; i < g.n; ++i) ids.push_back(NodeId{i});
  FlowGraph fg(ids);
  for (const auto& e : g.edges) fg.add_edge(static_cast<std::size_t>(e.a), static_cast<std::size_t>(e.b), e.capacity);
  return fg;
}

/// Minimum capacity over every vertex subset containing a but not b.
inline std::int64_t brute_min_cut(const UGraph& g, int a, int b) {
  std::int64_t best = std::numeric_limits<std::int64_t>::max();
  for (std::uint32_t mask = 0; mask < (1u << g.n); ++mask) {
    if (!(mask >> a & 1u) || (mask >> b & 1u)) continue;
    std::int64_t cut = 0;
    for (const auto& e : g.edges)
      if (((mask >> e.a) & 1u) != ((mask >> e.b) & 1u)) cut += e.capacity;
    best = std::min(best, cut);
  }
  return best;
}

/// Directed variant over an arc list.
inline std::int64_t brute_min_cut_directed(int n, const std::vector<UEdge>& arcs, int s, int t) {
  std::int64_t best = std::numeric_limits<std::int64_t>::max();
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    if (!(mask >> s & 1u) || (mask >> t & 1u)) continue;
    std::int64_t cut = 0;
    for (const auto& e : arcs)
      if ((mask >> e.a & 1u) && !(mask >> e.b & 1u)) cut += e.capacity;
    best = std::min(best, cut);
  }
  return best;
}

// ------------------------------------------------------- tiny instances

struct TinyShape {
  int max_servers = 4;
  int max_clients = 4;
  int max_vcdns = 3;
};

/// Small random instance: servers first, then clients, random connected
/// topology with independent capacities per direction, optional explicit
/// cost matrix.
inline Scenario random_tiny_scenario(std::uint64_t seed, TinyShape shape = {}) {
  std::mt19937_64 rng(seed);
  auto pick = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
  const int n_s = pick(1, shape.max_servers), n_c = pick(1, shape.max_clients), n_f = pick(1, shape.max_vcdns);
  const int n = n_s + n_c;
  std::vector<NodeId> nodes;
  for (int i = 0; i < n; ++i) nodes.push_back(NodeId{i});

  std::vector<Link> links;
  const UGraph g = random_connected_graph(rng, n, 1, 1, 0.35);
  for (const auto& e : g.edges) {
    links.push_back({NodeId{e.a}, NodeId{e.b}, Quantity::whole(pick(5, 60))});
    links.push_back({NodeId{e.b}, NodeId{e.a}, Quantity::whole(pick(5, 60))});
  }

  std::vector<ServerSpec> servers;
  for (int i = 0; i < n_s; ++i) servers.push_back({NodeId{i}, Quantity::whole(pick(2, 12)), Quantity::whole(pick(10, 80))});
  std::vector<ClientGroup> clients;
  for (int i = n_s; i < n; ++i) clients.push_back({NodeId{i}, std::nullopt});
  std::vector<Vcdn> vcdns;
  for (int f = 0; f < n_f; ++f) vcdns.push_back({VcdnId{f}, Quantity::whole(pick(1, 5)), NodeId{pick(0, n_s - 1)}});
  std::vector<Demand> demands;
  for (int c = n_s; c < n; ++c)
    for (int f = 0; f < n_f; ++f)
      if (pick(0, 1) == 1) demands.push_back({NodeId{c}, VcdnId{f}, Quantity::whole(pick(5, 40))});

  MigrationCostPolicy policy;
  if (pick(0, 9) < 3) {
    policy.mode = CostMode::ExplicitMatrix;
    for (int s = 0; s < n_s; ++s)
      for (const auto& v : vcdns)
        policy.explicit_costs[{NodeId{s}, v.id}] = v.origin == NodeId{s} ? Quantity{} : Quantity::whole(pick(0, 10));
  }
  return Scenario(nodes, links, servers, clients, vcdns, demands, policy);
}

// ------------------------------------------------------ exact placement

namespace detail {

struct DenseInstance {
  int n = 0;
  std::vector<NodeId> ids;
  std::map<NodeId, int> index;
  std::vector<std::vector<std::int64_t>> cap;  // cap[i][j], -1 when no link
  std::vector<int> servers;                    // dense ids
  std::vector<std::int64_t> storage, stream;   // per server position
  std::vector<std::int64_t> size;              // per vcdn position
  std::vector<std::int64_t> cost;              // [server pos * F + vcdn pos]
  struct Dem {
    int client;
    int vcdn;
    std::int64_t amount;
  };
  std::vector<Dem> demands;
};

inline DenseInstance densify(const Scenario& s) {
  DenseInstance d;
  d.n = static_cast<int>(s.nodes().size());
  for (int i = 0; i < d.n; ++i) {
    d.ids.push_back(s.nodes()[static_cast<std::size_t>(i)]);
    d.index[d.ids.back()] = i;
  }
  d.cap.assign(static_cast<std::size_t>(d.n), std::vector<std::int64_t>(static_cast<std::size_t>(d.n), -1));
  for (const auto& l : s.links()) d.cap[static_cast<std::size_t>(d.index[l.from])][static_cast<std::size_t>(d.index[l.to])] = l.capacity.milli();
  for (const auto& sv : s.servers()) {
    d.servers.push_back(d.index[sv.node]);
    d.storage.push_back(sv.storage.milli());
    d.stream.push_back(sv.stream.milli());
  }
  for (const auto& v : s.vcdns()) d.size.push_back(v.size.milli());
  for (const auto& sv : s.servers())
    for (const auto& v : s.vcdns()) d.cost.push_back(s.migration_cost(sv.node, v.id).milli());
  for (const auto& dm : s.demands()) {
    if (dm.throughput.milli() == 0) continue;
    int f = 0;
    while (s.vcdns()[static_cast<std::size_t>(f)].id != dm.vcdn) ++f;
    d.demands.push_back({d.index[dm.client], f, dm.throughput.milli()});
  }
  return d;
}

/// All simple directed paths src -> dst as arc lists.
inline void simple_paths(const DenseInstance& d, int u, int dst, std::vector<char>& seen,
                         std::vector<std::pair<int, int>>& cur, std::vector<std::vector<std::pair<int, int>>>& out) {
  if (u == dst) {
    out.push_back(cur);
    return;
  }
  for (int w = 0; w < d.n; ++w) {
    if (d.cap[static_cast<std::size_t>(u)][static_cast<std::size_t>(w)] < 0 || seen[static_cast<std::size_t>(w)]) continue;
    seen[static_cast<std::size_t>(w)] = 1;
    cur.emplace_back(u, w);
    simple_paths(d, w, dst, seen, cur, out);
    cur.pop_back();
    seen[static_cast<std::size_t>(w)] = 0;
  }
}

struct RoutingSearch {
  const DenseInstance& d;
  const std::vector<std::vector<std::vector<std::pair<int, int>>>>& options;  // per demand
  std::vector<std::vector<std::int64_t>> residual;

  bool go(std::size_t k) {
    if (k == options.size()) return true;
    const std::int64_t amount = d.demands[k].amount;
    for (const auto& path : options[k]) {
      bool ok = true;
      for (const auto& [a, b] : path) ok = ok && residual[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] >= amount;
      if (!ok) continue;
      for (const auto& [a, b] : path) residual[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] -= amount;
      const bool done = go(k + 1);
      for (const auto& [a, b] : path) residual[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] += amount;
      if (done) return true;
    }
    return false;
  }
};

}  // namespace detail

/// Minimum objective over every placement x (bit vector over servers x
/// vCDNs), every assignment y consistent with x and the server budgets, and
/// every unsplittable routing over simple paths. nullopt when infeasible.
inline std::optional<std::int64_t> brute_force_min_cost(const Scenario& s) {
  using namespace detail;
  const DenseInstance d = densify(s);
  const std::size_t S = d.servers.size(), F = d.size.size(), bits = S * F;

  // simple paths server -> client, per (server position, client dense id)
  std::map<std::pair<std::size_t, int>, std::vector<std::vector<std::pair<int, int>>>> paths;
  for (std::size_t si = 0; si < S; ++si)
    for (const auto& dm : d.demands) {
      auto key = std::pair(si, dm.client);
      if (paths.contains(key)) continue;
      std::vector<char> seen(static_cast<std::size_t>(d.n), 0);
      seen[static_cast<std::size_t>(d.servers[si])] = 1;
      std::vector<std::pair<int, int>> cur;
      simple_paths(d, d.servers[si], dm.client, seen, cur, paths[key]);
    }

  std::vector<std::pair<std::int64_t, std::uint32_t>> masks;
  for (std::uint32_t mask = 0; mask < (1u << bits); ++mask) {
    std::int64_t cost = 0;
    for (std::size_t b = 0; b < bits; ++b)
      if (mask >> b & 1u) cost += d.cost[b];
    masks.emplace_back(cost, mask);
  }
  std::sort(masks.begin(), masks.end());

  for (const auto& [cost, mask] : masks) {
    auto open = [&](std::size_t si, int f) { return (mask >> (si * F + static_cast<std::size_t>(f)) & 1u) != 0; };
    bool storage_ok = true;
    for (std::size_t si = 0; si < S && storage_ok; ++si) {
      std::int64_t used = 0;
      for (std::size_t f = 0; f < F; ++f)
        if (open(si, static_cast<int>(f))) used += d.size[f];
      storage_ok = used <= d.storage[si];
    }
    if (!storage_ok) continue;
    bool covered = true;
    for (const auto& dm : d.demands) {
      bool any = false;
      for (std::size_t si = 0; si < S; ++si) any = any || open(si, dm.vcdn);
      covered = covered && any;
    }
    if (!covered) continue;

    // assignments: backtrack over demands
    std::vector<std::size_t> choice(d.demands.size());
    std::vector<std::int64_t> stream_left = d.stream;
    bool found = false;
    auto assign = [&](auto&& self, std::size_t k) -> void {
      if (found) return;
      if (k == d.demands.size()) {
        std::vector<std::vector<std::vector<std::pair<int, int>>>> options;
        for (std::size_t j = 0; j < d.demands.size(); ++j) options.push_back(paths[{choice[j], d.demands[j].client}]);
        RoutingSearch search{d, options, d.cap};
        if (search.go(0)) found = true;
        return;
      }
      for (std::size_t si = 0; si < S && !found; ++si) {
        if (!open(si, d.demands[k].vcdn) || stream_left[si] < d.demands[k].amount) continue;
        stream_left[si] -= d.demands[k].amount;
        choice[k] = si;
        self(self, k + 1);
        stream_left[si] += d.demands[k].amount;
      }
    };
    assign(assign, 0);
    if (found) return cost;
  }
  return std::nullopt;
}

// ------------------------------------------------- constraint recompute

/// Which constraint families a solution violates, recomputed from scratch
/// with dense arrays. z paths are interpreted over scenario links.
inline std::set<ConstraintFamily> violated_families(const Scenario& s, const PlacementSolution& sol) {
  std::set<ConstraintFamily> out;
  const auto d = detail::densify(s);
  const std::size_t S = d.servers.size(), F = d.size.size();
  auto server_pos = [&](NodeId id) {
    for (std::size_t i = 0; i < S; ++i)
      if (d.ids[static_cast<std::size_t>(d.servers[i])] == id) return i;
    return S;
  };
  auto vcdn_pos = [&](VcdnId f) {
    for (std::size_t i = 0; i < F; ++i)
      if (s.vcdns()[i].id == f) return i;
    return F;
  };
  std::vector<char> x(S * F, 0);
  for (const auto& p : sol.x) x[server_pos(p.server) * F + vcdn_pos(p.vcdn)] = 1;

  std::vector<std::int64_t> streamed(S, 0), stored(S, 0);
  for (const auto& a : sol.y) {
    const std::size_t si = server_pos(a.server), fi = vcdn_pos(a.vcdn);
    if (!x[si * F + fi]) out.insert(ConstraintFamily::PlacementCoversAssignment);
    streamed[si] += s.demand(a.client, a.vcdn).milli();
  }
  for (std::size_t si = 0; si < S; ++si)
    for (std::size_t fi = 0; fi < F; ++fi)
      if (x[si * F + fi]) stored[si] += d.size[fi];
  for (std::size_t si = 0; si < S; ++si) {
    if (streamed[si] > d.stream[si]) out.insert(ConstraintFamily::StreamCapacity);
    if (stored[si] > d.storage[si]) out.insert(ConstraintFamily::StorageCapacity);
  }

  std::vector<std::vector<std::int64_t>> load(static_cast<std::size_t>(d.n), std::vector<std::int64_t>(static_cast<std::size_t>(d.n), 0));
  for (const auto& dm : d.demands) {
    const NodeId client = d.ids[static_cast<std::size_t>(dm.client)];
    const VcdnId f = s.vcdns()[static_cast<std::size_t>(dm.vcdn)].id;
    int serving = 0;
    for (std::size_t si = 0; si < S; ++si)
      serving += sol.y.contains({d.ids[static_cast<std::size_t>(d.servers[si])], client, f}) ? 1 : 0;
    if (serving != 1) out.insert(ConstraintFamily::SingleServer);

    std::vector<int> net(static_cast<std::size_t>(d.n), 0);
    std::set<std::pair<int, int>> arcs;
    if (auto it = sol.z.find({client, f}); it != sol.z.end())
      for (const auto& e : it->second) arcs.insert({d.index.at(e.from), d.index.at(e.to)});
    for (const auto& [a, b] : arcs) {
      ++net[static_cast<std::size_t>(a)];
      --net[static_cast<std::size_t>(b)];
      load[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] += dm.amount;
    }
    for (int i = 0; i < d.n; ++i) {
      int want = 0;
      if (i == dm.client) want = -1;
      for (std::size_t si = 0; si < S; ++si)
        if (d.servers[si] == i && sol.y.contains({d.ids[static_cast<std::size_t>(i)], client, f})) want = 1;
      if (net[static_cast<std::size_t>(i)] != want) out.insert(ConstraintFamily::FlowConservation);
    }
  }
  for (int a = 0; a < d.n; ++a)
    for (int b = 0; b < d.n; ++b) {
      const std::int64_t l = load[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)];
      const std::int64_t c = d.cap[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)];
      if (l > 0 && (c < 0 || l > c)) out.insert(ConstraintFamily::LinkCapacity);
    }
  return out;
}

// ------------------------------------------------ random feasible solution

/// Random placement, assignment and shortest-path routing that respects every
/// budget, or nullopt when the random choices dead-end. Migration paths are
/// BFS paths from the origin over links with nonzero capacity.
inline std::optional<PlacementSolution> random_feasible_solution(const Scenario& s, std::mt19937_64& rng) {
  PlacementSolution sol;
  std::map<NodeId, std::int64_t> storage_left, stream_left;
  for (const auto& sv : s.servers()) {
    storage_left[sv.node] = sv.storage.milli();
    stream_left[sv.node] = sv.stream.milli();
  }
  std::map<std::pair<NodeId, NodeId>, std::int64_t> residual;
  for (const auto& l : s.links()) residual[{l.from, l.to}] = l.capacity.milli();

  auto bfs = [&](NodeId from, NodeId to, std::int64_t need) -> std::optional<std::vector<DirectedEdge>> {
    std::map<NodeId, NodeId> parent{{from, from}};
    std::vector<NodeId> frontier{from};
    while (!frontier.empty() && !parent.contains(to)) {
      std::vector<NodeId> next;
      for (NodeId u : frontier)
        for (NodeId w : s.successors(u))
          if (!parent.contains(w) && residual[{u, w}] >= need) {
            parent[w] = u;
            next.push_back(w);
          }
      frontier = std::move(next);
    }
    if (!parent.contains(to)) return std::nullopt;
    std::vector<DirectedEdge> path;
    for (NodeId v = to; v != from; v = parent[v]) path.insert(path.begin(), DirectedEdge{parent[v], v});
    return path;
  };

  std::vector<Demand> demands(s.demands().begin(), s.demands().end());
  std::shuffle(demands.begin(), demands.end(), rng);
  for (const auto& d : demands) {
    if (d.throughput.milli() == 0) continue;
    std::vector<NodeId> order;
    for (const auto& sv : s.servers()) order.push_back(sv.node);
    std::shuffle(order.begin(), order.end(), rng);
    bool served = false;
    for (NodeId host : order) {
      const bool stored = sol.x.contains({host, d.vcdn});
      if (stream_left[host] < d.throughput.milli()) continue;
      if (!stored && storage_left[host] < s.vcdn(d.vcdn).size.milli()) continue;
      auto path = bfs(host, d.client, d.throughput.milli());
      if (!path) continue;
      for (const auto& e : *path) residual[{e.from, e.to}] -= d.throughput.milli();
      if (!stored) {
        sol.x.insert({host, d.vcdn});
        storage_left[host] -= s.vcdn(d.vcdn).size.milli();
      }
      stream_left[host] -= d.throughput.milli();
      sol.y.insert({host, d.client, d.vcdn});
      sol.z[{d.client, d.vcdn}] = std::move(*path);
      served = true;
      break;
    }
    if (!served) return std::nullopt;
  }
  // a few unused extra copies where storage allows
  for (const auto& sv : s.servers())
    for (const auto& v : s.vcdns())
      if (rng() % 4 == 0 && !sol.x.contains({sv.node, v.id}) && storage_left[sv.node] >= v.size.milli()) {
        sol.x.insert({sv.node, v.id});
        storage_left[sv.node] -= v.size.milli();
      }
  for (const auto& p : sol.x) {
    const NodeId origin = s.vcdn(p.vcdn).origin;
    if (p.server == origin) continue;
    residual.clear();
    for (const auto& l : s.links()) residual[{l.from, l.to}] = l.capacity.milli();
    auto path = bfs(origin, p.server, 1);
    if (!path) return std::nullopt;
    MigrationPath mp;
    for (const auto& e : *path) {
      mp.edges.push_back(e);
      mp.capacities.push_back(s.link_capacity(e.from, e.to)->milli());
    }
    sol.migration_paths[p] = std::move(mp);
  }
  Quantity total;
  for (const auto& p : sol.x) total += s.migration_cost(p.server, p.vcdn);
  sol.objective = total;
  return sol;
}

// ------------------------------------------------------------ rupture

/// Linear scan: nodes of the path in order from the host end; the first one
/// that is a server admitting the demand and whose edges toward the client
/// all keep at least `demand` residual.
struct ScanNode {
  bool admits;                  // host-side C/D check
  std::int64_t edge_to_client;  // residual of the edge toward the client (unused for the client end)
};

/// nodes[0] is the host, nodes.back() the client end. Returns the index into
/// nodes, or nullopt.
inline std::optional<std::size_t> rupture_scan(const std::vector<ScanNode>& nodes, std::int64_t demand) {
  for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
    bool path_ok = true;
    for (std::size_t j = i; j + 1 < nodes.size(); ++j) path_ok = path_ok && nodes[j].edge_to_client >= demand;
    if (path_ok && nodes[i].admits) return i;
  }
  return std::nullopt;
}

}  // namespace vcdn::oracle
