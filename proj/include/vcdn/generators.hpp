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

// Seeded topology generators for the two evaluation regimes: a small
// access/aggregate/core operator network and a large G(n, m) random graph.
// Every random choice is drawn from one std::mt19937_64 stream, so output is a
// pure function of the arguments. Capacity and demand ranges below are this
// library's defaults; they are parameters, not measured values.

#pragma once

#include "vcdn/model.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <random>
#include <set>
#include <stdexcept>
#include <utility>
#include <vector>

namespace vcdn {

/// Closed integer interval.
struct IntRange {
  std::int64_t lo = 0;
  std::int64_t hi = 0;
};

/// Catalog and demand shape shared by both generators.
struct WorkloadOptions {
  std::size_t vcdn_count = 11;
  IntRange storage_gb{50, 150};
  IntRange stream_mbps{100, 200};
  IntRange vcdn_size_gb{1, 5};
  IntRange demand_mbps{10, 40};
  // vCDN f is demanded by a client with probability demand_probability / (f + 1)^popularity_skew.
  double demand_probability = 0.6;
  double popularity_skew = 1.0;
};

/// Link capacity ranges, Mbps.
inline constexpr IntRange kThreeTierCapacity{100, 300};
inline constexpr IntRange kErdosRenyiCapacity{100, 300};

struct ErdosRenyiOptions {
  WorkloadOptions workload{.stream_mbps = {150, 300}, .demand_probability = 0.5};
  double server_fraction = 0.5;
  int max_attempts = 1000;
};

namespace gen_detail {

inline std::int64_t draw(std::mt19937_64& rng, IntRange r) {
  if (r.lo > r.hi) throw std::invalid_argument("empty range");
  return std::uniform_int_distribution<std::int64_t>(r.lo, r.hi)(rng);
}

inline void add_undirected(std::vector<Link>& links, NodeId a, NodeId b, Quantity cap) {
  links.push_back({a, b, cap});
  links.push_back({b, a, cap});
}

/// Draws server capacities, the vCDN catalog (origins chosen among servers
/// with room left) and the sparse demand matrix.
inline void populate_workload(std::mt19937_64& rng, const WorkloadOptions& opt, const std::vector<NodeId>& server_nodes,
                              const std::vector<NodeId>& client_nodes, std::vector<ServerSpec>& servers,
                              std::vector<Vcdn>& vcdns, std::vector<Demand>& demands) {
  std::vector<Quantity> room;
  for (NodeId s : server_nodes) {
    const Quantity storage = Quantity::whole(draw(rng, opt.storage_gb));
    servers.push_back({s, storage, Quantity::whole(draw(rng, opt.stream_mbps))});
    room.push_back(storage);
  }
  std::uniform_int_distribution<std::size_t> pick(0, server_nodes.size() - 1);
  for (std::size_t f = 0; f < opt.vcdn_count; ++f) {
    const Quantity size = Quantity::whole(draw(rng, opt.vcdn_size_gb));
    std::size_t origin = pick(rng);
    for (std::size_t tries = 0; room[origin] < size && tries < server_nodes.size(); ++tries)
      origin = (origin + 1) % server_nodes.size();
    if (room[origin] < size) throw std::invalid_argument("generator: catalog does not fit server storage");
    room[origin] -= size;
    vcdns.push_back({VcdnId{static_cast<std::int32_t>(f)}, size, server_nodes[origin]});
  }
  std::vector<double> popularity;
  for (std::size_t f = 0; f < vcdns.size(); ++f)
    popularity.push_back(std::min(1.0, opt.demand_probability / std::pow(static_cast<double>(f + 1), opt.popularity_skew)));
  for (NodeId c : client_nodes) {
    for (const auto& v : vcdns) {
      const bool demanded = std::bernoulli_distribution(popularity[static_cast<std::size_t>(v.id.value)])(rng);
      const Quantity mbps = Quantity::whole(draw(rng, opt.demand_mbps));
      if (demanded) demands.push_back({c, v.id, mbps});
    }
  }
}

}  // namespace gen_detail

/// Layered operator network: client groups sit on access nodes, servers on
/// aggregate and core nodes. Access node i links to aggregate i mod n_aggregate
/// (plus, by coin flip, one more aggregate); aggregate j links likewise to the
/// core; core nodes form a full mesh.
inline Scenario gen_three_tier(std::size_t n_access, std::size_t n_aggregate, std::size_t n_core, std::uint64_t seed,
                               IntRange cap_range = kThreeTierCapacity, const WorkloadOptions& workload = {}) {
  if (n_access == 0 || n_aggregate == 0 || n_core == 0) throw std::invalid_argument("three-tier: every layer needs >= 1 node");
  std::mt19937_64 rng(seed);
  auto id = [](std::size_t i) { return NodeId{static_cast<std::int32_t>(i)}; };
  const std::size_t agg0 = n_access, core0 = n_access + n_aggregate, total = core0 + n_core;

  std::vector<NodeId> nodes, server_nodes, client_nodes;
  for (std::size_t i = 0; i < total; ++i) {
    nodes.push_back(id(i));
    (i < agg0 ? client_nodes : server_nodes).push_back(id(i));
  }

  std::set<std::pair<std::size_t, std::size_t>> edges;
  auto connect_up = [&](std::size_t lower_begin, std::size_t lower_count, std::size_t upper_begin, std::size_t upper_count) {
    std::bernoulli_distribution coin(0.5);
    std::uniform_int_distribution<std::size_t> any(0, upper_count - 1);
    for (std::size_t i = 0; i < lower_count; ++i) {
      edges.insert({lower_begin + i, upper_begin + i % upper_count});
      const bool extra = coin(rng);
      const std::size_t other = any(rng);
      if (extra) edges.insert({lower_begin + i, upper_begin + other});
    }
  };
  connect_up(0, n_access, agg0, n_aggregate);
  connect_up(agg0, n_aggregate, core0, n_core);
  for (std::size_t a = core0; a < total; ++a)
    for (std::size_t b = a + 1; b < total; ++b) edges.insert({a, b});

  std::vector<Link> links;
  for (const auto& [a, b] : edges)
    gen_detail::add_undirected(links, id(a), id(b), Quantity::whole(gen_detail::draw(rng, cap_range)));

  std::vector<ServerSpec> servers;
  std::vector<Vcdn> vcdns;
  std::vector<Demand> demands;
  gen_detail::populate_workload(rng, workload, server_nodes, client_nodes, servers, vcdns, demands);

  std::vector<ClientGroup> clients;
  for (NodeId c : client_nodes) clients.push_back({c, std::nullopt});
  return Scenario(std::move(nodes), std::move(links), std::move(servers), std::move(clients), std::move(vcdns),
                  std::move(demands));
}

/// Connected G(n, m): exactly m distinct undirected edges drawn uniformly,
/// resampled until connected (up to max_attempts). Node roles are assigned by
/// a seeded shuffle.
inline Scenario gen_erdos_renyi(std::size_t n, std::size_t m, std::uint64_t seed, IntRange cap_range = kErdosRenyiCapacity,
                                const ErdosRenyiOptions& options = {}) {
  if (n < 2) throw std::invalid_argument("erdos-renyi: need at least 2 nodes");
  const std::size_t max_edges = n * (n - 1) / 2;
  if (m < n - 1 || m > max_edges)
    throw std::invalid_argument("erdos-renyi: m must lie in [n-1, n(n-1)/2]");
  std::mt19937_64 rng(seed);

  std::vector<std::pair<std::size_t, std::size_t>> all_pairs;
  all_pairs.reserve(max_edges);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a + 1; b < n; ++b) all_pairs.emplace_back(a, b);

  std::vector<std::pair<std::size_t, std::size_t>> chosen;
  bool connected = false;
  for (int attempt = 0; attempt < options.max_attempts && !connected; ++attempt) {
    for (std::size_t i = 0; i < m; ++i) {
      std::uniform_int_distribution<std::size_t> pick(i, max_edges - 1);
      std::swap(all_pairs[i], all_pairs[pick(rng)]);
    }
    chosen.assign(all_pairs.begin(), all_pairs.begin() + static_cast<std::ptrdiff_t>(m));
    std::vector<std::size_t> parent(n);
    std::iota(parent.begin(), parent.end(), std::size_t{0});
    auto find = [&](std::size_t x) {
      while (parent[x] != x) x = parent[x] = parent[parent[x]];
      return x;
    };
    std::size_t components = n;
    for (const auto& [a, b] : chosen) {
      const std::size_t ra = find(a), rb = find(b);
      if (ra != rb) {
        parent[ra] = rb;
        --components;
      }
    }
    connected = components == 1;
  }
  if (!connected) throw std::runtime_error("erdos-renyi: no connected sample within the attempt cap");
  std::sort(chosen.begin(), chosen.end());

  auto id = [](std::size_t i) { return NodeId{static_cast<std::int32_t>(i)}; };
  std::vector<NodeId> nodes;
  for (std::size_t i = 0; i < n; ++i) nodes.push_back(id(i));
  std::vector<Link> links;
  for (const auto& [a, b] : chosen)
    gen_detail::add_undirected(links, id(a), id(b), Quantity::whole(gen_detail::draw(rng, cap_range)));

  std::vector<NodeId> order = nodes;
  std::shuffle(order.begin(), order.end(), rng);
  auto server_count = static_cast<std::size_t>(static_cast<double>(n) * options.server_fraction + 0.5);
  server_count = std::clamp<std::size_t>(server_count, 1, n - 1);
  std::vector<NodeId> server_nodes(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(server_count));
  std::vector<NodeId> client_nodes(order.begin() + static_cast<std::ptrdiff_t>(server_count), order.end());
  std::sort(server_nodes.begin(), server_nodes.end());
  std::sort(client_nodes.begin(), client_nodes.end());

  std::vector<ServerSpec> servers;
  std::vector<Vcdn> vcdns;
  std::vector<Demand> demands;
  gen_detail::populate_workload(rng, options.workload, server_nodes, client_nodes, servers, vcdns, demands);

  std::vector<ClientGroup> clients;
  for (NodeId c : client_nodes) clients.push_back({c, std::nullopt});
  return Scenario(std::move(nodes), std::move(links), std::move(servers), std::move(clients), std::move(vcdns),
                  std::move(demands));
}

}  // namespace vcdn
