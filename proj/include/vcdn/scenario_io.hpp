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

// Scenario file format (JSON, strict: unknown keys are rejected).
//
//   {
//     "nodes": [0, 1, 2],
//     "links": [{"from": 0, "to": 1, "capacity_mbps": 100}, ...],
//     "servers": [{"node": 1, "storage_gb": 50, "stream_mbps": 80}, ...],
//     "client_groups": [{"node": 0, "attachment": 1}, ...],   // attachment optional
//     "vcdns": [{"id": 0, "size_gb": 2.5, "origin": 1}, ...],
//     "demands": [{"client": 0, "vcdn": 0, "mbps": 40}, ...],
//     "cost_policy": {"mode": "hop-distance-times-size"}
//   }
//
// The explicit cost mode is {"mode": "explicit-matrix", "entries":
// [{"server": s, "vcdn": f, "cost": c}, ...]} with one entry per (s, f).
// Quantities accept at most three decimal places.

#pragma once

#include "vcdn/model.hpp"

#include <nlohmann/json.hpp>

#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string>
#include <string_view>

namespace vcdn {

namespace io_detail {

using nlohmann::json;

inline void require_object(const json& j, const std::string& where,
                           std::initializer_list<const char*> required,
                           std::initializer_list<const char*> optional = {}) {
  if (!j.is_object()) throw ScenarioError(where + ": expected an object");
  for (const char* key : required)
    if (!j.contains(key)) throw ScenarioError(where + "." + key + ": missing");
  for (const auto& [key, value] : j.items()) {
    bool known = false;
    for (const char* k : required) known = known || key == k;
    for (const char* k : optional) known = known || key == k;
    if (!known) throw ScenarioError(where + "." + key + ": unknown key");
  }
}

inline const json& require_array(const json& j, const std::string& where) {
  if (!j.is_array()) throw ScenarioError(where + ": expected an array");
  return j;
}

inline std::int32_t read_id(const json& j, const std::string& where) {
  if (!j.is_number_integer()) throw ScenarioError(where + ": expected an integer id");
  return j.get<std::int32_t>();
}

inline Quantity read_quantity(const json& j, const std::string& where) {
  if (!j.is_number()) throw ScenarioError(where + ": expected a number");
  try {
    return Quantity::from_double(j.get<double>());
  } catch (const std::invalid_argument& e) {
    throw ScenarioError(where + ": " + e.what());
  }
}

inline json write_quantity(Quantity q) {
  if (q.milli() % Quantity::kScale == 0) return json(q.milli() / Quantity::kScale);
  return json(q.to_double());
}

inline std::string at(const std::string& base, std::size_t i) { return base + "[" + std::to_string(i) + "]"; }

}  // namespace io_detail

/// Parses and validates a scenario document. Throws ScenarioError naming the
/// offending field on any schema or consistency violation.
inline Scenario parse_scenario(std::string_view text) {
  using namespace io_detail;
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ScenarioError(std::string("scenario: invalid JSON: ") + e.what());
  }
  require_object(doc, "scenario", {"nodes", "links", "servers", "client_groups", "vcdns", "demands", "cost_policy"});

  std::vector<NodeId> nodes;
  const auto& jn = require_array(doc["nodes"], "nodes");
  for (std::size_t i = 0; i < jn.size(); ++i) nodes.push_back(NodeId{read_id(jn[i], at("nodes", i))});

  std::vector<Link> links;
  const auto& jl = require_array(doc["links"], "links");
  for (std::size_t i = 0; i < jl.size(); ++i) {
    const std::string w = at("links", i);
    require_object(jl[i], w, {"from", "to", "capacity_mbps"});
    links.push_back({NodeId{read_id(jl[i]["from"], w + ".from")}, NodeId{read_id(jl[i]["to"], w + ".to")},
                     read_quantity(jl[i]["capacity_mbps"], w + ".capacity_mbps")});
  }

  std::vector<ServerSpec> servers;
  const auto& js = require_array(doc["servers"], "servers");
  for (std::size_t i = 0; i < js.size(); ++i) {
    const std::string w = at("servers", i);
    require_object(js[i], w, {"node", "storage_gb", "stream_mbps"});
    servers.push_back({NodeId{read_id(js[i]["node"], w + ".node")},
                       read_quantity(js[i]["storage_gb"], w + ".storage_gb"),
                       read_quantity(js[i]["stream_mbps"], w + ".stream_mbps")});
  }

  std::vector<ClientGroup> clients;
  const auto& jc = require_array(doc["client_groups"], "client_groups");
  for (std::size_t i = 0; i < jc.size(); ++i) {
    const std::string w = at("client_groups", i);
    require_object(jc[i], w, {"node"}, {"attachment"});
    ClientGroup c{NodeId{read_id(jc[i]["node"], w + ".node")}, std::nullopt};
    if (jc[i].contains("attachment")) c.attachment = NodeId{read_id(jc[i]["attachment"], w + ".attachment")};
    clients.push_back(c);
  }

  std::vector<Vcdn> vcdns;
  const auto& jv = require_array(doc["vcdns"], "vcdns");
  for (std::size_t i = 0; i < jv.size(); ++i) {
    const std::string w = at("vcdns", i);
    require_object(jv[i], w, {"id", "size_gb", "origin"});
    vcdns.push_back({VcdnId{read_id(jv[i]["id"], w + ".id")}, read_quantity(jv[i]["size_gb"], w + ".size_gb"),
                     NodeId{read_id(jv[i]["origin"], w + ".origin")}});
  }

  std::vector<Demand> demands;
  const auto& jd = require_array(doc["demands"], "demands");
  for (std::size_t i = 0; i < jd.size(); ++i) {
    const std::string w = at("demands", i);
    require_object(jd[i], w, {"client", "vcdn", "mbps"});
    demands.push_back({NodeId{read_id(jd[i]["client"], w + ".client")}, VcdnId{read_id(jd[i]["vcdn"], w + ".vcdn")},
                       read_quantity(jd[i]["mbps"], w + ".mbps")});
  }

  MigrationCostPolicy policy;
  const json& jp = doc["cost_policy"];
  if (!jp.is_object() || !jp.contains("mode") || !jp["mode"].is_string())
    throw ScenarioError("cost_policy.mode: missing or not a string");
  const auto mode = jp["mode"].get<std::string>();
  if (mode == "hop-distance-times-size") {
    require_object(jp, "cost_policy", {"mode"});
  } else if (mode == "explicit-matrix") {
    require_object(jp, "cost_policy", {"mode", "entries"});
    policy.mode = CostMode::ExplicitMatrix;
    const auto& je = require_array(jp["entries"], "cost_policy.entries");
    for (std::size_t i = 0; i < je.size(); ++i) {
      const std::string w = at("cost_policy.entries", i);
      require_object(je[i], w, {"server", "vcdn", "cost"});
      const NodeId s{read_id(je[i]["server"], w + ".server")};
      const VcdnId f{read_id(je[i]["vcdn"], w + ".vcdn")};
      if (!policy.explicit_costs.emplace(std::pair(s, f), read_quantity(je[i]["cost"], w + ".cost")).second)
        throw ScenarioError(w + ": duplicate entry");
    }
  } else {
    throw ScenarioError("cost_policy.mode: unknown mode '" + mode + "'");
  }

  return Scenario(std::move(nodes), std::move(links), std::move(servers), std::move(clients), std::move(vcdns),
                  std::move(demands), std::move(policy));
}

inline nlohmann::json scenario_to_json(const Scenario& s) {
  using namespace io_detail;
  json doc = json::object();
  json nodes = json::array();
  for (NodeId n : s.nodes()) nodes.push_back(n.value);
  doc["nodes"] = std::move(nodes);
  json links = json::array();
  for (const auto& l : s.links())
    links.push_back({{"from", l.from.value}, {"to", l.to.value}, {"capacity_mbps", write_quantity(l.capacity)}});
  doc["links"] = std::move(links);
  json servers = json::array();
  for (const auto& sv : s.servers())
    servers.push_back({{"node", sv.node.value},
                       {"storage_gb", write_quantity(sv.storage)},
                       {"stream_mbps", write_quantity(sv.stream)}});
  doc["servers"] = std::move(servers);
  json clients = json::array();
  for (const auto& c : s.client_groups()) clients.push_back({{"node", c.node.value}, {"attachment", c.attachment->value}});
  doc["client_groups"] = std::move(clients);
  json vcdns = json::array();
  for (const auto& v : s.vcdns())
    vcdns.push_back({{"id", v.id.value}, {"size_gb", write_quantity(v.size)}, {"origin", v.origin.value}});
  doc["vcdns"] = std::move(vcdns);
  json demands = json::array();
  for (const auto& d : s.demands())
    demands.push_back({{"client", d.client.value}, {"vcdn", d.vcdn.value}, {"mbps", write_quantity(d.throughput)}});
  doc["demands"] = std::move(demands);
  if (s.cost_policy().mode == CostMode::HopDistanceTimesSize) {
    doc["cost_policy"] = {{"mode", "hop-distance-times-size"}};
  } else {
    json entries = json::array();
    for (const auto& [key, cost] : s.cost_policy().explicit_costs)
      entries.push_back({{"server", key.first.value}, {"vcdn", key.second.value}, {"cost", write_quantity(cost)}});
    doc["cost_policy"] = {{"mode", "explicit-matrix"}, {"entries", std::move(entries)}};
  }
  return doc;
}

inline std::string serialize_scenario(const Scenario& s) { return scenario_to_json(s).dump(2) + "\n"; }

inline Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ScenarioError("cannot open scenario file " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_scenario(buffer.str());
}

inline void save_scenario(const Scenario& s, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw ScenarioError("cannot write scenario file " + path.string());
  out << serialize_scenario(s);
}

}  // namespace vcdn
