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

// Hand-built scenarios shared by several test files.

#pragma once

#include "vcdn/model.hpp"

#include <filesystem>
#include <vector>

namespace vcdn::fixtures {

inline void both_ways(std::vector<Link>& links, int a, int b, std::int64_t mbps) {
  links.push_back({NodeId{a}, NodeId{b}, Quantity::whole(mbps)});
  links.push_back({NodeId{b}, NodeId{a}, Quantity::whole(mbps)});
}

/// Chain origin(0) - server(1) - client(2). The origin side edge carries
/// `origin_edge` Mbps, the other 100. One 2 GB vCDN at node 0, 40 Mbps
/// demanded by the client.
inline Scenario two_server_chain(std::int64_t origin_edge, std::int64_t demand = 40) {
  std::vector<Link> links;
  both_ways(links, 0, 1, origin_edge);
  both_ways(links, 1, 2, 100);
  return Scenario({NodeId{0}, NodeId{1}, NodeId{2}}, links,
                  {{NodeId{0}, Quantity::whole(10), Quantity::whole(100)},
                   {NodeId{1}, Quantity::whole(10), Quantity::whole(100)}},
                  {{NodeId{2}, std::nullopt}}, {{VcdnId{0}, Quantity::whole(2), NodeId{0}}},
                  {{NodeId{2}, VcdnId{0}, Quantity::whole(demand)}});
}

inline Scenario minimal() {
  std::vector<Link> links;
  both_ways(links, 0, 1, 100);
  return Scenario({NodeId{0}, NodeId{1}}, links, {{NodeId{0}, Quantity::whole(10), Quantity::whole(100)}},
                  {{NodeId{1}, std::nullopt}}, {{VcdnId{0}, Quantity::whole(1), NodeId{0}}},
                  {{NodeId{1}, VcdnId{0}, Quantity::whole(10)}});
}

inline std::filesystem::path golden_path() { return std::filesystem::path(VCDN_DATA_DIR) / "small_three_tier.json"; }

}  // namespace vcdn::fixtures
