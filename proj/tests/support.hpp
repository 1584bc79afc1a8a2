/* Copyright 2026 The gridcuts Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 *
 */

#pragma once

#include <doctest.h>

#include <cstdint>
#include <filesystem>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "gridcuts/io.hpp"
#include "gridcuts/model.hpp"
#include "gridcuts/netflow.hpp"
#include "gridcuts/synthetic.hpp"

namespace test {

using namespace gridcuts;

inline std::filesystem::path data_path(const std::string& rel) {
  return std::filesystem::path(GRIDCUTS_DATA_DIR) / rel;
}

inline PowerNetwork fixture(const std::string& name) {
  CaseSpec spec;
  spec.path = data_path("fixtures/" + name + ".json");
  return load_network(spec);
}

inline std::shared_ptr<const PowerNetwork> shared_fixture(const std::string& name) {
  return std::make_shared<const PowerNetwork>(fixture(name));
}

inline FlowState fixture_flows(const PowerNetwork& net, const std::string& csv) {
  const auto path = data_path("fixtures/" + csv);
  return FlowState::from_flows(net, parse_flows_csv(read_text_file(path), path.string()));
}

inline CaseSpec ieee118_spec(bool merge_parallel = true, bool overlay = true) {
  CaseSpec spec;
  spec.path = data_path("ieee118/case118.m");
  spec.merge_parallel = merge_parallel;
  spec.auto_slack = BusId{69};
  if (overlay) spec.ratings_overlay = data_path("ieee118/ratings_overlay.csv");
  return spec;
}

inline PowerNetwork random_network(std::uint64_t seed, const RandomFixtureOptions& opts = {}) {
  return PowerNetwork::build(random_fixture(seed, opts));
}

inline std::size_t bix(const PowerNetwork& net, const std::string& id) {
  return net.branch_index(BranchId{id});
}

inline std::vector<std::string> ids(const PowerNetwork& net, const std::vector<std::size_t>& branches) {
  std::vector<std::string> out;
  for (std::size_t b : branches) out.push_back(net.branch(b).id.value);
  return out;
}

/// Calls f(inside) for every proper bipartition, each counted once (bus 0
/// is always outside).
inline void for_each_bipartition(std::size_t bus_count,
                                 const std::function<void(const std::vector<char>&)>& f) {
  REQUIRE(bus_count <= 20);
  std::vector<char> inside(bus_count, 0);
  for (std::uint32_t mask = 1; mask < (1u << (bus_count - 1)); ++mask) {
    for (std::size_t b = 1; b < bus_count; ++b) inside[b] = (mask >> (b - 1)) & 1u;
    f(inside);
  }
}

/// Flow leaving `inside`, from a direct scan of branch endpoints.
inline Power scan_outflow(const PowerNetwork& net, const FlowState& st, const std::vector<char>& inside) {
  Power out;
  for (std::size_t br = 0; br < net.branch_count(); ++br) {
    if (!st.live(br)) continue;
    const bool a = inside[net.from_index(br)], b = inside[net.to_index(br)];
    if (a && !b) out += st.flow(br);
    if (b && !a) out -= st.flow(br);
  }
  return out;
}

inline Power scan_injection(const PowerNetwork& net, const std::vector<char>& inside) {
  Power p;
  for (std::size_t b = 0; b < net.bus_count(); ++b)
    if (inside[b]) p += net.injection(b);
  return p;
}

}  // namespace test
