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

#include <optional>
#include <utility>
#include <vector>

#include "gridcuts/flowgraph.hpp"
#include "gridcuts/model.hpp"

namespace gridcuts {

/// A bridge outage split the network in two.
struct Islanding {
  /// Bus indices of the smaller side, sorted.
  std::vector<std::size_t> separated;
  /// Net injection of the separated side.
  Power imbalance;
  /// Zero imbalance: the island is dropped and analysis continues.
  bool pruned = false;
  friend bool operator==(const Islanding&, const Islanding&) = default;
};

struct ReroutePath {
  Path path;
  Power amount;
  friend bool operator==(const ReroutePath&, const ReroutePath&) = default;
};

/// Record of one outage applied by apply_outage.
///
/// rerouted + deficit always equals |flow|. When deficit is positive the
/// exporting endpoint keeps the unrouted surplus and the importing endpoint
/// is short by the same amount.
struct UpdateResult {
  std::size_t branch = 0;
  BusId from_bus;  ///< exporting endpoint
  BusId to_bus;
  Power flow;      ///< |f| before the outage
  Power rerouted;
  Power deficit;
  std::vector<ReroutePath> paths;
  std::vector<std::size_t> changed;  ///< sorted branch indices on any path
  std::optional<Islanding> islanding;
  /// When deficit > 0: the saturated cut around the exporting side, with the
  /// outaged branch included. Sorted branch indices.
  std::vector<std::size_t> saturated_cut;
  std::vector<std::size_t> saturated_cluster;  ///< sorted bus indices

  friend bool operator==(const UpdateResult&, const UpdateResult&) = default;
};

/// Removes a live branch and reroutes its flow from the exporting to the
/// importing endpoint along successive shortest unsaturated paths, each
/// carrying min(remaining, bottleneck). Saturation is reported through
/// UpdateResult::deficit, never thrown. Throws InputError if the branch is
/// unknown or not live.
std::pair<FlowState, UpdateResult> apply_outage(const PowerNetwork& network, FlowState state,
                                                std::size_t branch);
std::pair<FlowState, UpdateResult> apply_outage(const PowerNetwork& network, FlowState state,
                                                const BranchId& branch);

}  // namespace gridcuts
