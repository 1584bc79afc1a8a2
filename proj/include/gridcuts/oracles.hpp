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
#include <span>
#include <vector>

#include "gridcuts/flowgraph.hpp"
#include "gridcuts/model.hpp"

namespace gridcuts {

/// Linear DC power-flow solution. Angles in radians (slack at 0); flows in
/// MW, from->to positive, zero for excluded and out-of-service branches.
struct DcSolution {
  BusId slack;
  std::vector<double> angle;
  std::vector<double> flow_mw;
};

/// Highest-generation bus (lowest id on ties).
BusId default_slack(const PowerNetwork& network);

/// Solves B' theta = P for the network minus `excluded` branch indices.
/// Throws InputError on a missing reactance or when the remaining network is
/// not connected (singular system).
DcSolution dc_solve(const PowerNetwork& network, std::optional<BusId> slack = std::nullopt,
                    std::span<const std::size_t> excluded = {});

struct Overload {
  BranchId branch;
  double flow_mw = 0.0;
  double overload_mw = 0.0;  ///< |flow| - rating
};

struct ContingencyOutcome {
  bool islanded = false;
  std::vector<Overload> overloads;  ///< in branch order
};

/// Re-solves without `outage` and lists branches whose |flow| exceeds their
/// rating. Islanding outages are reported without solving.
ContingencyOutcome dc_post_contingency_overloads(const PowerNetwork& network,
                                                 std::optional<BusId> slack,
                                                 const BranchId& outage);

/// One bipartition separating the tested branch's endpoints.
struct CutRecord {
  std::vector<std::size_t> cluster1;  ///< sorted bus indices, contains the exporting endpoint
  std::vector<std::size_t> cut;       ///< sorted live branch indices, includes the tested branch
  Power required;                     ///< P_K: net injection of cluster1
  Power capacity;                     ///< R_K: ratings of the cut minus the tested branch
  bool connected = false;             ///< both sides connected over live branches
};

struct CutEnumeration {
  std::size_t branch = 0;
  std::size_t from_bus = 0;  ///< exporting endpoint under the given state
  std::size_t to_bus = 0;
  std::vector<CutRecord> records;
};

inline constexpr std::size_t kMaxEnumerationBuses = 16;

/// Every bipartition with the exporting endpoint on one side and the
/// importing endpoint on the other. Throws InputError above max_buses.
CutEnumeration enumerate_cuts(const PowerNetwork& network, const FlowState& state,
                              std::size_t branch, std::size_t max_buses = kMaxEnumerationBuses);

/// min(R_K - P_K) over the enumeration: the exact transfer margin.
Power enumerated_margin(const CutEnumeration& cuts);

/// Whether some cut K containing the branch has R_K < P_K.
bool has_saturated_cut(const CutEnumeration& cuts);

/// Exhaustive feasibility check: the injections can be served iff every bus
/// subset's net injection fits within the ratings of its boundary.
bool injections_feasible(const PowerNetwork& network, const FlowState& state,
                         std::size_t max_buses = kMaxEnumerationBuses);

}  // namespace gridcuts
