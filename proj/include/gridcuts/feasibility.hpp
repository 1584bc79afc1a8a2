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
#include <string>
#include <vector>

#include "gridcuts/flowgraph.hpp"
#include "gridcuts/model.hpp"

namespace gridcuts {

/// Outcome of testing whether one branch's flow can be rerouted.
///
/// `from_bus` is the exporting endpoint (the flow runs from_bus -> to_bus).
/// `tc` is the extra transfer the rest of the network can carry between the
/// endpoints with the branch removed, and margin = tc - flow. A negative
/// margin makes the branch a special asset; kcrit is then the limiting
/// critical cut-set and margin equals
///     sum(ratings of kcrit minus the branch) - transfer across kcrit.
struct FtResult {
  std::size_t branch = 0;
  BusId from_bus;
  BusId to_bus;
  Power flow;
  Power tc;
  Power margin;
  bool special = false;
  /// The endpoints are disconnected without the branch (islanding outage).
  bool radial = false;
  /// Another minimum cut exists besides the source-side one in kcrit.
  bool kcrit_tied = false;
  std::size_t augmenting_paths = 0;
  std::vector<std::size_t> kcrit;        ///< sorted branch indices, includes `branch`
  std::vector<std::size_t> cluster1;     ///< sorted bus indices on the exporting side
  std::vector<std::size_t> certificate;  ///< sorted branch indices touched by the test

  friend bool operator==(const FtResult&, const FtResult&) = default;
};

/// Tests one live branch. Zero-flow branches are tested in the from->to
/// direction. Throws InputError if the branch is unknown or not live.
FtResult ft_edge(const PowerNetwork& network, const FlowState& state, std::size_t branch,
                 PathFinder* scratch = nullptr);
FtResult ft_edge(const PowerNetwork& network, const FlowState& state, const BranchId& branch);

struct SweepFailure {
  BranchId branch;
  std::string reason;
  friend bool operator==(const SweepFailure&, const SweepFailure&) = default;
};

struct SweepOutcome {
  /// One entry per live branch with nonzero flow, ordered by branch index.
  std::vector<FtResult> results;
  std::vector<SweepFailure> failures;
  friend bool operator==(const SweepOutcome&, const SweepOutcome&) = default;
};

/// Tests the given branches, or every branch when `branches` is empty.
/// Runs the per-branch tests in parallel when built with OpenMP.
SweepOutcome ft_sweep(const PowerNetwork& network, const FlowState& state,
                      std::span<const std::size_t> branches = {});

/// Single-threaded reference for ft_sweep; identical output.
SweepOutcome ft_sweep_serial(const PowerNetwork& network, const FlowState& state,
                             std::span<const std::size_t> branches = {});

SweepOutcome ft_sweep(const PowerNetwork& network, const FlowState& state,
                      const std::vector<BranchId>& branches);

/// Whether the cut must carry more than its members can: |sum(flows)| > sum(ratings).
/// Throws InputError on length mismatch.
bool is_saturated(std::span<const double> cut_flows_mw, std::span<const double> cut_ratings_mw);

}  // namespace gridcuts
