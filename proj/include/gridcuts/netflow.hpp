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

#include <cstdint>
#include <set>
#include <vector>

#include "gridcuts/flowgraph.hpp"
#include "gridcuts/model.hpp"

namespace gridcuts {

/// How build_flow picks the next source and sink.
struct Ordering {
  enum class Mode { deterministic, seeded };
  Mode mode = Mode::deterministic;
  std::uint64_t seed = 0;

  static Ordering deterministic() { return {}; }
  static Ordering seeded(std::uint64_t seed) { return {Mode::seeded, seed}; }
  friend bool operator==(const Ordering&, const Ordering&) = default;
};

/// Demand could not be met. The limiting cut separates the buses still
/// holding surplus generation (and everything they reach) from the rest.
class InfeasibleFlow : public Error {
 public:
  InfeasibleFlow(Power deficit, std::vector<BranchId> limiting_cut);
  Power deficit() const { return deficit_; }
  const std::vector<BranchId>& limiting_cut() const { return limiting_cut_; }

 private:
  Power deficit_;
  std::vector<BranchId> limiting_cut_;
};

/// Routes every generator's output to the loads along successive shortest
/// unsaturated paths, pushing min(remaining supply, remaining demand, path
/// bottleneck) each time.
///
/// Deterministic mode always serves the lowest-id source first and sends to
/// the lowest-id reachable sink; seeded mode draws both uniformly from an
/// RNG seeded with Ordering::seed. A pair is kept until one side is
/// exhausted. Throws InfeasibleFlow when no unsaturated path is left and
/// demand remains.
FlowState build_flow(const PowerNetwork& network, const Ordering& ordering = {});

/// Same, starting from `initial` (which must carry zero flow); branches
/// already removed there stay removed.
FlowState build_flow(const PowerNetwork& network, FlowState initial, const Ordering& ordering);

/// Signed transfer into `toward` across `cut`. Throws InputError unless the
/// branch set equals the live boundary of `toward`.
Power cut_transfer(const PowerNetwork& network, const FlowState& state,
                   const std::set<BranchId>& cut, const std::set<BusId>& toward);

/// Net injection of a cluster computed from bus data alone.
Power cluster_net_injection(const PowerNetwork& network, const std::set<BusId>& cluster);

}  // namespace gridcuts
