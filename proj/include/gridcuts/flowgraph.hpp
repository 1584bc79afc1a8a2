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
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "gridcuts/model.hpp"

namespace gridcuts {

/// Traversal direction of a branch relative to its (from, to) orientation.
enum class Direction : std::uint8_t { forward, reverse };

inline Direction opposite(Direction d) {
  return d == Direction::forward ? Direction::reverse : Direction::forward;
}

/// Paired flow graph and latent-capacity graph over one network.
///
/// Flow is signed: positive means power moves from the branch's from-bus to
/// its to-bus. For every live branch
///     cap_forward = rating - flow,   cap_reverse = rating + flow,
/// and both stay within [0, 2*rating]. A removed branch keeps its last flow
/// value but is invisible to traversal, conservation and cut sums.
class FlowState {
 public:
  FlowState() = default;
  /// Zero flow everywhere; out-of-service branches are never live.
  explicit FlowState(const PowerNetwork& network);

  /// Seeds the state with explicit per-branch flows (MW, from->to positive).
  /// Branches not named carry zero. Throws InputError on unknown ids or
  /// |flow| > rating.
  static FlowState from_flows(const PowerNetwork& network,
                              const std::map<BranchId, double>& flows_mw);

  std::size_t branch_count() const { return flow_.size(); }
  Power rating(std::size_t br) const { return rating_[br]; }
  Power flow(std::size_t br) const { return flow_[br]; }
  Power cap_forward(std::size_t br) const { return rating_[br] - flow_[br]; }
  Power cap_reverse(std::size_t br) const { return rating_[br] + flow_[br]; }
  Power capacity(std::size_t br, Direction d) const {
    return d == Direction::forward ? cap_forward(br) : cap_reverse(br);
  }
  bool live(std::size_t br) const { return status_[br] == kLive; }
  bool removed(std::size_t br) const { return status_[br] == kRemoved; }
  std::vector<std::size_t> removed_branches() const;

  /// Adds `amount` of flow in direction d. Throws InputError when the result
  /// would exceed the branch rating or the branch is not live.
  void push(std::size_t br, Direction d, Power amount);
  /// Excludes a live branch from all graphs, retaining its flow value.
  void remove(std::size_t br);

  friend bool operator==(const FlowState&, const FlowState&) = default;

 private:
  static constexpr std::uint8_t kLive = 0;
  static constexpr std::uint8_t kRemoved = 1;
  static constexpr std::uint8_t kOutOfService = 2;

  std::vector<Power> rating_;
  std::vector<Power> flow_;
  std::vector<std::uint8_t> status_;
};

struct Step {
  std::size_t branch = 0;
  Direction dir = Direction::forward;
  friend bool operator==(const Step&, const Step&) = default;
};

/// Ordered branch traversals from start_bus; bus indices, not ids.
struct Path {
  std::size_t start_bus = 0;
  std::vector<Step> steps;

  bool empty() const { return steps.empty(); }
  friend bool operator==(const Path&, const Path&) = default;
};

/// Bus index at the head of a step.
std::size_t step_head(const PowerNetwork& network, const Step& step);
std::size_t step_tail(const PowerNetwork& network, const Step& step);
/// Bus indices visited, start bus first.
std::vector<std::size_t> path_buses(const PowerNetwork& network, const Path& path);
/// "5-4-1-6" style rendering using bus ids.
std::string describe(const PowerNetwork& network, const Path& path);

/// Reusable breadth-first search over positive-capacity arcs.
///
/// Neighbor expansion follows PowerNetwork adjacency order, so the returned
/// path is the minimum-hop path that is first in (BusId, BranchId) order.
class PathFinder {
 public:
  static constexpr std::size_t npos = std::numeric_limits<std::size_t>::max();

  enum class Mode {
    residual,  ///< arcs with positive latent capacity in the traversal direction
    topology,  ///< every live branch, ignoring capacity
    inbound,   ///< reversed residual: finds buses that can reach the source
  };

  explicit PathFinder(std::size_t bus_count = 0);

  /// Runs BFS from src. Stops early once dst is reached (dst == npos searches
  /// the whole component). Returns whether dst was reached.
  bool search(const PowerNetwork& network, const FlowState& state, std::size_t src,
              std::size_t dst = npos, Mode mode = Mode::residual);
  /// Multi-source variant; always explores fully.
  void search_all(const PowerNetwork& network, const FlowState& state,
                  std::span<const std::size_t> sources, Mode mode = Mode::residual);

  bool reached(std::size_t bus) const { return stamp_[bus] == epoch_; }
  /// Buses reached by the last search, in visit order.
  std::span<const std::size_t> visited() const { return {queue_.data(), tail_}; }
  /// Path from the last search's source to a reached bus.
  Path path_to(const PowerNetwork& network, std::size_t dst) const;
  /// Hop distance of a reached bus.
  std::size_t depth(std::size_t bus) const { return depth_[bus]; }

 private:
  void reset(std::size_t bus_count);
  void expand(const PowerNetwork& network, const FlowState& state, std::size_t dst, Mode mode);

  std::vector<std::uint32_t> stamp_;
  std::uint32_t epoch_ = 0;
  std::vector<std::size_t> parent_branch_;
  std::vector<std::size_t> depth_;
  std::vector<std::size_t> queue_;
  std::size_t tail_ = 0;
  std::size_t source_ = 0;
};

/// Minimum-hop path whose every step has positive latent capacity, or
/// nullopt. from == to yields an empty path. Throws InputError on unknown or
/// isolated-by-removal buses.
std::optional<Path> shortest_unsaturated_path(const PowerNetwork& network, const FlowState& state,
                                              BusId from, BusId to);

/// Smallest directed latent capacity along the path. Throws InputError on an
/// empty or discontinuous path.
Power path_bottleneck(const PowerNetwork& network, const FlowState& state, const Path& path);

/// Moves `amount` along the path in place, updating capacities. Throws
/// InputError if amount <= 0 or exceeds the bottleneck.
void push_path(const PowerNetwork& network, FlowState& state, const Path& path, Power amount);

/// Value-returning form of push_path.
FlowState push_along_path(const PowerNetwork& network, FlowState state, const Path& path,
                          Power amount);

/// Value-returning removal. Throws InputError if the branch is unknown or not
/// live.
FlowState remove_branch(const PowerNetwork& network, FlowState state, const BranchId& branch);

/// Live branches with exactly one endpoint in the cluster (bus indices,
/// membership mask of size bus_count).
std::vector<std::size_t> cut_of(const PowerNetwork& network, const FlowState& state,
                                const std::vector<char>& inside);

/// Flow leaving the cluster across its live boundary.
Power transfer_out_of(const PowerNetwork& network, const FlowState& state,
                      const std::vector<char>& inside);

/// Per-bus (outflow - inflow) - injection over live branches. All zero for a
/// conserving flow.
std::vector<Power> conservation_residuals(const PowerNetwork& network, const FlowState& state);

/// Branch ids for a list of indices, in the same order.
std::vector<BranchId> branch_ids(const PowerNetwork& network, std::span<const std::size_t> ix);
std::vector<BusId> bus_ids(const PowerNetwork& network, std::span<const std::size_t> ix);

}  // namespace gridcuts
