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

#include "gridcuts/flowgraph.hpp"

#include <algorithm>

namespace gridcuts {

FlowState::FlowState(const PowerNetwork& network)
    : rating_(network.branch_count()),
      flow_(network.branch_count()),
      status_(network.branch_count(), kLive) {
  for (std::size_t i = 0; i < network.branch_count(); ++i) {
    rating_[i] = network.rating(i);
    if (!network.branch(i).in_service) status_[i] = kOutOfService;
  }
}

FlowState FlowState::from_flows(const PowerNetwork& network,
                                const std::map<BranchId, double>& flows_mw) {
  FlowState state(network);
  for (const auto& [id, mw] : flows_mw) {
    const std::size_t br = network.branch_index(id);
    if (!state.live(br)) throw InputError("branch " + id.value + " is not in service");
    const Power f = Power::from_mw(mw);
    if (abs(f) > state.rating_[br])
      throw InputError("flow on branch " + id.value + " exceeds its rating");
    state.flow_[br] = f;
  }
  return state;
}

std::vector<std::size_t> FlowState::removed_branches() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < status_.size(); ++i)
    if (status_[i] == kRemoved) out.push_back(i);
  return out;
}

void FlowState::push(std::size_t br, Direction d, Power amount) {
  if (!live(br)) throw InputError("cannot push flow on a branch that is not live");
  const Power next = d == Direction::forward ? flow_[br] + amount : flow_[br] - amount;
  if (abs(next) > rating_[br]) throw InputError("push exceeds branch rating");
  flow_[br] = next;
}

void FlowState::remove(std::size_t br) {
  if (br >= status_.size()) throw InputError("branch index out of range");
  if (status_[br] == kRemoved) throw InputError("branch already removed");
  if (status_[br] == kOutOfService) throw InputError("branch is out of service");
  status_[br] = kRemoved;
}

std::size_t step_head(const PowerNetwork& network, const Step& step) {
  return step.dir == Direction::forward ? network.to_index(step.branch)
                                        : network.from_index(step.branch);
}

std::size_t step_tail(const PowerNetwork& network, const Step& step) {
  return step.dir == Direction::forward ? network.from_index(step.branch)
                                        : network.to_index(step.branch);
}

std::vector<std::size_t> path_buses(const PowerNetwork& network, const Path& path) {
  std::vector<std::size_t> buses{path.start_bus};
  for (const Step& s : path.steps) buses.push_back(step_head(network, s));
  return buses;
}

std::string describe(const PowerNetwork& network, const Path& path) {
  std::string out;
  for (std::size_t b : path_buses(network, path)) {
    if (!out.empty()) out += '-';
    out += to_string(network.bus(b).id);
  }
  return out;
}

PathFinder::PathFinder(std::size_t bus_count) { reset(bus_count); }

void PathFinder::reset(std::size_t bus_count) {
  if (stamp_.size() != bus_count) {
    stamp_.assign(bus_count, 0);
    parent_branch_.assign(bus_count, npos);
    depth_.assign(bus_count, 0);
    queue_.assign(bus_count, 0);
    epoch_ = 0;
  }
  if (++epoch_ == 0) {
    std::fill(stamp_.begin(), stamp_.end(), 0);
    epoch_ = 1;
  }
  tail_ = 0;
}

bool PathFinder::search(const PowerNetwork& network, const FlowState& state, std::size_t src,
                        std::size_t dst, Mode mode) {
  reset(network.bus_count());
  source_ = src;
  stamp_[src] = epoch_;
  parent_branch_[src] = npos;
  depth_[src] = 0;
  queue_[tail_++] = src;
  if (src == dst) return true;
  expand(network, state, dst, mode);
  return dst != npos && reached(dst);
}

void PathFinder::search_all(const PowerNetwork& network, const FlowState& state,
                            std::span<const std::size_t> sources, Mode mode) {
  reset(network.bus_count());
  source_ = sources.empty() ? 0 : sources.front();
  for (std::size_t s : sources) {
    if (stamp_[s] == epoch_) continue;
    stamp_[s] = epoch_;
    parent_branch_[s] = npos;
    depth_[s] = 0;
    queue_[tail_++] = s;
  }
  expand(network, state, npos, mode);
}

void PathFinder::expand(const PowerNetwork& network, const FlowState& state, std::size_t dst,
                        Mode mode) {
  for (std::size_t head = 0; head < tail_; ++head) {
    const std::size_t u = queue_[head];
    for (const Incidence& inc : network.incident(u)) {
      const std::size_t v = inc.neighbor;
      if (stamp_[v] == epoch_ || !state.live(inc.branch)) continue;
      const Direction out =
          network.from_index(inc.branch) == u ? Direction::forward : Direction::reverse;
      switch (mode) {
        case Mode::residual:
          if (!state.capacity(inc.branch, out).positive()) continue;
          break;
        case Mode::inbound:
          if (!state.capacity(inc.branch, opposite(out)).positive()) continue;
          break;
        case Mode::topology:
          break;
      }
      stamp_[v] = epoch_;
      parent_branch_[v] = inc.branch;
      depth_[v] = depth_[u] + 1;
      queue_[tail_++] = v;
      if (v == dst) return;
    }
  }
}

Path PathFinder::path_to(const PowerNetwork& network, std::size_t dst) const {
  if (!reached(dst)) throw InputError("bus was not reached by the last search");
  Path path;
  path.start_bus = source_;
  std::size_t v = dst;
  while (parent_branch_[v] != npos) {
    const std::size_t br = parent_branch_[v];
    const bool forward = network.to_index(br) == v;
    path.steps.push_back(Step{br, forward ? Direction::forward : Direction::reverse});
    v = forward ? network.from_index(br) : network.to_index(br);
  }
  std::reverse(path.steps.begin(), path.steps.end());
  path.start_bus = v;
  return path;
}

std::optional<Path> shortest_unsaturated_path(const PowerNetwork& network, const FlowState& state,
                                              BusId from, BusId to) {
  const std::size_t src = network.bus_index(from);
  const std::size_t dst = network.bus_index(to);
  PathFinder finder(network.bus_count());
  if (!finder.search(network, state, src, dst)) return std::nullopt;
  return finder.path_to(network, dst);
}

namespace {

void check_continuity(const PowerNetwork& network, const FlowState& state, const Path& path) {
  if (path.empty()) throw InputError("bottleneck of an empty path is undefined");
  std::size_t at = path.start_bus;
  for (const Step& s : path.steps) {
    if (s.branch >= network.branch_count()) throw InputError("path names an unknown branch");
    if (!state.live(s.branch)) throw InputError("path uses a branch that is not live");
    if (step_tail(network, s) != at) throw InputError("path steps are not contiguous");
    at = step_head(network, s);
  }
}

}  // namespace

Power path_bottleneck(const PowerNetwork& network, const FlowState& state, const Path& path) {
  check_continuity(network, state, path);
  Power best = state.capacity(path.steps.front().branch, path.steps.front().dir);
  for (const Step& s : path.steps) best = std::min(best, state.capacity(s.branch, s.dir));
  return best;
}

void push_path(const PowerNetwork& network, FlowState& state, const Path& path, Power amount) {
  if (!amount.positive()) throw InputError("push amount must be positive");
  if (amount > path_bottleneck(network, state, path))
    throw InputError("push amount exceeds the path bottleneck");
  for (const Step& s : path.steps) state.push(s.branch, s.dir, amount);
}

FlowState push_along_path(const PowerNetwork& network, FlowState state, const Path& path,
                          Power amount) {
  push_path(network, state, path, amount);
  return state;
}

FlowState remove_branch(const PowerNetwork& network, FlowState state, const BranchId& branch) {
  state.remove(network.branch_index(branch));
  return state;
}

std::vector<std::size_t> cut_of(const PowerNetwork& network, const FlowState& state,
                                const std::vector<char>& inside) {
  std::vector<std::size_t> cut;
  for (std::size_t br = 0; br < network.branch_count(); ++br) {
    if (!state.live(br)) continue;
    if (inside[network.from_index(br)] != inside[network.to_index(br)]) cut.push_back(br);
  }
  return cut;
}

Power transfer_out_of(const PowerNetwork& network, const FlowState& state,
                      const std::vector<char>& inside) {
  Power out;
  for (std::size_t br = 0; br < network.branch_count(); ++br) {
    if (!state.live(br)) continue;
    const bool from_in = inside[network.from_index(br)] != 0;
    const bool to_in = inside[network.to_index(br)] != 0;
    if (from_in && !to_in) out += state.flow(br);
    if (!from_in && to_in) out -= state.flow(br);
  }
  return out;
}

std::vector<Power> conservation_residuals(const PowerNetwork& network, const FlowState& state) {
  std::vector<Power> residual(network.bus_count());
  for (std::size_t b = 0; b < network.bus_count(); ++b) residual[b] = -network.injection(b);
  for (std::size_t br = 0; br < network.branch_count(); ++br) {
    if (!state.live(br)) continue;
    residual[network.from_index(br)] += state.flow(br);
    residual[network.to_index(br)] -= state.flow(br);
  }
  return residual;
}

std::vector<BranchId> branch_ids(const PowerNetwork& network, std::span<const std::size_t> ix) {
  std::vector<BranchId> out;
  out.reserve(ix.size());
  for (std::size_t i : ix) out.push_back(network.branch(i).id);
  return out;
}

std::vector<BusId> bus_ids(const PowerNetwork& network, std::span<const std::size_t> ix) {
  std::vector<BusId> out;
  out.reserve(ix.size());
  for (std::size_t i : ix) out.push_back(network.bus(i).id);
  return out;
}

}  // namespace gridcuts
