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

#include "gridcuts/update.hpp"

#include <algorithm>

namespace gridcuts {

namespace {

std::vector<std::size_t> sorted(std::span<const std::size_t> v) {
  std::vector<std::size_t> out(v.begin(), v.end());
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

std::pair<FlowState, UpdateResult> apply_outage(const PowerNetwork& network, FlowState state,
                                                std::size_t branch) {
  if (branch >= network.branch_count()) throw InputError("unknown branch index");
  if (!state.live(branch))
    throw InputError("branch " + network.branch(branch).id.value + " is not live");

  UpdateResult r;
  r.branch = branch;
  const Power f = state.flow(branch);
  std::size_t src = network.from_index(branch);
  std::size_t dst = network.to_index(branch);
  if (f.negative()) std::swap(src, dst);
  r.from_bus = network.bus(src).id;
  r.to_bus = network.bus(dst).id;
  r.flow = abs(f);

  state.remove(branch);

  PathFinder finder(network.bus_count());
  if (!finder.search(network, state, src, dst, PathFinder::Mode::topology)) {
    const std::vector<std::size_t> a = sorted(finder.visited());
    finder.search(network, state, dst, PathFinder::npos, PathFinder::Mode::topology);
    const std::vector<std::size_t> b = sorted(finder.visited());
    Islanding island;
    island.separated = a.size() < b.size() || (a.size() == b.size() && a < b) ? a : b;
    island.imbalance = cluster_injection(network, island.separated);
    island.pruned = island.imbalance.is_zero();
    r.deficit = r.flow;
    if (r.deficit.positive()) {
      r.saturated_cluster = a;
      r.saturated_cut = {branch};
    }
    r.islanding = std::move(island);
    return {std::move(state), std::move(r)};
  }

  Power remaining = r.flow;
  std::vector<char> touched(network.branch_count(), 0);
  while (remaining.positive() && finder.search(network, state, src, dst)) {
    Path path = finder.path_to(network, dst);
    const Power amount = std::min(remaining, path_bottleneck(network, state, path));
    push_path(network, state, path, amount);
    for (const Step& s : path.steps) touched[s.branch] = 1;
    remaining -= amount;
    r.rerouted += amount;
    r.paths.push_back({std::move(path), amount});
  }
  for (std::size_t br = 0; br < touched.size(); ++br)
    if (touched[br]) r.changed.push_back(br);
  r.deficit = remaining;

  if (r.deficit.positive()) {
    finder.search(network, state, src);
    r.saturated_cluster = sorted(finder.visited());
    std::vector<char> inside(network.bus_count(), 0);
    for (std::size_t b : r.saturated_cluster) inside[b] = 1;
    r.saturated_cut = cut_of(network, state, inside);
    r.saturated_cut.push_back(branch);
    std::sort(r.saturated_cut.begin(), r.saturated_cut.end());
  }
  return {std::move(state), std::move(r)};
}

std::pair<FlowState, UpdateResult> apply_outage(const PowerNetwork& network, FlowState state,
                                                const BranchId& branch) {
  return apply_outage(network, std::move(state), network.branch_index(branch));
}

}  // namespace gridcuts
