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

#include "gridcuts/netflow.hpp"

#include <algorithm>
#include <random>
#include <sstream>

namespace gridcuts {

namespace {

std::string deficit_message(Power deficit, const std::vector<BranchId>& cut) {
  std::ostringstream os;
  os.precision(17);
  os << "infeasible flow: " << deficit.mw() << " MW of demand cannot be served; limiting cut {";
  for (std::size_t i = 0; i < cut.size(); ++i) os << (i ? ", " : "") << cut[i].value;
  os << "}";
  return os.str();
}

class Picker {
 public:
  explicit Picker(const Ordering& ordering) : ordering_(ordering), rng_(ordering.seed) {}

  /// Chooses one of the candidates (already in ascending BusId order).
  std::size_t pick(const std::vector<std::size_t>& candidates) {
    if (ordering_.mode == Ordering::Mode::deterministic) return candidates.front();
    std::uniform_int_distribution<std::size_t> dist(0, candidates.size() - 1);
    return candidates[dist(rng_)];
  }

 private:
  Ordering ordering_;
  std::mt19937_64 rng_;
};

}  // namespace

InfeasibleFlow::InfeasibleFlow(Power deficit, std::vector<BranchId> limiting_cut)
    : Error(deficit_message(deficit, limiting_cut)),
      deficit_(deficit),
      limiting_cut_(std::move(limiting_cut)) {}

FlowState build_flow(const PowerNetwork& network, const Ordering& ordering) {
  return build_flow(network, FlowState(network), ordering);
}

FlowState build_flow(const PowerNetwork& network, FlowState state, const Ordering& ordering) {
  const std::size_t nb = network.bus_count();
  for (std::size_t br = 0; br < state.branch_count(); ++br)
    if (!state.flow(br).is_zero() && state.live(br))
      throw InputError("build_flow expects a zero-flow initial state");

  // Buses in ascending id order so "lowest id" and candidate lists agree.
  std::vector<std::size_t> by_id(nb);
  for (std::size_t i = 0; i < nb; ++i) by_id[i] = i;
  std::sort(by_id.begin(), by_id.end(),
            [&](std::size_t a, std::size_t b) { return network.bus(a).id < network.bus(b).id; });

  std::vector<Power> supply(nb), demand(nb);
  for (std::size_t b = 0; b < nb; ++b) {
    supply[b] = network.generation(b);
    demand[b] = network.load(b);
  }
  // A bus with both generation and load serves itself first; a push from a
  // bus to itself is zero-length.
  for (std::size_t b = 0; b < nb; ++b) {
    const Power local = std::min(supply[b], demand[b]);
    supply[b] -= local;
    demand[b] -= local;
  }

  Picker picker(ordering);
  PathFinder finder(nb);
  std::vector<char> blocked(nb, 0);
  std::size_t source = PathFinder::npos;
  std::size_t sink = PathFinder::npos;
  bool progress = false;
  const std::size_t iteration_cap = 4 * (network.branch_count() + 1) * (nb + 1) + 1000;

  for (std::size_t iter = 0;; ++iter) {
    if (iter > iteration_cap) throw InternalError("build_flow exceeded its iteration bound");
    Power remaining_demand;
    for (Power d : demand) remaining_demand += d;
    if (!remaining_demand.positive()) break;

    if (source == PathFinder::npos || !supply[source].positive()) {
      std::vector<std::size_t> candidates;
      for (std::size_t b : by_id)
        if (supply[b].positive() && !blocked[b]) candidates.push_back(b);
      if (candidates.empty()) {
        // Pushes elsewhere may have opened reverse capacity for blocked
        // sources; retry them once per round of progress.
        if (!progress) break;
        progress = false;
        std::fill(blocked.begin(), blocked.end(), 0);
        continue;
      }
      source = picker.pick(candidates);
      sink = PathFinder::npos;
    }

    finder.search(network, state, source);
    if (sink == PathFinder::npos || !demand[sink].positive() || !finder.reached(sink)) {
      std::vector<std::size_t> candidates;
      for (std::size_t b : by_id)
        if (demand[b].positive() && finder.reached(b)) candidates.push_back(b);
      if (candidates.empty()) {
        blocked[source] = 1;
        source = PathFinder::npos;
        continue;
      }
      sink = picker.pick(candidates);
    }

    const Path path = finder.path_to(network, sink);
    const Power bottleneck = path_bottleneck(network, state, path);
    const Power amount = std::min({supply[source], demand[sink], bottleneck});
    push_path(network, state, path, amount);
    supply[source] -= amount;
    demand[sink] -= amount;
    progress = true;
  }

  Power deficit;
  for (Power d : demand) deficit += d;
  // Within balance tolerance the case counts as served.
  if (deficit > kBalanceTolerance) {
    std::vector<std::size_t> surplus;
    for (std::size_t b = 0; b < nb; ++b)
      if (supply[b].positive()) surplus.push_back(b);
    finder.search_all(network, state, surplus);
    std::vector<char> inside(nb, 0);
    for (std::size_t b : finder.visited()) inside[b] = 1;
    const std::vector<std::size_t> cut = cut_of(network, state, inside);
    throw InfeasibleFlow(deficit, branch_ids(network, cut));
  }
  return state;
}

Power cut_transfer(const PowerNetwork& network, const FlowState& state,
                   const std::set<BranchId>& cut, const std::set<BusId>& toward) {
  if (toward.empty()) throw InputError("cluster must not be empty");
  std::vector<char> inside(network.bus_count(), 0);
  for (BusId b : toward) inside[network.bus_index(b)] = 1;
  std::set<BranchId> boundary;
  for (std::size_t br : cut_of(network, state, inside)) boundary.insert(network.branch(br).id);
  if (boundary != cut) throw InputError("branch set is not the cut around the given cluster");
  return -transfer_out_of(network, state, inside);
}

Power cluster_net_injection(const PowerNetwork& network, const std::set<BusId>& cluster) {
  Power sum;
  for (BusId b : cluster) sum += network.injection(network.bus_index(b));
  return sum;
}

}  // namespace gridcuts
