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

#include "gridcuts/oracles.hpp"

#include <Eigen/OrderingMethods>
#include <Eigen/SparseCore>
#include <Eigen/SparseLU>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>

namespace gridcuts {

namespace {

std::size_t find_root(std::vector<std::size_t>& parent, std::size_t x) {
  while (parent[x] != x) x = parent[x] = parent[parent[x]];
  return x;
}

}  // namespace

BusId default_slack(const PowerNetwork& network) {
  if (network.bus_count() == 0) throw InputError("network has no buses");
  std::size_t best = 0;
  for (std::size_t b = 1; b < network.bus_count(); ++b) {
    const auto& cand = network.bus(b);
    const auto& cur = network.bus(best);
    if (cand.gen_mw > cur.gen_mw || (cand.gen_mw == cur.gen_mw && cand.id < cur.id)) best = b;
  }
  return network.bus(best).id;
}

DcSolution dc_solve(const PowerNetwork& network, std::optional<BusId> slack,
                    std::span<const std::size_t> excluded) {
  const std::size_t n = network.bus_count();
  const BusId slack_id = slack ? *slack : default_slack(network);
  const std::size_t s = network.bus_index(slack_id);

  std::vector<char> skip(network.branch_count(), 0);
  for (std::size_t br : excluded) skip.at(br) = 1;

  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  std::size_t components = n;
  for (std::size_t br = 0; br < network.branch_count(); ++br) {
    const Branch& b = network.branch(br);
    if (skip[br] || !b.in_service) continue;
    if (!b.reactance_pu) throw InputError("branch " + b.id.value + " has no reactance");
    const std::size_t x = find_root(parent, network.from_index(br));
    const std::size_t y = find_root(parent, network.to_index(br));
    if (x != y) {
      parent[x] = y;
      --components;
    }
  }
  if (components != 1) throw InputError("DC system is singular: network is not connected");

  // Reduced susceptance matrix with the slack row and column deleted.
  auto reduced = [s](std::size_t b) { return b < s ? b : b - 1; };
  const auto m = static_cast<Eigen::Index>(n - 1);
  std::vector<Eigen::Triplet<double>> entries;
  Eigen::VectorXd P(m);
  for (std::size_t b = 0; b < n; ++b)
    if (b != s) P(static_cast<Eigen::Index>(reduced(b))) = network.injection(b).mw() / network.base_mva();
  for (std::size_t br = 0; br < network.branch_count(); ++br) {
    if (skip[br] || !network.branch(br).in_service) continue;
    const double y = 1.0 / *network.branch(br).reactance_pu;
    const auto i = static_cast<Eigen::Index>(reduced(network.from_index(br)));
    const auto j = static_cast<Eigen::Index>(reduced(network.to_index(br)));
    const bool has_i = network.from_index(br) != s, has_j = network.to_index(br) != s;
    if (has_i) entries.emplace_back(i, i, y);
    if (has_j) entries.emplace_back(j, j, y);
    if (has_i && has_j) {
      entries.emplace_back(i, j, -y);
      entries.emplace_back(j, i, -y);
    }
  }
  Eigen::SparseMatrix<double> B(m, m);
  B.setFromTriplets(entries.begin(), entries.end());

  DcSolution sol;
  sol.slack = slack_id;
  sol.angle.assign(n, 0.0);
  if (m > 0) {
    Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>> lu;
    lu.compute(B);
    if (lu.info() != Eigen::Success) throw InputError("DC system is singular");
    const Eigen::VectorXd theta = lu.solve(P);
    for (std::size_t b = 0; b < n; ++b)
      if (b != s) sol.angle[b] = theta(static_cast<Eigen::Index>(reduced(b)));
  }
  sol.flow_mw.assign(network.branch_count(), 0.0);
  for (std::size_t br = 0; br < network.branch_count(); ++br) {
    if (skip[br] || !network.branch(br).in_service) continue;
    sol.flow_mw[br] = network.base_mva() *
                      (sol.angle[network.from_index(br)] - sol.angle[network.to_index(br)]) /
                      *network.branch(br).reactance_pu;
  }
  return sol;
}

ContingencyOutcome dc_post_contingency_overloads(const PowerNetwork& network,
                                                 std::optional<BusId> slack,
                                                 const BranchId& outage) {
  const std::size_t out = network.branch_index(outage);
  FlowState topology(network);
  if (!topology.live(out)) throw InputError("branch " + outage.value + " is not in service");
  topology.remove(out);
  PathFinder finder(network.bus_count());
  ContingencyOutcome result;
  if (!finder.search(network, topology, network.from_index(out), network.to_index(out),
                     PathFinder::Mode::topology)) {
    result.islanded = true;
    return result;
  }
  const std::size_t excluded[] = {out};
  const DcSolution sol = dc_solve(network, slack, excluded);
  for (std::size_t br = 0; br < network.branch_count(); ++br) {
    if (br == out || !network.branch(br).in_service) continue;
    const double over = std::abs(sol.flow_mw[br]) - network.branch(br).rating_mw;
    if (over > 1e-9) result.overloads.push_back({network.branch(br).id, sol.flow_mw[br], over});
  }
  return result;
}

namespace {

bool side_connected(const PowerNetwork& network, const FlowState& state,
                    const std::vector<char>& inside, char side) {
  std::size_t start = network.bus_count();
  std::size_t members = 0;
  for (std::size_t b = 0; b < network.bus_count(); ++b) {
    if (inside[b] != side) continue;
    if (start == network.bus_count()) start = b;
    ++members;
  }
  if (members == 0) return false;
  std::vector<char> seen(network.bus_count(), 0);
  std::vector<std::size_t> stack{start};
  seen[start] = 1;
  std::size_t count = 1;
  while (!stack.empty()) {
    const std::size_t u = stack.back();
    stack.pop_back();
    for (const Incidence& inc : network.incident(u)) {
      if (!state.live(inc.branch) || seen[inc.neighbor] || inside[inc.neighbor] != side) continue;
      seen[inc.neighbor] = 1;
      ++count;
      stack.push_back(inc.neighbor);
    }
  }
  return count == members;
}

}  // namespace

CutEnumeration enumerate_cuts(const PowerNetwork& network, const FlowState& state,
                              std::size_t branch, std::size_t max_buses) {
  const std::size_t n = network.bus_count();
  if (n > max_buses)
    throw InputError("cut enumeration is limited to " + std::to_string(max_buses) + " buses");
  if (branch >= network.branch_count() || !state.live(branch))
    throw InputError("branch is unknown or not live");

  CutEnumeration result;
  result.branch = branch;
  result.from_bus = network.from_index(branch);
  result.to_bus = network.to_index(branch);
  if (state.flow(branch).negative()) std::swap(result.from_bus, result.to_bus);

  // The remaining buses are free; each bit pattern places them on a side.
  std::vector<std::size_t> free;
  for (std::size_t b = 0; b < n; ++b)
    if (b != result.from_bus && b != result.to_bus) free.push_back(b);

  std::vector<char> inside(n, 0);
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << free.size()); ++mask) {
    std::fill(inside.begin(), inside.end(), 0);
    inside[result.from_bus] = 1;
    for (std::size_t k = 0; k < free.size(); ++k)
      if (mask >> k & 1U) inside[free[k]] = 1;

    CutRecord rec;
    for (std::size_t b = 0; b < n; ++b) {
      if (!inside[b]) continue;
      rec.cluster1.push_back(b);
      rec.required += network.injection(b);
    }
    for (std::size_t br = 0; br < network.branch_count(); ++br) {
      if (!state.live(br)) continue;
      if (inside[network.from_index(br)] == inside[network.to_index(br)]) continue;
      rec.cut.push_back(br);
      if (br != branch) rec.capacity += state.rating(br);
    }
    rec.connected = side_connected(network, state, inside, 1) &&
                    side_connected(network, state, inside, 0);
    result.records.push_back(std::move(rec));
  }
  return result;
}

Power enumerated_margin(const CutEnumeration& cuts) {
  if (cuts.records.empty()) throw InputError("empty enumeration");
  Power best = cuts.records.front().capacity - cuts.records.front().required;
  for (const CutRecord& r : cuts.records) best = std::min(best, r.capacity - r.required);
  return best;
}

bool has_saturated_cut(const CutEnumeration& cuts) {
  return std::any_of(cuts.records.begin(), cuts.records.end(),
                     [](const CutRecord& r) { return r.capacity < r.required; });
}

bool injections_feasible(const PowerNetwork& network, const FlowState& state,
                         std::size_t max_buses) {
  const std::size_t n = network.bus_count();
  if (n > max_buses)
    throw InputError("feasibility enumeration is limited to " + std::to_string(max_buses) +
                     " buses");
  for (std::uint64_t mask = 1; mask + 1 < (std::uint64_t{1} << n); ++mask) {
    Power net;
    for (std::size_t b = 0; b < n; ++b)
      if (mask >> b & 1U) net += network.injection(b);
    Power boundary;
    for (std::size_t br = 0; br < network.branch_count(); ++br) {
      if (!state.live(br)) continue;
      const bool a = (mask >> network.from_index(br) & 1U) != 0;
      const bool c = (mask >> network.to_index(br) & 1U) != 0;
      if (a != c) boundary += state.rating(br);
    }
    if (net > boundary + kBalanceTolerance) return false;
  }
  return true;
}

}  // namespace gridcuts
