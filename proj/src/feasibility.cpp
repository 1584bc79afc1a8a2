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

#include "gridcuts/feasibility.hpp"

#include <algorithm>

#ifdef GRIDCUTS_HAVE_OPENMP
#include <omp.h>
#endif

namespace gridcuts {

namespace {

std::vector<std::size_t> boundary(const PowerNetwork& network, const FlowState& state,
                                  std::span<const std::size_t> cluster, std::vector<char>& mask) {
  std::vector<std::size_t> cut;
  for (std::size_t b : cluster) mask[b] = 1;
  for (std::size_t b : cluster) {
    for (const Incidence& inc : network.incident(b))
      if (state.live(inc.branch) && !mask[inc.neighbor]) cut.push_back(inc.branch);
  }
  for (std::size_t b : cluster) mask[b] = 0;
  std::sort(cut.begin(), cut.end());
  cut.erase(std::unique(cut.begin(), cut.end()), cut.end());
  return cut;
}

}  // namespace

FtResult ft_edge(const PowerNetwork& network, const FlowState& state, std::size_t branch,
                 PathFinder* scratch) {
  if (branch >= network.branch_count()) throw InputError("unknown branch index");
  if (!state.live(branch))
    throw InputError("branch " + network.branch(branch).id.value + " is not live");

  PathFinder local;
  PathFinder& finder = scratch ? *scratch : local;

  FtResult r;
  r.branch = branch;
  const Power f = state.flow(branch);
  std::size_t src = network.from_index(branch);
  std::size_t dst = network.to_index(branch);
  if (f.negative()) std::swap(src, dst);
  r.from_bus = network.bus(src).id;
  r.to_bus = network.bus(dst).id;
  r.flow = abs(f);

  // Work on a private copy of the capacity graph with the branch removed.
  FlowState work = state;
  work.remove(branch);

  r.radial = !finder.search(network, work, src, dst, PathFinder::Mode::topology);

  std::vector<char> on_path(network.branch_count(), 0);
  const std::size_t cap = network.branch_count() * network.bus_count() + 1;
  while (finder.search(network, work, src, dst)) {
    if (r.augmenting_paths >= cap) throw InternalError("feasibility test exceeded |E||V| paths");
    const Path path = finder.path_to(network, dst);
    const Power cp = path_bottleneck(network, work, path);
    push_path(network, work, path, cp);
    r.tc += cp;
    ++r.augmenting_paths;
    for (const Step& s : path.steps) on_path[s.branch] = 1;
  }

  // Source-side minimum cut: everything reachable from the exporting end
  // without crossing a saturated arc.
  finder.search(network, work, src);
  r.cluster1.assign(finder.visited().begin(), finder.visited().end());
  std::sort(r.cluster1.begin(), r.cluster1.end());

  std::vector<char> mask(network.bus_count(), 0);
  r.kcrit = boundary(network, state, r.cluster1, mask);

  // Sink-side minimum cut; differs from the source side only on ties.
  finder.search(network, work, dst, PathFinder::npos, PathFinder::Mode::inbound);
  std::vector<char> sink_side(network.bus_count(), 0);
  for (std::size_t b : finder.visited()) sink_side[b] = 1;
  std::vector<std::size_t> sink_cluster;
  for (std::size_t b = 0; b < network.bus_count(); ++b)
    if (!sink_side[b]) sink_cluster.push_back(b);
  r.kcrit_tied = boundary(network, state, sink_cluster, mask) != r.kcrit;

  r.margin = r.tc - r.flow;
  r.special = r.margin.negative();

  for (std::size_t br : r.kcrit) on_path[br] = 1;
  for (std::size_t br = 0; br < on_path.size(); ++br)
    if (on_path[br]) r.certificate.push_back(br);
  return r;
}

FtResult ft_edge(const PowerNetwork& network, const FlowState& state, const BranchId& branch) {
  return ft_edge(network, state, network.branch_index(branch));
}

namespace {

struct Job {
  std::size_t branch;
  bool run;
  std::string failure;
};

std::vector<Job> plan(const PowerNetwork& network, const FlowState& state,
                      std::span<const std::size_t> branches) {
  std::vector<std::size_t> order(branches.begin(), branches.end());
  if (order.empty()) {
    order.resize(network.branch_count());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  }
  std::sort(order.begin(), order.end());
  order.erase(std::unique(order.begin(), order.end()), order.end());

  std::vector<Job> jobs;
  jobs.reserve(order.size());
  for (std::size_t br : order) {
    if (br >= network.branch_count()) {
      jobs.push_back({br, false, "unknown branch index"});
    } else if (!state.live(br)) {
      // Out-of-service and removed branches are silently outside a full sweep.
      if (!branches.empty()) jobs.push_back({br, false, "branch is not live"});
    } else if (!state.flow(br).is_zero()) {
      jobs.push_back({br, true, {}});
    }
  }
  return jobs;
}

SweepOutcome collect(const PowerNetwork& network, const std::vector<Job>& jobs,
                     std::vector<std::optional<FtResult>>& slots) {
  SweepOutcome out;
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    if (slots[i]) {
      out.results.push_back(std::move(*slots[i]));
    } else {
      const std::string id = jobs[i].branch < network.branch_count()
                                 ? network.branch(jobs[i].branch).id.value
                                 : "#" + std::to_string(jobs[i].branch);
      out.failures.push_back({BranchId{id}, jobs[i].failure});
    }
  }
  return out;
}

}  // namespace

SweepOutcome ft_sweep_serial(const PowerNetwork& network, const FlowState& state,
                             std::span<const std::size_t> branches) {
  const std::vector<Job> jobs = plan(network, state, branches);
  std::vector<std::optional<FtResult>> slots(jobs.size());
  PathFinder finder(network.bus_count());
  for (std::size_t i = 0; i < jobs.size(); ++i)
    if (jobs[i].run) slots[i] = ft_edge(network, state, jobs[i].branch, &finder);
  return collect(network, jobs, slots);
}

SweepOutcome ft_sweep(const PowerNetwork& network, const FlowState& state,
                      std::span<const std::size_t> branches) {
#ifdef GRIDCUTS_HAVE_OPENMP
  std::vector<Job> jobs = plan(network, state, branches);
  std::vector<std::optional<FtResult>> slots(jobs.size());
  const auto n = static_cast<std::ptrdiff_t>(jobs.size());
#pragma omp parallel
  {
    PathFinder finder(network.bus_count());
#pragma omp for schedule(dynamic, 8)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
      auto& job = jobs[static_cast<std::size_t>(i)];
      if (!job.run) continue;
      try {
        slots[static_cast<std::size_t>(i)] = ft_edge(network, state, job.branch, &finder);
      } catch (const std::exception& e) {
        job.failure = e.what();
      }
    }
  }
  return collect(network, jobs, slots);
#else
  return ft_sweep_serial(network, state, branches);
#endif
}

SweepOutcome ft_sweep(const PowerNetwork& network, const FlowState& state,
                      const std::vector<BranchId>& branches) {
  SweepOutcome unknown;
  std::vector<std::size_t> ix;
  for (const BranchId& id : branches) {
    if (auto b = network.find_branch(id))
      ix.push_back(*b);
    else
      unknown.failures.push_back({id, "unknown branch"});
  }
  if (ix.empty() && !branches.empty()) return unknown;
  SweepOutcome out = ft_sweep(network, state, ix);
  out.failures.insert(out.failures.end(), unknown.failures.begin(), unknown.failures.end());
  return out;
}

bool is_saturated(std::span<const double> cut_flows_mw, std::span<const double> cut_ratings_mw) {
  if (cut_flows_mw.size() != cut_ratings_mw.size())
    throw InputError("flow and rating lists differ in length");
  Power flow, rating;
  for (double f : cut_flows_mw) flow += Power::from_mw(f);
  for (double r : cut_ratings_mw) rating += Power::from_mw(r);
  return abs(flow) > rating;
}

}  // namespace gridcuts
