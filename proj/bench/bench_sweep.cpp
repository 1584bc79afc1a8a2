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

#include <chrono>
#include <cstdio>
#include <memory>
#include <string>

#include <CLI11.hpp>

#include "gridcuts/feasibility.hpp"
#include "gridcuts/netflow.hpp"
#include "gridcuts/oracles.hpp"
#include "gridcuts/session.hpp"
#include "gridcuts/synthetic.hpp"

#ifdef GRIDCUTS_HAVE_OPENMP
#include <omp.h>
#endif

using namespace gridcuts;

namespace {

template <class F>
double best_of(int reps, F&& f) {
  double best = 1e300;
  for (int i = 0; i < reps; ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    f();
    best = std::min(best, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
  }
  return best;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Parallel vs serial feasibility sweep on a synthetic grid"};
  std::uint64_t seed = 1;
  GridOptions grid;
  int reps = 3, dc_samples = 20, outages = 5;
  app.add_option("--seed", seed, "Grid seed");
  app.add_option("--buses", grid.buses, "Bus count");
  app.add_option("--branches", grid.branches, "Branch count");
  app.add_option("--reps", reps, "Repetitions; the best time is reported");
  app.add_option("--dc-samples", dc_samples, "DC solves timed to extrapolate one per branch");
  app.add_option("--outages", outages, "Outages applied to measure shortlisted re-analysis");
  CLI11_PARSE(app, argc, argv);

  auto net = std::make_shared<const PowerNetwork>(PowerNetwork::build(synthetic_grid(seed, grid)));
  const FlowState state = build_flow(*net);
  int threads = 1;
#ifdef GRIDCUTS_HAVE_OPENMP
  threads = omp_get_max_threads();
#endif
  std::printf("grid: %zu buses, %zu branches, %d thread(s)\n", net->bus_count(),
              net->branch_count(), threads);

  SweepOutcome serial, parallel;
  const double t_serial = best_of(reps, [&] { serial = ft_sweep_serial(*net, state); });
  const double t_parallel = best_of(reps, [&] { parallel = ft_sweep(*net, state); });
  std::printf("sweep serial   %.4f s (%zu branches tested)\n", t_serial, serial.results.size());
  std::printf("sweep parallel %.4f s, speedup %.2fx, identical output: %s\n", t_parallel,
              t_serial / t_parallel, serial == parallel ? "yes" : "NO");

  const BusId slack = default_slack(*net);
  const double t_dc = best_of(1, [&] {
                        for (int i = 0; i < dc_samples; ++i) dc_solve(*net, slack);
                      }) / dc_samples;
  const double t_dc_all = t_dc * static_cast<double>(net->branch_count());
  std::printf("dc solve %.5f s each; %zu solves extrapolated %.3f s; serial sweep / DC ratio %.3f\n",
              t_dc, net->branch_count(), t_dc_all, t_serial / t_dc_all);

  Session session = Session::start(net);
  std::size_t applied = 0;
  for (std::size_t br = 0; br < net->branch_count() && applied < static_cast<std::size_t>(outages);
       br += net->branch_count() / (outages + 1)) {
    if (session.status() != SessionStatus::nominal) break;
    if (!session.state().flow.live(br) || session.state().flow.flow(br).is_zero()) continue;
    const EventRecord rec = session.what_if(net->branch(br).id);
    if (rec.status != SessionStatus::nominal) continue;
    const EventRecord& applied_rec = session.apply_event(net->branch(br).id);
    ++applied;
    std::printf("outage %-10s retested %4zu of %zu (%.2f%%), sa+ft %.4f s, full sweep ratio %.1fx\n",
                net->branch(br).id.value.c_str(), applied_rec.retested.size(), net->branch_count(),
                100.0 * static_cast<double>(applied_rec.retested.size()) /
                    static_cast<double>(net->branch_count()),
                applied_rec.timings.sa_s + applied_rec.timings.ft_s,
                t_parallel / (applied_rec.timings.sa_s + applied_rec.timings.ft_s));
  }
  return serial == parallel ? 0 : 1;
}
