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

#include "gridcuts/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <set>

#include "gridcuts/netflow.hpp"

namespace gridcuts {

namespace {

std::size_t find_root(std::vector<std::size_t>& parent, std::size_t x) {
  while (parent[x] != x) x = parent[x] = parent[parent[x]];
  return x;
}

/// Distributes `total` centi-MW over buses with random weights.
std::vector<std::int64_t> spread(std::int64_t total, std::size_t count, std::mt19937_64& rng) {
  std::vector<std::int64_t> out(count, 0);
  if (count == 0) return out;
  std::uniform_int_distribution<std::size_t> pick(0, count - 1);
  const std::int64_t chunk = std::max<std::int64_t>(1, total / static_cast<std::int64_t>(count * 4));
  std::int64_t left = total;
  while (left > 0) {
    const std::int64_t step = std::min(chunk, left);
    out[pick(rng)] += step;
    left -= step;
  }
  return out;
}

/// Balanced two-decimal injections: some buses generate, some consume.
void assign_injections(NetworkData& data, std::mt19937_64& rng, double gen_share,
                       double load_share, std::int64_t total_centi) {
  const std::size_t n = data.buses.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);
  const std::size_t ng = std::max<std::size_t>(1, static_cast<std::size_t>(gen_share * n));
  const std::size_t nl =
      std::max<std::size_t>(1, std::min(n - ng, static_cast<std::size_t>(load_share * n)));
  std::vector<std::size_t> gens(order.begin(), order.begin() + ng);
  std::vector<std::size_t> loads(order.begin() + ng, order.begin() + ng + nl);
  // A few generator buses also carry local load.
  std::bernoulli_distribution both(0.2);
  for (std::size_t g : gens)
    if (both(rng)) loads.push_back(g);

  const auto g = spread(total_centi, gens.size(), rng);
  const auto l = spread(total_centi, loads.size(), rng);
  for (std::size_t i = 0; i < gens.size(); ++i) data.buses[gens[i]].gen_mw += g[i] / 100.0;
  for (std::size_t i = 0; i < loads.size(); ++i) data.buses[loads[i]].load_mw += l[i] / 100.0;
}

/// Raises ratings on each limiting cut until build_flow succeeds. Each
/// round grows the cut by at least its deficit.
void make_feasible(NetworkData& data) {
  for (int round = 0; round < 1000; ++round) {
    const PowerNetwork net = PowerNetwork::build(data);
    try {
      build_flow(net);
      return;
    } catch (const InfeasibleFlow& e) {
      const auto& cut = e.limiting_cut();
      if (cut.empty()) throw InternalError("infeasible synthetic case has no limiting cut");
      const double share = std::ceil(e.deficit().mw() / static_cast<double>(cut.size()));
      for (const BranchId& id : cut) {
        Branch& b = data.branches[net.branch_index(id)];
        b.rating_mw = std::max(std::ceil(b.rating_mw * 1.5), b.rating_mw + share);
      }
    }
  }
  throw InternalError("could not make the synthetic case feasible");
}

}  // namespace

NetworkData random_fixture(std::uint64_t seed, const RandomFixtureOptions& options) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> size(options.min_buses, options.max_buses);
  const std::size_t n = size(rng);

  NetworkData data;
  data.name = "random-" + std::to_string(seed);
  for (std::size_t i = 0; i < n; ++i) data.buses.push_back(Bus{BusId{static_cast<std::int64_t>(i + 1)}, 0.0, 0.0});

  std::uniform_int_distribution<int> rating(options.min_rating_mw * 100, options.max_rating_mw * 100);
  std::uniform_real_distribution<double> reactance(0.05, 0.5);
  std::set<std::pair<std::size_t, std::size_t>> used;
  std::size_t serial = 0;
  auto add = [&](std::size_t a, std::size_t b) {
    Branch br;
    br.from = data.buses[a].id;
    br.to = data.buses[b].id;
    br.id = BranchId{to_string(br.from) + "-" + to_string(br.to) + "#" + std::to_string(++serial)};
    br.rating_mw = rating(rng) / 100.0;
    br.reactance_pu = std::round(reactance(rng) * 1e4) / 1e4;
    data.branches.push_back(std::move(br));
    used.insert(std::minmax(a, b));
  };
  for (std::size_t i = 1; i < n; ++i) {
    std::uniform_int_distribution<std::size_t> parent(0, i - 1);
    add(parent(rng), i);
  }
  const auto extra = static_cast<std::size_t>(std::round(options.mesh_ratio * n));
  std::uniform_int_distribution<std::size_t> any(0, n - 1);
  std::bernoulli_distribution parallel(options.parallel_chance);
  for (std::size_t k = 0, tries = 0; k < extra && tries < 50 * n; ++tries) {
    const std::size_t a = any(rng), b = any(rng);
    if (a == b) continue;
    if (used.count(std::minmax(a, b)) && !parallel(rng)) continue;
    add(a, b);
    ++k;
  }

  std::uniform_int_distribution<std::int64_t> total(static_cast<std::int64_t>(n) * 1000,
                                                    static_cast<std::int64_t>(n) * options.max_injection_mw * 50);
  assign_injections(data, rng, 0.35, 0.5, total(rng));
  make_feasible(data);
  return data;
}

NetworkData synthetic_grid(std::uint64_t seed, const GridOptions& options) {
  const std::size_t n = options.buses;
  if (n < 2 || options.branches < n - 1) throw InputError("grid needs at least a spanning tree");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> coord(0.0, 1.0);
  std::vector<std::pair<double, double>> pos(n);
  for (auto& p : pos) p = {coord(rng), coord(rng)};

  // Candidate links: each bus to its nearest neighbours, via a coarse grid.
  const auto cells = static_cast<std::size_t>(std::max(1.0, std::sqrt(n / 4.0)));
  std::vector<std::vector<std::size_t>> bucket(cells * cells);
  auto cell_of = [&](double v) { return std::min(cells - 1, static_cast<std::size_t>(v * cells)); };
  for (std::size_t i = 0; i < n; ++i) bucket[cell_of(pos[i].first) * cells + cell_of(pos[i].second)].push_back(i);
  auto dist = [&](std::size_t a, std::size_t b) {
    return std::hypot(pos[a].first - pos[b].first, pos[a].second - pos[b].second);
  };
  std::set<std::pair<std::size_t, std::size_t>> seen;
  std::vector<std::tuple<double, std::size_t, std::size_t>> cand;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<std::pair<double, std::size_t>> near;
    for (std::size_t radius = 1; near.size() < 8 && radius <= cells; ++radius) {
      near.clear();
      const auto cx = static_cast<long>(cell_of(pos[i].first)), cy = static_cast<long>(cell_of(pos[i].second));
      for (long x = cx - static_cast<long>(radius); x <= cx + static_cast<long>(radius); ++x)
        for (long y = cy - static_cast<long>(radius); y <= cy + static_cast<long>(radius); ++y) {
          if (x < 0 || y < 0 || x >= static_cast<long>(cells) || y >= static_cast<long>(cells)) continue;
          for (std::size_t j : bucket[static_cast<std::size_t>(x) * cells + static_cast<std::size_t>(y)])
            if (j != i) near.emplace_back(dist(i, j), j);
        }
    }
    std::sort(near.begin(), near.end());
    for (std::size_t k = 0; k < near.size() && k < 6; ++k) {
      const auto key = std::minmax(i, near[k].second);
      if (seen.insert(key).second) cand.emplace_back(near[k].first, key.first, key.second);
    }
  }
  std::sort(cand.begin(), cand.end());

  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  std::vector<char> chosen(cand.size(), 0);
  std::size_t edges = 0;
  for (std::size_t k = 0; k < cand.size(); ++k) {
    const auto [d, a, b] = cand[k];
    const std::size_t ra = find_root(parent, a), rb = find_root(parent, b);
    if (ra == rb) continue;
    parent[ra] = rb;
    chosen[k] = 1;
    ++edges;
  }
  if (edges != n - 1) throw InternalError("candidate links do not connect the grid");
  for (std::size_t k = 0; k < cand.size() && edges < options.branches; ++k) {
    if (chosen[k]) continue;
    chosen[k] = 1;
    ++edges;
  }

  NetworkData data;
  data.name = "synthetic-" + std::to_string(n) + "-" + std::to_string(seed);
  for (std::size_t i = 0; i < n; ++i) data.buses.push_back(Bus{BusId{static_cast<std::int64_t>(i + 1)}, 0.0, 0.0});
  std::uniform_int_distribution<int> rating(150, 400);
  for (std::size_t k = 0; k < cand.size(); ++k) {
    if (!chosen[k]) continue;
    const auto [d, a, b] = cand[k];
    Branch br;
    br.from = data.buses[a].id;
    br.to = data.buses[b].id;
    br.id = BranchId{to_string(br.from) + "-" + to_string(br.to)};
    br.rating_mw = rating(rng);
    br.reactance_pu = std::max(0.001, std::round(d * 2.0 * 1e4) / 1e4);
    data.branches.push_back(std::move(br));
  }
  assign_injections(data, rng, options.generator_share, options.load_share,
                    static_cast<std::int64_t>(n) * 2500);
  make_feasible(data);
  return data;
}

}  // namespace gridcuts
