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

#include <doctest.h>

#include <random>

#include "gridcuts/flowgraph.hpp"
#include "support.hpp"

using namespace gridcuts;
using namespace test;

namespace {

/// A chain 1-2-...-n with the given ratings; no injections.
PowerNetwork chain(const std::vector<double>& ratings) {
  NetworkData d;
  for (std::size_t i = 0; i <= ratings.size(); ++i) d.buses.push_back({BusId{static_cast<std::int64_t>(i + 1)}, 0, 0});
  for (std::size_t i = 0; i < ratings.size(); ++i) {
    const auto a = static_cast<std::int64_t>(i + 1);
    d.branches.push_back({BranchId{std::to_string(a) + "-" + std::to_string(a + 1)}, BusId{a},
                          BusId{a + 1}, ratings[i], 0.1, true});
  }
  return PowerNetwork::build(d);
}

Path forward_path(std::size_t n) {
  Path p;
  for (std::size_t i = 0; i < n; ++i) p.steps.push_back({i, Direction::forward});
  return p;
}

}  // namespace

TEST_CASE("a path from a bus to itself is empty") {
  const PowerNetwork net = fixture("triangle");
  const FlowState st(net);
  const auto p = shortest_unsaturated_path(net, st, BusId{2}, BusId{2});
  REQUIRE(p.has_value());
  CHECK(p->empty());
}

TEST_CASE("a saturated step diverts the search to the other route") {
  // Two 2-hop routes from 1 to 4: via 2 and via 3.
  NetworkData d;
  for (int i = 1; i <= 4; ++i) d.buses.push_back({BusId{i}, 0, 0});
  d.branches = {{BranchId{"1-2"}, BusId{1}, BusId{2}, 50, 0.1, true},
                {BranchId{"2-4"}, BusId{2}, BusId{4}, 50, 0.1, true},
                {BranchId{"1-3"}, BusId{1}, BusId{3}, 50, 0.1, true},
                {BranchId{"3-4"}, BusId{3}, BusId{4}, 50, 0.1, true}};
  const PowerNetwork net = PowerNetwork::build(d);
  FlowState st(net);
  const auto first = shortest_unsaturated_path(net, st, BusId{1}, BusId{4});
  REQUIRE(first.has_value());
  CHECK(describe(net, *first) == "1-2-4");
  st.push(bix(net, "2-4"), Direction::forward, Power::from_mw(50));
  const auto second = shortest_unsaturated_path(net, st, BusId{1}, BusId{4});
  REQUIRE(second.has_value());
  CHECK(describe(net, *second) == "1-3-4");
  st.push(bix(net, "3-4"), Direction::forward, Power::from_mw(50));
  CHECK_FALSE(shortest_unsaturated_path(net, st, BusId{1}, BusId{4}).has_value());
}

TEST_CASE("bottleneck is the smallest step capacity") {
  SUBCASE("single step") {
    const PowerNetwork net = chain({300});
    CHECK(path_bottleneck(net, FlowState(net), forward_path(1)) == Power::from_mw(300));
  }
  SUBCASE("120, 35.86, 200") {
    const PowerNetwork net = chain({120, 35.86, 200});
    CHECK(path_bottleneck(net, FlowState(net), forward_path(3)) == Power::from_mw(35.86));
  }
  SUBCASE("empty path") {
    const PowerNetwork net = chain({10});
    CHECK_THROWS_AS(path_bottleneck(net, FlowState(net), Path{}), InputError);
  }
  SUBCASE("discontinuous path") {
    const PowerNetwork net = chain({10, 10, 10});
    Path p;
    p.steps = {{0, Direction::forward}, {2, Direction::forward}};
    CHECK_THROWS_AS(path_bottleneck(net, FlowState(net), p), InputError);
  }
}

TEST_CASE("bottleneck matches capacities recomputed from flow and rating") {
  std::mt19937_64 rng(5);
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    const PowerNetwork net = random_network(seed);
    const FlowState st = build_flow(net);
    std::uniform_int_distribution<std::size_t> pick(0, net.bus_count() - 1);
    const std::size_t a = pick(rng), b = pick(rng);
    const auto p = shortest_unsaturated_path(net, st, net.bus(a).id, net.bus(b).id);
    if (!p || p->empty()) continue;
    double expected = 1e300;
    for (const Step& s : p->steps) {
      const double r = net.branch(s.branch).rating_mw;
      const double f = st.flow(s.branch).mw();
      expected = std::min(expected, s.dir == Direction::forward ? r - f : r + f);
    }
    CHECK(path_bottleneck(net, st, *p).mw() == doctest::Approx(expected).epsilon(1e-12));
  }
}

TEST_CASE("pushing 25 MW along fresh 100 MW branches") {
  const PowerNetwork net = chain({100, 100, 100});
  const FlowState st = push_along_path(net, FlowState(net), forward_path(3), Power::from_mw(25));
  for (std::size_t br = 0; br < 3; ++br) {
    CHECK(st.flow(br) == Power::from_mw(25));
    CHECK(st.cap_forward(br) == Power::from_mw(75));
    CHECK(st.cap_reverse(br) == Power::from_mw(125));
  }
}

TEST_CASE("pushing against an equal flow cancels it") {
  const PowerNetwork net = chain({100});
  FlowState st(net);
  st.push(0, Direction::forward, Power::from_mw(10));
  st.push(0, Direction::reverse, Power::from_mw(10));
  CHECK(st.flow(0).is_zero());
  CHECK(st.cap_forward(0) == st.rating(0));
  CHECK(st.cap_reverse(0) == st.rating(0));
}

TEST_CASE("pushes beyond the bottleneck or of non-positive amount are refused") {
  const PowerNetwork net = chain({10, 5});
  FlowState st(net);
  CHECK_THROWS_AS(push_path(net, st, forward_path(2), Power::from_mw(6)), InputError);
  CHECK_THROWS_AS(push_path(net, st, forward_path(2), Power{}), InputError);
  CHECK(st == FlowState(net));
}

TEST_CASE("forward plus reverse capacity stays twice the rating under random pushes") {
  std::mt19937_64 rng(21);
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    const PowerNetwork net = random_network(seed);
    FlowState st(net);
    PathFinder finder(net.bus_count());
    std::uniform_int_distribution<std::size_t> pick(0, net.bus_count() - 1);
    for (int k = 0; k < 40; ++k) {
      const std::size_t a = pick(rng), b = pick(rng);
      if (a == b || !finder.search(net, st, a, b)) continue;
      const Path p = finder.path_to(net, b);
      const Power cap = path_bottleneck(net, st, p);
      if (!cap.positive()) continue;
      std::uniform_int_distribution<std::int64_t> amount(1, cap.units());
      push_path(net, st, p, Power::from_units(amount(rng)));
    }
    for (std::size_t br = 0; br < net.branch_count(); ++br) {
      CHECK(st.cap_forward(br) + st.cap_reverse(br) == st.rating(br) + st.rating(br));
      CHECK(abs(st.flow(br)) <= st.rating(br));
    }
  }
}

TEST_CASE("a removed branch is invisible to search") {
  const PowerNetwork net = fixture("triangle");
  const FlowState st = remove_branch(net, FlowState(net), BranchId{"1-2"});
  const auto p = shortest_unsaturated_path(net, st, BusId{1}, BusId{2});
  REQUIRE(p.has_value());
  CHECK(describe(net, *p) == "1-3-2");
  CHECK(st.removed(bix(net, "1-2")));
  CHECK_THROWS_AS(remove_branch(net, st, BranchId{"1-2"}), InputError);
  CHECK_THROWS_AS(remove_branch(net, st, BranchId{"nope"}), InputError);
}

TEST_CASE("removing a bridge disconnects its endpoints") {
  const PowerNetwork net = chain({10, 10, 10});
  const FlowState st = remove_branch(net, FlowState(net), BranchId{"2-3"});
  PathFinder finder(net.bus_count());
  CHECK_FALSE(finder.search(net, st, 0, 3, PathFinder::Mode::topology));
  finder.search(net, st, 0, PathFinder::npos, PathFinder::Mode::topology);
  CHECK(finder.visited().size() == 2);
}

TEST_CASE("out-of-service branches are never live") {
  NetworkData d = fixture("triangle").data();
  d.branches[0].in_service = false;
  const PowerNetwork net = PowerNetwork::build(d);
  const FlowState st(net);
  CHECK_FALSE(st.live(0));
  CHECK_THROWS_AS(FlowState(st).remove(0), InputError);
}

TEST_CASE("seeding flows checks ratings") {
  const PowerNetwork net = fixture("triangle");
  CHECK_THROWS_AS(FlowState::from_flows(net, {{BranchId{"1-2"}, 100.5}}), InputError);
  CHECK_THROWS_AS(FlowState::from_flows(net, {{BranchId{"x"}, 1}}), InputError);
  const FlowState st = FlowState::from_flows(net, {{BranchId{"1-2"}, -40}});
  CHECK(st.flow(bix(net, "1-2")) == Power::from_mw(-40));
}

TEST_CASE("conservation residuals vanish for the reference flows") {
  const PowerNetwork net = fixture("fixture9");
  for (const char* csv : {"fixture9_case1_flows.csv", "fixture9_case2_flows.csv"}) {
    const FlowState st = fixture_flows(net, csv);
    for (Power r : conservation_residuals(net, st)) CHECK(r.is_zero());
  }
}
