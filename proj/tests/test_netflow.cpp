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

#include "support.hpp"

using namespace gridcuts;
using namespace test;

namespace {

const std::set<BranchId> kTableICut{BranchId{"4-1"}, BranchId{"9-2"}, BranchId{"9-3"}};
const std::set<BusId> kLoadPocket{BusId{1}, BusId{2}, BusId{3}};

}  // namespace

TEST_CASE("one generator, one load, one branch") {
  const PowerNetwork net = fixture("two_bus");
  const FlowState st = build_flow(net);
  CHECK(st.flow(0) == Power::from_mw(100));
}

TEST_CASE("a sole path rated below the demand is infeasible") {
  NetworkData d = fixture("two_bus").data();
  d.branches[0].rating_mw = 80;
  const PowerNetwork net = PowerNetwork::build(d);
  try {
    build_flow(net);
    FAIL("expected InfeasibleFlow");
  } catch (const InfeasibleFlow& e) {
    CHECK(e.deficit() == Power::from_mw(20));
    CHECK(e.limiting_cut() == std::vector<BranchId>{BranchId{"1-2"}});
  }
}

TEST_CASE("build_flow conserves power and respects ratings") {
  for (std::uint64_t seed = 1; seed <= 60; ++seed) {
    const PowerNetwork net = random_network(seed);
    for (const Ordering& o : {Ordering::deterministic(), Ordering::seeded(seed * 7)}) {
      const FlowState st = build_flow(net, o);
      for (Power r : conservation_residuals(net, st)) CHECK(r.is_zero());
      for (std::size_t br = 0; br < net.branch_count(); ++br) CHECK(abs(st.flow(br)) <= st.rating(br));
    }
  }
}

TEST_CASE("Fixture-9 flows differ by seed but the pocket transfer is 380.86 MW") {
  const PowerNetwork net = fixture("fixture9");
  std::set<std::vector<std::int64_t>> distinct;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const FlowState st = build_flow(net, Ordering::seeded(seed));
    CHECK(cut_transfer(net, st, kTableICut, kLoadPocket) == Power::from_mw(380.86));
    std::vector<std::int64_t> flows;
    for (std::size_t br = 0; br < net.branch_count(); ++br) flows.push_back(st.flow(br).units());
    distinct.insert(flows);
  }
  CHECK(distinct.size() > 1);
}

TEST_CASE("the same seed gives the same flow") {
  const PowerNetwork net = fixture("fixture9");
  CHECK(build_flow(net, Ordering::seeded(4)) == build_flow(net, Ordering::seeded(4)));
  CHECK(build_flow(net) == build_flow(net, Ordering::deterministic()));
}

TEST_CASE("reference flow cut transfers") {
  const PowerNetwork net = fixture("fixture9");
  SUBCASE("case 1 flows") {
    const FlowState st = fixture_flows(net, "fixture9_case1_flows.csv");
    CHECK(cut_transfer(net, st, kTableICut, kLoadPocket) == Power::from_mw(380.86));
  }
  SUBCASE("case 3 flows") {
    const FlowState st = FlowState::from_flows(
        net, {{BranchId{"4-1"}, 172.51}, {BranchId{"9-2"}, 121.96}, {BranchId{"9-3"}, 86.39}});
    CHECK(cut_transfer(net, st, kTableICut, kLoadPocket) == Power::from_mw(380.86));
  }
  SUBCASE("the transfer out of the other side is the negation") {
    const FlowState st = fixture_flows(net, "fixture9_case2_flows.csv");
    std::set<BusId> rest;
    for (const Bus& b : net.buses())
      if (!kLoadPocket.count(b.id)) rest.insert(b.id);
    CHECK(cut_transfer(net, st, kTableICut, rest) == Power::from_mw(-380.86));
  }
  SUBCASE("a branch set that is not the boundary is refused") {
    const FlowState st = build_flow(net);
    CHECK_THROWS_AS(cut_transfer(net, st, {BranchId{"4-1"}}, kLoadPocket), InputError);
    CHECK_THROWS_AS(cut_transfer(net, st, kTableICut, {}), InputError);
  }
}

TEST_CASE("zero injections carry zero transfer across every cut") {
  NetworkData d = fixture("fixture9").data();
  for (Bus& b : d.buses) b.gen_mw = b.load_mw = 0;
  const PowerNetwork net = PowerNetwork::build(d);
  const FlowState st = build_flow(net);
  for_each_bipartition(net.bus_count(), [&](const std::vector<char>& inside) {
    CHECK(scan_outflow(net, st, inside).is_zero());
  });
}

TEST_CASE("cut transfer equals the enclosed injection for every cut and seed") {
  for (std::uint64_t seed = 100; seed < 130; ++seed) {
    const PowerNetwork net = random_network(seed);
    for (std::uint64_t s = 0; s < 5; ++s) {
      const FlowState st = build_flow(net, Ordering::seeded(s));
      for_each_bipartition(net.bus_count(), [&](const std::vector<char>& inside) {
        CHECK(scan_outflow(net, st, inside) == scan_injection(net, inside));
      });
    }
  }
}

TEST_CASE("cluster net injection sums bus data") {
  const PowerNetwork net = fixture("fixture9");
  CHECK(cluster_net_injection(net, kLoadPocket) == Power::from_mw(-380.86));
}

TEST_CASE("build_flow refuses a state that already carries flow") {
  const PowerNetwork net = fixture("fixture9");
  CHECK_THROWS_AS(build_flow(net, fixture_flows(net, "fixture9_case1_flows.csv"), {}), InputError);
}

TEST_CASE("buses serving their own load need no transfer") {
  NetworkData d = fixture("two_bus").data();
  d.buses[0].load_mw = 100;
  d.buses[1].load_mw = 0;
  const PowerNetwork net = PowerNetwork::build(d);
  CHECK(build_flow(net).flow(0).is_zero());
}
