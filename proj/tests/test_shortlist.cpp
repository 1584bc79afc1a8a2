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

#include "gridcuts/feasibility.hpp"
#include "gridcuts/shortlist.hpp"
#include "gridcuts/update.hpp"
#include "support.hpp"

using namespace gridcuts;
using namespace test;

namespace {

CertificateStore store_for(const PowerNetwork& net, const FlowState& st) {
  const SweepOutcome out = ft_sweep(net, st);
  return refresh(CertificateStore{}, out.results);
}

}  // namespace

TEST_CASE("an update outside every certificate shortlists only its own branches") {
  const PowerNetwork net = fixture("reroute6");
  CertificateStore store;
  store.certificates[bix(net, "2-3")] = {bix(net, "2-3")};
  store.generation = 3;
  UpdateResult u;
  u.branch = bix(net, "5-6");
  u.changed = {bix(net, "1-4"), bix(net, "4-5")};
  CHECK(shortlist(store, u, 3) == u.changed);
}

TEST_CASE("an asset whose indirect path carries rerouted flow is shortlisted") {
  const PowerNetwork net = fixture("reroute6");
  const FlowState st = fixture_flows(net, "reroute6_flows.csv");
  const CertificateStore store = store_for(net, st);
  const FtResult em = ft_edge(net, st, BranchId{"1-2"});
  const auto [after, u] = apply_outage(net, st, BranchId{"5-6"});
  bool shares = false;
  for (std::size_t c : u.changed)
    shares = shares || std::binary_search(em.certificate.begin(), em.certificate.end(), c);
  REQUIRE(shares);
  const auto list = shortlist(store, u, store.generation);
  CHECK(std::binary_search(list.begin(), list.end(), bix(net, "1-2")));
  CHECK_FALSE(std::binary_search(list.begin(), list.end(), bix(net, "5-6")));
  CHECK(std::is_sorted(list.begin(), list.end()));
}

TEST_CASE("refresh replaces the re-tested certificates only") {
  const PowerNetwork net = fixture("fixture9");
  const FlowState st = build_flow(net);
  const CertificateStore store = store_for(net, st);
  const std::size_t n = store.certificates.size();

  SUBCASE("empty result list is the identity") {
    CHECK(refresh(store, {}) == store);
  }
  SUBCASE("k results keep n entries and bump the generation") {
    const auto [after, u] = apply_outage(net, st, BranchId{"8-9"});
    const std::vector<std::size_t> retest{bix(net, "7-8"), bix(net, "7-9")};
    const SweepOutcome out = ft_sweep(net, after, retest);
    const CertificateStore next = refresh(store, out.results);
    CHECK(next.certificates.size() == std::max(n, out.results.size()));
    CHECK(next.generation == store.generation + 1);
    for (const FtResult& r : out.results) CHECK(next.certificates.at(r.branch) == r.certificate);
    for (const auto& [br, cert] : store.certificates)
      if (std::find(retest.begin(), retest.end(), br) == retest.end())
        CHECK(next.certificates.at(br) == cert);
  }
  SUBCASE("forget drops entries") {
    CertificateStore s = store;
    const std::size_t gone = s.certificates.begin()->first;
    const std::vector<std::size_t> drop{gone};
    forget(s, drop);
    CHECK(s.certificates.size() == n - 1);
    CHECK_FALSE(s.certificates.count(gone));
  }
}

TEST_CASE("a stale store is refused") {
  const PowerNetwork net = fixture("reroute6");
  const CertificateStore store = store_for(net, fixture_flows(net, "reroute6_flows.csv"));
  CHECK_THROWS_AS(shortlist(store, UpdateResult{}, store.generation + 1), StateError);
}

TEST_CASE("partial re-tests of the shortlist equal full re-sweeps") {
  std::mt19937_64 rng(31);
  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    const PowerNetwork net = random_network(seed);
    FlowState st = build_flow(net);
    SweepOutcome full = ft_sweep(net, st);
    CertificateStore store = refresh(CertificateStore{}, full.results);
    std::map<std::size_t, FtResult> current;
    for (const FtResult& r : full.results) current[r.branch] = r;

    for (int step = 0; step < 5; ++step) {
      std::vector<std::size_t> candidates;
      for (const auto& [br, r] : current)
        if (!r.special) candidates.push_back(br);
      if (candidates.empty()) break;
      const std::size_t out = candidates[std::uniform_int_distribution<std::size_t>(0, candidates.size() - 1)(rng)];
      auto [next, u] = apply_outage(net, st, out);
      if (u.islanding) break;
      const auto list = shortlist(store, u, store.generation);
      const SweepOutcome partial = ft_sweep(net, next, list);
      std::vector<std::size_t> no_result;
      for (std::size_t br : list)
        if (std::none_of(partial.results.begin(), partial.results.end(),
                         [&](const FtResult& r) { return r.branch == br; }))
          no_result.push_back(br);
      no_result.push_back(out);
      store = refresh(store, partial.results);
      forget(store, no_result);
      for (std::size_t br : no_result) current.erase(br);
      for (const FtResult& r : partial.results) current[r.branch] = r;
      st = next;

      const SweepOutcome reference = ft_sweep(net, st);
      REQUIRE(reference.results.size() == current.size());
      for (const FtResult& r : reference.results) {
        REQUIRE(current.count(r.branch));
        CHECK(current.at(r.branch).margin == r.margin);
        CHECK(current.at(r.branch).special == r.special);
      }
    }
  }
}
