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

#include <algorithm>
#include <random>

#include "gridcuts/session.hpp"
#include "support.hpp"

using namespace gridcuts;
using namespace test;

namespace {

std::vector<std::string> special_ids(const Session& s) {
  std::vector<std::string> out;
  for (const FtResult* r : s.specials()) out.push_back(s.network().branch(r->branch).id.value);
  return out;
}

std::vector<std::string> names(const PowerNetwork& net, const std::vector<FtResult>& rs) {
  std::vector<std::string> out;
  for (const FtResult& r : rs) out.push_back(net.branch(r.branch).id.value);
  return out;
}

std::shared_ptr<const PowerNetwork> ieee118() {
  return std::make_shared<const PowerNetwork>(load_network(ieee118_spec()));
}

std::vector<ReportRow> without_timings(std::vector<ReportRow> rows) {
  for (ReportRow& r : rows) r.timings.reset();
  return rows;
}

/// Same tested branches with the same flow, margin and verdict.
bool same_margins(const Session& a, const Session& b) {
  const auto& x = a.state().results;
  const auto& y = b.state().results;
  for (std::size_t br = 0; br < x.size(); ++br) {
    if (x[br].has_value() != y[br].has_value()) return false;
    if (x[br] && (x[br]->flow != y[br]->flow || x[br]->margin != y[br]->margin || x[br]->special != y[br]->special))
      return false;
  }
  return true;
}

}  // namespace

TEST_CASE("Fixture-9 session starts with the 4-1 / 6-7 cut saturated on loss") {
  const Session s = Session::start(shared_fixture("fixture9"));
  CHECK(s.status() == SessionStatus::nominal);
  CHECK(s.head() == 0);
  // 4-1 and 6-7 form the same two-branch cut, so losing either leaves the
  // same 35.86 MW shortfall.
  CHECK(special_ids(s) == std::vector<std::string>{"4-1", "6-7"});
  for (const FtResult* r : s.specials()) CHECK(r->margin == Power::from_mw(-35.86));
  CHECK(names(s.network(), s.base().new_special) == std::vector<std::string>{"4-1", "6-7"});
}

TEST_CASE("an ample network has no special assets") {
  NetworkData d = fixture("fixture9").data();
  for (Branch& b : d.branches) b.rating_mw = 2000;
  const Session s = Session::start(std::make_shared<const PowerNetwork>(PowerNetwork::build(d)));
  CHECK(s.specials().empty());
}

TEST_CASE("starting an infeasible case propagates the limiting cut") {
  NetworkData d = fixture("two_bus").data();
  d.branches[0].rating_mw = 80;
  CHECK_THROWS_AS(Session::start(std::make_shared<const PowerNetwork>(PowerNetwork::build(d))), InfeasibleFlow);
}

TEST_CASE("118-bus outages follow the event study") {
  Session s = Session::start(ieee118());
  const EventRecord& e1 = s.apply_event(BranchId{"15-33"});
  CHECK(e1.new_special.empty());
  CHECK(e1.status == SessionStatus::nominal);
  CHECK(s.apply_event(BranchId{"19-34"}).new_special.empty());
  const EventRecord& e3 = s.apply_event(BranchId{"38-37"});
  REQUIRE(e3.new_special.size() == 1);
  CHECK(s.network().branch(e3.new_special[0].branch).id.value == "42-49");
  CHECK(e3.new_special[0].margin == Power::from_mw(-186));
  auto k3 = ids(s.network(), e3.new_special[0].kcrit);
  std::sort(k3.begin(), k3.end());
  CHECK(k3 == std::vector<std::string>{"42-49", "44-45"});
  CHECK(s.apply_event(BranchId{"49-66"}).new_special.empty());
  const EventRecord& e5 = s.apply_event(BranchId{"47-69"});
  CHECK(names(s.network(), e5.new_special) == std::vector<std::string>{"56-59", "63-59", "63-64", "64-65"});
  std::vector<double> margins;
  for (const FtResult& r : e5.new_special) margins.push_back(r.margin.mw());
  CHECK(margins == std::vector<double>{-64, -191, -191, -219});
  CHECK(e5.retested.size() < s.network().branch_count());
}

TEST_CASE("losing the last link to a load pocket islands it") {
  NetworkData d = fixture("triangle").data();
  d.buses.push_back({BusId{4}, 0, 25});
  d.buses[0].gen_mw = 125;
  for (Branch& br : d.branches) br.rating_mw = 300;
  d.branches.push_back({BranchId{"3-4"}, BusId{3}, BusId{4}, 100, 0.1, true});
  Session s = Session::start(std::make_shared<const PowerNetwork>(PowerNetwork::build(d)));
  REQUIRE(s.base().new_islanding.size() == 1);
  CHECK(s.base().new_special.empty());
  const EventRecord& rec = s.apply_event(BranchId{"3-4"});
  REQUIRE(rec.update.has_value());
  REQUIRE(rec.update->islanding.has_value());
  CHECK(rec.update->islanding->imbalance == Power::from_mw(-25));
  CHECK(rec.status == SessionStatus::islanded);
  CHECK(s.status() == SessionStatus::islanded);
}

TEST_CASE("events are refused while the session is saturated") {
  Session s = Session::start(shared_fixture("fixture9"));
  const EventRecord& rec = s.apply_event(BranchId{"4-1"});
  CHECK(rec.status == SessionStatus::saturated);
  REQUIRE(s.state().pending.has_value());
  CHECK(s.state().pending->deficit == Power::from_mw(35.86));
  CHECK_THROWS_AS(s.apply_event(BranchId{"8-9"}), StateError);
  CHECK(s.head() == 1);
}

TEST_CASE("unknown or dead branches are input errors") {
  Session s = Session::start(shared_fixture("reroute6"));
  CHECK_THROWS_AS(s.apply_event(BranchId{"0-0"}), InputError);
  s.apply_event(BranchId{"3-6"});
  CHECK_THROWS_AS(s.apply_event(BranchId{"3-6"}), InputError);
  CHECK(s.head() == 1);
}

TEST_CASE("what-if previews without mutating") {
  Session s = Session::start(shared_fixture("reroute6"));
  const SessionState before = s.state();
  const EventRecord a = s.what_if(BranchId{"5-6"});
  const EventRecord b = s.what_if(BranchId{"5-6"});
  CHECK(same_outcome(a, b));
  CHECK(s.state() == before);
  CHECK(s.head() == 0);
  const EventRecord& applied = s.apply_event(BranchId{"5-6"});
  CHECK(same_outcome(a, applied));
}

TEST_CASE("what-if on a zero-flow branch has no impact") {
  const Session s = Session::start(shared_fixture("reroute6"));
  const EventRecord r = s.what_if(BranchId{"3-6"});
  REQUIRE(r.update.has_value());
  CHECK(r.update->paths.empty());
  CHECK(r.update->changed.empty());
  CHECK(r.new_special.empty());
  CHECK(r.cleared.empty());
}

TEST_CASE("remedial scaling by the margin clears the special asset") {
  Session s = Session::start(shared_fixture("fixture9"));
  const std::vector<BranchId> cut{BranchId{"4-1"}, BranchId{"6-7"}};
  const EventRecord& rec = s.remedial_scale(cut, 35.86);
  CHECK(s.specials().empty());
  CHECK(ids(s.network(), rec.cleared) == std::vector<std::string>{"4-1", "6-7"});
  const FtResult& r = *s.state().results[bix(s.network(), "4-1")];
  CHECK(r.margin >= Power{});
  CHECK(r.margin.is_zero());
  // Generation and load stay balanced after scaling.
  Power total;
  for (std::size_t b = 0; b < s.network().bus_count(); ++b) total += s.network().injection(b);
  CHECK(total.is_zero());
}

TEST_CASE("remedial scaling rejects bad reductions") {
  Session s = Session::start(shared_fixture("fixture9"));
  const std::vector<BranchId> cut{BranchId{"4-1"}, BranchId{"6-7"}};
  CHECK_THROWS_AS(s.remedial_scale(cut, 0), InputError);
  CHECK_THROWS_AS(s.remedial_scale(cut, 335.87), InputError);
  CHECK_THROWS_AS(s.remedial_scale({BranchId{"4-1"}}, 1), InputError);
  CHECK(s.head() == 0);
}

TEST_CASE("remedial scaling clears a saturated session") {
  Session s = Session::start(shared_fixture("fixture9"));
  s.apply_event(BranchId{"4-1"});
  REQUIRE(s.status() == SessionStatus::saturated);
  s.remedial_scale({BranchId{"6-7"}}, 35.86);
  CHECK(s.status() == SessionStatus::nominal);
  CHECK_FALSE(s.state().pending.has_value());
}

TEST_CASE("undo restores the previous snapshot") {
  Session s = Session::start(shared_fixture("fixture9"));
  const SessionState base = s.state();
  CHECK_THROWS_AS(s.undo(), StateError);
  s.apply_event(BranchId{"8-9"});
  s.apply_event(BranchId{"2-3"});
  CHECK(s.head() == 2);
  s.undo();
  CHECK(s.head() == 1);
  s.undo();
  CHECK(s.state() == base);
  CHECK(s.head() == 0);
}

TEST_CASE("undo then redo replays to the same state") {
  Session s = Session::start(shared_fixture("fixture9"));
  s.apply_event(BranchId{"8-9"});
  const SessionState after = s.state();
  const EventRecord first = s.log().back();
  s.undo();
  const EventRecord& again = s.apply_event(BranchId{"8-9"});
  CHECK(same_outcome(first, again));
  CHECK(s.state() == after);
}

TEST_CASE("replay with the same seed reproduces the session") {
  SessionOptions opts;
  opts.ordering = Ordering::seeded(17);
  Session s = Session::start(shared_fixture("fixture9"), opts);
  s.apply_event(BranchId{"8-9"});
  s.scale_injections(0.9);
  s.apply_event(BranchId{"2-3"});
  std::vector<EventInput> inputs;
  for (const EventRecord& r : s.log()) inputs.push_back(*r.input);
  const Session r = Session::replay(shared_fixture("fixture9"), opts, inputs);
  CHECK(r.state() == s.state());
  REQUIRE(r.log().size() == s.log().size());
  for (std::size_t i = 0; i < r.log().size(); ++i) CHECK(same_outcome(r.log()[i], s.log()[i]));
  CHECK(without_timings(report_rows(r)) == without_timings(report_rows(s)));
}

TEST_CASE("shortlisted sessions equal audit sessions") {
  std::mt19937_64 rng(99);
  for (std::uint64_t seed = 1; seed <= 25; ++seed) {
    auto net = std::make_shared<const PowerNetwork>(random_network(seed));
    SessionOptions fast, audit;
    audit.use_shortlist = false;
    Session a = Session::start(net, fast);
    Session b = Session::start(net, audit);
    for (int step = 0; step < 5 && a.status() == SessionStatus::nominal; ++step) {
      std::vector<BranchId> live;
      for (std::size_t br = 0; br < net->branch_count(); ++br)
        if (a.state().flow.live(br)) live.push_back(net->branch(br).id);
      const BranchId pick = live[std::uniform_int_distribution<std::size_t>(0, live.size() - 1)(rng)];
      const EventRecord& ra = a.apply_event(pick);
      const EventRecord& rb = b.apply_event(pick);
      CHECK(names(*net, ra.new_special) == names(*net, rb.new_special));
      CHECK(ra.cleared == rb.cleared);
      CHECK(ra.status == rb.status);
      CHECK(ra.retested.size() <= rb.retested.size());
      CHECK(same_margins(a, b));
    }
  }
}

TEST_CASE("report rows") {
  Session s = Session::start(ieee118());
  s.apply_event(BranchId{"15-33"}, "Outage 1");
  s.apply_event(BranchId{"19-34"});
  const auto rows = report_rows(s);
  REQUIRE_FALSE(rows.empty());
  CHECK(rows.front().event == "base");
  CHECK(rows.front().kind == "special");
  CHECK(rows.front().asset == "26-30");
  CHECK(rows.front().kcrit.front() == "26-30");
  CHECK(rows.front().margin_mw == -77);
  CHECK(std::any_of(rows.begin(), rows.end(), [](const ReportRow& r) { return r.event == "Outage 1"; }));
  CHECK(rows.back().event == "2: outage 19-34");
  CHECK(rows.back().kind == "none");
}
