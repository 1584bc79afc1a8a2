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

#include "gridcuts/session.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>

namespace gridcuts {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

bool is_special(const std::optional<FtResult>& r) { return r && r->special; }

void diff_specials(const SessionState& before, const SessionState& after, EventRecord& record) {
  for (std::size_t br = 0; br < after.results.size(); ++br) {
    const bool was = br < before.results.size() && is_special(before.results[br]);
    const bool now = is_special(after.results[br]);
    if (now && !was) {
      (after.results[br]->radial ? record.new_islanding : record.new_special)
          .push_back(*after.results[br]);
    }
    if (was && !now) record.cleared.push_back(br);
  }
}

/// Splits `total` units across weights in proportion, exactly, by largest
/// remainder (ties to the lower index).
std::vector<std::int64_t> apportion(std::int64_t total, const std::vector<std::int64_t>& weights) {
  std::vector<std::int64_t> share(weights.size(), 0);
  const std::int64_t sum = std::accumulate(weights.begin(), weights.end(), std::int64_t{0});
  if (sum <= 0) return share;
  std::vector<std::pair<long double, std::size_t>> rem;
  std::int64_t given = 0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    const long double exact = static_cast<long double>(total) * weights[i] / sum;
    share[i] = static_cast<std::int64_t>(std::floor(exact));
    given += share[i];
    rem.emplace_back(exact - share[i], i);
  }
  std::stable_sort(rem.begin(), rem.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
  for (std::size_t k = 0; given < total && k < rem.size(); ++k, ++given) ++share[rem[k].second];
  return share;
}

}  // namespace

std::string to_string(SessionStatus status) {
  switch (status) {
    case SessionStatus::nominal: return "nominal";
    case SessionStatus::saturated: return "saturated";
    case SessionStatus::islanded: return "islanded";
  }
  return "unknown";
}

bool same_outcome(const EventRecord& a, const EventRecord& b) {
  return a.index == b.index && a.input == b.input && a.update == b.update &&
         a.retested == b.retested && a.new_special == b.new_special &&
         a.new_islanding == b.new_islanding && a.cleared == b.cleared &&
         a.failures == b.failures && a.status == b.status;
}

bool operator==(const SessionState& a, const SessionState& b) {
  const bool same_network = a.network == b.network ||
                            (a.network && b.network &&
                             case_to_json(a.network->data()) == case_to_json(b.network->data()));
  return same_network && a.flow == b.flow && a.store == b.store && a.results == b.results &&
         a.status == b.status && a.pending == b.pending;
}

Session Session::start(std::shared_ptr<const PowerNetwork> network, SessionOptions options) {
  if (!network) throw InputError("session needs a network");
  Session s;
  s.options_ = options;
  auto [state, record] = s.rebuild(std::move(network));
  s.state_ = std::move(state);
  s.base_ = std::move(record);
  return s;
}

std::pair<SessionState, EventRecord> Session::rebuild(
    std::shared_ptr<const PowerNetwork> network) const {
  const auto t0 = Clock::now();
  FlowState initial(*network);
  for (std::size_t br : state_.flow.removed_branches()) initial.remove(br);

  SessionState next;
  next.network = std::move(network);
  next.flow = build_flow(*next.network, std::move(initial), options_.ordering);
  const double t_flow = seconds_since(t0);

  const auto t1 = Clock::now();
  SweepOutcome sweep = ft_sweep(*next.network, next.flow);
  const double t_ft = seconds_since(t1);

  next.results.assign(next.network->branch_count(), std::nullopt);
  next.store = refresh(CertificateStore{{}, state_.store.generation}, sweep.results);
  for (FtResult& r : sweep.results) next.results[r.branch] = std::move(r);
  next.status = SessionStatus::nominal;

  EventRecord record;
  record.retested.resize(next.network->branch_count());
  std::iota(record.retested.begin(), record.retested.end(), 0);
  record.failures = std::move(sweep.failures);
  record.status = next.status;
  record.timings = {t_flow, 0.0, t_ft, seconds_since(t0)};
  diff_specials(state_, next, record);
  return {std::move(next), std::move(record)};
}

std::vector<const FtResult*> Session::specials() const {
  std::vector<const FtResult*> out;
  for (const auto& r : state_.results)
    if (is_special(r)) out.push_back(&*r);
  return out;
}

std::pair<SessionState, EventRecord> Session::evaluate_outage(const BranchId& outage) const {
  if (state_.status != SessionStatus::nominal)
    throw StateError("session is " + to_string(state_.status) +
                     "; a remedial action or undo is required before further outages");
  const PowerNetwork& net = *state_.network;
  const std::size_t br = net.branch_index(outage);
  if (!state_.flow.live(br)) throw InputError("branch " + outage.value + " is not live");

  const auto t0 = Clock::now();
  auto [flow, update] = apply_outage(net, state_.flow, br);
  const double t_ups = seconds_since(t0);

  const auto t1 = Clock::now();
  std::vector<std::size_t> retest;
  if (options_.use_shortlist) {
    retest = shortlist(state_.store, update, state_.store.generation);
  } else {
    for (std::size_t i = 0; i < net.branch_count(); ++i)
      if (flow.live(i)) retest.push_back(i);
  }
  const double t_sa = seconds_since(t1);

  const auto t2 = Clock::now();
  SweepOutcome sweep;
  if (!retest.empty()) sweep = ft_sweep(net, flow, retest);
  const double t_ft = seconds_since(t2);

  SessionState next = state_;
  next.flow = std::move(flow);
  next.results[br].reset();
  for (std::size_t b : retest) next.results[b].reset();
  std::vector<std::size_t> dropped = retest;
  dropped.push_back(br);
  forget(next.store, dropped);
  next.store = refresh(std::move(next.store), sweep.results);
  for (FtResult& r : sweep.results) next.results[r.branch] = std::move(r);

  if (update.islanding && !update.islanding->pruned)
    next.status = SessionStatus::islanded;
  else if (update.deficit.positive())
    next.status = SessionStatus::saturated;
  else
    next.status = SessionStatus::nominal;
  next.pending = next.status == SessionStatus::nominal ? std::nullopt : std::optional(update);

  EventRecord record;
  record.index = log_.size() + 1;
  record.update = std::move(update);
  record.retested = std::move(retest);
  record.failures = std::move(sweep.failures);
  record.status = next.status;
  record.timings = {t_ups, t_sa, t_ft, seconds_since(t0)};
  diff_specials(state_, next, record);
  return {std::move(next), std::move(record)};
}

const EventRecord& Session::commit(SessionState next, EventRecord record, EventInput input) {
  record.index = log_.size() + 1;
  record.input = std::move(input);
  snapshots_.push_back(std::move(state_));
  state_ = std::move(next);
  log_.push_back(std::move(record));
  return log_.back();
}

const EventRecord& Session::apply_event(const BranchId& outage, const std::string& label) {
  auto [next, record] = evaluate_outage(outage);
  EventInput input;
  input.kind = EventInput::Kind::outage;
  input.branch = outage;
  input.label = label;
  return commit(std::move(next), std::move(record), std::move(input));
}

EventRecord Session::what_if(const BranchId& outage) const {
  auto [next, record] = evaluate_outage(outage);
  EventInput input;
  input.kind = EventInput::Kind::outage;
  input.branch = outage;
  record.input = std::move(input);
  return record;
}

const EventRecord& Session::remedial_scale(const std::vector<BranchId>& cut, double reduce_by_mw,
                                           const std::string& label) {
  if (!(reduce_by_mw > 0)) throw InputError("reduction must be positive");
  if (cut.empty()) throw InputError("cut must not be empty");
  const PowerNetwork& net = *state_.network;
  const Power reduce = Power::from_mw(reduce_by_mw);

  std::vector<char> in_cut(net.branch_count(), 0);
  for (const BranchId& id : cut) in_cut[net.branch_index(id)] = 1;

  // Components of the live network without the cut, then two-colour them
  // across the cut branches.
  const std::size_t n = net.bus_count();
  std::vector<std::size_t> comp(n, PathFinder::npos);
  std::size_t ncomp = 0;
  for (std::size_t s = 0; s < n; ++s) {
    if (comp[s] != PathFinder::npos) continue;
    std::vector<std::size_t> stack{s};
    comp[s] = ncomp;
    while (!stack.empty()) {
      const std::size_t u = stack.back();
      stack.pop_back();
      for (const Incidence& inc : net.incident(u)) {
        if (!state_.flow.live(inc.branch) || in_cut[inc.branch] || comp[inc.neighbor] != PathFinder::npos)
          continue;
        comp[inc.neighbor] = ncomp;
        stack.push_back(inc.neighbor);
      }
    }
    ++ncomp;
  }
  std::vector<int> colour(ncomp, -1);
  std::vector<std::vector<std::size_t>> links(ncomp);
  for (std::size_t br = 0; br < net.branch_count(); ++br) {
    if (!in_cut[br]) continue;
    const std::size_t a = comp[net.from_index(br)], b = comp[net.to_index(br)];
    if (a == b) throw InputError("branch " + net.branch(br).id.value + " does not cross the cut");
    links[a].push_back(b);
    links[b].push_back(a);
  }
  const std::size_t root = comp[net.from_index(net.branch_index(cut.front()))];
  colour[root] = 0;
  std::vector<std::size_t> stack{root};
  while (!stack.empty()) {
    const std::size_t c = stack.back();
    stack.pop_back();
    for (std::size_t d : links[c]) {
      if (colour[d] == -1) {
        colour[d] = 1 - colour[c];
        stack.push_back(d);
      } else if (colour[d] == colour[c]) {
        throw InputError("branch set does not split the network into two sides");
      }
    }
  }
  for (std::size_t c = 0; c < ncomp; ++c)
    if (colour[c] == -1 && !links[c].empty())
      throw InputError("branch set does not split the network into two sides");

  Power side_injection[2];
  for (std::size_t b = 0; b < n; ++b)
    if (colour[comp[b]] >= 0) side_injection[colour[comp[b]]] += net.injection(b);
  const int exporter = side_injection[0] > side_injection[1] ? 0 : 1;
  const Power transfer = side_injection[exporter];
  if (!transfer.positive()) throw InputError("no power is transferred across the cut");
  if (reduce > transfer)
    throw InputError("reduction exceeds the cut transfer of " + format_number(transfer.mw()) + " MW");

  std::vector<std::size_t> sources, sinks;
  std::vector<std::int64_t> gen_w, load_w;
  for (std::size_t b = 0; b < n; ++b) {
    const int side = colour[comp[b]];
    if (side == exporter && net.generation(b).positive()) {
      sources.push_back(b);
      gen_w.push_back(net.generation(b).units());
    } else if (side == 1 - exporter && net.load(b).positive()) {
      sinks.push_back(b);
      load_w.push_back(net.load(b).units());
    }
  }
  const std::int64_t gen_total = std::accumulate(gen_w.begin(), gen_w.end(), std::int64_t{0});
  const std::int64_t load_total = std::accumulate(load_w.begin(), load_w.end(), std::int64_t{0});
  if (reduce.units() > gen_total || reduce.units() > load_total)
    throw InputError("reduction would drive an injection negative");

  std::vector<std::pair<Power, Power>> gl(n);
  for (std::size_t b = 0; b < n; ++b) gl[b] = {net.generation(b), net.load(b)};
  const auto gen_cut = apportion(reduce.units(), gen_w);
  const auto load_cut = apportion(reduce.units(), load_w);
  for (std::size_t i = 0; i < sources.size(); ++i) gl[sources[i]].first -= Power::from_units(gen_cut[i]);
  for (std::size_t i = 0; i < sinks.size(); ++i) gl[sinks[i]].second -= Power::from_units(load_cut[i]);

  auto network = std::make_shared<const PowerNetwork>(net.with_injections(gl));
  auto [next, record] = rebuild(std::move(network));
  EventInput input;
  input.kind = EventInput::Kind::remedial;
  input.cut = cut;
  input.reduce_by_mw = reduce_by_mw;
  input.label = label;
  return commit(std::move(next), std::move(record), std::move(input));
}

const EventRecord& Session::scale_injections(double factor, const std::string& label) {
  if (!(factor > 0) || !std::isfinite(factor)) throw InputError("scale factor must be positive");
  const PowerNetwork& net = *state_.network;
  std::vector<std::pair<Power, Power>> gl(net.bus_count());
  Power gen, load;
  std::size_t largest = 0;
  for (std::size_t b = 0; b < net.bus_count(); ++b) {
    gl[b] = {Power::from_mw(net.generation(b).mw() * factor), Power::from_mw(net.load(b).mw() * factor)};
    gen += gl[b].first;
    load += gl[b].second;
    if (gl[b].first > gl[largest].first) largest = b;
  }
  // Rounding may leave a few units of imbalance; the largest generator absorbs them.
  gl[largest].first += load - gen;
  if (gl[largest].first.negative()) throw InputError("scaling drives generation negative");

  auto network = std::make_shared<const PowerNetwork>(net.with_injections(gl));
  auto [next, record] = rebuild(std::move(network));
  EventInput input;
  input.kind = EventInput::Kind::scale_injections;
  input.factor = factor;
  input.label = label;
  return commit(std::move(next), std::move(record), std::move(input));
}

void Session::undo() {
  if (log_.empty()) throw StateError("nothing to undo");
  state_ = std::move(snapshots_.back());
  snapshots_.pop_back();
  log_.pop_back();
}

const EventRecord& Session::apply(const EventInput& input) {
  switch (input.kind) {
    case EventInput::Kind::outage: return apply_event(input.branch, input.label);
    case EventInput::Kind::remedial: return remedial_scale(input.cut, input.reduce_by_mw, input.label);
    case EventInput::Kind::scale_injections: return scale_injections(input.factor, input.label);
  }
  throw InternalError("unknown event kind");
}

Session Session::replay(std::shared_ptr<const PowerNetwork> network, SessionOptions options,
                        const std::vector<EventInput>& inputs) {
  Session s = start(std::move(network), options);
  for (const EventInput& in : inputs) s.apply(in);
  return s;
}

namespace {

ReportRow result_row(const PowerNetwork& net, const std::string& event, const char* kind,
                     const FtResult& r, SessionStatus status, const Timings& t) {
  ReportRow row;
  row.event = event;
  row.kind = kind;
  row.asset = net.branch(r.branch).id.value;
  row.kcrit.push_back(row.asset);
  for (std::size_t k : r.kcrit)
    if (k != r.branch) row.kcrit.push_back(net.branch(k).id.value);
  row.margin_mw = r.margin.mw();
  row.tc_mw = r.tc.mw();
  row.flow_mw = r.flow.mw();
  row.status = to_string(status);
  row.timings = t;
  return row;
}

void append_rows(const PowerNetwork& net, const EventRecord& rec, const std::string& event,
                 std::vector<ReportRow>& rows) {
  for (const FtResult& r : rec.new_special)
    rows.push_back(result_row(net, event, "special", r, rec.status, rec.timings));
  for (const FtResult& r : rec.new_islanding)
    rows.push_back(result_row(net, event, "islanding", r, rec.status, rec.timings));
  if (rec.new_special.empty() && rec.new_islanding.empty()) {
    ReportRow row;
    row.event = event;
    row.kind = "none";
    row.status = to_string(rec.status);
    row.timings = rec.timings;
    rows.push_back(std::move(row));
  }
}

std::string event_name(const EventRecord& rec) {
  if (!rec.input) return "base";
  if (!rec.input->label.empty()) return rec.input->label;
  const std::string n = std::to_string(rec.index);
  switch (rec.input->kind) {
    case EventInput::Kind::outage: return n + ": outage " + rec.input->branch.value;
    case EventInput::Kind::remedial: return n + ": remedial " + format_number(rec.input->reduce_by_mw) + " MW";
    case EventInput::Kind::scale_injections: return n + ": scale x" + format_number(rec.input->factor);
  }
  return n;
}

}  // namespace

std::vector<ReportRow> report_rows(const Session& session) {
  std::vector<ReportRow> rows;
  append_rows(session.network(), session.base(), event_name(session.base()), rows);
  for (const EventRecord& rec : session.log())
    append_rows(session.network(), rec, event_name(rec), rows);
  return rows;
}

}  // namespace gridcuts
