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

#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "gridcuts/feasibility.hpp"
#include "gridcuts/io.hpp"
#include "gridcuts/netflow.hpp"
#include "gridcuts/shortlist.hpp"
#include "gridcuts/update.hpp"

namespace gridcuts {

enum class SessionStatus { nominal, saturated, islanded };
std::string to_string(SessionStatus status);

struct SessionOptions {
  Ordering ordering;
  /// False re-tests every asset after each event (audit mode).
  bool use_shortlist = true;
};

/// What the caller asked for; enough to replay the event.
struct EventInput {
  enum class Kind { outage, remedial, scale_injections };
  Kind kind = Kind::outage;
  BranchId branch;
  std::vector<BranchId> cut;
  double reduce_by_mw = 0.0;
  double factor = 1.0;
  std::string label;
  friend bool operator==(const EventInput&, const EventInput&) = default;
};

struct EventRecord {
  std::size_t index = 0;  ///< 1-based position in the log, 0 for the base case
  std::optional<EventInput> input;
  std::optional<UpdateResult> update;
  /// Branches whose feasibility test was re-run, sorted.
  std::vector<std::size_t> retested;
  /// Newly special, non-radial assets in branch order.
  std::vector<FtResult> new_special;
  /// Newly special radial assets: losing them islands part of the network.
  std::vector<FtResult> new_islanding;
  /// Assets special before the event and not after it.
  std::vector<std::size_t> cleared;
  std::vector<SweepFailure> failures;
  SessionStatus status = SessionStatus::nominal;
  Timings timings;
};

/// Equality of everything but the timings.
bool same_outcome(const EventRecord& a, const EventRecord& b);

struct SessionState {
  std::shared_ptr<const PowerNetwork> network;
  FlowState flow;
  CertificateStore store;
  /// Latest feasibility result per branch index; empty for zero-flow and
  /// removed branches.
  std::vector<std::optional<FtResult>> results;
  SessionStatus status = SessionStatus::nominal;
  /// The last outage when it left the session saturated or islanded.
  std::optional<UpdateResult> pending;

  friend bool operator==(const SessionState&, const SessionState&);
};

/// Event-sourced analysis of one network: base flow and sweep, then per
/// outage UPS, shortlist and partial re-test. One writer at a time.
class Session {
 public:
  /// Builds the base flow and runs the full sweep. Propagates InfeasibleFlow.
  static Session start(std::shared_ptr<const PowerNetwork> network, SessionOptions options = {});

  const SessionState& state() const { return state_; }
  const PowerNetwork& network() const { return *state_.network; }
  const SessionOptions& options() const { return options_; }
  SessionStatus status() const { return state_.status; }
  const EventRecord& base() const { return base_; }
  const std::vector<EventRecord>& log() const { return log_; }
  /// Number of applied events; changes on every mutation.
  std::size_t head() const { return log_.size(); }

  /// Current special assets (margin < 0), radial ones included.
  std::vector<const FtResult*> specials() const;

  /// Throws StateError unless nominal; InputError on unknown or dead branch.
  const EventRecord& apply_event(const BranchId& outage, const std::string& label = {});
  /// apply_event on a copy; the session is unchanged.
  EventRecord what_if(const BranchId& outage) const;
  /// Lowers the transfer across `cut` by scaling the exporting side's
  /// generation and the importing side's load down uniformly, then rebuilds
  /// the flow and re-tests every asset. Allowed in any status.
  const EventRecord& remedial_scale(const std::vector<BranchId>& cut, double reduce_by_mw,
                                    const std::string& label = {});
  /// Multiplies every generation and load by `factor` and rebuilds.
  const EventRecord& scale_injections(double factor, const std::string& label = {});
  /// Restores the state before the last event. Throws StateError on an empty log.
  void undo();

  const EventRecord& apply(const EventInput& input);
  /// Re-runs a log from the base case.
  static Session replay(std::shared_ptr<const PowerNetwork> network, SessionOptions options,
                        const std::vector<EventInput>& inputs);

 private:
  Session() = default;
  std::pair<SessionState, EventRecord> evaluate_outage(const BranchId& outage) const;
  std::pair<SessionState, EventRecord> rebuild(std::shared_ptr<const PowerNetwork> network) const;
  const EventRecord& commit(SessionState next, EventRecord record, EventInput input);

  SessionOptions options_;
  SessionState state_;
  EventRecord base_;
  std::vector<EventRecord> log_;
  std::vector<SessionState> snapshots_;
};

/// Report rows: the base case, then one or more rows per event.
std::vector<ReportRow> report_rows(const Session& session);

}  // namespace gridcuts
