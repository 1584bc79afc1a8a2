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

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "gridcuts/errors.hpp"
#include "gridcuts/units.hpp"

namespace gridcuts {

struct BusId {
  std::int64_t value = 0;
  friend auto operator<=>(const BusId&, const BusId&) = default;
};

struct BranchId {
  std::string value;
  friend auto operator<=>(const BranchId&, const BranchId&) = default;
};

std::string to_string(BusId id);
inline const std::string& to_string(const BranchId& id) { return id.value; }
std::ostream& operator<<(std::ostream& os, BusId id);
std::ostream& operator<<(std::ostream& os, const BranchId& id);

struct Bus {
  BusId id;
  double gen_mw = 0.0;
  double load_mw = 0.0;
};

struct Branch {
  BranchId id;
  BusId from;
  BusId to;
  double rating_mw = 0.0;
  std::optional<double> reactance_pu;
  bool in_service = true;
};

/// Raw, unchecked network description as produced by a parser.
struct NetworkData {
  std::string name;
  double base_mva = 100.0;
  std::vector<Bus> buses;
  std::vector<Branch> branches;
  std::optional<BusId> slack;
  /// Loader notes (ignored fields, unit conversions). Carried into the
  /// built network so they are never silently dropped.
  std::vector<std::string> warnings;
};

enum class Severity { warning, error };

enum class IssueKind {
  balance,
  duplicate_bus,
  duplicate_branch,
  dangling_endpoint,
  self_loop,
  bad_value,
  disconnected,
  missing_reactance,
  empty_network,
};

struct Issue {
  Severity severity = Severity::error;
  IssueKind kind = IssueKind::bad_value;
  std::string message;
  /// Offending ids rendered as text (bus ids, branch ids).
  std::vector<std::string> subjects;
  /// For balance issues: generation minus load.
  Power amount;
};

struct ValidationReport {
  std::vector<Issue> issues;

  bool ok() const { return error_count() == 0; }
  std::size_t error_count() const;
  std::size_t warning_count() const;
  const Issue* find(IssueKind kind) const;
};

/// Absolute generation/load mismatch tolerated on load. One unit of Power.
inline constexpr Power kBalanceTolerance = Power::from_units(1);

ValidationReport validate(const NetworkData& data);

/// Thrown by PowerNetwork::build when validation finds errors.
class ModelError : public InputError {
 public:
  explicit ModelError(ValidationReport report);
  const ValidationReport& report() const { return report_; }

 private:
  ValidationReport report_;
};

struct BuildOptions {
  /// Assign any generation/load mismatch to this bus's generation before
  /// validating.
  std::optional<BusId> auto_slack;
};

/// One in-service branch incident to a bus, seen from that bus.
struct Incidence {
  std::size_t branch = 0;
  std::size_t neighbor = 0;
};

/// Immutable, validated multigraph of buses and rated branches.
///
/// Buses and branches are addressed either by id or by dense index (the
/// position in buses()/branches()). Adjacency lists contain in-service
/// branches only and are ordered by (neighbor BusId, BranchId), which fixes
/// every traversal order in the engine.
class PowerNetwork {
 public:
  static PowerNetwork build(NetworkData data, const BuildOptions& options = {});

  const std::string& name() const { return data_.name; }
  double base_mva() const { return data_.base_mva; }
  const NetworkData& data() const { return data_; }
  std::span<const Bus> buses() const { return data_.buses; }
  std::span<const Branch> branches() const { return data_.branches; }
  std::size_t bus_count() const { return data_.buses.size(); }
  std::size_t branch_count() const { return data_.branches.size(); }
  std::optional<BusId> slack() const { return data_.slack; }
  /// Loader notes plus validation warnings.
  const std::vector<std::string>& warnings() const { return warnings_; }

  std::optional<std::size_t> find_bus(BusId id) const;
  std::optional<std::size_t> find_branch(const BranchId& id) const;
  /// Throws InputError on unknown ids.
  std::size_t bus_index(BusId id) const;
  std::size_t branch_index(const BranchId& id) const;

  const Bus& bus(std::size_t ix) const { return data_.buses[ix]; }
  const Branch& branch(std::size_t ix) const { return data_.branches[ix]; }
  std::size_t from_index(std::size_t branch_ix) const { return from_ix_[branch_ix]; }
  std::size_t to_index(std::size_t branch_ix) const { return to_ix_[branch_ix]; }

  Power generation(std::size_t bus_ix) const { return gen_[bus_ix]; }
  Power load(std::size_t bus_ix) const { return load_[bus_ix]; }
  Power injection(std::size_t bus_ix) const { return gen_[bus_ix] - load_[bus_ix]; }
  Power rating(std::size_t branch_ix) const { return rating_[branch_ix]; }

  std::span<const Incidence> incident(std::size_t bus_ix) const {
    return {adjacency_.data() + offsets_[bus_ix], adjacency_.data() + offsets_[bus_ix + 1]};
  }

  /// Copy with replaced per-bus (gen, load) in MW; revalidated.
  PowerNetwork with_injections(std::span<const std::pair<Power, Power>> gen_load) const;

 private:
  PowerNetwork() = default;
  void index();

  NetworkData data_;
  std::vector<std::string> warnings_;
  std::unordered_map<std::int64_t, std::size_t> bus_by_id_;
  std::unordered_map<std::string, std::size_t> branch_by_id_;
  std::vector<std::size_t> from_ix_;
  std::vector<std::size_t> to_ix_;
  std::vector<Power> gen_;
  std::vector<Power> load_;
  std::vector<Power> rating_;
  std::vector<std::size_t> offsets_;
  std::vector<Incidence> adjacency_;
};

/// gen_mw - load_mw at one bus. Throws InputError on unknown bus.
double net_injection(const PowerNetwork& network, BusId bus);

/// Sum of net injections over a set of bus indices.
Power cluster_injection(const PowerNetwork& network, std::span<const std::size_t> buses);

/// In-service branches with exactly one endpoint in cluster1.
/// Throws InputError if cluster1 is empty, covers every bus, or names an
/// unknown bus.
std::set<BranchId> cut_between(const PowerNetwork& network, const std::set<BusId>& cluster1);

}  // namespace gridcuts
