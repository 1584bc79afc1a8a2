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

#include "gridcuts/model.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numeric>
#include <ostream>
#include <sstream>

namespace gridcuts {

std::string to_string(BusId id) { return std::to_string(id.value); }
std::ostream& operator<<(std::ostream& os, BusId id) { return os << id.value; }
std::ostream& operator<<(std::ostream& os, const BranchId& id) { return os << id.value; }

namespace {

std::string format_mw(Power p) {
  char buf[32];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, p.mw());
  return ec == std::errc{} ? std::string(buf, end) : std::to_string(p.mw());
}

bool quantizable(double v) {
  return std::isfinite(v) && std::fabs(v) * static_cast<double>(Power::kUnitsPerMw) <= 1e17;
}

void add(ValidationReport& report, Severity severity, IssueKind kind, std::string message,
         std::vector<std::string> subjects = {}) {
  report.issues.push_back(Issue{severity, kind, std::move(message), std::move(subjects), Power{}});
}

}  // namespace

std::size_t ValidationReport::error_count() const {
  return static_cast<std::size_t>(std::count_if(issues.begin(), issues.end(), [](const Issue& i) {
    return i.severity == Severity::error;
  }));
}

std::size_t ValidationReport::warning_count() const { return issues.size() - error_count(); }

const Issue* ValidationReport::find(IssueKind kind) const {
  for (const auto& issue : issues)
    if (issue.kind == kind) return &issue;
  return nullptr;
}

ValidationReport validate(const NetworkData& data) {
  ValidationReport report;
  if (data.buses.empty()) {
    add(report, Severity::error, IssueKind::empty_network, "network has no buses");
    return report;
  }
  if (!(data.base_mva > 0.0) || !std::isfinite(data.base_mva))
    add(report, Severity::error, IssueKind::bad_value, "base_mva must be positive");

  std::unordered_map<std::int64_t, std::size_t> bus_ix;
  bool values_ok = true;
  for (std::size_t i = 0; i < data.buses.size(); ++i) {
    const Bus& b = data.buses[i];
    if (!bus_ix.emplace(b.id.value, i).second)
      add(report, Severity::error, IssueKind::duplicate_bus, "duplicate bus id " + to_string(b.id),
          {to_string(b.id)});
    if (!quantizable(b.gen_mw) || b.gen_mw < 0.0) {
      add(report, Severity::error, IssueKind::bad_value,
          "bus " + to_string(b.id) + ": gen_mw must be finite and >= 0", {to_string(b.id)});
      values_ok = false;
    }
    if (!quantizable(b.load_mw) || b.load_mw < 0.0) {
      add(report, Severity::error, IssueKind::bad_value,
          "bus " + to_string(b.id) + ": load_mw must be finite and >= 0", {to_string(b.id)});
      values_ok = false;
    }
  }

  std::unordered_map<std::string, std::size_t> branch_ix;
  std::vector<std::string> missing_x;
  bool topology_ok = true;
  for (std::size_t i = 0; i < data.branches.size(); ++i) {
    const Branch& br = data.branches[i];
    const std::string& id = br.id.value;
    if (!branch_ix.emplace(id, i).second)
      add(report, Severity::error, IssueKind::duplicate_branch, "duplicate branch id " + id, {id});
    for (BusId end : {br.from, br.to}) {
      if (!bus_ix.contains(end.value)) {
        add(report, Severity::error, IssueKind::dangling_endpoint,
            "branch " + id + " references absent bus " + to_string(end), {to_string(end)});
        topology_ok = false;
      }
    }
    if (br.from == br.to) {
      add(report, Severity::error, IssueKind::self_loop,
          "branch " + id + " connects bus " + to_string(br.from) + " to itself", {id});
      topology_ok = false;
    }
    if (!quantizable(br.rating_mw) || !(Power::from_mw(br.rating_mw).positive()))
      add(report, Severity::error, IssueKind::bad_value, "branch " + id + ": rating_mw must be > 0",
          {id});
    if (br.reactance_pu) {
      if (!std::isfinite(*br.reactance_pu) || *br.reactance_pu <= 0.0)
        add(report, Severity::error, IssueKind::bad_value,
            "branch " + id + ": reactance_pu must be > 0", {id});
    } else {
      missing_x.push_back(id);
    }
  }
  if (!missing_x.empty())
    add(report, Severity::warning, IssueKind::missing_reactance,
        std::to_string(missing_x.size()) + " branch(es) lack reactance_pu; DC oracle unavailable",
        missing_x);

  if (values_ok) {
    Power gen, load;
    for (const Bus& b : data.buses) {
      gen += Power::from_mw(b.gen_mw);
      load += Power::from_mw(b.load_mw);
    }
    const Power mismatch = gen - load;
    if (abs(mismatch) > kBalanceTolerance) {
      Issue issue{Severity::error, IssueKind::balance,
                  "generation minus load is " + format_mw(mismatch) + " MW", {}, mismatch};
      report.issues.push_back(std::move(issue));
    }
  }

  if (topology_ok) {
    // Union-find over in-service branches.
    std::vector<std::size_t> parent(data.buses.size());
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](std::size_t x) {
      while (parent[x] != x) x = parent[x] = parent[parent[x]];
      return x;
    };
    for (const Branch& br : data.branches) {
      if (!br.in_service) continue;
      parent[find(bus_ix[br.from.value])] = find(bus_ix[br.to.value]);
    }
    std::size_t components = 0;
    std::vector<std::string> roots;
    for (std::size_t i = 0; i < parent.size(); ++i) {
      if (find(i) == i) {
        ++components;
        roots.push_back(to_string(data.buses[i].id));
      }
    }
    if (components > 1)
      add(report, Severity::error, IssueKind::disconnected,
          "in-service branches leave " + std::to_string(components) + " disconnected components",
          roots);
  }
  return report;
}

namespace {

std::string summarize(const ValidationReport& report) {
  std::string msg = "invalid network:";
  for (const auto& issue : report.issues)
    if (issue.severity == Severity::error) msg += " " + issue.message + ";";
  msg.pop_back();
  return msg;
}

}  // namespace

ModelError::ModelError(ValidationReport report)
    : InputError(summarize(report)), report_(std::move(report)) {}

PowerNetwork PowerNetwork::build(NetworkData data, const BuildOptions& options) {
  if (options.auto_slack) {
    auto it = std::find_if(data.buses.begin(), data.buses.end(),
                           [&](const Bus& b) { return b.id == *options.auto_slack; });
    if (it == data.buses.end())
      throw InputError("auto-slack bus " + to_string(*options.auto_slack) + " does not exist");
    Power gen, load;
    for (const Bus& b : data.buses) {
      if (quantizable(b.gen_mw)) gen += Power::from_mw(b.gen_mw);
      if (quantizable(b.load_mw)) load += Power::from_mw(b.load_mw);
    }
    const Power mismatch = load - gen;
    if (!mismatch.is_zero()) {
      const Power adjusted = Power::from_mw(it->gen_mw) + mismatch;
      if (adjusted.negative())
        throw InputError("auto-slack bus " + to_string(it->id) + " cannot absorb mismatch of " +
                         format_mw(-mismatch) + " MW");
      data.warnings.push_back("auto-slack: bus " + to_string(it->id) + " generation changed by " +
                              format_mw(mismatch) + " MW to balance the case");
      it->gen_mw = adjusted.mw();
    }
    data.slack = it->id;
  }

  ValidationReport report = validate(data);
  if (!report.ok()) throw ModelError(std::move(report));

  PowerNetwork net;
  net.data_ = std::move(data);
  net.warnings_ = net.data_.warnings;
  for (const auto& issue : report.issues) net.warnings_.push_back(issue.message);
  net.index();
  if (net.data_.slack && !net.find_bus(*net.data_.slack))
    throw InputError("slack bus " + to_string(*net.data_.slack) + " does not exist");
  return net;
}

void PowerNetwork::index() {
  const std::size_t nb = data_.buses.size();
  const std::size_t nl = data_.branches.size();
  bus_by_id_.clear();
  branch_by_id_.clear();
  gen_.resize(nb);
  load_.resize(nb);
  for (std::size_t i = 0; i < nb; ++i) {
    bus_by_id_.emplace(data_.buses[i].id.value, i);
    gen_[i] = Power::from_mw(data_.buses[i].gen_mw);
    load_[i] = Power::from_mw(data_.buses[i].load_mw);
  }
  from_ix_.resize(nl);
  to_ix_.resize(nl);
  rating_.resize(nl);
  std::vector<std::size_t> degree(nb, 0);
  for (std::size_t i = 0; i < nl; ++i) {
    const Branch& br = data_.branches[i];
    branch_by_id_.emplace(br.id.value, i);
    from_ix_[i] = bus_by_id_.at(br.from.value);
    to_ix_[i] = bus_by_id_.at(br.to.value);
    rating_[i] = Power::from_mw(br.rating_mw);
    if (br.in_service) {
      ++degree[from_ix_[i]];
      ++degree[to_ix_[i]];
    }
  }
  offsets_.assign(nb + 1, 0);
  for (std::size_t i = 0; i < nb; ++i) offsets_[i + 1] = offsets_[i] + degree[i];
  adjacency_.assign(offsets_[nb], Incidence{});
  std::vector<std::size_t> fill(offsets_.begin(), offsets_.end() - 1);
  for (std::size_t i = 0; i < nl; ++i) {
    if (!data_.branches[i].in_service) continue;
    adjacency_[fill[from_ix_[i]]++] = Incidence{i, to_ix_[i]};
    adjacency_[fill[to_ix_[i]]++] = Incidence{i, from_ix_[i]};
  }
  for (std::size_t b = 0; b < nb; ++b) {
    std::sort(adjacency_.begin() + static_cast<std::ptrdiff_t>(offsets_[b]),
              adjacency_.begin() + static_cast<std::ptrdiff_t>(offsets_[b + 1]),
              [this](const Incidence& x, const Incidence& y) {
                const BusId nx = data_.buses[x.neighbor].id;
                const BusId ny = data_.buses[y.neighbor].id;
                if (nx != ny) return nx < ny;
                return data_.branches[x.branch].id < data_.branches[y.branch].id;
              });
  }
}

std::optional<std::size_t> PowerNetwork::find_bus(BusId id) const {
  auto it = bus_by_id_.find(id.value);
  if (it == bus_by_id_.end()) return std::nullopt;
  return it->second;
}

std::optional<std::size_t> PowerNetwork::find_branch(const BranchId& id) const {
  auto it = branch_by_id_.find(id.value);
  if (it == branch_by_id_.end()) return std::nullopt;
  return it->second;
}

std::size_t PowerNetwork::bus_index(BusId id) const {
  if (auto ix = find_bus(id)) return *ix;
  throw InputError("unknown bus " + to_string(id));
}

std::size_t PowerNetwork::branch_index(const BranchId& id) const {
  if (auto ix = find_branch(id)) return *ix;
  throw InputError("unknown branch " + id.value);
}

PowerNetwork PowerNetwork::with_injections(
    std::span<const std::pair<Power, Power>> gen_load) const {
  if (gen_load.size() != bus_count())
    throw InputError("injection vector length does not match bus count");
  NetworkData data = data_;
  for (std::size_t i = 0; i < gen_load.size(); ++i) {
    data.buses[i].gen_mw = gen_load[i].first.mw();
    data.buses[i].load_mw = gen_load[i].second.mw();
  }
  PowerNetwork net = build(std::move(data));
  // Keep the exact quantized values rather than the round trip through MW.
  for (std::size_t i = 0; i < gen_load.size(); ++i) {
    net.gen_[i] = gen_load[i].first;
    net.load_[i] = gen_load[i].second;
  }
  return net;
}

double net_injection(const PowerNetwork& network, BusId bus) {
  return network.injection(network.bus_index(bus)).mw();
}

Power cluster_injection(const PowerNetwork& network, std::span<const std::size_t> buses) {
  Power sum;
  for (std::size_t b : buses) sum += network.injection(b);
  return sum;
}

std::set<BranchId> cut_between(const PowerNetwork& network, const std::set<BusId>& cluster1) {
  if (cluster1.empty()) throw InputError("cluster must not be empty");
  std::vector<char> inside(network.bus_count(), 0);
  for (BusId id : cluster1) inside[network.bus_index(id)] = 1;
  if (cluster1.size() >= network.bus_count())
    throw InputError("cluster must be a proper subset of the buses");
  std::set<BranchId> cut;
  for (std::size_t i = 0; i < network.branch_count(); ++i) {
    if (!network.branch(i).in_service) continue;
    if (inside[network.from_index(i)] != inside[network.to_index(i)])
      cut.insert(network.branch(i).id);
  }
  return cut;
}

}  // namespace gridcuts
