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

#include <CLI11.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "gridcuts/feasibility.hpp"
#include "gridcuts/io.hpp"
#include "gridcuts/netflow.hpp"
#include "gridcuts/oracles.hpp"
#include "gridcuts/service.hpp"
#include "gridcuts/session.hpp"

#ifndef GRIDCUTS_DATA_DIR
#define GRIDCUTS_DATA_DIR "data"
#endif

namespace fs = std::filesystem;
using namespace gridcuts;

namespace {

constexpr int kExitFindings = 1;
constexpr int kExitInput = 2;

fs::path data_dir() {
  if (const char* env = std::getenv("GRIDCUTS_DATA_DIR"); env && *env) return env;
  return GRIDCUTS_DATA_DIR;
}

/// A path, or a bare name looked up under the data directory.
fs::path resolve(const std::string& name, std::initializer_list<const char*> dirs,
                 std::initializer_list<const char*> extensions) {
  if (fs::exists(name)) return name;
  for (const char* dir : dirs)
    for (const char* ext : extensions) {
      const fs::path candidate = data_dir() / dir / (name + ext);
      if (fs::exists(candidate)) return candidate;
    }
  throw InputError("no such case or file: " + name);
}

struct CaseArgs {
  std::string name;
  std::string format;
  std::string overlay;
  bool merge_parallel = false;
  std::optional<std::int64_t> auto_slack;

  void add(CLI::App* cmd) {
    cmd->add_option("case", name, "Case file or fixture name")->required();
    cmd->add_option("--case-format", format, "native or matpower (default: by extension)");
    cmd->add_option("--overlay", overlay, "Ratings overlay CSV (branch_id,rating_mw)");
    cmd->add_flag("--merge-parallel", merge_parallel, "Merge parallel circuits");
    cmd->add_option("--auto-slack", auto_slack, "Assign the generation mismatch to this bus");
  }

  CaseSpec spec() const {
    CaseSpec s;
    s.path = resolve(name, {"fixtures", "ieee118"}, {"", ".json", ".m"});
    if (!format.empty()) s.format = parse_case_format(format);
    if (!overlay.empty()) s.ratings_overlay = overlay;
    s.merge_parallel = merge_parallel;
    if (auto_slack) s.auto_slack = BusId{*auto_slack};
    return s;
  }
};

struct SeedArgs {
  std::optional<std::uint64_t> seed;
  bool deterministic = false;

  void add(CLI::App* cmd) {
    auto* s = cmd->add_option("--seed", seed, "Seed for source/sink selection (default: $GRIDCUTS_SEED)");
    cmd->add_flag("--deterministic", deterministic, "Lowest-id source and sink first")->excludes(s);
  }

  Ordering ordering() const {
    if (deterministic) return Ordering::deterministic();
    if (seed) return Ordering::seeded(*seed);
    if (const char* env = std::getenv("GRIDCUTS_SEED"); env && *env) {
      try {
        std::size_t used = 0;
        const std::uint64_t v = std::stoull(env, &used);
        if (used == std::string_view(env).size()) return Ordering::seeded(v);
      } catch (const std::exception&) {
      }
      throw InputError(std::string("GRIDCUTS_SEED is not an unsigned integer: ") + env);
    }
    return Ordering::deterministic();
  }
};

void emit(const std::string& text, const std::string& out) {
  if (out.empty())
    std::cout << text;
  else
    write_text_file(out, text);
}

std::string join_ids(const PowerNetwork& net, std::span<const std::size_t> branches) {
  std::string s;
  for (std::size_t b : branches) s += (s.empty() ? "" : ", ") + net.branch(b).id.value;
  return "{" + s + "}";
}

std::string mw(double v) { return format_number(v) + " MW"; }

/// DC results carry floating-point noise; show them to the centi-MW.
std::string mw2(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.2f MW", v);
  return buf;
}

int run_validate(const CaseArgs& args, const std::string& out) {
  const CaseSpec spec = args.spec();
  MatpowerOptions mp;
  mp.merge_parallel = spec.merge_parallel;
  NetworkData data = load_case(spec.path, spec.format.value_or(case_format_for(spec.path)), mp);
  if (spec.ratings_overlay)
    apply_ratings_overlay(data, parse_ratings_csv(read_text_file(*spec.ratings_overlay),
                                                  spec.ratings_overlay->string()));
  std::ostringstream os;
  double gen = 0, load = 0;
  for (const Bus& b : data.buses) {
    gen += b.gen_mw;
    load += b.load_mw;
  }
  os << "case " << (data.name.empty() ? spec.path.filename().string() : data.name) << ": "
     << data.buses.size() << " buses, " << data.branches.size() << " branches, generation "
     << mw(gen) << ", load " << mw(load) << "\n";
  ValidationReport report;
  try {
    BuildOptions opts;
    opts.auto_slack = spec.auto_slack;
    const PowerNetwork net = PowerNetwork::build(data, opts);
    for (const std::string& w : net.warnings()) os << "warning: " << w << "\n";
  } catch (const ModelError& e) {
    for (const std::string& w : data.warnings) os << "warning: " << w << "\n";
    report = e.report();
  }
  for (const Issue& issue : report.issues)
    os << (issue.severity == Severity::error ? "error: " : "warning: ") << issue.message << "\n";
  os << (report.ok() ? "valid\n" : "invalid\n");
  emit(os.str(), out);
  return report.ok() ? 0 : kExitInput;
}

/// Splits the live network along `cut` and returns the two sides, or
/// throws when the branches do not separate it into exactly two parts.
std::pair<std::set<BusId>, std::set<BusId>> sides_of(const PowerNetwork& net,
                                                     const FlowState& state,
                                                     const std::set<BranchId>& cut) {
  std::vector<int> comp(net.bus_count(), -1);
  int count = 0;
  for (std::size_t start = 0; start < net.bus_count(); ++start) {
    if (comp[start] >= 0) continue;
    std::vector<std::size_t> stack{start};
    comp[start] = count;
    while (!stack.empty()) {
      const std::size_t u = stack.back();
      stack.pop_back();
      for (const Incidence& inc : net.incident(u)) {
        if (!state.live(inc.branch) || cut.count(net.branch(inc.branch).id)) continue;
        if (comp[inc.neighbor] < 0) {
          comp[inc.neighbor] = count;
          stack.push_back(inc.neighbor);
        }
      }
    }
    ++count;
  }
  if (count != 2) throw InputError("the cut does not split the network into two parts");
  std::pair<std::set<BusId>, std::set<BusId>> sides;
  for (std::size_t b = 0; b < net.bus_count(); ++b)
    (comp[b] == 0 ? sides.first : sides.second).insert(net.bus(b).id);
  return sides;
}

std::string bus_set(const std::set<BusId>& buses) {
  std::string s;
  for (BusId b : buses) s += (s.empty() ? "" : ", ") + to_string(b);
  return "{" + s + "}";
}

int run_flow(const CaseArgs& args, const SeedArgs& seed, const std::vector<std::string>& cuts,
             const std::string& out) {
  const PowerNetwork net = load_network(args.spec());
  const Ordering ordering = seed.ordering();
  const FlowState state = build_flow(net, ordering);
  std::ostringstream os;
  os << "ordering: "
     << (ordering.mode == Ordering::Mode::deterministic ? "deterministic"
                                                          : "seed " + std::to_string(ordering.seed))
     << "\n";
  os << "branch,from,to,flow_mw,rating_mw\n";
  for (std::size_t i = 0; i < net.branch_count(); ++i) {
    const Branch& b = net.branch(i);
    os << b.id.value << "," << b.from.value << "," << b.to.value << ","
       << format_number(state.flow(i).mw()) << "," << format_number(state.rating(i).mw()) << "\n";
  }
  for (const std::string& spec : cuts) {
    std::set<BranchId> cut;
    std::stringstream ss(spec);
    for (std::string id; std::getline(ss, id, ',');) {
      if (!net.find_branch(BranchId{id})) throw InputError("unknown branch " + id);
      cut.insert(BranchId{id});
    }
    auto [a, b] = sides_of(net, state, cut);
    // Report the transfer in the exporting direction.
    Power into_b = cut_transfer(net, state, cut, b);
    if (into_b.negative()) {
      std::swap(a, b);
      into_b = -into_b;
    }
    std::string names;
    for (const BranchId& id : cut) names += (names.empty() ? "" : ", ") + id.value;
    os << "cut transfer {" << names << "}: " << mw(into_b.mw()) << " from " << bus_set(a)
       << " to " << bus_set(b) << "; injection balance " << mw(cluster_net_injection(net, a).mw())
       << "\n";
  }
  emit(os.str(), out);
  return 0;
}

ReportRow ft_row(const PowerNetwork& net, const FtResult& r) {
  ReportRow row;
  row.event = "ft";
  row.kind = !r.special ? "none" : r.radial ? "islanding" : "special";
  row.asset = net.branch(r.branch).id.value;
  row.kcrit.push_back(row.asset);
  for (std::size_t k : r.kcrit)
    if (k != r.branch) row.kcrit.push_back(net.branch(k).id.value);
  row.margin_mw = r.margin.mw();
  row.tc_mw = r.tc.mw();
  row.flow_mw = r.flow.mw();
  row.status = r.special ? "special" : "ok";
  return row;
}

struct FtArgs {
  std::vector<std::string> branches;
  bool all = false;
  bool oracle = false;
  std::string flows;
  std::string report;
  bool fail_on_special = false;
};

int run_ft(const CaseArgs& args, const SeedArgs& seed, const FtArgs& ft, const std::string& out) {
  const PowerNetwork net = load_network(args.spec());
  const FlowState state =
      ft.flows.empty() ? build_flow(net, seed.ordering())
                       : FlowState::from_flows(net, parse_flows_csv(read_text_file(ft.flows), ft.flows));

  SweepOutcome sweep;
  if (ft.all || ft.branches.empty()) {
    sweep = ft_sweep(net, state);
  } else {
    std::vector<BranchId> ids;
    for (const std::string& b : ft.branches) {
      if (!net.find_branch(BranchId{b})) throw InputError("unknown branch " + b);
      ids.push_back(BranchId{b});
    }
    // A named zero-flow branch is still tested, in its from->to direction.
    for (const BranchId& id : ids) {
      const std::size_t ix = net.branch_index(id);
      if (state.live(ix) && state.flow(ix).is_zero()) sweep.results.push_back(ft_edge(net, state, ix));
    }
    SweepOutcome rest = ft_sweep(net, state, ids);
    sweep.results.insert(sweep.results.end(), rest.results.begin(), rest.results.end());
    sweep.failures = rest.failures;
    std::sort(sweep.results.begin(), sweep.results.end(),
              [](const FtResult& a, const FtResult& b) { return a.branch < b.branch; });
  }

  bool any_special = false;
  bool oracle_disagrees = false;
  std::vector<ReportRow> rows;
  std::ostringstream os;
  std::optional<BusId> slack;
  if (ft.oracle) slack = net.slack() ? net.slack() : std::optional<BusId>(default_slack(net));
  for (const FtResult& r : sweep.results) {
    any_special = any_special || r.special;
    if (!ft.report.empty()) {
      rows.push_back(ft_row(net, r));
      continue;
    }
    os << "branch " << net.branch(r.branch).id.value << ": flow " << mw(r.flow.mw()) << " ("
       << r.from_bus.value << " -> " << r.to_bus.value << "), tc " << mw(r.tc.mw()) << ", margin "
       << mw(r.margin.mw());
    if (r.special) os << (r.radial ? ", islanding" : ", special");
    os << "\n  kcrit " << join_ids(net, r.kcrit) << (r.kcrit_tied ? " (tied)" : "") << "\n";
    if (!ft.oracle) continue;
    if (net.bus_count() <= kMaxEnumerationBuses) {
      const CutEnumeration cuts = enumerate_cuts(net, state, r.branch);
      const bool agree = has_saturated_cut(cuts) == r.special &&
                         (!r.special || enumerated_margin(cuts) == r.margin);
      oracle_disagrees = oracle_disagrees || !agree;
      os << "  enumeration: " << (agree ? "agrees" : "DISAGREES") << " (min margin "
         << mw(enumerated_margin(cuts).mw()) << ")\n";
    } else {
      os << "  enumeration: skipped (more than " << kMaxEnumerationBuses << " buses)\n";
    }
    try {
      const ContingencyOutcome dc = dc_post_contingency_overloads(net, slack, net.branch(r.branch).id);
      if (dc.islanded) {
        os << "  dc: outage islands the network\n";
      } else if (dc.overloads.empty()) {
        os << "  dc: no overloads" << (r.special ? " (DC misses the special asset)" : "") << "\n";
      } else {
        os << "  dc: " << dc.overloads.size() << " overload(s)"
           << (r.special ? "" : " (FT miss)") << ":";
        for (const Overload& o : dc.overloads)
          os << " " << o.branch.value << " by " << mw2(o.overload_mw) << ";";
        os << "\n";
      }
    } catch (const InputError& e) {
      os << "  dc: unavailable (" << e.what() << ")\n";
    }
  }
  std::string text = ft.report.empty() ? os.str() : write_report(rows, parse_report_format(ft.report));
  for (const SweepFailure& f : sweep.failures)
    std::cerr << "failed: " << f.branch.value << ": " << f.reason << "\n";
  emit(text, out);
  if (oracle_disagrees) {
    std::cerr << "error: feasibility test and cut enumeration disagree\n";
    return kExitFindings;
  }
  if (!sweep.failures.empty()) return kExitInput;
  return ft.fail_on_special && any_special ? kExitFindings : 0;
}

int run_scenario(const std::string& name, const SeedArgs& seed, bool no_shortlist,
                 const std::string& report, bool timings, bool fail_on_special,
                 const std::string& out) {
  const Scenario sc = load_scenario(resolve(name, {"scenarios"}, {"", ".json"}));
  SessionOptions opts;
  opts.ordering = sc.seed ? Ordering::seeded(*sc.seed) : Ordering::deterministic();
  if (seed.seed || seed.deterministic) opts.ordering = seed.ordering();
  opts.use_shortlist = !no_shortlist;
  auto net = std::make_shared<const PowerNetwork>(load_network(sc.case_spec));
  Session session = Session::start(net, opts);
  for (const ScenarioEvent& ev : sc.events) {
    EventInput in;
    in.label = ev.label;
    switch (ev.type) {
      case ScenarioEvent::Type::outage:
        in.kind = EventInput::Kind::outage;
        in.branch = ev.branch;
        break;
      case ScenarioEvent::Type::scale_injections:
        in.kind = EventInput::Kind::scale_injections;
        in.factor = ev.factor;
        break;
      case ScenarioEvent::Type::remedial:
        in.kind = EventInput::Kind::remedial;
        in.cut = ev.cut;
        in.reduce_by_mw = ev.reduce_by_mw;
        break;
    }
    if (in.kind == EventInput::Kind::outage && session.status() != SessionStatus::nominal) {
      std::cerr << "stopping: session is " << to_string(session.status()) << " before event "
                << (ev.label.empty() ? ev.branch.value : ev.label) << "\n";
      break;
    }
    session.apply(in);
  }
  const std::vector<ReportRow> rows = report_rows(session);
  emit(write_report(rows, parse_report_format(report), timings), out);
  const bool any_special = !session.specials().empty();
  return fail_on_special && any_special ? kExitFindings : 0;
}

int run_serve(const CaseArgs& args, bool have_case, const SeedArgs& seed, const std::string& host,
              int port) {
  ServiceOptions opts;
  opts.data_dir = data_dir();
  opts.session.ordering = seed.ordering();
  Service service(opts);
  if (have_case) {
    const std::string id = service.add_session(std::make_shared<const PowerNetwork>(load_network(args.spec())));
    std::cerr << "session " << id << " ready\n";
  }
  HttpFrontend http(service);
  const int bound = http.bind(host, port);
  std::cerr << "listening on http://" << host << ":" << bound << "/v1\n";
  http.listen();
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Saturated cut-set analysis for transmission networks"};
  app.require_subcommand(1);
  std::string out;

  CaseArgs validate_case;
  auto* validate = app.add_subcommand("validate", "Check a case for structural problems");
  validate_case.add(validate);
  validate->add_option("--out", out, "Write output to this file");

  CaseArgs flow_case;
  SeedArgs flow_seed;
  std::vector<std::string> cuts;
  auto* flow = app.add_subcommand("flow", "Build a feasible flow and print cut transfers");
  flow_case.add(flow);
  flow_seed.add(flow);
  flow->add_option("--cut", cuts, "Comma-separated branch ids of a cut to report (repeatable)");
  flow->add_option("--out", out, "Write output to this file");

  CaseArgs ft_case;
  SeedArgs ft_seed;
  FtArgs ft_args;
  auto* ft = app.add_subcommand("ft", "Run the feasibility test");
  ft_case.add(ft);
  ft_seed.add(ft);
  auto* branch_opt = ft->add_option("--branch", ft_args.branches, "Branch id (repeatable)");
  ft->add_flag("--all", ft_args.all, "Test every branch (default)")->excludes(branch_opt);
  ft->add_flag("--oracle", ft_args.oracle, "Cross-check against cut enumeration and DC power flow");
  ft->add_option("--flows", ft_args.flows, "Use this flow CSV instead of building one");
  ft->add_option("--report", ft_args.report, "Emit a json, csv or table report instead of text")
      ->check(CLI::IsMember({"json", "csv", "table"}));
  ft->add_flag("--fail-on-special", ft_args.fail_on_special, "Exit 1 when a special asset is found");
  ft->add_option("--out", out, "Write output to this file");

  std::string scenario_name, report = "table";
  bool no_shortlist = false, timings = false, scenario_fail = false;
  SeedArgs scenario_seed;
  auto* scenario = app.add_subcommand("scenario", "Replay an outage scenario");
  scenario->add_option("scenario", scenario_name, "Scenario file or name")->required();
  scenario_seed.add(scenario);
  scenario->add_flag("--no-shortlist", no_shortlist, "Re-test every asset after each event");
  scenario->add_option("--report", report, "json, csv or table")
      ->check(CLI::IsMember({"json", "csv", "table"}));
  scenario->add_flag("--timings", timings, "Include per-event timings");
  scenario->add_flag("--fail-on-special", scenario_fail, "Exit 1 when special assets remain");
  scenario->add_option("--out", out, "Write the report to this file");

  CaseArgs serve_case;
  SeedArgs serve_seed;
  std::string host = "127.0.0.1";
  int port = 8080;
  auto* serve = app.add_subcommand("serve", "Serve the HTTP API");
  serve->add_option("case", serve_case.name, "Case to open as the first session");
  serve->add_option("--case-format", serve_case.format, "native or matpower");
  serve->add_option("--overlay", serve_case.overlay, "Ratings overlay CSV");
  serve->add_flag("--merge-parallel", serve_case.merge_parallel, "Merge parallel circuits");
  serve->add_option("--auto-slack", serve_case.auto_slack, "Assign the generation mismatch to this bus");
  serve_seed.add(serve);
  serve->add_option("--host", host, "Listen address");
  serve->add_option("--port", port, "Listen port")->check(CLI::Range(1, 65535));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitInput;
  }

  try {
    if (*validate) return run_validate(validate_case, out);
    if (*flow) return run_flow(flow_case, flow_seed, cuts, out);
    if (*ft) return run_ft(ft_case, ft_seed, ft_args, out);
    if (*scenario)
      return run_scenario(scenario_name, scenario_seed, no_shortlist, report, timings,
                          scenario_fail, out);
    if (*serve) return run_serve(serve_case, !serve_case.name.empty(), serve_seed, host, port);
  } catch (const InfeasibleFlow& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const ModelError& e) {
    std::cerr << "error: invalid case\n";
    for (const Issue& issue : e.report().issues)
      if (issue.severity == Severity::error) std::cerr << "  " << issue.message << "\n";
    return kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  }
  return 0;
}
