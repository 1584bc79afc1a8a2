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

#include "gridcuts/service.hpp"

#include <httplib.h>

#include <json.hpp>
#include <mutex>

#include "gridcuts/io.hpp"

namespace gridcuts {

using json = nlohmann::ordered_json;

namespace {

struct ApiError {
  int status;
  std::string message;
};

json error_body(int status, const std::string& message) {
  return {{"schema_version", kSchemaVersion}, {"error", {{"status", status}, {"message", message}}}};
}

json id_list(const PowerNetwork& net, std::span<const std::size_t> branches) {
  json out = json::array();
  for (std::size_t b : branches) out.push_back(net.branch(b).id.value);
  return out;
}

json bus_list(const PowerNetwork& net, std::span<const std::size_t> buses) {
  json out = json::array();
  for (std::size_t b : buses) out.push_back(net.bus(b).id.value);
  return out;
}

json ft_json(const PowerNetwork& net, const FtResult& r, bool with_certificate) {
  json j;
  j["branch"] = net.branch(r.branch).id.value;
  j["from_bus"] = r.from_bus.value;
  j["to_bus"] = r.to_bus.value;
  j["flow_mw"] = r.flow.mw();
  j["tc_mw"] = r.tc.mw();
  j["margin_mw"] = r.margin.mw();
  j["special"] = r.special;
  j["radial"] = r.radial;
  j["kcrit"] = id_list(net, r.kcrit);
  j["kcrit_tied"] = r.kcrit_tied;
  j["cluster1"] = bus_list(net, r.cluster1);
  j["augmenting_paths"] = r.augmenting_paths;
  if (with_certificate) j["certificate"] = id_list(net, r.certificate);
  return j;
}

json update_json(const PowerNetwork& net, const UpdateResult& u) {
  json j;
  j["branch"] = net.branch(u.branch).id.value;
  j["from_bus"] = u.from_bus.value;
  j["to_bus"] = u.to_bus.value;
  j["flow_mw"] = u.flow.mw();
  j["rerouted_mw"] = u.rerouted.mw();
  j["deficit_mw"] = u.deficit.mw();
  j["paths"] = json::array();
  for (const ReroutePath& p : u.paths) {
    json pj;
    pj["buses"] = bus_list(net, path_buses(net, p.path));
    json steps = json::array();
    for (const Step& s : p.path.steps) steps.push_back(net.branch(s.branch).id.value);
    pj["branches"] = std::move(steps);
    pj["amount_mw"] = p.amount.mw();
    j["paths"].push_back(std::move(pj));
  }
  j["changed"] = id_list(net, u.changed);
  if (u.islanding) {
    j["islanding"] = {{"separated", bus_list(net, u.islanding->separated)},
                      {"imbalance_mw", u.islanding->imbalance.mw()},
                      {"pruned", u.islanding->pruned}};
  } else {
    j["islanding"] = nullptr;
  }
  j["saturated_cut"] = id_list(net, u.saturated_cut);
  j["saturated_cluster"] = bus_list(net, u.saturated_cluster);
  return j;
}

json input_json(const EventInput& in) {
  json j;
  switch (in.kind) {
    case EventInput::Kind::outage:
      j["kind"] = "outage";
      j["branch"] = in.branch.value;
      break;
    case EventInput::Kind::remedial: {
      j["kind"] = "remedial";
      json cut = json::array();
      for (const BranchId& b : in.cut) cut.push_back(b.value);
      j["cut"] = std::move(cut);
      j["reduce_by_mw"] = in.reduce_by_mw;
      break;
    }
    case EventInput::Kind::scale_injections:
      j["kind"] = "scale_injections";
      j["factor"] = in.factor;
      break;
  }
  j["label"] = in.label;
  return j;
}

json record_json(const PowerNetwork& net, const EventRecord& rec) {
  json j;
  j["index"] = rec.index;
  j["input"] = rec.input ? input_json(*rec.input) : json(nullptr);
  j["update"] = rec.update ? update_json(net, *rec.update) : json(nullptr);
  j["retested"] = id_list(net, rec.retested);
  j["new_special"] = json::array();
  for (const FtResult& r : rec.new_special) j["new_special"].push_back(ft_json(net, r, false));
  j["new_islanding"] = json::array();
  for (const FtResult& r : rec.new_islanding) j["new_islanding"].push_back(ft_json(net, r, false));
  j["cleared"] = id_list(net, rec.cleared);
  j["failures"] = json::array();
  for (const SweepFailure& f : rec.failures)
    j["failures"].push_back({{"branch", f.branch.value}, {"reason", f.reason}});
  j["status"] = to_string(rec.status);
  j["timings"] = {{"ups_s", rec.timings.ups_s},
                  {"sa_s", rec.timings.sa_s},
                  {"ft_s", rec.timings.ft_s},
                  {"total_s", rec.timings.total_s}};
  return j;
}

json state_json(const std::string& id, const Session& s) {
  const PowerNetwork& net = s.network();
  const SessionState& st = s.state();
  json j;
  j["schema_version"] = kSchemaVersion;
  j["session"] = id;
  j["name"] = net.name();
  j["status"] = to_string(st.status);
  j["head"] = s.head();
  j["base_mva"] = net.base_mva();
  j["buses"] = json::array();
  for (const Bus& b : net.buses())
    j["buses"].push_back({{"id", b.id.value}, {"gen_mw", b.gen_mw}, {"load_mw", b.load_mw}});
  j["branches"] = json::array();
  for (std::size_t i = 0; i < net.branch_count(); ++i) {
    const Branch& b = net.branch(i);
    json bj;
    bj["id"] = b.id.value;
    bj["from"] = b.from.value;
    bj["to"] = b.to.value;
    bj["rating_mw"] = st.flow.rating(i).mw();
    bj["flow_mw"] = st.flow.flow(i).mw();
    bj["cap_forward_mw"] = st.flow.cap_forward(i).mw();
    bj["cap_reverse_mw"] = st.flow.cap_reverse(i).mw();
    bj["state"] = st.flow.live(i) ? "live" : st.flow.removed(i) ? "removed" : "out_of_service";
    bj["special"] = st.results[i] && st.results[i]->special;
    j["branches"].push_back(std::move(bj));
  }
  j["special_assets"] = json::array();
  for (const FtResult* r : s.specials()) j["special_assets"].push_back(ft_json(net, *r, false));
  j["pending"] = st.pending ? update_json(net, *st.pending) : json(nullptr);
  j["base"] = record_json(net, s.base());
  j["events"] = json::array();
  for (const EventRecord& rec : s.log()) j["events"].push_back(record_json(net, rec));
  return j;
}

json parse_body(std::string_view body) {
  if (body.empty()) return json::object();
  try {
    json j = json::parse(body.begin(), body.end());
    if (!j.is_object()) throw ApiError{422, "request body must be a JSON object"};
    return j;
  } catch (const json::parse_error& e) {
    throw ApiError{422, std::string("malformed JSON: ") + e.what()};
  }
}

std::string string_field(const json& body, const char* key) {
  auto it = body.find(key);
  if (it == body.end() || !it->is_string())
    throw ApiError{422, std::string("field \"") + key + "\" must be a string"};
  return it->get<std::string>();
}

BranchId known_branch(const Session& s, const std::string& id) {
  if (!s.network().find_branch(BranchId{id})) throw ApiError{404, "unknown branch " + id};
  return BranchId{id};
}

std::vector<std::string_view> split_path(std::string_view path) {
  std::vector<std::string_view> parts;
  while (!path.empty()) {
    if (path.front() == '/') {
      path.remove_prefix(1);
      continue;
    }
    const auto slash = path.find('/');
    parts.push_back(path.substr(0, slash));
    if (slash == std::string_view::npos) break;
    path.remove_prefix(slash);
  }
  return parts;
}

HttpResponse respond(int status, const json& body) { return {status, body.dump()}; }

[[noreturn]] void bound_error(const std::string& host, int port) {
  throw InputError("cannot listen on " + host + ":" + std::to_string(port));
}

}  // namespace

Service::Service(ServiceOptions options) : options_(std::move(options)) {}

std::string Service::add_session(std::shared_ptr<const PowerNetwork> network,
                                 std::optional<SessionOptions> options) {
  Session session = Session::start(std::move(network), options.value_or(options_.session));
  std::unique_lock lock(mutex_);
  const std::string id = "s" + std::to_string(next_id_++);
  sessions_.emplace(id, std::make_shared<Entry>(std::move(session)));
  return id;
}

std::shared_ptr<Service::Entry> Service::find(const std::string& id) const {
  std::shared_lock lock(mutex_);
  auto it = sessions_.find(id);
  if (it == sessions_.end()) throw ApiError{404, "unknown session " + id};
  return it->second;
}

HttpResponse Service::create(std::string_view body_text) {
  const json body = parse_body(body_text);
  SessionOptions opts = options_.session;
  std::shared_ptr<const PowerNetwork> network;

  auto safe_name = [](const std::string& name) {
    if (name.empty() || name.find_first_of("/\\") != std::string::npos || name.front() == '.')
      throw ApiError{422, "invalid name \"" + name + "\""};
    return name;
  };
  if (body.contains("fixture")) {
    const std::string name = safe_name(string_field(body, "fixture"));
    const auto path = options_.data_dir / "fixtures" / (name + ".json");
    if (!std::filesystem::exists(path)) throw ApiError{404, "unknown fixture " + name};
    CaseSpec spec;
    spec.path = path;
    network = std::make_shared<const PowerNetwork>(load_network(spec));
  } else if (body.contains("scenario")) {
    const std::string name = safe_name(string_field(body, "scenario"));
    const auto path = options_.data_dir / "scenarios" / (name + ".json");
    if (!std::filesystem::exists(path)) throw ApiError{404, "unknown scenario " + name};
    const Scenario sc = load_scenario(path);
    network = std::make_shared<const PowerNetwork>(load_network(sc.case_spec));
    if (sc.seed) opts.ordering = Ordering::seeded(*sc.seed);
  } else if (body.contains("case")) {
    const json& c = body["case"];
    if (!c.is_object()) throw ApiError{422, "field \"case\" must be an object"};
    network = std::make_shared<const PowerNetwork>(
        PowerNetwork::build(parse_case_json(c.dump(), "<request>")));
  } else {
    throw ApiError{422, "one of \"fixture\", \"scenario\" or \"case\" is required"};
  }
  if (auto it = body.find("seed"); it != body.end() && !it->is_null()) {
    if (!it->is_number_unsigned()) throw ApiError{422, "field \"seed\" must be a non-negative integer"};
    opts.ordering = Ordering::seeded(it->get<std::uint64_t>());
  }
  if (auto it = body.find("use_shortlist"); it != body.end()) {
    if (!it->is_boolean()) throw ApiError{422, "field \"use_shortlist\" must be a boolean"};
    opts.use_shortlist = it->get<bool>();
  }
  const std::string id = add_session(std::move(network), opts);
  auto entry = find(id);
  std::shared_lock lock(entry->mutex);
  return respond(201, state_json(id, entry->session));
}

HttpResponse Service::handle(std::string_view method, std::string_view path,
                             std::string_view body) {
  try {
    const auto parts = split_path(path);
    if (parts.size() < 2 || parts[0] != "v1") throw ApiError{404, "no such endpoint"};
    if (parts.size() == 2 && parts[1] == "health" && method == "GET")
      return respond(200, {{"schema_version", kSchemaVersion}, {"status", "ok"}});
    if (parts.size() == 2 && parts[1] == "fixtures" && method == "GET") {
      json fixtures = json::array(), scenarios = json::array();
      std::vector<std::string> names;
      for (const char* dir : {"fixtures", "scenarios"}) {
        names.clear();
        const auto root = options_.data_dir / dir;
        if (std::filesystem::is_directory(root))
          for (const auto& e : std::filesystem::directory_iterator(root))
            if (e.path().extension() == ".json") names.push_back(e.path().stem().string());
        std::sort(names.begin(), names.end());
        for (const auto& n : names) (std::string_view(dir) == "fixtures" ? fixtures : scenarios).push_back(n);
      }
      return respond(200, {{"schema_version", kSchemaVersion}, {"fixtures", fixtures}, {"scenarios", scenarios}});
    }
    if (parts[1] != "sessions") throw ApiError{404, "no such endpoint"};
    if (parts.size() == 2) {
      if (method != "POST") throw ApiError{405, "method not allowed"};
      return create(body);
    }

    const std::string id(parts[2]);
    if (parts.size() == 3 && method == "DELETE") {
      std::unique_lock lock(mutex_);
      if (sessions_.erase(id) == 0) throw ApiError{404, "unknown session " + id};
      return respond(200, {{"schema_version", kSchemaVersion}, {"deleted", id}});
    }
    auto entry = find(id);
    Session& s = entry->session;

    if (parts.size() == 3) {
      if (method != "GET") throw ApiError{405, "method not allowed"};
      std::shared_lock lock(entry->mutex);
      return respond(200, state_json(id, s));
    }
    const std::string_view action = parts[3];
    if (action == "branches" && parts.size() == 5 && method == "GET") {
      std::shared_lock lock(entry->mutex);
      const BranchId br = known_branch(s, std::string(parts[4]));
      const std::size_t ix = s.network().branch_index(br);
      json j;
      j["schema_version"] = kSchemaVersion;
      j["branch"] = br.value;
      j["flow_mw"] = s.state().flow.flow(ix).mw();
      j["rating_mw"] = s.state().flow.rating(ix).mw();
      j["result"] = s.state().results[ix] ? ft_json(s.network(), *s.state().results[ix], true)
                                          : json(nullptr);
      return respond(200, j);
    }
    if (parts.size() != 4) throw ApiError{404, "no such endpoint"};
    if (method != "POST") throw ApiError{405, "method not allowed"};
    const json req = parse_body(body);

    if (action == "what-if") {
      std::shared_lock lock(entry->mutex);
      const BranchId br = known_branch(s, string_field(req, "outage"));
      const EventRecord rec = s.what_if(br);
      json j = record_json(s.network(), rec);
      const auto& current = s.state().results[s.network().branch_index(br)];
      j["asset"] = current ? ft_json(s.network(), *current, true) : json(nullptr);
      j["schema_version"] = kSchemaVersion;
      j["head"] = s.head();
      return respond(200, j);
    }

    std::unique_lock lock(entry->mutex);
    if (action == "events") {
      const BranchId br = known_branch(s, string_field(req, "outage"));
      const std::string label = req.contains("label") ? string_field(req, "label") : std::string();
      const EventRecord& rec = s.apply_event(br, label);
      json j = record_json(s.network(), rec);
      j["schema_version"] = kSchemaVersion;
      j["head"] = s.head();
      return respond(200, j);
    }
    if (action == "remedial") {
      auto cut_it = req.find("cut");
      if (cut_it == req.end() || !cut_it->is_array() || cut_it->empty())
        throw ApiError{422, "field \"cut\" must be a non-empty array of branch ids"};
      std::vector<BranchId> cut;
      for (const json& c : *cut_it) {
        if (!c.is_string()) throw ApiError{422, "cut members must be strings"};
        cut.push_back(known_branch(s, c.get<std::string>()));
      }
      auto r = req.find("reduce_by_mw");
      if (r == req.end() || !r->is_number()) throw ApiError{422, "field \"reduce_by_mw\" must be a number"};
      s.remedial_scale(cut, r->get<double>());
      return respond(200, state_json(id, s));
    }
    if (action == "undo") {
      s.undo();
      return respond(200, state_json(id, s));
    }
    throw ApiError{404, "no such endpoint"};
  } catch (const ApiError& e) {
    return respond(e.status, error_body(e.status, e.message));
  } catch (const StateError& e) {
    return respond(409, error_body(409, e.what()));
  } catch (const InfeasibleFlow& e) {
    json j = error_body(422, e.what());
    json cut = json::array();
    for (const BranchId& b : e.limiting_cut()) cut.push_back(b.value);
    j["error"]["limiting_cut"] = std::move(cut);
    j["error"]["deficit_mw"] = e.deficit().mw();
    return respond(422, j);
  } catch (const InputError& e) {
    return respond(422, error_body(422, e.what()));
  } catch (const std::exception& e) {
    return respond(500, error_body(500, e.what()));
  }
}

struct HttpFrontend::Impl {
  httplib::Server server;
};

HttpFrontend::HttpFrontend(Service& service) : impl_(std::make_unique<Impl>()) {
  auto forward = [&service](const httplib::Request& req, httplib::Response& res) {
    const HttpResponse out = service.handle(req.method, req.path, req.body);
    res.status = out.status;
    res.set_content(out.body, "application/json");
  };
  httplib::Server& server = impl_->server;
  server.set_default_headers({{"Access-Control-Allow-Origin", "*"},
                              {"Access-Control-Allow-Methods", "GET, POST, DELETE, OPTIONS"},
                              {"Access-Control-Allow-Headers", "Content-Type"}});
  server.Options(R"(/.*)", [](const httplib::Request&, httplib::Response& res) { res.status = 204; });
  server.Get(R"(/v1/.*)", forward);
  server.Post(R"(/v1/.*)", forward);
  server.Delete(R"(/v1/.*)", forward);
}

HttpFrontend::~HttpFrontend() { stop(); }

int HttpFrontend::bind(const std::string& host, int port) {
  const int bound = port == 0 ? impl_->server.bind_to_any_port(host) : port;
  if (port != 0 && !impl_->server.bind_to_port(host, port)) bound_error(host, port);
  if (bound < 0) bound_error(host, port);
  return bound;
}

void HttpFrontend::listen() { impl_->server.listen_after_bind(); }

void HttpFrontend::stop() { impl_->server.stop(); }

}  // namespace gridcuts
