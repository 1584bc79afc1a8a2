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
#include <httplib.h>

#include <atomic>
#include <json.hpp>
#include <thread>

#include "gridcuts/service.hpp"
#include "support.hpp"

using namespace gridcuts;
using json = nlohmann::json;

namespace {

struct Api {
  Service service{ServiceOptions{GRIDCUTS_DATA_DIR, {}}};

  std::pair<int, json> call(const std::string& method, const std::string& path, const json& body = nullptr) {
    const HttpResponse r = service.handle(method, path, body.is_null() ? "" : body.dump());
    return {r.status, json::parse(r.body)};
  }
  std::string raw(const std::string& path) { return service.handle("GET", path, "").body; }

  std::string create(const json& body) {
    auto [status, j] = call("POST", "/v1/sessions", body);
    REQUIRE(status == 201);
    CHECK(j["schema_version"] == 1);
    return j["session"].get<std::string>();
  }
};

const json* find_by(const json& list, const char* key, const std::string& value) {
  for (const json& item : list)
    if (item[key] == value) return &item;
  return nullptr;
}

}  // namespace

TEST_CASE("health and fixture listing") {
  Api api;
  auto [status, j] = api.call("GET", "/v1/health");
  CHECK(status == 200);
  CHECK(j["status"] == "ok");
  auto [s2, list] = api.call("GET", "/v1/fixtures");
  CHECK(s2 == 200);
  CHECK(std::find(list["fixtures"].begin(), list["fixtures"].end(), "fixture9") != list["fixtures"].end());
  CHECK(std::find(list["scenarios"].begin(), list["scenarios"].end(), "ieee118_hurricane") != list["scenarios"].end());
}

TEST_CASE("session state projects the network, flows and special assets") {
  Api api;
  const std::string id = api.create({{"fixture", "fixture9"}});
  auto [status, st] = api.call("GET", "/v1/sessions/" + id);
  REQUIRE(status == 200);
  CHECK(st["status"] == "nominal");
  CHECK(st["head"] == 0);
  CHECK(st["buses"].size() == 9);
  REQUIRE(st["branches"].size() == 11);
  for (const json& b : st["branches"]) {
    CHECK(b["cap_forward_mw"].get<double>() + b["cap_reverse_mw"].get<double>() ==
          doctest::Approx(2 * b["rating_mw"].get<double>()));
    CHECK(b["cap_forward_mw"].get<double>() ==
          doctest::Approx(b["rating_mw"].get<double>() - b["flow_mw"].get<double>()));
  }
  REQUIRE(st["special_assets"].size() == 2);
  const json* a = find_by(st["special_assets"], "branch", "4-1");
  REQUIRE(a != nullptr);
  CHECK((*a)["margin_mw"] == -35.86);
  CHECK((*a)["kcrit"] == json::array({"4-1", "6-7"}));
  CHECK(st["events"].empty());

  auto [s3, detail] = api.call("GET", "/v1/sessions/" + id + "/branches/4-1");
  CHECK(s3 == 200);
  CHECK(detail["result"]["tc_mw"] == 172.14);
  CHECK_FALSE(detail["result"]["certificate"].empty());
}

TEST_CASE("what-if returns the outcome without changing state") {
  Api api;
  const std::string id = api.create({{"fixture", "fixture9"}});
  const std::string before = api.raw("/v1/sessions/" + id);
  auto [status, rec] = api.call("POST", "/v1/sessions/" + id + "/what-if", {{"outage", "4-1"}});
  REQUIRE(status == 200);
  CHECK(rec["asset"]["margin_mw"] == -35.86);
  CHECK(rec["update"]["deficit_mw"] == 35.86);
  CHECK(rec["status"] == "saturated");
  CHECK(rec["head"] == 0);
  CHECK(api.raw("/v1/sessions/" + id) == before);
}

TEST_CASE("a second event on a saturated session is a conflict") {
  Api api;
  const std::string id = api.create({{"fixture", "fixture9"}});
  auto [s1, r1] = api.call("POST", "/v1/sessions/" + id + "/events", {{"outage", "4-1"}});
  CHECK(s1 == 200);
  CHECK(r1["status"] == "saturated");
  CHECK(r1["head"] == 1);
  auto [s2, r2] = api.call("POST", "/v1/sessions/" + id + "/events", {{"outage", "8-9"}});
  CHECK(s2 == 409);
  CHECK(r2["error"]["status"] == 409);
}

TEST_CASE("undo after an event restores the pre-event state") {
  Api api;
  const std::string id = api.create({{"fixture", "reroute6"}});
  const std::string before = api.raw("/v1/sessions/" + id);
  auto [s1, r1] = api.call("POST", "/v1/sessions/" + id + "/events", {{"outage", "5-6"}, {"label", "O1"}});
  REQUIRE(s1 == 200);
  CHECK(r1["update"]["paths"][0]["buses"] == json::array({5, 4, 1, 6}));
  CHECK(r1["input"]["label"] == "O1");
  auto [s2, st] = api.call("POST", "/v1/sessions/" + id + "/undo");
  CHECK(s2 == 200);
  CHECK(st["head"] == 0);
  CHECK(api.raw("/v1/sessions/" + id) == before);
  auto [s3, err] = api.call("POST", "/v1/sessions/" + id + "/undo");
  CHECK(s3 == 409);
}

TEST_CASE("remedial scaling through the API") {
  Api api;
  const std::string id = api.create({{"fixture", "fixture9"}});
  auto [s1, st] = api.call("POST", "/v1/sessions/" + id + "/remedial",
                           {{"cut", {"4-1", "6-7"}}, {"reduce_by_mw", 35.86}});
  REQUIRE(s1 == 200);
  CHECK(st["special_assets"].empty());
  CHECK(st["head"] == 1);
  auto [s2, e2] = api.call("POST", "/v1/sessions/" + id + "/remedial", {{"cut", {"4-1", "6-7"}}, {"reduce_by_mw", 0}});
  CHECK(s2 == 422);
  auto [s3, e3] = api.call("POST", "/v1/sessions/" + id + "/remedial", {{"cut", {"4-1", "zz"}}, {"reduce_by_mw", 1}});
  CHECK(s3 == 404);
  auto [s4, e4] = api.call("POST", "/v1/sessions/" + id + "/remedial", {{"cut", "4-1"}, {"reduce_by_mw", 1}});
  CHECK(s4 == 422);
}

TEST_CASE("error statuses") {
  Api api;
  const std::string id = api.create({{"fixture", "fixture9"}});
  CHECK(api.call("GET", "/v1/sessions/nope").first == 404);
  CHECK(api.call("GET", "/v1/sessions/" + id + "/branches/0-0").first == 404);
  CHECK(api.call("POST", "/v1/sessions/" + id + "/events", {{"outage", "0-0"}}).first == 404);
  CHECK(api.call("POST", "/v1/sessions/" + id + "/events", {{"branch", "4-1"}}).first == 422);
  CHECK(api.call("POST", "/v1/sessions/" + id + "/events", {{"outage", 41}}).first == 422);
  CHECK(api.service.handle("POST", "/v1/sessions/" + id + "/events", "{oops").status == 422);
  CHECK(api.service.handle("POST", "/v1/sessions/" + id + "/events", "[]").status == 422);
  CHECK(api.call("GET", "/v2/health").first == 404);
  CHECK(api.call("PUT", "/v1/sessions/" + id).first == 405);
  CHECK(api.call("POST", "/v1/sessions", {{"fixture", "../scenarios/ieee118_hurricane"}}).first == 422);
  CHECK(api.call("POST", "/v1/sessions", {{"fixture", "missing"}}).first == 404);
  CHECK(api.call("POST", "/v1/sessions", json::object()).first == 422);
  CHECK(api.call("POST", "/v1/sessions", {{"fixture", "fixture9"}, {"seed", -1}}).first == 422);
}

TEST_CASE("inline cases, seeds and scenarios") {
  Api api;
  const json c = json::parse(read_text_file(test::data_path("fixtures/reroute6.json")));
  const std::string a = api.create({{"case", c}, {"seed", 5}});
  const std::string b = api.create({{"case", c}, {"seed", 5}});
  json sa = json::parse(api.raw("/v1/sessions/" + a)), sb = json::parse(api.raw("/v1/sessions/" + b));
  CHECK(sa["branches"] == sb["branches"]);

  json bad = c;
  bad["branches"][0]["to"] = 99;
  auto [status, err] = api.call("POST", "/v1/sessions", {{"case", bad}});
  CHECK(status == 422);

  const std::string s = api.create({{"scenario", "ieee118_hurricane"}});
  json st = json::parse(api.raw("/v1/sessions/" + s));
  CHECK(st["buses"].size() == 118);
  CHECK(find_by(st["special_assets"], "branch", "26-30") != nullptr);

  CHECK(api.call("DELETE", "/v1/sessions/" + s).first == 200);
  CHECK(api.call("GET", "/v1/sessions/" + s).first == 404);
}

TEST_CASE("concurrent readers and a writer") {
  Api api;
  const std::string id = api.create({{"fixture", "reroute6"}});
  std::atomic<int> failures{0};
  std::vector<std::thread> readers;
  for (int t = 0; t < 4; ++t)
    readers.emplace_back([&] {
      for (int i = 0; i < 50; ++i) {
        if (api.service.handle("GET", "/v1/sessions/" + id, "").status != 200) ++failures;
        const auto r = api.service.handle("POST", "/v1/sessions/" + id + "/what-if", R"({"outage":"1-2"})");
        if (r.status != 200 && r.status != 404) ++failures;
      }
    });
  for (int i = 0; i < 20; ++i) {
    CHECK(api.call("POST", "/v1/sessions/" + id + "/events", {{"outage", "5-6"}}).first == 200);
    CHECK(api.call("POST", "/v1/sessions/" + id + "/undo").first == 200);
  }
  for (auto& t : readers) t.join();
  CHECK(failures == 0);
  CHECK(json::parse(api.raw("/v1/sessions/" + id))["head"] == 0);
}

TEST_CASE("HTTP transport with CORS") {
  Service service(ServiceOptions{GRIDCUTS_DATA_DIR, {}});
  HttpFrontend http(service);
  const int port = http.bind("127.0.0.1", 0);
  REQUIRE(port > 0);
  std::thread server([&] { http.listen(); });
  httplib::Client client("127.0.0.1", port);
  httplib::Result res;
  for (int i = 0; i < 100 && !(res = client.Get("/v1/health")); ++i)
    std::this_thread::sleep_for(std::chrono::milliseconds(10));
  REQUIRE(res);
  CHECK(res->status == 200);
  CHECK(res->get_header_value("Access-Control-Allow-Origin") == "*");
  auto created = client.Post("/v1/sessions", R"({"fixture":"fixture9"})", "application/json");
  REQUIRE(created);
  CHECK(created->status == 201);
  auto options = client.Options("/v1/sessions");
  REQUIRE(options);
  CHECK(options->status == 204);
  http.stop();
  server.join();
}
