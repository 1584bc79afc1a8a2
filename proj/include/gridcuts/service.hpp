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

#include <filesystem>
#include <map>
#include <memory>
#include <shared_mutex>
#include <string>
#include <string_view>

#include "gridcuts/session.hpp"

namespace gridcuts {

inline constexpr int kSchemaVersion = 1;

struct HttpResponse {
  int status = 200;
  std::string body;
};

struct ServiceOptions {
  /// Holds fixtures/ and scenarios/ for sessions created by name.
  std::filesystem::path data_dir;
  SessionOptions session;
};

/// JSON API over in-memory sessions. Transport-independent: the HTTP
/// adapter and the tests both call handle(). Thread-safe.
///
///   GET  /v1/health
///   GET  /v1/fixtures
///   POST /v1/sessions                      {"fixture"|"scenario"|"case", "seed"?, "use_shortlist"?}
///   GET  /v1/sessions/{id}
///   GET  /v1/sessions/{id}/branches/{branch}
///   POST /v1/sessions/{id}/events          {"outage": branch}
///   POST /v1/sessions/{id}/what-if         {"outage": branch}
///   POST /v1/sessions/{id}/remedial        {"cut": [branch...], "reduce_by_mw": x}
///   POST /v1/sessions/{id}/undo
///   DELETE /v1/sessions/{id}
class Service {
 public:
  explicit Service(ServiceOptions options);

  HttpResponse handle(std::string_view method, std::string_view path, std::string_view body);

  /// Registers a session over an already loaded network; returns its id.
  std::string add_session(std::shared_ptr<const PowerNetwork> network,
                          std::optional<SessionOptions> options = std::nullopt);

 private:
  struct Entry {
    std::shared_mutex mutex;
    Session session;
    explicit Entry(Session s) : session(std::move(s)) {}
  };

  std::shared_ptr<Entry> find(const std::string& id) const;
  HttpResponse create(std::string_view body);

  ServiceOptions options_;
  mutable std::shared_mutex mutex_;
  std::map<std::string, std::shared_ptr<Entry>> sessions_;
  std::uint64_t next_id_ = 1;
};

/// HTTP transport for a Service. CORS is open so a browser console served
/// from another origin can call the API.
class HttpFrontend {
 public:
  explicit HttpFrontend(Service& service);
  ~HttpFrontend();
  HttpFrontend(const HttpFrontend&) = delete;
  HttpFrontend& operator=(const HttpFrontend&) = delete;

  /// Binds the listening socket; port 0 picks a free port. Returns the port.
  int bind(const std::string& host, int port);
  /// Serves until stop() is called.
  void listen();
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace gridcuts
