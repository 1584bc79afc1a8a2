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
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gridcuts/model.hpp"

namespace gridcuts {

enum class CaseFormat { native, matpower };

/// Parses "native" / "json" or "matpower" / "m". Throws InputError otherwise.
CaseFormat parse_case_format(std::string_view name);
/// Guesses from the extension: ".m" is MATPOWER, anything else native.
CaseFormat case_format_for(const std::filesystem::path& path);

struct MatpowerOptions {
  /// Rating given to branches whose RATE_A is 0 (MATPOWER's "unlimited").
  double unlimited_rating_mw = 9900.0;
  /// Fold parallel in-service circuits between the same bus pair into one
  /// branch: ratings add, reactances combine in parallel.
  bool merge_parallel = false;
};

/// Native case text (JSON). Syntax errors carry line and column; schema
/// errors and duplicate ids name the offending element.
NetworkData parse_case_json(std::string_view text, const std::string& source = "<case>");
/// Native case text, one bus or branch per line.
std::string case_to_json(const NetworkData& data);

/// MATPOWER case function body: baseMVA, bus, gen and branch matrices.
/// Other assignments produce warnings in NetworkData::warnings. Branch ids
/// are "from-to", with "#k" appended to the k-th parallel circuit.
NetworkData parse_matpower(std::string_view text, const std::string& source = "<case>",
                           const MatpowerOptions& options = {});

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view text);

NetworkData load_case(const std::filesystem::path& path, CaseFormat format,
                      const MatpowerOptions& options = {});
void save_case(const std::filesystem::path& path, const NetworkData& data);

/// "branch_id,rating_mw" lines with a header row.
std::map<BranchId, double> parse_ratings_csv(std::string_view text,
                                             const std::string& source = "<overlay>");
/// Replaces ratings by id. Throws InputError for ids not in the case.
void apply_ratings_overlay(NetworkData& data, const std::map<BranchId, double>& ratings);

/// "branch_id,flow_mw" lines with a header row (from->to positive).
std::map<BranchId, double> parse_flows_csv(std::string_view text,
                                           const std::string& source = "<flows>");

/// Everything needed to turn files into a PowerNetwork.
struct CaseSpec {
  std::filesystem::path path;
  std::optional<CaseFormat> format;
  std::optional<std::filesystem::path> ratings_overlay;
  bool merge_parallel = false;
  std::optional<BusId> auto_slack;
  double unlimited_rating_mw = 9900.0;
};

PowerNetwork load_network(const CaseSpec& spec);

struct ScenarioEvent {
  enum class Type { outage, scale_injections, remedial };
  Type type = Type::outage;
  BranchId branch;              ///< outage
  double factor = 1.0;          ///< scale_injections
  std::vector<BranchId> cut;    ///< remedial
  double reduce_by_mw = 0.0;    ///< remedial
  std::string label;
};

struct Scenario {
  std::string name;
  CaseSpec case_spec;
  std::optional<std::uint64_t> seed;  ///< absent: deterministic ordering
  std::vector<ScenarioEvent> events;
};

/// Scenario JSON. Relative paths resolve against `base_dir`.
Scenario parse_scenario(std::string_view text, const std::filesystem::path& base_dir,
                        const std::string& source = "<scenario>");
Scenario load_scenario(const std::filesystem::path& path);

enum class ReportFormat { json, csv, table };
ReportFormat parse_report_format(std::string_view name);

struct Timings {
  double ups_s = 0.0;
  double sa_s = 0.0;
  double ft_s = 0.0;
  double total_s = 0.0;
  friend bool operator==(const Timings&, const Timings&) = default;
};

/// One line of an event report. `kind` is "special", "islanding" or "none".
struct ReportRow {
  std::string event;
  std::string kind;
  std::string asset;
  std::vector<std::string> kcrit;
  double margin_mw = 0.0;
  double tc_mw = 0.0;
  double flow_mw = 0.0;
  std::string status;
  std::optional<Timings> timings;
  friend bool operator==(const ReportRow&, const ReportRow&) = default;
};

/// Renders rows. Timings columns appear only when include_timings is set,
/// which keeps default output byte-stable across runs.
std::string write_report(const std::vector<ReportRow>& rows, ReportFormat format,
                         bool include_timings = false);
std::vector<ReportRow> parse_report_json(std::string_view text);

/// Shortest decimal text that reads back to the same double.
std::string format_number(double value);

}  // namespace gridcuts
