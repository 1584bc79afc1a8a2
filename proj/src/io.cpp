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

#include "gridcuts/io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <json.hpp>
#include <set>
#include <sstream>

namespace gridcuts {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

namespace {

std::pair<std::size_t, std::size_t> line_column(std::string_view text, std::size_t offset) {
  std::size_t line = 1, column = 1;
  for (std::size_t i = 0; i < offset && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  return {line, column};
}

json parse_json_text(std::string_view text, const std::string& source) {
  try {
    return json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    const std::size_t at = e.byte > 0 ? e.byte - 1 : 0;
    const auto [line, column] = line_column(text, at);
    std::string what = e.what();
    if (auto p = what.find("parse error"); p != std::string::npos) what = what.substr(p);
    throw ParseError(source, line, column, what);
  }
}

[[noreturn]] void schema_error(const std::string& source, const std::string& where,
                               const std::string& what) {
  throw ParseError(source, 0, 0, where + ": " + what);
}

const json& require(const json& obj, const char* key, const std::string& source,
                    const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end()) schema_error(source, where, std::string("missing \"") + key + "\"");
  return *it;
}

double number(const json& v, const std::string& source, const std::string& where) {
  if (!v.is_number()) schema_error(source, where, "expected a number");
  return v.get<double>();
}

std::int64_t integer(const json& v, const std::string& source, const std::string& where) {
  if (v.is_number_integer()) return v.get<std::int64_t>();
  if (v.is_number_float()) {
    const double d = v.get<double>();
    if (std::floor(d) == d && std::abs(d) < 9e15) return static_cast<std::int64_t>(d);
  }
  schema_error(source, where, "expected an integer");
}

std::string string_value(const json& v, const std::string& source, const std::string& where) {
  if (!v.is_string()) schema_error(source, where, "expected a string");
  return v.get<std::string>();
}

void warn_unknown(const json& obj, std::initializer_list<const char*> known,
                  const std::string& where, std::vector<std::string>& warnings) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (std::none_of(known.begin(), known.end(), [&](const char* k) { return it.key() == k; }))
      warnings.push_back(where + ": unknown field \"" + it.key() + "\" ignored");
  }
}

}  // namespace

CaseFormat parse_case_format(std::string_view name) {
  if (name == "native" || name == "json") return CaseFormat::native;
  if (name == "matpower" || name == "m") return CaseFormat::matpower;
  throw InputError("unknown case format \"" + std::string(name) + "\"");
}

CaseFormat case_format_for(const std::filesystem::path& path) {
  return path.extension() == ".m" ? CaseFormat::matpower : CaseFormat::native;
}

NetworkData parse_case_json(std::string_view text, const std::string& source) {
  const json doc = parse_json_text(text, source);
  if (!doc.is_object()) schema_error(source, "$", "expected an object");

  NetworkData data;
  warn_unknown(doc, {"format", "version", "name", "base_mva", "slack_bus", "buses", "branches"},
               "$", data.warnings);
  if (auto it = doc.find("format"); it != doc.end() && *it != "gridcuts-case")
    schema_error(source, "$.format", "expected \"gridcuts-case\"");
  if (auto it = doc.find("version"); it != doc.end() && integer(*it, source, "$.version") != 1)
    schema_error(source, "$.version", "unsupported version");
  if (auto it = doc.find("name"); it != doc.end()) data.name = string_value(*it, source, "$.name");
  if (auto it = doc.find("base_mva"); it != doc.end())
    data.base_mva = number(*it, source, "$.base_mva");
  if (auto it = doc.find("slack_bus"); it != doc.end() && !it->is_null())
    data.slack = BusId{integer(*it, source, "$.slack_bus")};

  const json& buses = require(doc, "buses", source, "$");
  if (!buses.is_array()) schema_error(source, "$.buses", "expected an array");
  std::set<std::int64_t> bus_ids;
  for (std::size_t i = 0; i < buses.size(); ++i) {
    const std::string where = "$.buses[" + std::to_string(i) + "]";
    const json& b = buses[i];
    if (!b.is_object()) schema_error(source, where, "expected an object");
    warn_unknown(b, {"id", "gen_mw", "load_mw"}, where, data.warnings);
    Bus bus;
    bus.id = BusId{integer(require(b, "id", source, where), source, where + ".id")};
    if (auto it = b.find("gen_mw"); it != b.end()) bus.gen_mw = number(*it, source, where + ".gen_mw");
    if (auto it = b.find("load_mw"); it != b.end())
      bus.load_mw = number(*it, source, where + ".load_mw");
    if (!bus_ids.insert(bus.id.value).second)
      schema_error(source, where + ".id", "duplicate bus id " + to_string(bus.id));
    data.buses.push_back(bus);
  }

  const json& branches = require(doc, "branches", source, "$");
  if (!branches.is_array()) schema_error(source, "$.branches", "expected an array");
  std::set<std::string> branch_ids;
  for (std::size_t i = 0; i < branches.size(); ++i) {
    const std::string where = "$.branches[" + std::to_string(i) + "]";
    const json& b = branches[i];
    if (!b.is_object()) schema_error(source, where, "expected an object");
    warn_unknown(b, {"id", "from", "to", "rating_mw", "reactance_pu", "status"}, where,
                 data.warnings);
    Branch br;
    br.id = BranchId{string_value(require(b, "id", source, where), source, where + ".id")};
    br.from = BusId{integer(require(b, "from", source, where), source, where + ".from")};
    br.to = BusId{integer(require(b, "to", source, where), source, where + ".to")};
    br.rating_mw = number(require(b, "rating_mw", source, where), source, where + ".rating_mw");
    if (auto it = b.find("reactance_pu"); it != b.end() && !it->is_null())
      br.reactance_pu = number(*it, source, where + ".reactance_pu");
    if (auto it = b.find("status"); it != b.end()) {
      const std::int64_t s = integer(*it, source, where + ".status");
      if (s != 0 && s != 1) schema_error(source, where + ".status", "expected 0 or 1");
      br.in_service = s == 1;
    }
    if (!branch_ids.insert(br.id.value).second)
      schema_error(source, where + ".id", "duplicate branch id " + br.id.value);
    data.branches.push_back(std::move(br));
  }
  return data;
}

std::string case_to_json(const NetworkData& data) {
  std::string out = "{\n";
  out += "  \"format\": \"gridcuts-case\",\n  \"version\": 1,\n";
  out += "  \"name\": " + json(data.name).dump() + ",\n";
  out += "  \"base_mva\": " + json(data.base_mva).dump() + ",\n";
  if (data.slack) out += "  \"slack_bus\": " + std::to_string(data.slack->value) + ",\n";
  out += "  \"buses\": [";
  for (std::size_t i = 0; i < data.buses.size(); ++i) {
    const Bus& b = data.buses[i];
    ordered_json j;
    j["id"] = b.id.value;
    j["gen_mw"] = b.gen_mw;
    j["load_mw"] = b.load_mw;
    out += (i ? ",\n    " : "\n    ") + j.dump();
  }
  out += data.buses.empty() ? "],\n" : "\n  ],\n";
  out += "  \"branches\": [";
  for (std::size_t i = 0; i < data.branches.size(); ++i) {
    const Branch& b = data.branches[i];
    ordered_json j;
    j["id"] = b.id.value;
    j["from"] = b.from.value;
    j["to"] = b.to.value;
    j["rating_mw"] = b.rating_mw;
    if (b.reactance_pu) j["reactance_pu"] = *b.reactance_pu;
    j["status"] = b.in_service ? 1 : 0;
    out += (i ? ",\n    " : "\n    ") + j.dump();
  }
  out += data.branches.empty() ? "]\n}\n" : "\n  ]\n}\n";
  return out;
}

namespace {

/// Character cursor over MATPOWER text with 1-based line/column tracking.
class MatpowerLexer {
 public:
  MatpowerLexer(std::string_view text, const std::string& source) : text_(text), source_(source) {}

  bool done() const { return pos_ >= text_.size(); }
  char peek() const { return done() ? '\0' : text_[pos_]; }
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

  void advance() {
    if (done()) return;
    if (text_[pos_] == '\n') {
      ++line_;
      column_ = 1;
    } else {
      ++column_;
    }
    ++pos_;
  }

  void skip_comment() {
    while (!done() && peek() != '\n') advance();
  }

  /// Skips blanks, comments and (optionally) newlines.
  void skip_space(bool newlines) {
    for (;;) {
      const char c = peek();
      if (c == '%' || c == '#') {
        skip_comment();
      } else if (c == ' ' || c == '\t' || c == '\r' || (newlines && c == '\n')) {
        advance();
      } else if (c == '.' && text_.substr(pos_, 3) == "...") {
        skip_comment();
        advance();
      } else {
        return;
      }
    }
  }

  std::string word() {
    std::string w;
    while (!done() && (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_' ||
                       peek() == '.'))
      w += text_[pos_], advance();
    return w;
  }

  double number() {
    const std::size_t l = line_, c = column_;
    std::string tok;
    while (!done() && (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '.' ||
                       peek() == '+' || peek() == '-'))
      tok += text_[pos_], advance();
    if (tok == "Inf" || tok == "inf" || tok == "+Inf") return HUGE_VAL;
    if (tok == "-Inf" || tok == "-inf") return -HUGE_VAL;
    double v = 0.0;
    const char* first = tok.data();
    if (!tok.empty() && tok[0] == '+') ++first;
    auto [end, ec] = std::from_chars(first, tok.data() + tok.size(), v);
    if (tok.empty() || ec != std::errc{} || end != tok.data() + tok.size())
      throw ParseError(source_, l, c, "expected a number, found \"" + tok + "\"");
    return v;
  }

  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError(source_, line_, column_, what);
  }

 private:
  std::string_view text_;
  const std::string& source_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t column_ = 1;
};

struct MatrixRow {
  std::vector<double> values;
  std::size_t line = 0;
};

std::vector<MatrixRow> read_matrix(MatpowerLexer& lex) {
  std::vector<MatrixRow> rows;
  MatrixRow row;
  auto finish = [&] {
    if (!row.values.empty()) rows.push_back(std::move(row));
    row = {};
  };
  lex.advance();  // '['
  for (;;) {
    lex.skip_space(false);
    const char c = lex.peek();
    if (lex.done()) lex.fail("unterminated matrix");
    if (c == ']') {
      lex.advance();
      finish();
      return rows;
    }
    if (c == ';' || c == '\n') {
      lex.advance();
      finish();
      continue;
    }
    if (c == ',') {
      lex.advance();
      continue;
    }
    if (row.values.empty()) row.line = lex.line();
    row.values.push_back(lex.number());
  }
}

void skip_balanced(MatpowerLexer& lex, char open, char close) {
  int depth = 0;
  do {
    if (lex.done()) lex.fail(std::string("unterminated '") + open + "'");
    if (lex.peek() == '\'') {
      lex.advance();
      while (!lex.done() && lex.peek() != '\'') lex.advance();
    } else if (lex.peek() == '%') {
      lex.skip_comment();
      continue;
    } else if (lex.peek() == open) {
      ++depth;
    } else if (lex.peek() == close) {
      --depth;
    }
    lex.advance();
  } while (depth > 0);
}

std::string pair_key(std::int64_t a, std::int64_t b) {
  return std::to_string(a) + "-" + std::to_string(b);
}

}  // namespace

NetworkData parse_matpower(std::string_view text, const std::string& source,
                           const MatpowerOptions& options) {
  MatpowerLexer lex(text, source);
  NetworkData data;
  std::optional<std::vector<MatrixRow>> bus_rows, gen_rows, branch_rows;

  for (;;) {
    lex.skip_space(true);
    if (lex.done()) break;
    if (lex.peek() == ';') {
      lex.advance();
      continue;
    }
    const std::size_t stmt_line = lex.line(), stmt_col = lex.column();
    const std::string lhs = lex.word();
    if (lhs.empty()) lex.fail(std::string("unexpected character '") + lex.peek() + "'");
    if (lhs == "function") {
      lex.skip_space(false);
      const std::string ret = lex.word();
      lex.skip_space(false);
      if (lex.peek() == '=') {
        lex.advance();
        lex.skip_space(false);
        data.name = lex.word();
      } else {
        data.name = ret;
      }
      continue;
    }
    lex.skip_space(false);
    if (lex.peek() != '=')
      throw ParseError(source, stmt_line, stmt_col, "expected an assignment after \"" + lhs + "\"");
    lex.advance();
    lex.skip_space(true);

    const auto dot = lhs.find('.');
    const std::string field = dot == std::string::npos ? lhs : lhs.substr(dot + 1);
    const char c = lex.peek();
    if (c == '[') {
      std::vector<MatrixRow> rows = read_matrix(lex);
      if (field == "bus") bus_rows = std::move(rows);
      else if (field == "gen") gen_rows = std::move(rows);
      else if (field == "branch") branch_rows = std::move(rows);
      else data.warnings.push_back("matpower: ignored unsupported field " + lhs);
    } else if (c == '{') {
      skip_balanced(lex, '{', '}');
      data.warnings.push_back("matpower: ignored unsupported field " + lhs);
    } else if (c == '\'') {
      lex.advance();
      std::string value;
      while (!lex.done() && lex.peek() != '\'') value += lex.peek(), lex.advance();
      if (lex.done()) lex.fail("unterminated string");
      lex.advance();
      if (field == "version") {
        if (value != "2") data.warnings.push_back("matpower: case version " + value + " assumed compatible with version 2");
      } else {
        data.warnings.push_back("matpower: ignored unsupported field " + lhs);
      }
    } else {
      const double value = lex.number();
      if (field == "baseMVA") data.base_mva = value;
      else data.warnings.push_back("matpower: ignored unsupported field " + lhs);
    }
    lex.skip_space(false);
    if (lex.peek() == ';') lex.advance();
  }

  if (!bus_rows) throw ParseError(source, 0, 0, "matpower: missing bus matrix");
  if (!branch_rows) throw ParseError(source, 0, 0, "matpower: missing branch matrix");

  std::map<std::int64_t, std::size_t> bus_at;
  for (const MatrixRow& r : *bus_rows) {
    if (r.values.size() < 3) throw ParseError(source, r.line, 1, "bus row needs at least 3 columns");
    const auto id = static_cast<std::int64_t>(r.values[0]);
    if (r.values.size() > 1 && r.values[1] == 4) {
      data.warnings.push_back("matpower: isolated bus " + std::to_string(id) + " skipped");
      continue;
    }
    if (!bus_at.emplace(id, data.buses.size()).second)
      throw ParseError(source, r.line, 1, "duplicate bus id " + std::to_string(id));
    if (r.values[1] == 3 && !data.slack) data.slack = BusId{id};
    Bus bus;
    bus.id = BusId{id};
    if (r.values[2] >= 0) {
      bus.load_mw = r.values[2];
    } else {
      bus.gen_mw = -r.values[2];
      data.warnings.push_back("matpower: negative demand at bus " + std::to_string(id) +
                              " treated as generation");
    }
    data.buses.push_back(bus);
  }

  if (gen_rows) {
    for (const MatrixRow& r : *gen_rows) {
      if (r.values.size() < 2) throw ParseError(source, r.line, 1, "gen row needs at least 2 columns");
      const auto id = static_cast<std::int64_t>(r.values[0]);
      if (r.values.size() > 7 && r.values[7] <= 0) continue;
      auto it = bus_at.find(id);
      if (it == bus_at.end())
        throw ParseError(source, r.line, 1, "generator at unknown bus " + std::to_string(id));
      Bus& bus = data.buses[it->second];
      if (r.values[1] >= 0) {
        bus.gen_mw += r.values[1];
      } else {
        bus.load_mw -= r.values[1];
        data.warnings.push_back("matpower: negative output at bus " + std::to_string(id) +
                                " treated as demand");
      }
    }
  }

  std::size_t unlimited = 0;
  std::map<std::string, int> circuits;
  for (const MatrixRow& r : *branch_rows) {
    if (r.values.size() < 6)
      throw ParseError(source, r.line, 1, "branch row needs at least 6 columns");
    Branch br;
    br.from = BusId{static_cast<std::int64_t>(r.values[0])};
    br.to = BusId{static_cast<std::int64_t>(r.values[1])};
    if (r.values[3] > 0) {
      br.reactance_pu = r.values[3];
    } else {
      data.warnings.push_back("matpower: branch " + pair_key(br.from.value, br.to.value) +
                              " has non-positive reactance; DC oracle unavailable for it");
    }
    br.rating_mw = r.values[5];
    if (br.rating_mw == 0) {
      br.rating_mw = options.unlimited_rating_mw;
      ++unlimited;
    }
    br.in_service = r.values.size() <= 10 || r.values[10] > 0;
    const std::string key = pair_key(br.from.value, br.to.value);
    const int k = ++circuits[key];
    br.id = BranchId{k == 1 ? key : key + "#" + std::to_string(k)};
    data.branches.push_back(std::move(br));
  }
  if (unlimited > 0)
    data.warnings.push_back("matpower: " + std::to_string(unlimited) +
                            " branches with RATE_A = 0 given rating " +
                            format_number(options.unlimited_rating_mw) + " MW");

  if (options.merge_parallel) {
    std::map<std::pair<std::int64_t, std::int64_t>, std::size_t> first;
    std::vector<Branch> merged;
    std::vector<int> count;
    for (Branch& br : data.branches) {
      if (!br.in_service) {
        merged.push_back(std::move(br));
        count.push_back(1);
        continue;
      }
      const auto key = std::minmax(br.from.value, br.to.value);
      auto [it, fresh] = first.emplace(key, merged.size());
      if (fresh) {
        merged.push_back(std::move(br));
        count.push_back(1);
        continue;
      }
      Branch& into = merged[it->second];
      into.rating_mw += br.rating_mw;
      if (into.reactance_pu && br.reactance_pu)
        into.reactance_pu = *into.reactance_pu * *br.reactance_pu / (*into.reactance_pu + *br.reactance_pu);
      else
        into.reactance_pu.reset();
      ++count[it->second];
    }
    for (std::size_t i = 0; i < merged.size(); ++i)
      if (count[i] > 1)
        data.warnings.push_back("matpower: merged " + std::to_string(count[i]) +
                                " parallel circuits into branch " + merged[i].id.value);
    data.branches = std::move(merged);
  }
  return data;
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write " + path.string());
  out << text;
  if (!out) throw InputError("failed writing " + path.string());
}

NetworkData load_case(const std::filesystem::path& path, CaseFormat format,
                      const MatpowerOptions& options) {
  const std::string text = read_text_file(path);
  NetworkData data = format == CaseFormat::native ? parse_case_json(text, path.string())
                                                  : parse_matpower(text, path.string(), options);
  if (data.name.empty()) data.name = path.stem().string();
  return data;
}

void save_case(const std::filesystem::path& path, const NetworkData& data) {
  write_text_file(path, case_to_json(data));
}

namespace {

std::vector<std::string> split_csv_line(std::string_view line) {
  std::vector<std::string> cells;
  std::string cell;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cell += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cell += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      cells.push_back(cell);
      cell.clear();
    } else if (c != '\r') {
      cell += c;
    }
  }
  cells.push_back(cell);
  for (std::string& s : cells) {
    const auto b = s.find_first_not_of(" \t");
    const auto e = s.find_last_not_of(" \t");
    s = b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
  }
  return cells;
}

std::map<BranchId, double> parse_branch_value_csv(std::string_view text, const std::string& source,
                                                  const char* value_column) {
  std::map<BranchId, double> out;
  std::size_t line_no = 0;
  bool header = false;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    const std::string_view line = text.substr(start, end - start);
    start = end + 1;
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string_view::npos || line.front() == '#') {
      if (end == text.size()) break;
      continue;
    }
    const std::vector<std::string> cells = split_csv_line(line);
    if (!header) {
      if (cells.size() != 2 || cells[0] != "branch_id" || cells[1] != value_column)
        throw ParseError(source, line_no, 1,
                         std::string("expected header \"branch_id,") + value_column + "\"");
      header = true;
      continue;
    }
    if (cells.size() != 2) throw ParseError(source, line_no, 1, "expected 2 columns");
    double v = 0.0;
    const std::string& s = cells[1];
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc{} || p != s.data() + s.size())
      throw ParseError(source, line_no, cells[0].size() + 2, "expected a number, found \"" + s + "\"");
    if (!out.emplace(BranchId{cells[0]}, v).second)
      throw ParseError(source, line_no, 1, "duplicate branch id " + cells[0]);
    if (end == text.size()) break;
  }
  if (!header) throw ParseError(source, 1, 1, "empty file");
  return out;
}

}  // namespace

std::map<BranchId, double> parse_ratings_csv(std::string_view text, const std::string& source) {
  return parse_branch_value_csv(text, source, "rating_mw");
}

std::map<BranchId, double> parse_flows_csv(std::string_view text, const std::string& source) {
  return parse_branch_value_csv(text, source, "flow_mw");
}

void apply_ratings_overlay(NetworkData& data, const std::map<BranchId, double>& ratings) {
  std::map<BranchId, Branch*> by_id;
  for (Branch& b : data.branches) by_id.emplace(b.id, &b);
  for (const auto& [id, mw] : ratings) {
    auto it = by_id.find(id);
    if (it == by_id.end()) throw InputError("ratings overlay names unknown branch " + id.value);
    it->second->rating_mw = mw;
  }
}

PowerNetwork load_network(const CaseSpec& spec) {
  MatpowerOptions mp;
  mp.merge_parallel = spec.merge_parallel;
  mp.unlimited_rating_mw = spec.unlimited_rating_mw;
  NetworkData data = load_case(spec.path, spec.format.value_or(case_format_for(spec.path)), mp);
  if (spec.ratings_overlay) {
    const std::string text = read_text_file(*spec.ratings_overlay);
    apply_ratings_overlay(data, parse_ratings_csv(text, spec.ratings_overlay->string()));
  }
  BuildOptions options;
  options.auto_slack = spec.auto_slack;
  return PowerNetwork::build(std::move(data), options);
}

Scenario parse_scenario(std::string_view text, const std::filesystem::path& base_dir,
                        const std::string& source) {
  const json doc = parse_json_text(text, source);
  if (!doc.is_object()) schema_error(source, "$", "expected an object");
  if (auto it = doc.find("format"); it != doc.end() && *it != "gridcuts-scenario")
    schema_error(source, "$.format", "expected \"gridcuts-scenario\"");

  Scenario sc;
  auto resolve = [&](const std::string& p) {
    const std::filesystem::path path(p);
    return path.is_absolute() ? path : (base_dir / path).lexically_normal();
  };
  if (auto it = doc.find("name"); it != doc.end()) sc.name = string_value(*it, source, "$.name");
  sc.case_spec.path = resolve(string_value(require(doc, "case", source, "$"), source, "$.case"));
  if (auto it = doc.find("case_format"); it != doc.end()) {
    try {
      sc.case_spec.format = parse_case_format(string_value(*it, source, "$.case_format"));
    } catch (const InputError& e) {
      schema_error(source, "$.case_format", e.what());
    }
  }
  if (auto it = doc.find("ratings_overlay"); it != doc.end() && !it->is_null())
    sc.case_spec.ratings_overlay = resolve(string_value(*it, source, "$.ratings_overlay"));
  if (auto it = doc.find("merge_parallel"); it != doc.end()) {
    if (!it->is_boolean()) schema_error(source, "$.merge_parallel", "expected a boolean");
    sc.case_spec.merge_parallel = it->get<bool>();
  }
  if (auto it = doc.find("auto_slack"); it != doc.end() && !it->is_null())
    sc.case_spec.auto_slack = BusId{integer(*it, source, "$.auto_slack")};
  if (auto it = doc.find("seed"); it != doc.end() && !it->is_null()) {
    const std::int64_t seed = integer(*it, source, "$.seed");
    if (seed < 0) schema_error(source, "$.seed", "expected a non-negative integer");
    sc.seed = static_cast<std::uint64_t>(seed);
  }

  const json& events = require(doc, "events", source, "$");
  if (!events.is_array()) schema_error(source, "$.events", "expected an array");
  for (std::size_t i = 0; i < events.size(); ++i) {
    const std::string where = "$.events[" + std::to_string(i) + "]";
    const json& e = events[i];
    if (!e.is_object()) schema_error(source, where, "expected an object");
    ScenarioEvent ev;
    const std::string type = string_value(require(e, "type", source, where), source, where + ".type");
    if (auto it = e.find("label"); it != e.end()) ev.label = string_value(*it, source, where + ".label");
    if (type == "outage") {
      ev.type = ScenarioEvent::Type::outage;
      ev.branch = BranchId{string_value(require(e, "branch", source, where), source, where + ".branch")};
    } else if (type == "scale_injections") {
      ev.type = ScenarioEvent::Type::scale_injections;
      ev.factor = number(require(e, "factor", source, where), source, where + ".factor");
    } else if (type == "remedial") {
      ev.type = ScenarioEvent::Type::remedial;
      const json& cut = require(e, "cut", source, where);
      if (!cut.is_array()) schema_error(source, where + ".cut", "expected an array");
      for (std::size_t k = 0; k < cut.size(); ++k)
        ev.cut.push_back(BranchId{string_value(cut[k], source, where + ".cut[" + std::to_string(k) + "]")});
      ev.reduce_by_mw = number(require(e, "reduce_by_mw", source, where), source, where + ".reduce_by_mw");
    } else {
      schema_error(source, where + ".type", "unknown event type \"" + type + "\"");
    }
    sc.events.push_back(std::move(ev));
  }
  return sc;
}

Scenario load_scenario(const std::filesystem::path& path) {
  Scenario sc = parse_scenario(read_text_file(path), path.parent_path(), path.string());
  if (sc.name.empty()) sc.name = path.stem().string();
  return sc;
}

ReportFormat parse_report_format(std::string_view name) {
  if (name == "json") return ReportFormat::json;
  if (name == "csv") return ReportFormat::csv;
  if (name == "table") return ReportFormat::table;
  throw InputError("unknown report format \"" + std::string(name) + "\"");
}

std::string format_number(double value) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value);
  if (ec != std::errc{}) throw InternalError("number formatting failed");
  return std::string(buf, end);
}

namespace {

std::string fixed2(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  std::string s(buf);
  if (s == "-0.00") s = "0.00";
  return s;
}

std::string csv_cell(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) out += c == '"' ? std::string("\"\"") : std::string(1, c);
  return out + "\"";
}

std::string join(const std::vector<std::string>& parts, const char* sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) out += (i ? sep : "") + parts[i];
  return out;
}

}  // namespace

std::string write_report(const std::vector<ReportRow>& rows, ReportFormat format,
                         bool include_timings) {
  switch (format) {
    case ReportFormat::json: {
      ordered_json doc;
      doc["format"] = "gridcuts-report";
      doc["version"] = 1;
      doc["rows"] = ordered_json::array();
      for (const ReportRow& r : rows) {
        ordered_json j;
        j["event"] = r.event;
        j["kind"] = r.kind;
        j["asset"] = r.asset;
        j["kcrit"] = r.kcrit;
        j["margin_mw"] = r.margin_mw;
        j["tc_mw"] = r.tc_mw;
        j["flow_mw"] = r.flow_mw;
        j["status"] = r.status;
        if (include_timings && r.timings) {
          j["timings"] = {{"ups_s", r.timings->ups_s},
                          {"sa_s", r.timings->sa_s},
                          {"ft_s", r.timings->ft_s},
                          {"total_s", r.timings->total_s}};
        }
        doc["rows"].push_back(std::move(j));
      }
      return doc.dump(2) + "\n";
    }
    case ReportFormat::csv: {
      std::string out = "event,kind,asset,kcrit,margin_mw,tc_mw,flow_mw,status";
      if (include_timings) out += ",ups_s,sa_s,ft_s,total_s";
      out += "\n";
      for (const ReportRow& r : rows) {
        out += csv_cell(r.event) + "," + r.kind + "," + csv_cell(r.asset) + "," +
               csv_cell(join(r.kcrit, " ")) + "," + format_number(r.margin_mw) + "," +
               format_number(r.tc_mw) + "," + format_number(r.flow_mw) + "," + r.status;
        if (include_timings) {
          const Timings t = r.timings.value_or(Timings{});
          out += "," + format_number(t.ups_s) + "," + format_number(t.sa_s) + "," +
                 format_number(t.ft_s) + "," + format_number(t.total_s);
        }
        out += "\n";
      }
      return out;
    }
    case ReportFormat::table: {
      std::vector<std::vector<std::string>> cells;
      std::vector<std::string> head{"Event", "Kind", "Asset", "Limiting critical cut-set",
                                    "Margin (MW)", "Status"};
      if (include_timings) {
        for (const char* h : {"UPS (s)", "SA (s)", "FT (s)", "Total (s)"}) head.emplace_back(h);
      }
      cells.push_back(head);
      for (const ReportRow& r : rows) {
        const bool empty = r.kind == "none";
        std::vector<std::string> line{r.event, r.kind, empty ? "-" : r.asset,
                                      empty ? "-" : "{" + join(r.kcrit, ", ") + "}",
                                      empty ? "-" : fixed2(r.margin_mw), r.status};
        if (include_timings) {
          const Timings t = r.timings.value_or(Timings{});
          for (double v : {t.ups_s, t.sa_s, t.ft_s, t.total_s}) {
            char buf[32];
            std::snprintf(buf, sizeof buf, "%.4f", v);
            line.emplace_back(buf);
          }
        }
        cells.push_back(std::move(line));
      }
      std::vector<std::size_t> width(head.size(), 0);
      for (const auto& line : cells)
        for (std::size_t c = 0; c < line.size(); ++c) width[c] = std::max(width[c], line[c].size());
      std::string out;
      for (std::size_t i = 0; i < cells.size(); ++i) {
        std::string text;
        for (std::size_t c = 0; c < cells[i].size(); ++c) {
          if (c) text += "  ";
          text += cells[i][c] + std::string(width[c] - cells[i][c].size(), ' ');
        }
        text.erase(text.find_last_not_of(' ') + 1);
        out += text + "\n";
        if (i == 0) {
          std::size_t total = 0;
          for (std::size_t w : width) total += w;
          out += std::string(total + 2 * (width.size() - 1), '-') + "\n";
        }
      }
      return out;
    }
  }
  throw InternalError("unknown report format");
}

std::vector<ReportRow> parse_report_json(std::string_view text) {
  const json doc = parse_json_text(text, "<report>");
  std::vector<ReportRow> rows;
  for (const json& j : doc.at("rows")) {
    ReportRow r;
    r.event = j.at("event").get<std::string>();
    r.kind = j.at("kind").get<std::string>();
    r.asset = j.at("asset").get<std::string>();
    r.kcrit = j.at("kcrit").get<std::vector<std::string>>();
    r.margin_mw = j.at("margin_mw").get<double>();
    r.tc_mw = j.at("tc_mw").get<double>();
    r.flow_mw = j.at("flow_mw").get<double>();
    r.status = j.at("status").get<std::string>();
    if (auto it = j.find("timings"); it != j.end()) {
      r.timings = Timings{it->at("ups_s").get<double>(), it->at("sa_s").get<double>(),
                          it->at("ft_s").get<double>(), it->at("total_s").get<double>()};
    }
    rows.push_back(std::move(r));
  }
  return rows;
}

}  // namespace gridcuts
