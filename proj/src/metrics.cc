// Copyright 2026 The Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include "infogather/metrics.h"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace infogather {
namespace {

using nlohmann::json;

std::string FormatDouble(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

std::string QuoteCsv(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::vector<std::string> SplitCsvLine(std::string_view line) {
  std::vector<std::string> fields(1);
  bool quoted = false;
  for (size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        fields.back() += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        fields.back() += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.emplace_back();
    } else {
      fields.back() += c;
    }
  }
  return fields;
}

Cell ParseCell(const std::string& s) {
  int64_t i = 0;
  const char* end = s.data() + s.size();
  auto [p, ec] = std::from_chars(s.data(), end, i);
  if (ec == std::errc() && p == end && !s.empty()) return i;
  if (s == "nan") return std::nan("");
  if (s == "inf") return HUGE_VAL;
  if (s == "-inf") return -HUGE_VAL;
  double d = 0.0;
  auto [q, ec2] = std::from_chars(s.data(), end, d);
  if (ec2 == std::errc() && q == end && !s.empty()) return d;
  return s;
}

json CellJson(const Cell& c) {
  if (const auto* i = std::get_if<int64_t>(&c)) return *i;
  if (const auto* s = std::get_if<std::string>(&c)) return *s;
  const double d = std::get<double>(c);
  if (std::isfinite(d)) return d;
  return FormatDouble(d);
}

Cell JsonCell(const json& j) {
  if (j.is_number_integer()) return j.get<int64_t>();
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    if (s == "nan") return std::nan("");
    if (s == "inf") return HUGE_VAL;
    if (s == "-inf") return -HUGE_VAL;
    return s;
  }
  throw std::invalid_argument("unsupported JSON cell");
}

}  // namespace

std::string FormatCell(const Cell& cell) {
  if (const auto* i = std::get_if<int64_t>(&cell)) return std::to_string(*i);
  if (const auto* d = std::get_if<double>(&cell)) return FormatDouble(*d);
  return std::get<std::string>(cell);
}

MetricsTable::MetricsTable(std::vector<std::string> columns)
    : columns_(std::move(columns)) {}

void MetricsTable::AddRow(std::vector<Cell> row) {
  if (row.size() != columns_.size()) {
    throw std::invalid_argument("row width does not match the columns");
  }
  rows_.push_back(std::move(row));
}

void MetricsTable::Append(const MetricsTable& other) {
  if (columns_.empty() && rows_.empty()) columns_ = other.columns_;
  if (other.columns_ != columns_) {
    throw std::invalid_argument("appending a table with different columns");
  }
  rows_.insert(rows_.end(), other.rows_.begin(), other.rows_.end());
}

int MetricsTable::ColumnIndex(std::string_view name) const {
  for (size_t i = 0; i < columns_.size(); ++i) {
    if (columns_[i] == name) return static_cast<int>(i);
  }
  return -1;
}

double MetricsTable::Number(int row, std::string_view column) const {
  const int c = ColumnIndex(column);
  if (c < 0) throw std::out_of_range("no column " + std::string(column));
  const Cell& cell = rows_.at(row)[c];
  if (const auto* i = std::get_if<int64_t>(&cell)) return static_cast<double>(*i);
  if (const auto* d = std::get_if<double>(&cell)) return *d;
  throw std::invalid_argument("column " + std::string(column) + " is text");
}

std::string MetricsTable::ToCsv(const RunInfo& info) const {
  std::ostringstream out;
  out << "# command: " << info.command << "\n";
  out << "# seed: " << info.seed << "\n";
  out << "# config_hash: " << info.config_hash << "\n";
  for (size_t i = 0; i < columns_.size(); ++i) {
    out << (i ? "," : "") << QuoteCsv(columns_[i]);
  }
  out << "\n";
  for (const auto& row : rows_) {
    for (size_t i = 0; i < row.size(); ++i) {
      out << (i ? "," : "") << QuoteCsv(FormatCell(row[i]));
    }
    out << "\n";
  }
  return out.str();
}

std::string MetricsTable::ToJson(
    const RunInfo& info,
    const std::vector<std::pair<std::string, Cell>>& summary) const {
  json j;
  j["command"] = info.command;
  j["seed"] = info.seed;
  j["config_hash"] = info.config_hash;
  j["columns"] = columns_;
  json rows = json::array();
  for (const auto& row : rows_) {
    json r = json::array();
    for (const Cell& c : row) r.push_back(CellJson(c));
    rows.push_back(std::move(r));
  }
  j["rows"] = std::move(rows);
  json s = json::object();
  for (const auto& [key, value] : summary) s[key] = CellJson(value);
  j["summary"] = std::move(s);
  // nlohmann prints doubles with max_digits10, so values reload exactly.
  return j.dump(2) + "\n";
}

MetricsTable MetricsTable::FromCsv(std::string_view text) {
  MetricsTable table;
  bool have_header = false;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> fields = SplitCsvLine(line);
    if (!have_header) {
      table.columns_ = std::move(fields);
      have_header = true;
      continue;
    }
    std::vector<Cell> row;
    row.reserve(fields.size());
    for (const std::string& f : fields) row.push_back(ParseCell(f));
    table.AddRow(std::move(row));
  }
  return table;
}

MetricsTable MetricsTable::FromJson(std::string_view text) {
  const json j = json::parse(text);
  MetricsTable table(j.at("columns").get<std::vector<std::string>>());
  for (const json& r : j.at("rows")) {
    std::vector<Cell> row;
    for (const json& c : r) row.push_back(JsonCell(c));
    table.AddRow(std::move(row));
  }
  return table;
}

void WriteResults(const std::string& path, const MetricsTable& table,
                  const RunInfo& info,
                  const std::vector<std::pair<std::string, Cell>>& summary) {
  const std::string csv = table.ToCsv(info);
  if (path.empty()) {
    std::cout << csv;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << csv;
  if (path.size() > 4 && path.ends_with(".csv")) {
    const std::string json_path =
        path.substr(0, path.size() - 4) + ".summary.json";
    std::ofstream js(json_path, std::ios::binary);
    if (!js) throw std::runtime_error("cannot write " + json_path);
    js << table.ToJson(info, summary);
  }
}

}  // namespace infogather
