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


#ifndef INFOGATHER_METRICS_H_
#define INFOGATHER_METRICS_H_

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace infogather {

using Cell = std::variant<int64_t, double, std::string>;

std::string FormatCell(const Cell& cell);

struct RunInfo {
  std::string command;
  uint64_t seed = 0;
  uint64_t config_hash = 0;
};

class MetricsTable {
 public:
  MetricsTable() = default;
  explicit MetricsTable(std::vector<std::string> columns);

  // Throws std::invalid_argument when the row width differs.
  void AddRow(std::vector<Cell> row);
  void Append(const MetricsTable& other);

  const std::vector<std::string>& columns() const { return columns_; }
  const std::vector<std::vector<Cell>>& rows() const { return rows_; }
  int ColumnIndex(std::string_view name) const;  // -1 when absent
  double Number(int row, std::string_view column) const;

  // "# key: value" lines, a header row and %.9g floats.
  std::string ToCsv(const RunInfo& info) const;
  // Full precision; `summary` becomes the "summary" object.
  std::string ToJson(const RunInfo& info,
                     const std::vector<std::pair<std::string, Cell>>& summary)
      const;

  static MetricsTable FromCsv(std::string_view text);
  static MetricsTable FromJson(std::string_view text);

 private:
  std::vector<std::string> columns_;
  std::vector<std::vector<Cell>> rows_;
};

// Writes `path` as CSV, plus `<stem>.summary.json` next to it when the path
// ends in ".csv". An empty path prints the CSV to stdout.
void WriteResults(const std::string& path, const MetricsTable& table,
                  const RunInfo& info,
                  const std::vector<std::pair<std::string, Cell>>& summary);

}  // namespace infogather

#endif  // INFOGATHER_METRICS_H_
