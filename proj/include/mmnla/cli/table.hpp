// Copyright 2026 The mmnla Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Result tables and their CSV / JSON-lines renderings. Floats are printed
// with 17 significant digits so identical runs give identical bytes.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <ostream>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "mmnla/cli/config.hpp"
#include "mmnla/errors.hpp"

namespace mmnla::cli {

using Cell = std::variant<double, std::int64_t, bool, std::string>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  void add(std::vector<Cell> row) {
    if (row.size() != columns.size()) throw std::logic_error("row width does not match the header");
    rows.push_back(std::move(row));
  }
};

inline std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

inline std::string csv_cell(const Cell& c) {
  struct {
    std::string operator()(double x) const { return format_double(x); }
    std::string operator()(std::int64_t x) const { return std::to_string(x); }
    std::string operator()(bool x) const { return x ? "true" : "false"; }
    std::string operator()(const std::string& s) const {
      if (s.find_first_of(",\"\n") == std::string::npos) return s;
      std::string q = "\"";
      for (char ch : s) q += ch == '"' ? std::string("\"\"") : std::string(1, ch);
      return q + "\"";
    }
  } visit;
  return std::visit(visit, c);
}

inline void write_csv(std::ostream& out, const Table& t) {
  for (std::size_t i = 0; i < t.columns.size(); ++i) out << (i ? "," : "") << t.columns[i];
  out << '\n';
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << csv_cell(row[i]);
    out << '\n';
  }
}

// JSON numbers are written by hand in the same 17-digit form as the CSV;
// non-finite values become null.
inline std::string json_cell(const Cell& c) {
  struct {
    std::string operator()(double x) const { return std::isfinite(x) ? format_double(x) : "null"; }
    std::string operator()(std::int64_t x) const { return std::to_string(x); }
    std::string operator()(bool x) const { return x ? "true" : "false"; }
    std::string operator()(const std::string& s) const { return nlohmann::json(s).dump(); }
  } visit;
  return std::visit(visit, c);
}

inline void write_jsonl(std::ostream& out, const Table& t) {
  for (const auto& row : t.rows) {
    out << '{';
    for (std::size_t i = 0; i < row.size(); ++i) {
      out << (i ? "," : "") << nlohmann::json(t.columns[i]).dump() << ':' << json_cell(row[i]);
    }
    out << "}\n";
  }
}

inline void write_table(std::ostream& out, const Table& t, Format format) {
  if (format == Format::Csv) {
    write_csv(out, t);
  } else {
    write_jsonl(out, t);
  }
}

}  // namespace mmnla::cli
