// Copyright 2026 The Quadlab Authors
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

#include "quadlab/csv.h"

#include <stdexcept>

namespace quadlab {
namespace {

std::vector<std::string> SplitLine(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    fields.push_back(line.substr(start, comma - start));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return fields;
}

}  // namespace

CsvWriter::CsvWriter(const std::filesystem::path& path,
                     const std::vector<std::string>& header)
    : out_(path), width_(header.size()) {
  if (!out_) throw std::runtime_error("cannot write " + path.string());
  Row(header);
}

void CsvWriter::Row(const std::vector<std::string>& fields) {
  if (fields.size() != width_) {
    throw std::invalid_argument("CSV row width mismatch");
  }
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (fields[i].find_first_of(",\n") != std::string::npos) {
      throw std::invalid_argument("CSV field contains a separator: " +
                                  fields[i]);
    }
    if (i) out_ << ',';
    out_ << fields[i];
  }
  out_ << '\n';
}

std::size_t CsvTable::Column(const std::string& name) const {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return i;
  }
  throw std::runtime_error("CSV has no column '" + name + "'");
}

CsvTable ReadCsv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  CsvTable table;
  std::string line;
  if (!std::getline(in, line)) {
    throw std::runtime_error(path.string() + " is empty");
  }
  table.header = SplitLine(line);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto row = SplitLine(line);
    if (row.size() != table.header.size()) {
      throw std::runtime_error(path.string() + ": ragged row");
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

}  // namespace quadlab
