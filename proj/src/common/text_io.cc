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

#include "quadlab/text_io.h"

#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <sstream>
#include <stdexcept>

namespace quadlab {

std::string FormatDouble(double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%a", value);
  return buffer;
}

double ParseDouble(std::string_view text) {
  const std::string owned(text);
  char* end = nullptr;
  errno = 0;
  const double value = std::strtod(owned.c_str(), &end);
  if (owned.empty() || end != owned.c_str() + owned.size()) {
    throw std::invalid_argument("not a number: '" + owned + "'");
  }
  return value;
}

std::string FormatDecimal(double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.17g", value);
  return buffer;
}

void TextWriter::Put(std::string_view key, double value) {
  out_ << key << ' ' << FormatDouble(value) << '\n';
}

void TextWriter::PutInt(std::string_view key, int64_t value) {
  out_ << key << ' ' << value << '\n';
}

void TextWriter::PutVector(std::string_view key,
                           std::span<const double> values) {
  out_ << key << ' ' << values.size();
  for (double v : values) out_ << ' ' << FormatDouble(v);
  out_ << '\n';
}

void TextWriter::PutString(std::string_view key, std::string_view value) {
  if (value.find('\n') != std::string_view::npos) {
    throw std::invalid_argument("PutString: value contains a newline");
  }
  out_ << key << ' ' << value << '\n';
}

std::string TextReader::NextRecord(std::string_view key) {
  std::string line;
  if (!std::getline(in_, line)) {
    throw std::runtime_error("unexpected end of input, wanted '" +
                             std::string(key) + "'");
  }
  ++line_;
  const auto space = line.find(' ');
  const std::string_view found =
      std::string_view(line).substr(0, space == std::string::npos ? line.size()
                                                                  : space);
  if (found != key) {
    throw std::runtime_error("line " + std::to_string(line_) + ": expected '" +
                             std::string(key) + "', found '" +
                             std::string(found) + "'");
  }
  return space == std::string::npos ? std::string() : line.substr(space + 1);
}

double TextReader::Get(std::string_view key) {
  return ParseDouble(NextRecord(key));
}

int64_t TextReader::GetInt(std::string_view key) {
  const std::string text = NextRecord(key);
  std::size_t used = 0;
  const int64_t value = std::stoll(text, &used);
  if (used != text.size()) {
    throw std::invalid_argument("not an integer: '" + text + "'");
  }
  return value;
}

std::vector<double> TextReader::GetVector(std::string_view key) {
  std::istringstream in(NextRecord(key));
  std::size_t count = 0;
  in >> count;
  std::vector<double> values(count);
  std::string token;
  for (auto& v : values) {
    if (!(in >> token)) {
      throw std::runtime_error("short vector for '" + std::string(key) + "'");
    }
    v = ParseDouble(token);
  }
  if (in >> token) {
    throw std::runtime_error("long vector for '" + std::string(key) + "'");
  }
  return values;
}

std::string TextReader::GetString(std::string_view key) {
  return NextRecord(key);
}

}  // namespace quadlab
