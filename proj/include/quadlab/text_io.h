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

#ifndef QUADLAB_TEXT_IO_H_
#define QUADLAB_TEXT_IO_H_

#include <cstdint>
#include <istream>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace quadlab {

// Exact, locale-independent double <-> text. Hex-float form ("%a"), so a
// value always survives the round trip bit-for-bit.
std::string FormatDouble(double value);
double ParseDouble(std::string_view text);

// Shortest decimal that round-trips ("%.17g"); used for human-facing CSVs.
std::string FormatDecimal(double value);

// Line-oriented "key value..." records. Readers consume records strictly in
// the order they were written and fail on any key mismatch.
class TextWriter {
 public:
  explicit TextWriter(std::ostream& out) : out_(out) {}

  void Put(std::string_view key, double value);
  void PutInt(std::string_view key, int64_t value);
  void PutVector(std::string_view key, std::span<const double> values);
  void PutString(std::string_view key, std::string_view value);

 private:
  std::ostream& out_;
};

class TextReader {
 public:
  explicit TextReader(std::istream& in) : in_(in) {}

  double Get(std::string_view key);
  int64_t GetInt(std::string_view key);
  std::vector<double> GetVector(std::string_view key);
  std::string GetString(std::string_view key);

 private:
  // Returns the remainder of the next line after `key `.
  std::string NextRecord(std::string_view key);

  std::istream& in_;
  int line_ = 0;
};

}  // namespace quadlab

#endif  // QUADLAB_TEXT_IO_H_
