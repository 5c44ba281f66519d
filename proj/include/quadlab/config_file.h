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

#ifndef QUADLAB_CONFIG_FILE_H_
#define QUADLAB_CONFIG_FILE_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>

namespace quadlab {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Flat sectioned key = value text:
//
//   # comment
//   [sim]
//   dt = 0.01
//
// Values are raw strings; typed reads go through Take*, which also marks the
// key as consumed so that leftovers can be reported as unknown.
class ConfigFile {
 public:
  static ConfigFile Parse(std::string_view text);
  static ConfigFile Load(const std::filesystem::path& path);

  void Set(const std::string& section, const std::string& key,
           std::string value);
  std::optional<std::string> Get(const std::string& section,
                                 const std::string& key) const;

  // Each Take* leaves *out untouched when the key is absent.
  void TakeDouble(const std::string& section, const std::string& key,
                  double* out);
  void TakeInt(const std::string& section, const std::string& key,
               int64_t* out);
  void TakeInt(const std::string& section, const std::string& key, int* out);
  void TakeBool(const std::string& section, const std::string& key,
                bool* out);
  void TakeString(const std::string& section, const std::string& key,
                  std::string* out);

  // Throws ConfigError naming every key no Take* call consumed.
  void RejectUnconsumed() const;

  // Sections and keys in lexicographic order.
  std::string ToString() const;

 private:
  std::optional<std::string> Take(const std::string& section,
                                  const std::string& key);

  std::map<std::string, std::map<std::string, std::string>> values_;
  std::set<std::pair<std::string, std::string>> consumed_;
};

}  // namespace quadlab

#endif  // QUADLAB_CONFIG_FILE_H_
