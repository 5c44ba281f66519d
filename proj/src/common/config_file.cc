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

#include "quadlab/config_file.h"

#include <fstream>
#include <sstream>

#include "quadlab/text_io.h"

namespace quadlab {
namespace {

std::string_view Trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

}  // namespace

ConfigFile ConfigFile::Parse(std::string_view text) {
  ConfigFile config;
  std::string section;
  int line_number = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto end = text.find('\n', pos);
    std::string_view line = text.substr(
        pos, end == std::string_view::npos ? std::string_view::npos
                                           : end - pos);
    pos = end == std::string_view::npos ? text.size() + 1 : end + 1;
    ++line_number;

    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = Trim(line);
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']' || line.size() < 3) {
        throw ConfigError("line " + std::to_string(line_number) +
                          ": malformed section header");
      }
      section = std::string(Trim(line.substr(1, line.size() - 2)));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("line " + std::to_string(line_number) +
                        ": expected key = value");
    }
    const std::string key(Trim(line.substr(0, eq)));
    if (key.empty()) {
      throw ConfigError("line " + std::to_string(line_number) + ": empty key");
    }
    if (section.empty()) {
      throw ConfigError("line " + std::to_string(line_number) +
                        ": key outside of a [section]");
    }
    config.Set(section, key, std::string(Trim(line.substr(eq + 1))));
  }
  return config;
}

ConfigFile ConfigFile::Load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return Parse(buffer.str());
}

void ConfigFile::Set(const std::string& section, const std::string& key,
                     std::string value) {
  values_[section][key] = std::move(value);
}

std::optional<std::string> ConfigFile::Get(const std::string& section,
                                           const std::string& key) const {
  const auto s = values_.find(section);
  if (s == values_.end()) return std::nullopt;
  const auto k = s->second.find(key);
  if (k == s->second.end()) return std::nullopt;
  return k->second;
}

std::optional<std::string> ConfigFile::Take(const std::string& section,
                                            const std::string& key) {
  auto value = Get(section, key);
  if (value) consumed_.emplace(section, key);
  return value;
}

void ConfigFile::TakeDouble(const std::string& section, const std::string& key,
                            double* out) {
  if (auto v = Take(section, key)) {
    try {
      *out = ParseDouble(*v);
    } catch (const std::exception&) {
      throw ConfigError(section + "." + key + ": not a number: '" + *v + "'");
    }
  }
}

void ConfigFile::TakeInt(const std::string& section, const std::string& key,
                         int64_t* out) {
  if (auto v = Take(section, key)) {
    std::size_t used = 0;
    try {
      *out = std::stoll(*v, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != v->size()) {
      throw ConfigError(section + "." + key + ": not an integer: '" + *v +
                        "'");
    }
  }
}

void ConfigFile::TakeInt(const std::string& section, const std::string& key,
                         int* out) {
  int64_t wide = *out;
  TakeInt(section, key, &wide);
  *out = static_cast<int>(wide);
}

void ConfigFile::TakeBool(const std::string& section, const std::string& key,
                          bool* out) {
  if (auto v = Take(section, key)) {
    if (*v == "true" || *v == "1") {
      *out = true;
    } else if (*v == "false" || *v == "0") {
      *out = false;
    } else {
      throw ConfigError(section + "." + key + ": not a boolean: '" + *v + "'");
    }
  }
}

void ConfigFile::TakeString(const std::string& section, const std::string& key,
                            std::string* out) {
  if (auto v = Take(section, key)) *out = *v;
}

void ConfigFile::RejectUnconsumed() const {
  std::string unknown;
  for (const auto& [section, keys] : values_) {
    for (const auto& [key, value] : keys) {
      if (!consumed_.contains({section, key})) {
        unknown += (unknown.empty() ? "" : ", ") + section + "." + key;
      }
    }
  }
  if (!unknown.empty()) throw ConfigError("unknown config keys: " + unknown);
}

std::string ConfigFile::ToString() const {
  std::ostringstream out;
  bool first = true;
  for (const auto& [section, keys] : values_) {
    if (!first) out << '\n';
    first = false;
    out << '[' << section << "]\n";
    for (const auto& [key, value] : keys) out << key << " = " << value << '\n';
  }
  return out.str();
}

}  // namespace quadlab
