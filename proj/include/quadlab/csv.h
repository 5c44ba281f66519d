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

#ifndef QUADLAB_CSV_H_
#define QUADLAB_CSV_H_

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

namespace quadlab {

// Plain comma-separated files. Fields never contain commas or newlines in
// this project, so no quoting is performed; such fields are rejected.
class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& path,
            const std::vector<std::string>& header);

  void Row(const std::vector<std::string>& fields);
  void Flush() { out_.flush(); }

 private:
  std::ofstream out_;
  std::size_t width_;
};

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  // Index of a header column; throws if absent.
  std::size_t Column(const std::string& name) const;
};

CsvTable ReadCsv(const std::filesystem::path& path);

}  // namespace quadlab

#endif  // QUADLAB_CSV_H_
