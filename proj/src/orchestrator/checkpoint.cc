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


#include "quadlab/checkpoint.h"

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace quadlab {
namespace {

void WriteHeader(TextWriter& out, const ExperimentConfig& config) {
  out.PutInt("checkpoint.version", kCheckpointVersion);
  std::istringstream lines(config.ToString());
  std::vector<std::string> all;
  for (std::string line; std::getline(lines, line);) all.push_back(line);
  out.PutInt("config.lines", static_cast<int64_t>(all.size()));
  for (const std::string& line : all) out.PutString("config.line", line);
}

ExperimentConfig ReadHeader(TextReader& in) {
  const int64_t version = in.GetInt("checkpoint.version");
  if (version != kCheckpointVersion) {
    throw std::runtime_error("unsupported checkpoint version " +
                             std::to_string(version));
  }
  const int64_t count = in.GetInt("config.lines");
  std::string text;
  for (int64_t i = 0; i < count; ++i) {
    text += in.GetString("config.line");
    text += '\n';
  }
  return ExperimentConfig::Parse(text);
}

std::ifstream OpenForRead(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open checkpoint " + path.string());
  return in;
}

}  // namespace

void SaveCheckpoint(const std::filesystem::path& path, const Trainer& trainer) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    TextWriter writer(out);
    WriteHeader(writer, trainer.config());
    trainer.Save(writer);
    out.flush();
    if (!out) throw std::runtime_error("write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

ExperimentConfig ReadCheckpointConfig(const std::filesystem::path& path) {
  std::ifstream in = OpenForRead(path);
  TextReader reader(in);
  return ReadHeader(reader);
}

Trainer LoadCheckpoint(const std::filesystem::path& path,
                       std::ostream* progress) {
  std::ifstream in = OpenForRead(path);
  TextReader reader(in);
  const ExperimentConfig config = ReadHeader(reader);
  Trainer trainer(config, progress, /*restoring=*/true);
  trainer.Load(reader);
  return trainer;
}

FrozenPolicy LoadPolicy(const std::filesystem::path& path) {
  std::ifstream in = OpenForRead(path);
  TextReader reader(in);
  const ExperimentConfig config = ReadHeader(reader);
  Rng unused(0);
  PpoLearner learner(kObservationSize, kNumActuators, config.ppo, unused);
  learner.Load(reader);
  return learner.Freeze();
}

}  // namespace quadlab
