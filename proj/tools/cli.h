// Copyright 2026 The pygec Authors
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

#ifndef PYGEC_TOOLS_CLI_H_
#define PYGEC_TOOLS_CLI_H_

#include <cstdint>
#include <filesystem>
#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "pygec/analysis.h"
#include "pygec/chat_client.h"
#include "pygec/ensemble.h"
#include "pygec/metrics.h"
#include "pygec/pinyin.h"
#include "pygec/synth.h"

namespace pygec::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitPartialFailure = 1;
inline constexpr int kExitInputError = 2;

// Everything a pipeline stage needs, loaded from one JSON file. Relative
// paths resolve against the config file's directory; command-line flags
// override config values and resolve against the working directory.
struct RunConfig {
  std::optional<std::filesystem::path> pinyin_dict;
  std::optional<std::filesystem::path> homophone_dict;
  std::optional<std::filesystem::path> lexicon;
  std::optional<std::filesystem::path> corpus;
  std::optional<std::filesystem::path> cache;
  std::filesystem::path output_dir = "pygec_out";

  uint64_t seed = 0;
  ToneMode tone_mode = ToneMode::kExact;
  bool presegmented = false;
  bool validate_entities = false;
  size_t workers = 1;

  SynthesisConfig synthesis;
  EndpointConfig endpoint;
  NormalizeOptions metrics;
  AttentionOptions attention;
  std::optional<int> layer;
  size_t pca_components = 2;
  PinyinRerankOptions rerank;

  // Checks value ranges and that every referenced input path exists.
  void Validate() const;
  Json ToJson() const;
  // SHA-256 of the canonical ToJson() dump without output_dir, workers and
  // cache.
  std::string Hash() const;
  static RunConfig FromJson(const Json& j, const std::filesystem::path& base_dir);
};

RunConfig LoadRunConfig(const std::filesystem::path& path);

// Directory holding the dictionaries shipped with the toolkit.
std::filesystem::path DefaultDataDir();

// Entry point behind the `pygec` binary. `args` excludes the program name;
// `in` feeds `pygec pinyin` when no text or input file is given.
int RunCli(const std::vector<std::string>& args, std::istream& in,
           std::ostream& out, std::ostream& err);

}  // namespace pygec::cli

#endif  // PYGEC_TOOLS_CLI_H_
