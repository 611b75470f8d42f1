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

#ifndef PYGEC_JSONL_H_
#define PYGEC_JSONL_H_

#include <cstdint>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "json.hpp"

namespace pygec {

using Json = nlohmann::json;

// Stamp embedded in every artifact the toolkit writes.
struct Provenance {
  std::string artifact;     // "dataset", "corrections", ...
  std::string config_hash;  // SHA-256 of the canonical run config
  uint64_t seed = 0;

  Json ToJson() const;
  // Header line for record-per-line files: {"kind":"header",...}.
  std::string HeaderLine() const;
};

bool IsHeaderRecord(const Json& record);

// Reads a whole file; throws InputError if it cannot be opened.
std::string ReadFile(const std::filesystem::path& path);

// Calls `fn(record, line_number)` for each non-blank, non-header line.
// Parse failures throw InputError naming the file and line.
void ForEachJsonLine(
    const std::filesystem::path& path,
    const std::function<void(const Json&, size_t)>& fn);

// Writes via a sibling temp file and rename, so readers never see a
// half-written artifact.
void WriteFileAtomic(const std::filesystem::path& path,
                     const std::string& content);

// Compact single-line dump with UTF-8 kept as-is.
std::string DumpLine(const Json& j);

}  // namespace pygec

#endif  // PYGEC_JSONL_H_
