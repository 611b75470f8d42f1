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

#ifndef PYGEC_RESPONSE_CACHE_H_
#define PYGEC_RESPONSE_CACHE_H_

#include <filesystem>
#include <fstream>
#include <optional>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <unordered_map>

#include "pygec/prompt.h"

namespace pygec {

// Raw model outputs keyed by SHA-256 of (template version, model, task,
// prompt). Backed by an append-only JSON-lines file; each entry is written
// as one line and flushed under a lock, so concurrent readers in this
// process see either nothing or the whole entry.
class ResponseCache {
 public:
  // In-memory only.
  ResponseCache() = default;
  // Loads `path` if it exists and appends new entries to it. A truncated
  // final line (interrupted write) is ignored.
  explicit ResponseCache(const std::filesystem::path& path);

  static std::string Key(std::string_view model, TaskKind task,
                         std::string_view prompt);

  std::optional<std::string> Get(const std::string& key) const;
  void Put(const std::string& key, std::string_view model, TaskKind task,
           std::string_view prompt, const std::string& response);

  size_t size() const;

 private:
  mutable std::shared_mutex mu_;
  std::unordered_map<std::string, std::string> entries_;
  std::ofstream out_;
};

}  // namespace pygec

#endif  // PYGEC_RESPONSE_CACHE_H_
