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

#include "pygec/response_cache.h"

#include <mutex>

#include "pygec/common.h"
#include "pygec/hash.h"
#include "pygec/jsonl.h"

namespace pygec {

ResponseCache::ResponseCache(const std::filesystem::path& path) {
  if (std::filesystem::exists(path)) {
    const std::string content = ReadFile(path);
    size_t pos = 0;
    size_t line_no = 0;
    while (pos < content.size()) {
      size_t end = content.find('\n', pos);
      const bool last = end == std::string::npos;
      if (last) end = content.size();
      ++line_no;
      std::string_view line(content.data() + pos, end - pos);
      pos = end + 1;
      if (line.find_first_not_of(" \t\r") == std::string_view::npos) continue;
      try {
        const Json j = Json::parse(line);
        entries_.insert_or_assign(j.at("key").get<std::string>(),
                                  j.at("response").get<std::string>());
      } catch (const Json::exception& e) {
        if (last) break;
        throw InputError(path.string() + ":" + std::to_string(line_no) +
                         ": malformed cache entry: " + e.what());
      }
    }
    // Make sure appends start on a fresh line after a truncated tail.
    if (!content.empty() && content.back() != '\n') {
      std::ofstream fix(path, std::ios::binary | std::ios::app);
      fix << '\n';
    }
  } else if (path.has_parent_path()) {
    std::filesystem::create_directories(path.parent_path());
  }
  out_.open(path, std::ios::binary | std::ios::app);
  if (!out_) throw InputError("cannot open cache file " + path.string());
}

std::string ResponseCache::Key(std::string_view model, TaskKind task,
                               std::string_view prompt) {
  std::string material;
  material.append(kTemplateVersion).push_back('\x1f');
  material.append(model).push_back('\x1f');
  material.append(TaskName(task)).push_back('\x1f');
  material.append(prompt);
  return Sha256Hex(material);
}

std::optional<std::string> ResponseCache::Get(const std::string& key) const {
  std::shared_lock lock(mu_);
  auto it = entries_.find(key);
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

void ResponseCache::Put(const std::string& key, std::string_view model,
                        TaskKind task, std::string_view prompt,
                        const std::string& response) {
  std::unique_lock lock(mu_);
  if (out_.is_open()) {
    out_ << DumpLine(Json{{"key", key},
                          {"template_version", kTemplateVersion},
                          {"model", model},
                          {"task", TaskName(task)},
                          {"prompt", prompt},
                          {"response", response}})
         << '\n';
    out_.flush();
  }
  entries_.insert_or_assign(key, response);
}

size_t ResponseCache::size() const {
  std::shared_lock lock(mu_);
  return entries_.size();
}

}  // namespace pygec
