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

#include "pygec/jsonl.h"

#include <fstream>
#include <sstream>

#include "pygec/common.h"

namespace pygec {

Json Provenance::ToJson() const {
  return Json{{"artifact", artifact},
              {"toolkit", std::string("pygec ") + kToolkitVersion},
              {"config_hash", config_hash},
              {"seed", seed}};
}

std::string Provenance::HeaderLine() const {
  Json j = ToJson();
  j["kind"] = "header";
  return DumpLine(j);
}

bool IsHeaderRecord(const Json& record) {
  if (!record.is_object()) return false;
  auto it = record.find("kind");
  return it != record.end() && it->is_string() && *it == "header";
}

std::string ReadFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void ForEachJsonLine(const std::filesystem::path& path,
                     const std::function<void(const Json&, size_t)>& fn) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path.string());
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    Json record;
    try {
      record = Json::parse(line);
    } catch (const Json::parse_error& e) {
      throw InputError(path.string() + ":" + std::to_string(line_no) +
                       ": malformed record: " + e.what());
    }
    if (IsHeaderRecord(record)) continue;
    fn(record, line_no);
  }
}

void WriteFileAtomic(const std::filesystem::path& path,
                     const std::string& content) {
  if (path.has_parent_path()) {
    std::filesystem::create_directories(path.parent_path());
  }
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw InputError("cannot write " + tmp.string());
    out << content;
    if (!out.flush()) throw InputError("write failed: " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

std::string DumpLine(const Json& j) {
  return j.dump(-1, ' ', false, Json::error_handler_t::replace);
}

}  // namespace pygec
