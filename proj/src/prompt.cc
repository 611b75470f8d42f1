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

#include "pygec/prompt.h"

#include <array>
#include <cctype>

#include "pygec/common.h"
#include "pygec/metrics.h"

namespace pygec {
namespace {

constexpr std::string_view kDirectPrefix = "请改正转录文本。 转录文本：";
constexpr std::string_view kPyGecPrefix =
    "请根据转录文本的拼音，改正转录文本。（注意同音词的错误）转录文本：";
constexpr std::string_view kPyGecPinyinLabel = " 拼音：";
constexpr std::string_view kPinyinToTextPrefix = "请将拼音转化为文本。拼音：";
constexpr std::string_view kTextToPinyinPrefix = "请将文本转化为拼音。文本：";
constexpr std::string_view kRerankInstruction =
    "请从以下候选改正结果中选出最准确的一项，只回答其编号。";

constexpr std::array<std::string_view, 6> kAnswerLabels = {
    "转录文本：", "转录文本:", "文本：", "文本:", "拼音：", "拼音:"};

// ASCII whitespace and U+3000 ideographic space.
std::string_view TrimSpace(std::string_view s) {
  constexpr std::string_view kIdeographicSpace = "　";
  for (;;) {
    const size_t before = s.size();
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) {
      s.remove_prefix(1);
    }
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) {
      s.remove_suffix(1);
    }
    if (s.starts_with(kIdeographicSpace)) s.remove_prefix(kIdeographicSpace.size());
    if (s.ends_with(kIdeographicSpace)) s.remove_suffix(kIdeographicSpace.size());
    if (s.size() == before) return s;
  }
}

void Require(bool ok, TaskKind task, const char* what) {
  if (!ok) {
    throw Error(std::string("prompt for task '") + TaskName(task) + "' " + what);
  }
}

}  // namespace

const char* TaskName(TaskKind task) {
  switch (task) {
    case TaskKind::kDirect:
      return "direct";
    case TaskKind::kPyGec:
      return "pygec";
    case TaskKind::kPinyinToText:
      return "pinyin2text";
    case TaskKind::kTextToPinyin:
      return "text2pinyin";
    case TaskKind::kRerank:
      return "rerank";
  }
  return "unknown";
}

TaskKind ParseTaskKind(std::string_view name) {
  for (TaskKind t : {TaskKind::kDirect, TaskKind::kPyGec, TaskKind::kPinyinToText,
                     TaskKind::kTextToPinyin, TaskKind::kRerank}) {
    if (name == TaskName(t)) return t;
  }
  throw InputError("unknown task '" + std::string(name) +
                   "' (expected direct|pygec|pinyin2text|text2pinyin|rerank)");
}

std::string BuildPrompt(TaskKind task, std::string_view hypothesis,
                        std::optional<std::string_view> pinyin,
                        std::optional<std::string_view> reference) {
  const bool wants_pinyin =
      task == TaskKind::kPyGec || task == TaskKind::kPinyinToText;
  const bool wants_reference = task == TaskKind::kTextToPinyin;
  Require(task != TaskKind::kRerank, task, "is built by BuildRerankPrompt");
  Require(pinyin.has_value() == wants_pinyin, task,
          wants_pinyin ? "requires the pinyin slot" : "takes no pinyin slot");
  Require(reference.has_value() == wants_reference, task,
          wants_reference ? "requires the reference slot"
                          : "takes no reference slot");

  std::string out;
  switch (task) {
    case TaskKind::kDirect:
      out.append(kDirectPrefix).append(hypothesis);
      break;
    case TaskKind::kPyGec:
      out.append(kPyGecPrefix).append(hypothesis);
      out.append(kPyGecPinyinLabel).append(*pinyin);
      break;
    case TaskKind::kPinyinToText:
      out.append(kPinyinToTextPrefix).append(*pinyin);
      break;
    case TaskKind::kTextToPinyin:
      out.append(kTextToPinyinPrefix).append(*reference);
      break;
    case TaskKind::kRerank:
      break;
  }
  return out;
}

std::string BuildRerankPrompt(std::string_view input,
                              std::span<const std::string> candidates) {
  std::string out(kRerankInstruction);
  out.append("\n转录文本：").append(input);
  for (size_t i = 0; i < candidates.size(); ++i) {
    out.append("\n").append(std::to_string(i + 1)).append(". ");
    out.append(candidates[i]);
  }
  return out;
}

std::string ExtractAnswer(std::string_view raw) {
  std::string_view s = TrimSpace(raw);
  for (auto label : kAnswerLabels) {
    if (s.starts_with(label)) {
      s = TrimSpace(s.substr(label.size()));
      break;
    }
  }
  return std::string(s);
}

std::optional<size_t> ParseRerankChoice(std::string_view raw,
                                        std::span<const std::string> candidates) {
  const std::string answer = ExtractAnswer(raw);
  NormalizeOptions norm;
  norm.strip_cjk_punct = true;
  const std::u32string normalized = NormalizeForScoring(answer, norm);
  if (!normalized.empty()) {
    for (size_t i = 0; i < candidates.size(); ++i) {
      if (NormalizeForScoring(candidates[i], norm) == normalized) return i;
    }
  }
  size_t pos = 0;
  while (pos < answer.size() && !std::isdigit(static_cast<unsigned char>(answer[pos]))) {
    ++pos;
  }
  if (pos == answer.size()) return std::nullopt;
  size_t value = 0;
  while (pos < answer.size() && std::isdigit(static_cast<unsigned char>(answer[pos]))) {
    value = value * 10 + static_cast<size_t>(answer[pos] - '0');
    if (value > candidates.size()) return std::nullopt;
    ++pos;
  }
  if (value < 1) return std::nullopt;
  return value - 1;
}

}  // namespace pygec
