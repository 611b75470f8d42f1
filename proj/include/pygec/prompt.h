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

#ifndef PYGEC_PROMPT_H_
#define PYGEC_PROMPT_H_

#include <optional>
#include <span>
#include <string>
#include <string_view>

namespace pygec {

enum class TaskKind { kDirect, kPyGec, kPinyinToText, kTextToPinyin, kRerank };

// Stable lowercase names: direct, pygec, pinyin2text, text2pinyin, rerank.
const char* TaskName(TaskKind task);
TaskKind ParseTaskKind(std::string_view name);

// Bumped whenever a template below changes; part of every cache key.
inline constexpr const char* kTemplateVersion = "v1";

// Fills the task's template. `pinyin` must be given exactly for kPyGec and
// kPinyinToText, `reference` exactly for kTextToPinyin; violations throw
// Error. kRerank has its own builder.
//
//   direct       请改正转录文本。 转录文本：<hypothesis>
//   pygec        请根据转录文本的拼音，改正转录文本。（注意同音词的错误）转录文本：<hypothesis> 拼音：<pinyin>
//   pinyin2text  请将拼音转化为文本。拼音：<pinyin>
//   text2pinyin  请将文本转化为拼音。文本：<reference>
std::string BuildPrompt(TaskKind task, std::string_view hypothesis,
                        std::optional<std::string_view> pinyin = std::nullopt,
                        std::optional<std::string_view> reference = std::nullopt);

// Asks for the number of the best candidate:
//
//   请从以下候选改正结果中选出最准确的一项，只回答其编号。
//   转录文本：<input>
//   1. <candidate 1>
//   2. <candidate 2>
//   ...
std::string BuildRerankPrompt(std::string_view input,
                              std::span<const std::string> candidates);

// Model output with surrounding whitespace and one leading answer label
// (转录文本：, 文本：, 拼音：, full-width or ASCII colon) removed.
std::string ExtractAnswer(std::string_view raw);

// 0-based index chosen by a rerank answer: either a candidate's text
// (compared after scoring normalization) or the first integer in range 1..M.
std::optional<size_t> ParseRerankChoice(std::string_view raw,
                                        std::span<const std::string> candidates);

}  // namespace pygec

#endif  // PYGEC_PROMPT_H_
