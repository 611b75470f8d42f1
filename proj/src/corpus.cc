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

#include "pygec/corpus.h"

#include <algorithm>
#include <fstream>

#include "pygec/common.h"
#include "pygec/utf8.h"

namespace pygec {
namespace {

const std::string& RequireString(const Json& j, const char* field) {
  auto it = j.find(field);
  if (it == j.end() || !it->is_string()) {
    throw InputError(std::string("field '") + field + "' must be a string");
  }
  return it->get_ref<const std::string&>();
}

}  // namespace

Json Utterance::ToJson() const {
  Json j{{"id", id}, {"reference", reference}};
  if (hypothesis) j["hypothesis"] = *hypothesis;
  if (!entities.empty()) j["entities"] = entities;
  if (!source.empty()) j["source"] = source;
  return j;
}

Utterance Utterance::FromJson(const Json& j) {
  if (!j.is_object()) throw InputError("record is not a JSON object");
  Utterance u;
  u.id = RequireString(j, "id");
  if (u.id.empty()) throw InputError("field 'id' is empty");
  u.reference = RequireString(j, "reference");
  if (auto it = j.find("hypothesis"); it != j.end() && !it->is_null()) {
    if (!it->is_string()) throw InputError("field 'hypothesis' must be a string");
    u.hypothesis = it->get<std::string>();
  }
  if (auto it = j.find("entities"); it != j.end() && !it->is_null()) {
    if (!it->is_array()) throw InputError("field 'entities' must be a list");
    for (const auto& e : *it) {
      if (!e.is_string() || e.get_ref<const std::string&>().empty()) {
        throw InputError("entities must be non-empty strings");
      }
      u.entities.push_back(e.get<std::string>());
    }
  }
  if (auto it = j.find("source"); it != j.end() && !it->is_null()) {
    if (!it->is_string()) throw InputError("field 'source' must be a string");
    u.source = it->get<std::string>();
  }
  return u;
}

std::vector<Utterance> LoadUtterances(const std::filesystem::path& path,
                                      const UtteranceLoadOptions& options) {
  std::vector<Utterance> out;
  std::unordered_set<std::string> seen;
  ForEachJsonLine(path, [&](const Json& record, size_t line_no) {
    const auto where = path.string() + ":" + std::to_string(line_no) + ": ";
    Utterance u;
    try {
      u = Utterance::FromJson(record);
    } catch (const InputError& e) {
      throw InputError(where + e.what());
    }
    if (!seen.insert(u.id).second) {
      throw InputError(where + "duplicate id '" + u.id + "'");
    }
    if (options.validate_entities) {
      for (const auto& e : u.entities) {
        if (u.reference.find(e) == std::string::npos) {
          throw InputError(where + "entity '" + e +
                           "' is not a substring of the reference");
        }
      }
    }
    out.push_back(std::move(u));
  });
  return out;
}

std::vector<std::string> LoadSentences(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path.string());
  std::vector<std::string> out;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    out.push_back(line);
  }
  return out;
}

Lexicon Lexicon::Load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open lexicon " + path.string());
  Lexicon lex;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto b = line.find_first_not_of(" \t");
    if (b == std::string::npos || line[b] == '#') continue;
    const auto e = line.find_last_not_of(" \t");
    lex.Add(DecodeUtf8(std::string_view(line).substr(b, e - b + 1)));
  }
  return lex;
}

Lexicon Lexicon::FromWords(std::span<const std::string> words) {
  Lexicon lex;
  for (const auto& w : words) lex.Add(DecodeUtf8(w));
  return lex;
}

void Lexicon::Add(std::u32string word) {
  if (word.size() < 2) return;
  max_word_len_ = std::max(max_word_len_, word.size());
  words_.insert(std::move(word));
}

std::vector<WordSpan> SegmentSpans(std::u32string_view text,
                                   const Lexicon& lexicon) {
  std::vector<WordSpan> spans;
  size_t i = 0;
  while (i < text.size()) {
    size_t len = std::min(lexicon.max_word_len(), text.size() - i);
    for (; len >= 2; --len) {
      if (lexicon.Contains(text.substr(i, len))) break;
    }
    if (len < 2) len = 1;
    spans.push_back({i, len});
    i += len;
  }
  return spans;
}

std::vector<std::string> Segment(std::string_view text,
                                 const Lexicon& lexicon) {
  const std::u32string chars = DecodeUtf8(text);
  std::vector<std::string> words;
  for (const auto& span : SegmentSpans(chars, lexicon)) {
    words.push_back(
        EncodeUtf8(std::u32string_view(chars).substr(span.begin, span.length)));
  }
  return words;
}

std::vector<std::string> SplitPresegmented(std::string_view text) {
  std::vector<std::string> words;
  size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && (text[i] == ' ' || text[i] == '\t')) ++i;
    size_t j = i;
    while (j < text.size() && text[j] != ' ' && text[j] != '\t') ++j;
    if (j > i) words.emplace_back(text.substr(i, j - i));
    i = j;
  }
  return words;
}

void WordFrequencyTable::Add(const std::string& word, uint64_t n) {
  if (n == 0) return;
  counts[word] += n;
  total_words += n;
}

void WordFrequencyTable::Merge(const WordFrequencyTable& other) {
  for (const auto& [word, n] : other.counts) Add(word, n);
}

WordFrequencyTable BuildFrequencyTable(std::span<const std::string> references,
                                       const Lexicon& lexicon) {
  WordFrequencyTable table;
  for (const auto& ref : references) {
    for (const auto& w : Segment(ref, lexicon)) table.Add(w);
  }
  return table;
}

WordFrequencyTable BuildFrequencyTable(
    std::span<const std::vector<std::string>> segmented) {
  WordFrequencyTable table;
  for (const auto& sentence : segmented) {
    for (const auto& w : sentence) table.Add(w);
  }
  return table;
}

std::unordered_set<std::string> TopKWords(const WordFrequencyTable& table,
                                          size_t k) {
  std::vector<std::pair<uint64_t, const std::string*>> ranked;
  ranked.reserve(table.counts.size());
  for (const auto& [word, n] : table.counts) ranked.emplace_back(n, &word);
  const size_t take = std::min(k, ranked.size());
  auto by_rank = [](const auto& a, const auto& b) {
    return a.first != b.first ? a.first > b.first : *a.second < *b.second;
  };
  std::partial_sort(ranked.begin(), ranked.begin() + take, ranked.end(),
                    by_rank);
  std::unordered_set<std::string> out;
  for (size_t i = 0; i < take; ++i) out.insert(*ranked[i].second);
  return out;
}

}  // namespace pygec
