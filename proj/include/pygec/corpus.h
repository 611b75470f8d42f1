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

#ifndef PYGEC_CORPUS_H_
#define PYGEC_CORPUS_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "pygec/jsonl.h"

namespace pygec {

// One evaluation record. `hypothesis` is the one-best ASR transcription.
struct Utterance {
  std::string id;
  std::string reference;
  std::optional<std::string> hypothesis;
  std::vector<std::string> entities;
  std::string source;

  Json ToJson() const;
  // Throws InputError describing the first bad field.
  static Utterance FromJson(const Json& j);
};

struct UtteranceLoadOptions {
  // Reject entities that are not substrings of the reference.
  bool validate_entities = false;
};

// JSON-lines file: {"id", "reference", "hypothesis"?, "entities"?, "source"?}.
// Order is preserved; duplicate ids are an error.
std::vector<Utterance> LoadUtterances(const std::filesystem::path& path,
                                      const UtteranceLoadOptions& options = {});

// Plain text, one reference sentence per non-blank line.
std::vector<std::string> LoadSentences(const std::filesystem::path& path);

// Multi-character words for forward maximum matching.
class Lexicon {
 public:
  // One word per line; blank lines, `#` comments and single characters are
  // skipped.
  static Lexicon Load(const std::filesystem::path& path);
  static Lexicon FromWords(std::span<const std::string> words);

  bool Contains(std::u32string_view word) const {
    return words_.count(std::u32string(word)) > 0;
  }
  size_t max_word_len() const { return max_word_len_; }
  size_t size() const { return words_.size(); }

 private:
  void Add(std::u32string word);

  std::unordered_set<std::u32string> words_;
  size_t max_word_len_ = 0;
};

// Half-open character range [begin, begin + length) of a segmented word.
struct WordSpan {
  size_t begin = 0;
  size_t length = 0;
  bool operator==(const WordSpan&) const = default;
};

// Greedy forward maximum matching; unmatched characters become one-character
// words. The spans tile the input exactly.
std::vector<WordSpan> SegmentSpans(std::u32string_view text,
                                   const Lexicon& lexicon);
std::vector<std::string> Segment(std::string_view text, const Lexicon& lexicon);

// Whitespace-delimited words of pre-segmented text.
std::vector<std::string> SplitPresegmented(std::string_view text);

struct WordFrequencyTable {
  std::unordered_map<std::string, uint64_t> counts;
  uint64_t total_words = 0;

  void Add(const std::string& word, uint64_t n = 1);
  // Order-independent; used to combine per-partition tables.
  void Merge(const WordFrequencyTable& other);
};

WordFrequencyTable BuildFrequencyTable(std::span<const std::string> references,
                                       const Lexicon& lexicon);
WordFrequencyTable BuildFrequencyTable(
    std::span<const std::vector<std::string>> segmented);

// The k most frequent words; ties at the boundary go to the
// lexicographically smaller word.
std::unordered_set<std::string> TopKWords(const WordFrequencyTable& table,
                                          size_t k);

}  // namespace pygec

#endif  // PYGEC_CORPUS_H_
