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

#ifndef PYGEC_SYNTH_H_
#define PYGEC_SYNTH_H_

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "pygec/corpus.h"
#include "pygec/jsonl.h"
#include "pygec/pinyin.h"
#include "pygec/prompt.h"
#include "pygec/rng.h"

namespace pygec {

// Which records synthesize_dataset emits per sentence.
struct TaskToggles {
  bool direct = true;
  bool pygec = true;
  bool pinyin2text_reference = true;   // Pinyin of the reference -> reference
  bool pinyin2text_hypothesis = true;  // Pinyin of the hypothesis -> reference
  bool text2pinyin = true;

  size_t count() const {
    return direct + pygec + pinyin2text_reference + pinyin2text_hypothesis +
           text2pinyin;
  }
};

struct SynthesisConfig {
  double sentence_error_prob = 0.40;
  size_t top_k_filter = 5000;
  size_t words_per_sentence = 1;
  double char_sub_prob = 1.0;
  uint64_t seed = 0;
  // Insertion/deletion noise. Only 0 is supported.
  double indel_prob = 0.0;
  TaskToggles tasks;

  void Validate() const;
  Json ToJson() const;
  static SynthesisConfig FromJson(const Json& j);
};

struct TrainingRecord {
  TaskKind task = TaskKind::kDirect;
  std::string prompt;
  std::string target;
  std::string meta;  // source sentence id

  Json ToJson() const;
};

struct CorruptionResult {
  std::string text;
  bool flagged = false;  // no eligible word: returned unchanged
  std::vector<WordSpan> replaced_words;
  size_t replaced_chars = 0;
};

// Segmented words that may be corrupted: not in `frequent` and holding at
// least one character with homophones.
std::vector<WordSpan> EligibleWords(std::u32string_view sentence,
                                    std::span<const WordSpan> segmentation,
                                    const std::unordered_set<std::string>& frequent,
                                    const HomophoneDictionary& hdict,
                                    const PinyinDictionary& pdict);

// Picks words_per_sentence eligible words uniformly without replacement
// (fewer if not enough). Each character with homophones in a picked word is
// replaced with probability char_sub_prob by a uniformly drawn homophone.
// A word pass that replaces nothing is redrawn; after 64 empty passes (or
// immediately when char_sub_prob is 0) one of its characters is replaced
// outright. Output has the input's character count.
CorruptionResult CorruptSentence(std::u32string_view reference,
                                 std::span<const WordSpan> eligible,
                                 const SynthesisConfig& config,
                                 const HomophoneDictionary& hdict,
                                 const PinyinDictionary& pdict, Rng& rng);

struct SourceSentence {
  std::string id;
  std::vector<std::string> words;  // concatenation is the reference
};

struct SynthesizedSentence {
  std::string id;
  std::string reference;
  std::string hypothesis;
  bool selected = false;  // won the per-sentence Bernoulli draw
  bool flagged = false;   // selected but nothing eligible
  size_t eligible_words = 0;
  size_t replaced_chars = 0;
};

struct SynthesisStats {
  size_t sentences = 0;
  size_t selected = 0;
  size_t corrupted = 0;
  size_t flagged = 0;
  size_t eligible_words = 0;
  size_t sentences_with_eligible = 0;
  size_t replaced_words = 0;
  size_t replaced_chars = 0;
  size_t records = 0;

  Json ToJson() const;
};

struct SynthesisOutput {
  std::vector<SynthesizedSentence> sentences;
  std::vector<TrainingRecord> records;
  SynthesisStats stats;
};

// Sentence i draws from the substream Rng(SubstreamSeed(seed, i)): first
// one Bernoulli(sentence_error_prob), then the corruption draws. Output is
// therefore independent of `workers`.
SynthesisOutput SynthesizeDataset(std::span<const SourceSentence> corpus,
                                  const SynthesisConfig& config,
                                  const HomophoneDictionary& hdict,
                                  const PinyinDictionary& pdict,
                                  size_t workers = 1);

// Segments each reference with `lexicon`; ids are "s000000", "s000001", ...
std::vector<SourceSentence> SegmentCorpus(std::span<const std::string> references,
                                          const Lexicon& lexicon);

}  // namespace pygec

#endif  // PYGEC_SYNTH_H_
