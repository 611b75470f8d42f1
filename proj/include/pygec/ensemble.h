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

#ifndef PYGEC_ENSEMBLE_H_
#define PYGEC_ENSEMBLE_H_

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pygec/corrector.h"
#include "pygec/jsonl.h"
#include "pygec/pinyin.h"

namespace pygec {

struct Candidate {
  std::string source;  // e.g. "direct", "pygec", "pinyin2text"
  std::string text;
};

// The input hypothesis and its M >= 1 corrections.
struct CandidateSet {
  std::string id;
  std::string input;
  std::vector<Candidate> candidates;

  // Throws InputError: M == 0 or repeated source labels.
  void Validate() const;
  std::vector<std::string> Texts() const;
  Json ToJson() const;
  static CandidateSet FromJson(const Json& j);
};

// {"id", "input", "candidates": [{"source", "text"}, ...]} per line.
std::vector<CandidateSet> LoadCandidateSets(const std::filesystem::path& path);

// Character-level word transition network. Each slot holds one entry per
// added candidate; std::nullopt is the NULL arc.
class WordTransitionNetwork {
 public:
  using Token = std::optional<char32_t>;

  // Aligns `candidate` against the current slots. A token costs 0 against a
  // slot already containing it, 1 otherwise. Skipping a slot that holds no
  // NULL, or opening a new slot, costs more than any run of substitutions,
  // so gaps are minimized first. Among optimal paths the backtrace prefers
  // match, substitution, skip, new slot.
  void Add(std::u32string_view candidate);

  // Plurality token per slot, ties to the token of the earliest candidate
  // holding it; slots won by NULL are dropped.
  std::u32string Vote() const;

  size_t candidate_count() const { return candidates_; }
  const std::vector<std::vector<Token>>& slots() const { return slots_; }

 private:
  std::vector<std::vector<Token>> slots_;
  size_t candidates_ = 0;
};

// ROVER with frequency-only voting over the candidates in list order.
std::string RoverMerge(const CandidateSet& set);

struct RerankScore {
  size_t candidate_index = 0;
  double score = 0.0;
};

struct PinyinRerankOptions {
  // Add the input hypothesis to the comparison set.
  bool include_input = true;
};

struct PinyinRerankResult {
  size_t selected = 0;
  std::string text;
  std::vector<RerankScore> scores;
};

// Syllable tokens of the rendered Pinyin (split on spaces).
std::vector<std::string> PinyinSyllableTokens(std::string_view text,
                                              const PinyinDictionary& pdict);

// score(w) = sum over the comparison set {w_1..w_M} (plus the input) of
// CER(Pinyin(w_j), Pinyin(w)) with Pinyin(w) as the reference side, over
// syllable tokens. Lowest score wins, ties to the lower index.
PinyinRerankResult PinyinRerank(const CandidateSet& set,
                                const PinyinDictionary& pdict,
                                const PinyinRerankOptions& options = {});

struct LlmRerankResult {
  size_t selected = 0;
  std::string text;
  bool fallback = false;  // answer unusable or endpoint failed
  bool answered = false;  // the endpoint (or cache) returned a response
  bool cache_hit = false;
  std::string raw;
  std::string error;
};

// Asks the model for the best candidate number; falls back to
// PinyinRerank when the answer names no candidate or the request fails.
LlmRerankResult LlmRerank(const CandidateSet& set, Corrector& corrector,
                          const PinyinRerankOptions& options = {});

// LlmRerank over many sets with at most max_concurrency requests in flight.
// Sets sharing a rerank prompt are asked once; the copies are reported as
// cache hits.
std::vector<LlmRerankResult> BatchLlmRerank(std::span<const CandidateSet> sets,
                                            Corrector& corrector,
                                            const PinyinRerankOptions& options = {});

}  // namespace pygec

#endif  // PYGEC_ENSEMBLE_H_
