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

#ifndef PYGEC_METRICS_H_
#define PYGEC_METRICS_H_

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pygec/corpus.h"
#include "pygec/jsonl.h"

namespace pygec {

enum class EditKind : uint8_t { kMatch, kSubstitute, kDelete, kInsert };

// `ref_index`/`hyp_index` are the positions consumed by the op. A deletion
// consumes no hypothesis token, so its hyp_index is where the hypothesis
// cursor stands; symmetrically for insertions.
struct EditOp {
  EditKind kind;
  size_t ref_index;
  size_t hyp_index;
  bool operator==(const EditOp&) const = default;
};

struct EditCounts {
  size_t substitutions = 0;
  size_t deletions = 0;
  size_t insertions = 0;
  size_t matches = 0;

  size_t errors() const { return substitutions + deletions + insertions; }
  EditCounts& operator+=(const EditCounts& o) {
    substitutions += o.substitutions;
    deletions += o.deletions;
    insertions += o.insertions;
    matches += o.matches;
    return *this;
  }
};

struct EditAlignment {
  std::vector<EditOp> ops;
  EditCounts counts;
};

// Unit-cost Levenshtein alignment. The backtrace walks from the end and
// prefers Match > Substitute > Delete > Insert among optimal moves.
template <typename T>
EditAlignment EditAlign(std::span<const T> ref, std::span<const T> hyp) {
  const size_t n = ref.size();
  const size_t m = hyp.size();
  const size_t w = m + 1;
  std::vector<uint32_t> d((n + 1) * w);
  for (size_t j = 0; j <= m; ++j) d[j] = static_cast<uint32_t>(j);
  for (size_t i = 1; i <= n; ++i) {
    d[i * w] = static_cast<uint32_t>(i);
    for (size_t j = 1; j <= m; ++j) {
      const uint32_t diag = d[(i - 1) * w + j - 1] + (ref[i - 1] == hyp[j - 1] ? 0 : 1);
      const uint32_t up = d[(i - 1) * w + j] + 1;
      const uint32_t left = d[i * w + j - 1] + 1;
      d[i * w + j] = std::min({diag, up, left});
    }
  }

  EditAlignment out;
  size_t i = n;
  size_t j = m;
  while (i > 0 || j > 0) {
    const uint32_t here = d[i * w + j];
    if (i > 0 && j > 0 && ref[i - 1] == hyp[j - 1] && here == d[(i - 1) * w + j - 1]) {
      out.ops.push_back({EditKind::kMatch, --i, --j});
      ++out.counts.matches;
    } else if (i > 0 && j > 0 && here == d[(i - 1) * w + j - 1] + 1) {
      out.ops.push_back({EditKind::kSubstitute, --i, --j});
      ++out.counts.substitutions;
    } else if (i > 0 && here == d[(i - 1) * w + j] + 1) {
      out.ops.push_back({EditKind::kDelete, --i, j});
      ++out.counts.deletions;
    } else {
      out.ops.push_back({EditKind::kInsert, i, --j});
      ++out.counts.insertions;
    }
  }
  std::reverse(out.ops.begin(), out.ops.end());
  return out;
}

inline EditAlignment EditAlign(std::u32string_view ref, std::u32string_view hyp) {
  return EditAlign(std::span<const char32_t>(ref.data(), ref.size()),
                   std::span<const char32_t>(hyp.data(), hyp.size()));
}

// Character alignment of two UTF-8 strings (no normalization).
EditAlignment EditAlign(std::string_view ref, std::string_view hyp);

// Text preparation applied before CER.
struct NormalizeOptions {
  bool nfc = true;
  bool strip_whitespace = true;
  bool strip_ascii_punct = true;
  bool strip_cjk_punct = false;

  Json ToJson() const;
  static NormalizeOptions FromJson(const Json& j);
};

std::u32string NormalizeForScoring(std::string_view text,
                                   const NormalizeOptions& options);

struct CerResult {
  size_t errors = 0;
  size_t ref_len = 0;
  double value = 0.0;
  // Reference was empty: value is 0 for an empty hypothesis, else capped at 1.
  bool empty_reference = false;
  EditCounts counts;
};

template <typename T>
CerResult ComputeCer(std::span<const T> ref, std::span<const T> hyp) {
  CerResult r;
  r.counts = EditAlign(ref, hyp).counts;
  r.errors = r.counts.errors();
  r.ref_len = ref.size();
  if (ref.empty()) {
    r.empty_reference = true;
    r.value = hyp.empty() ? 0.0 : 1.0;
  } else {
    r.value = static_cast<double>(r.errors) / static_cast<double>(r.ref_len);
  }
  return r;
}

// CER after normalizing both sides.
CerResult ComputeCer(std::string_view reference, std::string_view hypothesis,
                     const NormalizeOptions& options = {});

inline double Cer(std::string_view reference, std::string_view hypothesis,
                  const NormalizeOptions& options = {}) {
  return ComputeCer(reference, hypothesis, options).value;
}

struct EntityHits {
  size_t hits = 0;
  size_t total = 0;
  // Undefined without entities.
  std::optional<double> recall() const {
    if (total == 0) return std::nullopt;
    return static_cast<double>(hits) / static_cast<double>(total);
  }
};

// Exact substring matching of each entity against `hypothesis`.
EntityHits CountEntityHits(std::span<const std::string> entities,
                           std::string_view hypothesis);

inline std::optional<double> EntityRecall(std::span<const std::string> entities,
                                          std::string_view hypothesis) {
  return CountEntityHits(entities, hypothesis).recall();
}

struct CaseStats {
  size_t good = 0;
  size_t bad = 0;
  size_t unchanged = 0;
  double good_pct = 0.0;
  double bad_pct = 0.0;
  double unchanged_pct = 0.0;
};

// good: after < before, bad: after > before. Throws Error on length mismatch.
CaseStats ComputeCaseStats(std::span<const double> before,
                           std::span<const double> after);

struct UtteranceScore {
  std::string id;
  CerResult cer;
  EntityHits entities;
};

struct SystemScores {
  std::vector<UtteranceScore> utterances;
  EditCounts totals;
  size_t total_errors = 0;
  size_t total_ref_len = 0;
  double pooled_cer = 0.0;  // total errors / total reference characters
  double mean_cer = 0.0;    // unweighted mean of per-utterance CER
  EntityHits entities;
  size_t empty_references = 0;

  std::vector<double> PerUtteranceCer() const;
  Json ToJson(bool include_utterances) const;
};

SystemScores ScoreSystem(std::span<const Utterance> utterances,
                         std::span<const std::string> outputs,
                         const NormalizeOptions& options);

// Scores of the corrected outputs against the uncorrected hypotheses.
struct CorpusReport {
  SystemScores baseline;
  SystemScores system;
  CaseStats cases;
  NormalizeOptions normalization;

  Json ToJson() const;
  std::string ToTable() const;
  // id,ref_chars,baseline_errors,system_errors,baseline_cer,system_cer,case
  std::string PerUtteranceCsv() const;
};

// `corrected[i]` is the system output for `utterances[i]`, whose hypothesis
// must be present. Throws InputError otherwise.
CorpusReport EvaluateCorpus(std::span<const Utterance> utterances,
                            std::span<const std::string> corrected,
                            const NormalizeOptions& options = {});

}  // namespace pygec

#endif  // PYGEC_METRICS_H_
