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

#ifndef PYGEC_ANALYSIS_H_
#define PYGEC_ANALYSIS_H_

#include <Eigen/Dense>

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "pygec/jsonl.h"

namespace pygec {

using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;

// Half-open token index range.
struct TokenRange {
  size_t begin = 0;
  size_t end = 0;

  size_t size() const { return end > begin ? end - begin : 0; }
  bool empty() const { return end <= begin; }
  bool Overlaps(const TokenRange& o) const {
    return !empty() && !o.empty() && begin < o.end && o.begin < end;
  }
  bool operator==(const TokenRange&) const = default;
};

// Where each prompt component sits. hypothesis/pinyin/prediction index the
// key axis; output indexes the query axis. pinyin is absent for tasks
// without a Pinyin slot.
struct SpanMap {
  TokenRange hypothesis;
  std::optional<TokenRange> pinyin;
  TokenRange prediction;
  TokenRange output;

  // Throws Error: empty required span, key spans overlapping or past
  // `keys`, output past `queries`.
  void Validate(size_t queries, size_t keys) const;
  Json ToJson() const;
  static SpanMap FromJson(const Json& j);
  bool operator==(const SpanMap&) const = default;
};

struct AttentionRecord {
  std::string utterance_id;
  int layer = 0;
  int head = 0;
  Matrix weights;  // Q x K, rows sum to 1
  SpanMap spans;
};

enum class HiddenRole { kText, kPinyin };

struct HiddenStateRecord {
  std::string utterance_id;
  HiddenRole role = HiddenRole::kText;
  int layer = -1;  // -1 when the dump carries a single layer
  Matrix states;   // T x D, one row per token
};

enum class AttentionAggregation {
  kMean,  // mean over heads and output rows, summed over layers
  kSum,   // raw sum over heads and output rows, summed over layers
};

struct AttentionOptions {
  AttentionAggregation aggregation = AttentionAggregation::kMean;
  // Renormalize each row over the component spans only, dropping mass on
  // template and other tokens.
  bool exclude_template_keys = false;
  double row_sum_tolerance = 1e-4;

  Json ToJson() const;
};

struct ComponentScores {
  double hypothesis = 0.0;
  double pinyin = 0.0;
  double prediction = 0.0;
};

struct LayerScores {
  int layer = 0;
  ComponentScores scores;
};

struct AttentionScores {
  std::vector<LayerScores> layers;  // ascending layer index
  ComponentScores total;            // sum over layers
  bool has_pinyin = false;
};

// Attention mass the output rows put on each component's key span. All
// records belong to one utterance and share `spans`. Throws Error on
// invalid spans, non-stochastic rows, or no records.
AttentionScores ComponentAttention(std::span<const AttentionRecord> records,
                                   const SpanMap& spans,
                                   const AttentionOptions& options = {});

// Mean of the rows. Throws Error for zero rows.
Vector TextVector(const Matrix& text_states);

struct PinyinSelection {
  Vector vector;
  std::vector<size_t> rows;  // selected row indices, ascending
};

// Keeps the min(P, T) rows with the highest cosine to `text_vector` (ties to
// the lower row; zero rows score 0) and averages them. Throws Error if
// `text_vector` has zero norm or P, T is 0.
PinyinSelection SelectPinyinRows(const Matrix& pinyin_states,
                                 const Vector& text_vector, size_t text_length);

inline Vector PinyinVector(const Matrix& pinyin_states, const Vector& text_vector,
                           size_t text_length) {
  return SelectPinyinRows(pinyin_states, text_vector, text_length).vector;
}

// Throws Error when either vector has zero norm.
double Cosine(const Vector& a, const Vector& b);

struct Quantiles {
  double min = 0, q25 = 0, median = 0, q75 = 0, max = 0;
};

// Linear-interpolation quantiles of a non-empty sample.
Quantiles ComputeQuantiles(std::vector<double> values);

struct AlignmentReport {
  std::vector<std::optional<double>> cosines;  // nullopt: pair excluded
  size_t excluded = 0;
  double mean = 0.0;
  Quantiles quantiles;
};

// Per pair (text states, Pinyin states): cosine(TextVector, PinyinVector).
// Pairs with zero-norm vectors are excluded and counted. Throws Error if
// `pairs` is empty or every pair is excluded.
AlignmentReport AlignmentScore(
    std::span<const std::pair<Matrix, Matrix>> pairs);

struct PcaResult {
  Matrix projections;        // N x k
  Vector explained_ratio;    // k, nonincreasing
  Matrix components;         // k x D, orthonormal rows
  Vector mean;               // D
};

// Principal components of the rows of `data` from the eigendecomposition of
// the N x N Gram matrix of the centered data. Each component is signed so
// its largest-magnitude loading is positive. Requires N >= 2 and
// 1 <= k <= min(N - 1, D); throws Error for bad k, zero variance, or fewer
// than k nonzero-variance directions.
PcaResult PcaProject(const Matrix& data, size_t k);

}  // namespace pygec

#endif  // PYGEC_ANALYSIS_H_
