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

#include "pygec/analysis.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "pygec/common.h"

namespace pygec {
namespace {

Json RangeJson(const TokenRange& r) { return Json::array({r.begin, r.end}); }

TokenRange RangeFromJson(const Json& j, const char* name) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number_unsigned() ||
      !j[1].is_number_unsigned()) {
    throw InputError(std::string("span '") + name + "' must be [begin, end]");
  }
  return {j[0].get<size_t>(), j[1].get<size_t>()};
}

void RequireNonEmpty(const TokenRange& r, const char* name) {
  if (r.empty()) throw Error(std::string("empty ") + name + " span");
}

double SpanMass(const Matrix& weights, Eigen::Index row, const TokenRange& r) {
  return weights.row(row)
      .segment(static_cast<Eigen::Index>(r.begin), static_cast<Eigen::Index>(r.size()))
      .sum();
}

double Interpolate(const std::vector<double>& sorted, double q) {
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<size_t>(std::floor(pos));
  const size_t hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (pos - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

}  // namespace

void SpanMap::Validate(size_t queries, size_t keys) const {
  RequireNonEmpty(hypothesis, "hypothesis");
  RequireNonEmpty(prediction, "prediction");
  RequireNonEmpty(output, "output");
  if (pinyin) RequireNonEmpty(*pinyin, "pinyin");
  std::vector<std::pair<const char*, TokenRange>> key_spans = {
      {"hypothesis", hypothesis}, {"prediction", prediction}};
  if (pinyin) key_spans.emplace_back("pinyin", *pinyin);
  for (size_t a = 0; a < key_spans.size(); ++a) {
    if (key_spans[a].second.end > keys) {
      throw Error(std::string(key_spans[a].first) + " span exceeds key axis (" +
                  std::to_string(keys) + ")");
    }
    for (size_t b = a + 1; b < key_spans.size(); ++b) {
      if (key_spans[a].second.Overlaps(key_spans[b].second)) {
        throw Error(std::string(key_spans[a].first) + " and " +
                    key_spans[b].first + " spans overlap");
      }
    }
  }
  if (output.end > queries) {
    throw Error("output span exceeds query axis (" + std::to_string(queries) + ")");
  }
}

Json SpanMap::ToJson() const {
  Json j{{"hypothesis", RangeJson(hypothesis)},
         {"prediction", RangeJson(prediction)},
         {"output", RangeJson(output)}};
  if (pinyin) j["pinyin"] = RangeJson(*pinyin);
  return j;
}

SpanMap SpanMap::FromJson(const Json& j) {
  if (!j.is_object()) throw InputError("spans must be an object");
  SpanMap s;
  auto get = [&](const char* name) -> TokenRange {
    auto it = j.find(name);
    if (it == j.end()) throw InputError(std::string("spans: missing '") + name + "'");
    return RangeFromJson(*it, name);
  };
  s.hypothesis = get("hypothesis");
  s.prediction = get("prediction");
  s.output = get("output");
  if (auto it = j.find("pinyin"); it != j.end() && !it->is_null()) {
    s.pinyin = RangeFromJson(*it, "pinyin");
  }
  return s;
}

Json AttentionOptions::ToJson() const {
  return Json{{"aggregation",
               aggregation == AttentionAggregation::kMean ? "mean" : "sum"},
              {"exclude_template_keys", exclude_template_keys}};
}

AttentionScores ComponentAttention(std::span<const AttentionRecord> records,
                                   const SpanMap& spans,
                                   const AttentionOptions& options) {
  if (records.empty()) throw Error("no attention records");
  struct Accumulator {
    ComponentScores sum;
    size_t rows = 0;
  };
  std::map<int, Accumulator> by_layer;
  for (const auto& rec : records) {
    const Matrix& a = rec.weights;
    spans.Validate(static_cast<size_t>(a.rows()), static_cast<size_t>(a.cols()));
    auto& acc = by_layer[rec.layer];
    for (size_t q = spans.output.begin; q < spans.output.end; ++q) {
      const auto row = static_cast<Eigen::Index>(q);
      const double row_sum = a.row(row).sum();
      if (!std::isfinite(row_sum) ||
          std::abs(row_sum - 1.0) > options.row_sum_tolerance) {
        throw Error("attention row " + std::to_string(q) + " of layer " +
                    std::to_string(rec.layer) + " head " +
                    std::to_string(rec.head) + " sums to " +
                    std::to_string(row_sum));
      }
      double hyp = SpanMass(a, row, spans.hypothesis);
      double pred = SpanMass(a, row, spans.prediction);
      double py = spans.pinyin ? SpanMass(a, row, *spans.pinyin) : 0.0;
      if (options.exclude_template_keys) {
        const double covered = hyp + pred + py;
        if (covered > 0.0) {
          hyp /= covered;
          pred /= covered;
          py /= covered;
        }
      }
      acc.sum.hypothesis += hyp;
      acc.sum.pinyin += py;
      acc.sum.prediction += pred;
      ++acc.rows;
    }
  }

  AttentionScores out;
  out.has_pinyin = spans.pinyin.has_value();
  for (const auto& [layer, acc] : by_layer) {
    ComponentScores s = acc.sum;
    if (options.aggregation == AttentionAggregation::kMean) {
      const double n = static_cast<double>(acc.rows);
      s.hypothesis /= n;
      s.pinyin /= n;
      s.prediction /= n;
    }
    out.layers.push_back({layer, s});
    out.total.hypothesis += s.hypothesis;
    out.total.pinyin += s.pinyin;
    out.total.prediction += s.prediction;
  }
  return out;
}

Vector TextVector(const Matrix& text_states) {
  if (text_states.rows() == 0 || text_states.cols() == 0) {
    throw Error("text hidden states are empty");
  }
  return text_states.colwise().mean().transpose();
}

double Cosine(const Vector& a, const Vector& b) {
  const double na = a.norm();
  const double nb = b.norm();
  if (na == 0.0 || nb == 0.0) throw Error("cosine of a zero-norm vector");
  return a.dot(b) / (na * nb);
}

PinyinSelection SelectPinyinRows(const Matrix& pinyin_states,
                                 const Vector& text_vector, size_t text_length) {
  const auto p = static_cast<size_t>(pinyin_states.rows());
  if (p == 0 || text_length == 0) throw Error("empty hidden states");
  if (pinyin_states.cols() != text_vector.size()) {
    throw Error("pinyin and text hidden sizes differ");
  }
  const double text_norm = text_vector.norm();
  if (text_norm == 0.0) throw Error("text vector has zero norm; alignment undefined");

  std::vector<double> cos(p);
  for (size_t i = 0; i < p; ++i) {
    const auto row = pinyin_states.row(static_cast<Eigen::Index>(i));
    const double rn = row.norm();
    cos[i] = rn == 0.0 ? 0.0 : row.dot(text_vector) / (rn * text_norm);
  }
  std::vector<size_t> order(p);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](size_t a, size_t b) { return cos[a] > cos[b]; });
  order.resize(std::min(p, text_length));
  std::sort(order.begin(), order.end());

  PinyinSelection sel;
  sel.vector = Vector::Zero(pinyin_states.cols());
  for (size_t i : order) {
    sel.vector += pinyin_states.row(static_cast<Eigen::Index>(i)).transpose();
  }
  sel.vector /= static_cast<double>(order.size());
  sel.rows = std::move(order);
  return sel;
}

Quantiles ComputeQuantiles(std::vector<double> values) {
  if (values.empty()) throw Error("quantiles of an empty sample");
  std::sort(values.begin(), values.end());
  return {values.front(), Interpolate(values, 0.25), Interpolate(values, 0.5),
          Interpolate(values, 0.75), values.back()};
}

AlignmentReport AlignmentScore(std::span<const std::pair<Matrix, Matrix>> pairs) {
  if (pairs.empty()) throw Error("no hidden-state pairs");
  AlignmentReport report;
  std::vector<double> valid;
  for (const auto& [text, pinyin] : pairs) {
    try {
      const Vector vt = TextVector(text);
      const Vector vp = PinyinVector(pinyin, vt, static_cast<size_t>(text.rows()));
      const double c = Cosine(vt, vp);
      report.cosines.emplace_back(c);
      valid.push_back(c);
    } catch (const Error&) {
      report.cosines.emplace_back(std::nullopt);
      ++report.excluded;
    }
  }
  if (valid.empty()) throw Error("every hidden-state pair was excluded");
  report.mean = std::accumulate(valid.begin(), valid.end(), 0.0) /
                static_cast<double>(valid.size());
  report.quantiles = ComputeQuantiles(std::move(valid));
  return report;
}

PcaResult PcaProject(const Matrix& data, size_t k) {
  const auto n = static_cast<size_t>(data.rows());
  const auto d = static_cast<size_t>(data.cols());
  if (n < 2) throw Error("PCA needs at least two vectors");
  if (k < 1 || k > std::min(n - 1, d)) {
    throw Error("PCA: k=" + std::to_string(k) + " outside [1, " +
                std::to_string(std::min(n - 1, d)) + "]");
  }
  PcaResult out;
  out.mean = data.colwise().mean().transpose();
  const Matrix centered = data.rowwise() - out.mean.transpose();
  const double scale = std::max(1.0, data.cwiseAbs().maxCoeff());
  if (centered.cwiseAbs().maxCoeff() <= 1e-12 * scale) {
    throw Error("PCA: input has zero variance");
  }

  const Matrix gram = centered * centered.transpose();
  Eigen::SelfAdjointEigenSolver<Matrix> eig(gram);
  if (eig.info() != Eigen::Success) throw Error("PCA: eigendecomposition failed");
  const Vector& values = eig.eigenvalues();  // ascending
  const double total = gram.trace();

  out.projections.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(k));
  out.components.resize(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(d));
  out.explained_ratio.resize(static_cast<Eigen::Index>(k));
  const double top = values(values.size() - 1);
  for (size_t c = 0; c < k; ++c) {
    const Eigen::Index idx = values.size() - 1 - static_cast<Eigen::Index>(c);
    const double lambda = values(idx);
    if (!(lambda > 1e-12 * top)) {
      throw Error("PCA: data has fewer than k=" + std::to_string(k) +
                  " directions with nonzero variance");
    }
    Vector direction = centered.transpose() * eig.eigenvectors().col(idx);
    direction /= std::sqrt(lambda);
    Eigen::Index arg = 0;
    direction.cwiseAbs().maxCoeff(&arg);
    if (direction(arg) < 0) direction = -direction;
    out.components.row(static_cast<Eigen::Index>(c)) = direction.transpose();
    out.projections.col(static_cast<Eigen::Index>(c)) = centered * direction;
    out.explained_ratio(static_cast<Eigen::Index>(c)) = lambda / total;
  }
  return out;
}

}  // namespace pygec
