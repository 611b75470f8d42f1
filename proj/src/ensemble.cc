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

#include "pygec/ensemble.h"

#include <algorithm>
#include <cstdint>
#include <map>
#include <unordered_set>

#include "pygec/common.h"
#include "pygec/metrics.h"
#include "pygec/parallel.h"
#include "pygec/prompt.h"
#include "pygec/utf8.h"

namespace pygec {

void CandidateSet::Validate() const {
  if (candidates.empty()) {
    throw InputError("candidate set '" + id + "' has no candidates");
  }
  std::unordered_set<std::string> labels;
  for (const auto& c : candidates) {
    if (!labels.insert(c.source).second) {
      throw InputError("candidate set '" + id + "' repeats source label '" +
                       c.source + "'");
    }
  }
}

std::vector<std::string> CandidateSet::Texts() const {
  std::vector<std::string> out;
  out.reserve(candidates.size());
  for (const auto& c : candidates) out.push_back(c.text);
  return out;
}

Json CandidateSet::ToJson() const {
  Json list = Json::array();
  for (const auto& c : candidates) {
    list.push_back({{"source", c.source}, {"text", c.text}});
  }
  return Json{{"id", id}, {"input", input}, {"candidates", std::move(list)}};
}

CandidateSet CandidateSet::FromJson(const Json& j) {
  CandidateSet s;
  try {
    s.id = j.at("id").get<std::string>();
    s.input = j.at("input").get<std::string>();
    const auto& list = j.at("candidates");
    for (size_t i = 0; i < list.size(); ++i) {
      const auto& c = list.at(i);
      if (c.is_string()) {
        s.candidates.push_back({"c" + std::to_string(i + 1), c.get<std::string>()});
      } else {
        s.candidates.push_back(
            {c.at("source").get<std::string>(), c.at("text").get<std::string>()});
      }
    }
  } catch (const Json::exception& e) {
    throw InputError(std::string("bad candidate set: ") + e.what());
  }
  s.Validate();
  return s;
}

std::vector<CandidateSet> LoadCandidateSets(const std::filesystem::path& path) {
  std::vector<CandidateSet> out;
  ForEachJsonLine(path, [&](const Json& record, size_t line_no) {
    try {
      out.push_back(CandidateSet::FromJson(record));
    } catch (const InputError& e) {
      throw InputError(path.string() + ":" + std::to_string(line_no) + ": " +
                       e.what());
    }
  });
  return out;
}

void WordTransitionNetwork::Add(std::u32string_view candidate) {
  const size_t n = slots_.size();
  const size_t m = candidate.size();
  const size_t w = m + 1;
  // Gaps (skipping a slot without NULL, opening a slot) are minimized before
  // substitutions: a gap outweighs any number of substitutions, so
  // equal-length candidates always align position by position.
  const uint64_t gap = n + m + 1;
  auto contains = [](const std::vector<Token>& slot, Token t) {
    return std::find(slot.begin(), slot.end(), t) != slot.end();
  };
  auto match_cost = [&](size_t i, size_t j) -> uint64_t {
    return contains(slots_[i - 1], Token(candidate[j - 1])) ? 0 : 1;
  };
  auto skip_cost = [&](size_t i) -> uint64_t {
    return contains(slots_[i - 1], std::nullopt) ? 0 : gap;
  };

  std::vector<uint64_t> d((n + 1) * w, 0);
  for (size_t j = 1; j <= m; ++j) d[j] = j * gap;
  for (size_t i = 1; i <= n; ++i) {
    d[i * w] = d[(i - 1) * w] + skip_cost(i);
    for (size_t j = 1; j <= m; ++j) {
      d[i * w + j] = std::min({d[(i - 1) * w + j - 1] + match_cost(i, j),
                               d[(i - 1) * w + j] + skip_cost(i),
                               d[i * w + j - 1] + gap});
    }
  }

  // Backtrace into (slot index or none, candidate token or NULL) pairs.
  struct Step {
    std::optional<size_t> slot;
    Token token;
  };
  std::vector<Step> path;
  size_t i = n;
  size_t j = m;
  while (i > 0 || j > 0) {
    const uint64_t here = d[i * w + j];
    if (i > 0 && j > 0 && match_cost(i, j) == 0 &&
        here == d[(i - 1) * w + j - 1]) {
      path.push_back({i - 1, candidate[j - 1]});
      --i;
      --j;
    } else if (i > 0 && j > 0 && here == d[(i - 1) * w + j - 1] + 1) {
      path.push_back({i - 1, candidate[j - 1]});
      --i;
      --j;
    } else if (i > 0 && here == d[(i - 1) * w + j] + skip_cost(i)) {
      path.push_back({i - 1, std::nullopt});
      --i;
    } else {
      path.push_back({std::nullopt, candidate[j - 1]});
      --j;
    }
  }
  std::reverse(path.begin(), path.end());

  std::vector<std::vector<Token>> merged;
  merged.reserve(path.size());
  for (const auto& step : path) {
    if (step.slot) {
      merged.push_back(std::move(slots_[*step.slot]));
    } else {
      merged.emplace_back(candidates_, std::nullopt);
    }
    merged.back().push_back(step.token);
  }
  slots_ = std::move(merged);
  ++candidates_;
}

std::u32string WordTransitionNetwork::Vote() const {
  std::u32string out;
  for (const auto& slot : slots_) {
    // Distinct tokens in order of first appearance, with counts.
    std::vector<std::pair<Token, size_t>> tally;
    for (const auto& t : slot) {
      auto it = std::find_if(tally.begin(), tally.end(),
                             [&](const auto& e) { return e.first == t; });
      if (it == tally.end()) {
        tally.emplace_back(t, 1);
      } else {
        ++it->second;
      }
    }
    const auto* best = &tally.front();
    for (const auto& e : tally) {
      if (e.second > best->second) best = &e;
    }
    if (best->first) out.push_back(*best->first);
  }
  return out;
}

std::string RoverMerge(const CandidateSet& set) {
  set.Validate();
  WordTransitionNetwork wtn;
  for (const auto& c : set.candidates) wtn.Add(DecodeUtf8(c.text));
  return EncodeUtf8(wtn.Vote());
}

std::vector<std::string> PinyinSyllableTokens(std::string_view text,
                                              const PinyinDictionary& pdict) {
  const std::string rendered = RenderPinyin(text, pdict);
  std::vector<std::string> tokens;
  size_t i = 0;
  while (i < rendered.size()) {
    const size_t j = std::min(rendered.find(' ', i), rendered.size());
    if (j > i) tokens.push_back(rendered.substr(i, j - i));
    i = j + 1;
  }
  return tokens;
}

PinyinRerankResult PinyinRerank(const CandidateSet& set,
                                const PinyinDictionary& pdict,
                                const PinyinRerankOptions& options) {
  set.Validate();
  using Tokens = std::vector<std::string>;
  std::vector<Tokens> cands;
  for (const auto& c : set.candidates) {
    cands.push_back(PinyinSyllableTokens(c.text, pdict));
  }
  std::vector<const Tokens*> comparison;
  for (const auto& t : cands) comparison.push_back(&t);
  const Tokens input = PinyinSyllableTokens(set.input, pdict);
  if (options.include_input) comparison.push_back(&input);

  // Every term of a candidate's sum shares its reference length, so the sum
  // is errors/length exactly; compare as fractions to keep ties exact.
  PinyinRerankResult result;
  uint64_t best_num = 0;
  uint64_t best_den = 1;
  for (size_t k = 0; k < cands.size(); ++k) {
    const std::span<const std::string> ref(cands[k]);
    uint64_t num = 0;
    for (const Tokens* other : comparison) {
      if (other == &cands[k]) continue;  // self term is zero
      const CerResult cer = ComputeCer(ref, std::span<const std::string>(*other));
      num += ref.empty() ? (cer.value > 0.0 ? 1 : 0) : cer.errors;
    }
    const uint64_t den = ref.empty() ? 1 : ref.size();
    result.scores.push_back(
        {k, static_cast<double>(num) / static_cast<double>(den)});
    if (k == 0 || num * best_den < best_num * den) {
      result.selected = k;
      best_num = num;
      best_den = den;
    }
  }
  result.text = set.candidates[result.selected].text;
  return result;
}

LlmRerankResult LlmRerank(const CandidateSet& set, Corrector& corrector,
                          const PinyinRerankOptions& options) {
  set.Validate();
  const auto texts = set.Texts();
  LlmRerankResult r;
  try {
    auto [raw, hit] =
        corrector.CompleteCached(TaskKind::kRerank, BuildRerankPrompt(set.input, texts));
    r.raw = std::move(raw);
    r.answered = true;
    r.cache_hit = hit;
    if (auto choice = ParseRerankChoice(r.raw, texts)) {
      r.selected = *choice;
      r.text = texts[*choice];
      return r;
    }
    r.error = "answer names no candidate";
  } catch (const EndpointError& e) {
    r.error = e.what();
  }
  const auto fallback = PinyinRerank(set, corrector.pinyin_dictionary(), options);
  r.fallback = true;
  r.selected = fallback.selected;
  r.text = fallback.text;
  return r;
}

std::vector<LlmRerankResult> BatchLlmRerank(std::span<const CandidateSet> sets,
                                            Corrector& corrector,
                                            const PinyinRerankOptions& options) {
  std::vector<size_t> first(sets.size());
  std::vector<size_t> unique;
  std::map<std::string, size_t> seen;
  for (size_t i = 0; i < sets.size(); ++i) {
    sets[i].Validate();
    auto [it, inserted] =
        seen.try_emplace(BuildRerankPrompt(sets[i].input, sets[i].Texts()), i);
    first[i] = it->second;
    if (inserted) unique.push_back(i);
  }
  std::vector<LlmRerankResult> results(sets.size());
  ParallelFor(unique.size(),
              static_cast<size_t>(corrector.client().config().max_concurrency),
              [&](size_t k) {
                results[unique[k]] = LlmRerank(sets[unique[k]], corrector, options);
              });
  for (size_t i = 0; i < sets.size(); ++i) {
    if (first[i] == i) continue;
    results[i] = results[first[i]];
    results[i].cache_hit = results[i].answered;
  }
  return results;
}

}  // namespace pygec
