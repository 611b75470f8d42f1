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

#include "pygec/metrics.h"

#include <unicode/uchar.h>

#include <cstdio>
#include <sstream>

#include "pygec/common.h"
#include "pygec/utf8.h"

namespace pygec {
namespace {

bool IsAsciiPunct(char32_t c) {
  return (c >= 0x21 && c <= 0x2F) || (c >= 0x3A && c <= 0x40) ||
         (c >= 0x5B && c <= 0x60) || (c >= 0x7B && c <= 0x7E);
}

double Ratio(size_t num, size_t den) {
  if (den == 0) return num == 0 ? 0.0 : 1.0;
  return static_cast<double>(num) / static_cast<double>(den);
}

std::string Fixed(double v, int digits = 2) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
  return buf;
}

const char* CaseLabel(double before, double after) {
  if (after < before) return "good";
  if (after > before) return "bad";
  return "unchanged";
}

}  // namespace

EditAlignment EditAlign(std::string_view ref, std::string_view hyp) {
  return EditAlign(std::u32string_view(DecodeUtf8(ref)),
                   std::u32string_view(DecodeUtf8(hyp)));
}

Json NormalizeOptions::ToJson() const {
  return Json{{"nfc", nfc},
              {"strip_whitespace", strip_whitespace},
              {"strip_ascii_punct", strip_ascii_punct},
              {"strip_cjk_punct", strip_cjk_punct}};
}

NormalizeOptions NormalizeOptions::FromJson(const Json& j) {
  NormalizeOptions o;
  if (!j.is_object()) throw InputError("metrics options must be an object");
  o.nfc = j.value("nfc", o.nfc);
  o.strip_whitespace = j.value("strip_whitespace", o.strip_whitespace);
  o.strip_ascii_punct = j.value("strip_ascii_punct", o.strip_ascii_punct);
  o.strip_cjk_punct = j.value("strip_cjk_punct", o.strip_cjk_punct);
  return o;
}

std::u32string NormalizeForScoring(std::string_view text,
                                   const NormalizeOptions& options) {
  std::u32string chars =
      DecodeUtf8(options.nfc ? std::string_view(NormalizeNfc(text)) : text);
  std::erase_if(chars, [&](char32_t c) {
    if (options.strip_whitespace && u_isUWhiteSpace(static_cast<UChar32>(c))) {
      return true;
    }
    if (c < 0x80) return options.strip_ascii_punct && IsAsciiPunct(c);
    return options.strip_cjk_punct && u_ispunct(static_cast<UChar32>(c));
  });
  return chars;
}

CerResult ComputeCer(std::string_view reference, std::string_view hypothesis,
                     const NormalizeOptions& options) {
  const std::u32string ref = NormalizeForScoring(reference, options);
  const std::u32string hyp = NormalizeForScoring(hypothesis, options);
  return ComputeCer(std::span<const char32_t>(ref.data(), ref.size()),
                    std::span<const char32_t>(hyp.data(), hyp.size()));
}

EntityHits CountEntityHits(std::span<const std::string> entities,
                           std::string_view hypothesis) {
  EntityHits h;
  for (const auto& e : entities) {
    ++h.total;
    if (hypothesis.find(e) != std::string_view::npos) ++h.hits;
  }
  return h;
}

CaseStats ComputeCaseStats(std::span<const double> before,
                           std::span<const double> after) {
  if (before.size() != after.size()) {
    throw Error("case statistics need index-aligned lists (" +
                std::to_string(before.size()) + " vs " +
                std::to_string(after.size()) + ")");
  }
  CaseStats s;
  for (size_t i = 0; i < before.size(); ++i) {
    if (after[i] < before[i]) {
      ++s.good;
    } else if (after[i] > before[i]) {
      ++s.bad;
    } else {
      ++s.unchanged;
    }
  }
  if (!before.empty()) {
    const double n = static_cast<double>(before.size());
    s.good_pct = 100.0 * static_cast<double>(s.good) / n;
    s.bad_pct = 100.0 * static_cast<double>(s.bad) / n;
    s.unchanged_pct = 100.0 * static_cast<double>(s.unchanged) / n;
  }
  return s;
}

std::vector<double> SystemScores::PerUtteranceCer() const {
  std::vector<double> out;
  out.reserve(utterances.size());
  for (const auto& u : utterances) out.push_back(u.cer.value);
  return out;
}

Json SystemScores::ToJson(bool include_utterances) const {
  Json j{{"utterances", utterances.size()},
         {"pooled_cer", pooled_cer},
         {"mean_cer", mean_cer},
         {"errors", total_errors},
         {"reference_chars", total_ref_len},
         {"substitutions", totals.substitutions},
         {"deletions", totals.deletions},
         {"insertions", totals.insertions},
         {"entity_hits", entities.hits},
         {"entity_total", entities.total},
         {"empty_references", empty_references}};
  const auto recall = entities.recall();
  j["entity_recall"] = recall ? Json(*recall) : Json(nullptr);
  if (include_utterances) {
    Json list = Json::array();
    for (const auto& u : utterances) {
      list.push_back({{"id", u.id},
                      {"errors", u.cer.errors},
                      {"reference_chars", u.cer.ref_len},
                      {"cer", u.cer.value},
                      {"empty_reference", u.cer.empty_reference},
                      {"entity_hits", u.entities.hits},
                      {"entity_total", u.entities.total}});
    }
    j["per_utterance"] = std::move(list);
  }
  return j;
}

SystemScores ScoreSystem(std::span<const Utterance> utterances,
                         std::span<const std::string> outputs,
                         const NormalizeOptions& options) {
  if (utterances.size() != outputs.size()) {
    throw Error("scoring needs one output per utterance");
  }
  SystemScores s;
  double cer_sum = 0.0;
  for (size_t i = 0; i < utterances.size(); ++i) {
    UtteranceScore u;
    u.id = utterances[i].id;
    u.cer = ComputeCer(utterances[i].reference, outputs[i], options);
    u.entities = CountEntityHits(utterances[i].entities, outputs[i]);
    s.totals += u.cer.counts;
    s.total_errors += u.cer.errors;
    s.total_ref_len += u.cer.ref_len;
    s.entities.hits += u.entities.hits;
    s.entities.total += u.entities.total;
    if (u.cer.empty_reference) ++s.empty_references;
    cer_sum += u.cer.value;
    s.utterances.push_back(std::move(u));
  }
  s.pooled_cer = Ratio(s.total_errors, s.total_ref_len);
  s.mean_cer = utterances.empty()
                   ? 0.0
                   : cer_sum / static_cast<double>(utterances.size());
  return s;
}

CorpusReport EvaluateCorpus(std::span<const Utterance> utterances,
                            std::span<const std::string> corrected,
                            const NormalizeOptions& options) {
  std::vector<std::string> hypotheses;
  hypotheses.reserve(utterances.size());
  for (const auto& u : utterances) {
    if (!u.hypothesis) {
      throw InputError("utterance '" + u.id + "' has no hypothesis");
    }
    hypotheses.push_back(*u.hypothesis);
  }
  CorpusReport report;
  report.normalization = options;
  report.baseline = ScoreSystem(utterances, hypotheses, options);
  report.system = ScoreSystem(utterances, corrected, options);
  const auto before = report.baseline.PerUtteranceCer();
  const auto after = report.system.PerUtteranceCer();
  report.cases = ComputeCaseStats(before, after);
  return report;
}

Json CorpusReport::ToJson() const {
  return Json{{"baseline", baseline.ToJson(false)},
              {"system", system.ToJson(true)},
              {"cases",
               {{"good", cases.good},
                {"bad", cases.bad},
                {"unchanged", cases.unchanged},
                {"good_pct", cases.good_pct},
                {"bad_pct", cases.bad_pct},
                {"unchanged_pct", cases.unchanged_pct}}},
              {"normalization", normalization.ToJson()}};
}

std::string CorpusReport::ToTable() const {
  auto recall = [](const SystemScores& s) {
    const auto r = s.entities.recall();
    return r ? Fixed(100.0 * *r) : std::string("n/a");
  };
  char line[256];
  std::ostringstream os;
  std::snprintf(line, sizeof(line), "%-10s %10s %10s %10s %8s %8s %8s\n",
                "", "CER(%)", "meanCER(%)", "Recall(%)", "S", "D", "I");
  os << line;
  for (const auto* s : {&baseline, &system}) {
    std::snprintf(line, sizeof(line), "%-10s %10s %10s %10s %8zu %8zu %8zu\n",
                  s == &baseline ? "baseline" : "system",
                  Fixed(100.0 * s->pooled_cer).c_str(),
                  Fixed(100.0 * s->mean_cer).c_str(), recall(*s).c_str(),
                  s->totals.substitutions, s->totals.deletions,
                  s->totals.insertions);
    os << line;
  }
  std::snprintf(line, sizeof(line),
                "cases: good %s%%  bad %s%%  unchanged %s%%  (n=%zu)\n",
                Fixed(cases.good_pct).c_str(), Fixed(cases.bad_pct).c_str(),
                Fixed(cases.unchanged_pct).c_str(),
                cases.good + cases.bad + cases.unchanged);
  os << line;
  if (system.empty_references > 0) {
    os << "warning: " << system.empty_references
       << " utterance(s) with empty reference (CER capped at 1)\n";
  }
  return os.str();
}

namespace {

std::string CsvField(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + "\"";
}

}  // namespace

std::string CorpusReport::PerUtteranceCsv() const {
  std::ostringstream os;
  os << "id,ref_chars,baseline_errors,system_errors,baseline_cer,system_cer,"
        "case\n";
  for (size_t i = 0; i < system.utterances.size(); ++i) {
    const auto& b = baseline.utterances[i];
    const auto& s = system.utterances[i];
    os << CsvField(s.id) << ',' << s.cer.ref_len << ',' << b.cer.errors << ','
       << s.cer.errors << ',' << Fixed(b.cer.value, 6) << ','
       << Fixed(s.cer.value, 6) << ',' << CaseLabel(b.cer.value, s.cer.value)
       << '\n';
  }
  return os.str();
}

}  // namespace pygec
