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

#include "pygec/synth.h"

#include <algorithm>
#include <cstdio>
#include <numeric>

#include "pygec/common.h"
#include "pygec/parallel.h"
#include "pygec/utf8.h"

namespace pygec {
namespace {

constexpr int kMaxRedraws = 64;

// Reading keys of `text` in context; characters without a reading key as
// themselves.
std::vector<std::string> ContextKeys(std::u32string_view text,
                                     const PinyinDictionary& pdict, ToneMode mode) {
  const PinyinSequence seq = TextToPinyin(EncodeUtf8(text), pdict);
  std::vector<std::string> keys;
  keys.reserve(seq.size());
  for (const auto& item : seq) {
    keys.push_back(item.reading ? item.reading->Key(mode) : EncodeUtf8(item.ch));
  }
  return keys;
}

// Homophones of text[pos] whose substitution leaves the in-context Pinyin of
// the whole sentence unchanged. Polyphone word overrides make this depend on
// the neighbours, not only on the character's own reading.
std::vector<char32_t> SafeHomophones(std::u32string& text, size_t pos,
                                     const std::vector<std::string>& keys,
                                     const HomophoneDictionary& hdict,
                                     const PinyinDictionary& pdict) {
  const char32_t original = text[pos];
  std::vector<char32_t> out;
  for (char32_t h : hdict.HomophonesOf(original, pdict)) {
    text[pos] = h;
    if (ContextKeys(text, pdict, hdict.mode()) == keys) out.push_back(h);
  }
  text[pos] = original;
  return out;
}

struct SentenceWork {
  SynthesizedSentence sentence;
  std::vector<TrainingRecord> records;
  size_t replaced_words = 0;
};

void EmitRecords(const SynthesizedSentence& s, const TaskToggles& tasks,
                 const PinyinDictionary& pdict,
                 std::vector<TrainingRecord>& out) {
  const std::string ref_pinyin = RenderPinyin(s.reference, pdict);
  const std::string hyp_pinyin = RenderPinyin(s.hypothesis, pdict);
  auto add = [&](TaskKind task, std::string prompt, std::string target) {
    out.push_back({task, std::move(prompt), std::move(target), s.id});
  };
  if (tasks.direct) {
    add(TaskKind::kDirect, BuildPrompt(TaskKind::kDirect, s.hypothesis),
        s.reference);
  }
  if (tasks.pygec) {
    add(TaskKind::kPyGec, BuildPrompt(TaskKind::kPyGec, s.hypothesis, hyp_pinyin),
        s.reference);
  }
  if (tasks.pinyin2text_reference) {
    add(TaskKind::kPinyinToText,
        BuildPrompt(TaskKind::kPinyinToText, s.reference, ref_pinyin),
        s.reference);
  }
  if (tasks.pinyin2text_hypothesis) {
    add(TaskKind::kPinyinToText,
        BuildPrompt(TaskKind::kPinyinToText, s.hypothesis, hyp_pinyin),
        s.reference);
  }
  if (tasks.text2pinyin) {
    add(TaskKind::kTextToPinyin,
        BuildPrompt(TaskKind::kTextToPinyin, s.reference, std::nullopt, s.reference),
        ref_pinyin);
  }
}

void CheckProbability(double p, const char* name) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw InputError(std::string("synthesis.") + name + " must be in [0, 1]");
  }
}

}  // namespace

void SynthesisConfig::Validate() const {
  CheckProbability(sentence_error_prob, "sentence_error_prob");
  CheckProbability(char_sub_prob, "char_sub_prob");
  if (words_per_sentence < 1) {
    throw InputError("synthesis.words_per_sentence must be >= 1");
  }
  if (indel_prob != 0.0) {
    throw InputError("synthesis.indel_prob: insertion/deletion noise is not supported");
  }
}

Json SynthesisConfig::ToJson() const {
  return Json{{"sentence_error_prob", sentence_error_prob},
              {"top_k_filter", top_k_filter},
              {"words_per_sentence", words_per_sentence},
              {"char_sub_prob", char_sub_prob},
              {"seed", seed},
              {"indel_prob", indel_prob},
              {"tasks",
               {{"direct", tasks.direct},
                {"pygec", tasks.pygec},
                {"pinyin2text_reference", tasks.pinyin2text_reference},
                {"pinyin2text_hypothesis", tasks.pinyin2text_hypothesis},
                {"text2pinyin", tasks.text2pinyin}}}};
}

SynthesisConfig SynthesisConfig::FromJson(const Json& j) {
  if (!j.is_object()) throw InputError("synthesis config must be an object");
  SynthesisConfig c;
  try {
    c.sentence_error_prob = j.value("sentence_error_prob", c.sentence_error_prob);
    c.top_k_filter = j.value("top_k_filter", c.top_k_filter);
    c.words_per_sentence = j.value("words_per_sentence", c.words_per_sentence);
    c.char_sub_prob = j.value("char_sub_prob", c.char_sub_prob);
    c.seed = j.value("seed", c.seed);
    c.indel_prob = j.value("indel_prob", c.indel_prob);
    if (auto it = j.find("tasks"); it != j.end()) {
      c.tasks.direct = it->value("direct", c.tasks.direct);
      c.tasks.pygec = it->value("pygec", c.tasks.pygec);
      c.tasks.pinyin2text_reference =
          it->value("pinyin2text_reference", c.tasks.pinyin2text_reference);
      c.tasks.pinyin2text_hypothesis =
          it->value("pinyin2text_hypothesis", c.tasks.pinyin2text_hypothesis);
      c.tasks.text2pinyin = it->value("text2pinyin", c.tasks.text2pinyin);
    }
  } catch (const Json::exception& e) {
    throw InputError(std::string("bad synthesis config: ") + e.what());
  }
  return c;
}

Json TrainingRecord::ToJson() const {
  return Json{{"task", TaskName(task)},
              {"prompt", prompt},
              {"target", target},
              {"meta", meta}};
}

Json SynthesisStats::ToJson() const {
  return Json{{"sentences", sentences},
              {"selected", selected},
              {"corrupted", corrupted},
              {"flagged", flagged},
              {"eligible_words", eligible_words},
              {"sentences_with_eligible", sentences_with_eligible},
              {"replaced_words", replaced_words},
              {"replaced_chars", replaced_chars},
              {"records", records}};
}

std::vector<WordSpan> EligibleWords(std::u32string_view sentence,
                                    std::span<const WordSpan> segmentation,
                                    const std::unordered_set<std::string>& frequent,
                                    const HomophoneDictionary& hdict,
                                    const PinyinDictionary& pdict) {
  std::vector<WordSpan> out;
  std::u32string text(sentence);
  std::vector<std::string> keys;
  for (const auto& span : segmentation) {
    const auto word = sentence.substr(span.begin, span.length);
    if (frequent.count(EncodeUtf8(word)) > 0) continue;
    if (keys.empty()) keys = ContextKeys(sentence, pdict, hdict.mode());
    for (size_t k = span.begin; k < span.begin + span.length; ++k) {
      if (!SafeHomophones(text, k, keys, hdict, pdict).empty()) {
        out.push_back(span);
        break;
      }
    }
  }
  return out;
}

CorruptionResult CorruptSentence(std::u32string_view reference,
                                 std::span<const WordSpan> eligible,
                                 const SynthesisConfig& config,
                                 const HomophoneDictionary& hdict,
                                 const PinyinDictionary& pdict, Rng& rng) {
  CorruptionResult result;
  std::u32string out(reference);
  if (eligible.empty()) {
    result.text = EncodeUtf8(out);
    result.flagged = true;
    return result;
  }

  std::vector<size_t> order(eligible.size());
  std::iota(order.begin(), order.end(), 0);
  const size_t picks = std::min(config.words_per_sentence, order.size());
  for (size_t i = 0; i < picks; ++i) {
    const size_t j = i + static_cast<size_t>(rng.Uniform(order.size() - i));
    std::swap(order[i], order[j]);
  }
  order.resize(picks);
  std::sort(order.begin(), order.end());

  // Every accepted substitution keeps the sentence's Pinyin identical to the
  // reference, so `keys` stays valid as `out` changes.
  const auto keys = ContextKeys(reference, pdict, hdict.mode());
  for (size_t idx : order) {
    const WordSpan& word = eligible[idx];
    size_t replaced = 0;
    if (config.char_sub_prob > 0.0) {
      for (int pass = 0; pass < kMaxRedraws && replaced == 0; ++pass) {
        for (size_t k = word.begin; k < word.begin + word.length; ++k) {
          if (hdict.HomophonesOf(reference[k], pdict).empty()) continue;
          if (!rng.Bernoulli(config.char_sub_prob)) continue;
          const auto cands = SafeHomophones(out, k, keys, hdict, pdict);
          if (cands.empty()) continue;
          out[k] = cands[rng.Uniform(cands.size())];
          ++replaced;
        }
      }
    }
    if (replaced == 0) {
      std::vector<std::pair<size_t, std::vector<char32_t>>> slots;
      for (size_t k = word.begin; k < word.begin + word.length; ++k) {
        auto cands = SafeHomophones(out, k, keys, hdict, pdict);
        if (!cands.empty()) slots.emplace_back(k, std::move(cands));
      }
      if (slots.empty()) continue;  // caller passed a non-eligible span
      const auto& [pos, cands] = slots[rng.Uniform(slots.size())];
      out[pos] = cands[rng.Uniform(cands.size())];
      replaced = 1;
    }
    result.replaced_words.push_back(word);
    result.replaced_chars += replaced;
  }
  result.text = EncodeUtf8(out);
  return result;
}

std::vector<SourceSentence> SegmentCorpus(std::span<const std::string> references,
                                          const Lexicon& lexicon) {
  std::vector<SourceSentence> out;
  out.reserve(references.size());
  for (size_t i = 0; i < references.size(); ++i) {
    char id[32];
    std::snprintf(id, sizeof(id), "s%06zu", i);
    out.push_back({id, Segment(references[i], lexicon)});
  }
  return out;
}

SynthesisOutput SynthesizeDataset(std::span<const SourceSentence> corpus,
                                  const SynthesisConfig& config,
                                  const HomophoneDictionary& hdict,
                                  const PinyinDictionary& pdict,
                                  size_t workers) {
  config.Validate();
  std::vector<std::vector<std::string>> segmented;
  segmented.reserve(corpus.size());
  for (const auto& sentence : corpus) segmented.push_back(sentence.words);
  const auto frequent =
      TopKWords(BuildFrequencyTable(segmented), config.top_k_filter);

  std::vector<SentenceWork> work(corpus.size());
  ParallelFor(corpus.size(), workers, [&](size_t i) {
    const SourceSentence& src = corpus[i];
    SentenceWork& w = work[i];
    SynthesizedSentence& s = w.sentence;
    s.id = src.id;
    std::u32string chars;
    std::vector<WordSpan> spans;
    for (const auto& word : src.words) {
      const std::u32string wc = DecodeUtf8(word);
      spans.push_back({chars.size(), wc.size()});
      chars += wc;
    }
    s.reference = EncodeUtf8(chars);
    s.hypothesis = s.reference;

    const auto eligible = EligibleWords(chars, spans, frequent, hdict, pdict);
    s.eligible_words = eligible.size();
    Rng rng(Rng::SubstreamSeed(config.seed, i));
    s.selected = rng.Bernoulli(config.sentence_error_prob);
    if (s.selected) {
      CorruptionResult c = CorruptSentence(chars, eligible, config, hdict, pdict, rng);
      s.hypothesis = std::move(c.text);
      s.flagged = c.flagged;
      s.replaced_chars = c.replaced_chars;
      w.replaced_words = c.replaced_words.size();
    }
    EmitRecords(s, config.tasks, pdict, w.records);
  });

  SynthesisOutput out;
  out.stats.sentences = corpus.size();
  for (auto& w : work) {
    auto& s = w.sentence;
    out.stats.selected += s.selected;
    out.stats.corrupted += s.replaced_chars > 0;
    out.stats.flagged += s.flagged;
    out.stats.eligible_words += s.eligible_words;
    out.stats.sentences_with_eligible += s.eligible_words > 0;
    out.stats.replaced_words += w.replaced_words;
    out.stats.replaced_chars += s.replaced_chars;
    for (auto& r : w.records) out.records.push_back(std::move(r));
    out.sentences.push_back(std::move(s));
  }
  out.stats.records = out.records.size();
  return out;
}

}  // namespace pygec
