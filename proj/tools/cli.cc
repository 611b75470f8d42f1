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

#include "cli.h"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <unordered_map>

#include "CLI11.hpp"
#include "pygec/common.h"
#include "pygec/corpus.h"
#include "pygec/corrector.h"
#include "pygec/hash.h"
#include "pygec/jsonl.h"
#include "pygec/parallel.h"
#include "pygec/response_cache.h"
#include "pygec/tensor_dump.h"

namespace pygec::cli {

namespace fs = std::filesystem;

namespace {

const std::set<std::string>& ConfigKeys() {
  static const std::set<std::string> keys = {
      "pinyin_dict", "homophone_dict", "lexicon",   "corpus",
      "cache",       "output_dir",     "seed",      "tone_mode",
      "presegmented", "validate_entities", "workers", "synthesis",
      "endpoint",    "metrics",        "attention", "layer",
      "pca_components", "rerank"};
  return keys;
}

Json PathJson(const std::optional<fs::path>& p) {
  if (!p) return nullptr;
  return p->generic_string();
}

AttentionOptions AttentionFromJson(const Json& j) {
  if (!j.is_object()) throw InputError("attention config must be an object");
  AttentionOptions a;
  for (const auto& [key, value] : j.items()) {
    if (key == "aggregation") {
      const auto name = value.get<std::string>();
      if (name == "mean") {
        a.aggregation = AttentionAggregation::kMean;
      } else if (name == "sum") {
        a.aggregation = AttentionAggregation::kSum;
      } else {
        throw InputError("attention.aggregation must be 'mean' or 'sum'");
      }
    } else if (key == "exclude_template_keys") {
      a.exclude_template_keys = value.get<bool>();
    } else if (key == "row_sum_tolerance") {
      a.row_sum_tolerance = value.get<double>();
    } else {
      throw InputError("unknown attention config key '" + key + "'");
    }
  }
  return a;
}

std::string Num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

std::string CsvField(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + "\"";
}

Provenance MakeProvenance(const RunConfig& cfg, std::string artifact) {
  return Provenance{std::move(artifact), cfg.Hash(), cfg.seed};
}

fs::path DataFile(const char* name) { return DefaultDataDir() / name; }

PinyinDictionary LoadPinyin(const RunConfig& cfg) {
  return PinyinDictionary::Load(cfg.pinyin_dict.value_or(DataFile("pinyin.tsv")));
}

HomophoneDictionary LoadHomophones(const RunConfig& cfg,
                                   const PinyinDictionary& pdict) {
  if (cfg.homophone_dict) {
    return HomophoneDictionary::Load(*cfg.homophone_dict, cfg.tone_mode);
  }
  return HomophoneDictionary::Derive(pdict, cfg.tone_mode);
}

fs::path RequireCorpus(const RunConfig& cfg, const std::string& flag) {
  if (!flag.empty()) return flag;
  if (cfg.corpus) return *cfg.corpus;
  throw InputError("no utterance file: set \"corpus\" in the config or pass a path");
}

std::vector<Utterance> LoadCorpusUtterances(const RunConfig& cfg,
                                            const fs::path& path) {
  return LoadUtterances(path, {cfg.validate_entities});
}

void RequireHypotheses(std::span<const Utterance> utts) {
  for (const auto& u : utts) {
    if (!u.hypothesis) {
      throw InputError("utterance '" + u.id + "' has no hypothesis");
    }
  }
}

std::string JsonLines(const Provenance& prov, std::span<const Json> records) {
  std::string s = prov.HeaderLine() + "\n";
  for (const auto& r : records) s += DumpLine(r) + "\n";
  return s;
}

// Transport stack for `correct` and `ensemble --method llm-rerank`.
struct EndpointFlags {
  std::string replay;
  std::string record;
  std::string base_url;
  std::string model;
};

std::shared_ptr<ChatTransport> MakeTransport(const EndpointConfig& endpoint,
                                             const EndpointFlags& flags) {
  std::shared_ptr<ChatTransport> t;
  if (!flags.replay.empty()) {
    t = FixtureTransport::Load(flags.replay);
  } else {
    t = std::make_shared<HttpChatTransport>(endpoint);
  }
  if (!flags.record.empty()) {
    t = std::make_shared<RecordingTransport>(t, flags.record);
  }
  return t;
}

std::unique_ptr<ResponseCache> OpenCache(const RunConfig& cfg) {
  if (cfg.cache) return std::make_unique<ResponseCache>(*cfg.cache);
  return std::make_unique<ResponseCache>();
}

// ---- pinyin ----

int CmdPinyin(const RunConfig& cfg, const std::vector<std::string>& texts,
              const std::string& input, std::istream& in, std::ostream& out) {
  const PinyinDictionary dict = LoadPinyin(cfg);
  auto emit = [&](std::string line) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    out << RenderPinyin(line, dict) << '\n';
  };
  if (!texts.empty()) {
    for (const auto& t : texts) emit(t);
    return kExitOk;
  }
  std::ifstream file;
  std::istream* src = &in;
  if (!input.empty()) {
    file.open(input, std::ios::binary);
    if (!file) throw InputError("cannot open " + input);
    src = &file;
  }
  std::string line;
  while (std::getline(*src, line)) emit(line);
  return kExitOk;
}

// ---- synth ----

int CmdSynth(const RunConfig& cfg, const std::string& corpus_flag,
             std::ostream& out) {
  const fs::path corpus_path = RequireCorpus(cfg, corpus_flag);
  const PinyinDictionary pdict = LoadPinyin(cfg);
  const HomophoneDictionary hdict = LoadHomophones(cfg, pdict);

  std::vector<std::string> ids;
  std::vector<std::string> references;
  std::vector<std::vector<std::string>> entities;
  if (corpus_path.extension() == ".jsonl") {
    for (auto& u : LoadCorpusUtterances(cfg, corpus_path)) {
      ids.push_back(std::move(u.id));
      references.push_back(std::move(u.reference));
      entities.push_back(std::move(u.entities));
    }
  } else {
    references = LoadSentences(corpus_path);
    entities.resize(references.size());
  }

  std::vector<SourceSentence> sources;
  size_t lexicon_size = 0;
  if (cfg.presegmented) {
    for (size_t i = 0; i < references.size(); ++i) {
      char id[32];
      std::snprintf(id, sizeof(id), "s%06zu", i);
      sources.push_back({id, SplitPresegmented(references[i])});
    }
  } else {
    const Lexicon lexicon =
        Lexicon::Load(cfg.lexicon.value_or(DataFile("lexicon.txt")));
    lexicon_size = lexicon.size();
    sources = SegmentCorpus(references, lexicon);
  }
  if (!ids.empty()) {
    for (size_t i = 0; i < sources.size(); ++i) sources[i].id = ids[i];
  }

  SynthesisConfig synthesis = cfg.synthesis;
  synthesis.seed = cfg.seed;
  const SynthesisOutput result =
      SynthesizeDataset(sources, synthesis, hdict, pdict, cfg.workers);

  std::vector<Json> records;
  records.reserve(result.records.size());
  for (const auto& r : result.records) records.push_back(r.ToJson());

  std::vector<Json> utts;
  utts.reserve(result.sentences.size());
  for (size_t i = 0; i < result.sentences.size(); ++i) {
    const auto& s = result.sentences[i];
    Utterance u{s.id, s.reference, s.hypothesis, entities[i], "synth"};
    Json j = u.ToJson();
    j["selected"] = s.selected;
    j["flagged"] = s.flagged;
    j["replaced_chars"] = s.replaced_chars;
    utts.push_back(std::move(j));
  }

  size_t homophone_groups = 0;
  for (const auto& [key, chars] : hdict.by_syllable()) {
    if (chars.size() > 1) ++homophone_groups;
  }
  Json manifest{{"provenance", MakeProvenance(cfg, "manifest").ToJson()},
                {"config", cfg.ToJson()},
                {"corpus", corpus_path.generic_string()},
                {"stats", result.stats.ToJson()},
                {"dictionary",
                 {{"characters", pdict.char_count()},
                  {"word_overrides", pdict.word_count()},
                  {"homophone_groups", homophone_groups},
                  {"tone_mode", ToneModeName(hdict.mode())}}},
                {"lexicon_words", lexicon_size}};

  const fs::path dir = cfg.output_dir;
  WriteFileAtomic(dir / "dataset.jsonl",
                  JsonLines(MakeProvenance(cfg, "dataset"), records));
  WriteFileAtomic(dir / "utterances.jsonl",
                  JsonLines(MakeProvenance(cfg, "utterances"), utts));
  WriteFileAtomic(dir / "manifest.json", manifest.dump(2) + "\n");

  out << "synth: " << result.stats.sentences << " sentences, "
      << result.stats.corrupted << " corrupted, " << result.stats.flagged
      << " flagged, " << result.stats.records << " records -> "
      << dir.generic_string() << '\n';
  return kExitOk;
}

// ---- correct ----

struct CorrectFlags {
  std::vector<std::string> tasks;
  std::string input;
  std::string output;
  bool no_latency = false;
  EndpointFlags endpoint;
};

int CmdCorrect(const RunConfig& cfg, const CorrectFlags& flags,
               std::ostream& out, std::ostream& err) {
  if (flags.tasks.empty()) throw InputError("correct: at least one --task is required");
  std::vector<TaskKind> tasks;
  for (const auto& name : flags.tasks) {
    const TaskKind t = ParseTaskKind(name);
    if (t == TaskKind::kRerank) {
      throw InputError("correct: rerank is run through `pygec ensemble`");
    }
    tasks.push_back(t);
  }
  const auto utts = LoadCorpusUtterances(cfg, RequireCorpus(cfg, flags.input));
  RequireHypotheses(utts);
  const PinyinDictionary pdict = LoadPinyin(cfg);

  ChatClient client(cfg.endpoint, MakeTransport(cfg.endpoint, flags.endpoint));
  auto cache = OpenCache(cfg);
  Corrector corrector(client, *cache, pdict);
  const auto results = corrector.BatchCorrect(utts, tasks);

  std::vector<Json> lines;
  size_t failed = 0;
  size_t hits = 0;
  for (const auto& r : results) {
    lines.push_back(r.ToJson(!flags.no_latency));
    failed += r.failed;
    hits += r.cache_hit;
  }
  const fs::path path = flags.output.empty()
                            ? cfg.output_dir / "corrections.jsonl"
                            : fs::path(flags.output);
  WriteFileAtomic(path, JsonLines(MakeProvenance(cfg, "corrections"), lines));

  const double rate = FailureRate(results);
  out << "correct: " << results.size() << " items, " << failed << " failed, "
      << hits << " cache hits, " << client.retries() << " retries -> "
      << path.generic_string() << '\n';
  if (rate > cfg.endpoint.max_failure_rate) {
    err << "pygec: failure rate " << Num(rate) << " exceeds max_failure_rate "
        << Num(cfg.endpoint.max_failure_rate) << '\n';
    return kExitPartialFailure;
  }
  return kExitOk;
}

// ---- evaluate ----

struct EvaluateFlags {
  std::string utterances;
  std::string corrections;
  std::string task;
  std::string output;
  std::string per_utterance;
};

// Corrected text per utterance id from a corrections or selections file.
std::unordered_map<std::string, std::string> LoadOutputs(const fs::path& path,
                                                         const std::string& task) {
  std::unordered_map<std::string, std::string> texts;
  ForEachJsonLine(path, [&](const Json& j, size_t line) {
    if (!task.empty() && j.value("task", std::string()) != task) return;
    const auto id = j.at("id").get<std::string>();
    if (!texts.emplace(id, j.at("text").get<std::string>()).second) {
      throw InputError(path.generic_string() + ":" + std::to_string(line) +
                       ": second output for '" + id +
                       "' (select one with --task)");
    }
  });
  return texts;
}

int CmdEvaluate(const RunConfig& cfg, const EvaluateFlags& flags,
                std::ostream& out) {
  const fs::path utt_path = RequireCorpus(cfg, flags.utterances);
  const auto utts = LoadCorpusUtterances(cfg, utt_path);
  RequireHypotheses(utts);

  std::vector<std::string> corrected;
  corrected.reserve(utts.size());
  if (flags.corrections.empty()) {
    for (const auto& u : utts) corrected.push_back(*u.hypothesis);
  } else {
    auto texts = LoadOutputs(flags.corrections, flags.task);
    for (const auto& u : utts) {
      auto it = texts.find(u.id);
      if (it == texts.end()) {
        throw InputError(flags.corrections + ": no output for utterance '" +
                         u.id + "'");
      }
      corrected.push_back(std::move(it->second));
    }
  }

  const CorpusReport report = EvaluateCorpus(utts, corrected, cfg.metrics);
  out << report.ToTable();
  if (!flags.output.empty()) {
    Json j{{"provenance", MakeProvenance(cfg, "report").ToJson()},
           {"utterances", utt_path.generic_string()},
           {"corrections", flags.corrections},
           {"task", flags.task},
           {"report", report.ToJson()}};
    WriteFileAtomic(flags.output, j.dump(2) + "\n");
  }
  if (!flags.per_utterance.empty()) {
    WriteFileAtomic(flags.per_utterance, report.PerUtteranceCsv());
  }
  return kExitOk;
}

// ---- ensemble ----

struct EnsembleFlags {
  std::string method;
  std::string input;
  std::vector<std::string> corrections;
  std::string utterances;
  std::string output;
  bool exclude_input = false;
  EndpointFlags endpoint;
};

std::vector<CandidateSet> CandidatesFromCorrections(
    std::span<const Utterance> utts, std::span<const std::string> files) {
  std::vector<CandidateSet> sets(utts.size());
  std::unordered_map<std::string, size_t> index;
  for (size_t i = 0; i < utts.size(); ++i) {
    sets[i].id = utts[i].id;
    sets[i].input = *utts[i].hypothesis;
    index.emplace(utts[i].id, i);
  }
  for (size_t f = 0; f < files.size(); ++f) {
    ForEachJsonLine(files[f], [&](const Json& j, size_t line) {
      const auto id = j.at("id").get<std::string>();
      auto it = index.find(id);
      if (it == index.end()) {
        throw InputError(files[f] + ":" + std::to_string(line) +
                         ": unknown utterance '" + id + "'");
      }
      auto& cands = sets[it->second].candidates;
      std::string source = j.value("task", std::string("c"));
      for (const auto& c : cands) {
        if (c.source == source) {
          source += "@" + std::to_string(f + 1);
          break;
        }
      }
      cands.push_back({source, j.at("text").get<std::string>()});
    });
  }
  for (const auto& s : sets) s.Validate();
  return sets;
}

int CmdEnsemble(const RunConfig& cfg, const EnsembleFlags& flags,
                std::ostream& out, std::ostream& err) {
  if (flags.method != "rover" && flags.method != "pinyin-rerank" &&
      flags.method != "llm-rerank") {
    throw InputError("--method must be rover, pinyin-rerank or llm-rerank");
  }
  std::vector<CandidateSet> sets;
  if (!flags.input.empty()) {
    if (!flags.corrections.empty()) {
      throw InputError("ensemble: pass either --input or --corrections");
    }
    sets = LoadCandidateSets(flags.input);
  } else if (!flags.corrections.empty()) {
    const auto utts = LoadCorpusUtterances(cfg, RequireCorpus(cfg, flags.utterances));
    RequireHypotheses(utts);
    sets = CandidatesFromCorrections(utts, flags.corrections);
  } else {
    throw InputError("ensemble: no candidates (--input or --corrections)");
  }

  PinyinRerankOptions options = cfg.rerank;
  if (flags.exclude_input) options.include_input = false;

  std::vector<Json> lines(sets.size());
  size_t fallbacks = 0;
  if (flags.method == "rover") {
    for (size_t i = 0; i < sets.size(); ++i) {
      lines[i] = Json{{"id", sets[i].id}, {"method", flags.method},
                      {"text", RoverMerge(sets[i])}, {"selected", nullptr}};
    }
  } else if (flags.method == "pinyin-rerank") {
    const PinyinDictionary pdict = LoadPinyin(cfg);
    for (size_t i = 0; i < sets.size(); ++i) {
      const auto r = PinyinRerank(sets[i], pdict, options);
      Json scores = Json::array();
      for (const auto& s : r.scores) scores.push_back(s.score);
      lines[i] = Json{{"id", sets[i].id},
                      {"method", flags.method},
                      {"text", r.text},
                      {"selected", r.selected},
                      {"source", sets[i].candidates[r.selected].source},
                      {"scores", scores}};
    }
  } else {
    const PinyinDictionary pdict = LoadPinyin(cfg);
    ChatClient client(cfg.endpoint, MakeTransport(cfg.endpoint, flags.endpoint));
    auto cache = OpenCache(cfg);
    Corrector corrector(client, *cache, pdict);
    const auto results = BatchLlmRerank(sets, corrector, options);
    for (size_t i = 0; i < sets.size(); ++i) {
      const auto& r = results[i];
      fallbacks += r.fallback;
      lines[i] = Json{{"id", sets[i].id},
                      {"method", flags.method},
                      {"text", r.text},
                      {"selected", r.selected},
                      {"source", sets[i].candidates[r.selected].source},
                      {"raw", r.raw},
                      {"fallback", r.fallback},
                      {"cache_hit", r.cache_hit}};
      if (!r.error.empty()) lines[i]["error"] = r.error;
    }
  }

  const fs::path path = flags.output.empty()
                            ? cfg.output_dir / "selections.jsonl"
                            : fs::path(flags.output);
  WriteFileAtomic(path, JsonLines(MakeProvenance(cfg, "selections"), lines));
  out << "ensemble: " << sets.size() << " sets (" << flags.method << ")";
  if (flags.method == "llm-rerank") out << ", " << fallbacks << " fallbacks";
  out << " -> " << path.generic_string() << '\n';

  const double rate = sets.empty() ? 0.0
                                   : static_cast<double>(fallbacks) /
                                         static_cast<double>(sets.size());
  if (rate > cfg.endpoint.max_failure_rate) {
    err << "pygec: fallback rate " << Num(rate)
        << " exceeds max_failure_rate " << Num(cfg.endpoint.max_failure_rate)
        << '\n';
    return kExitPartialFailure;
  }
  return kExitOk;
}

// ---- analyze ----

struct AnalyzeFlags {
  std::string kind;
  std::vector<std::string> dumps;
  std::string payload;
  std::string output;
};

std::string AttentionTable(const RunConfig& cfg, const std::vector<TensorDump>& dumps) {
  std::string csv = "utt,layer,hypothesis,pinyin,prediction\n";
  std::map<int, std::pair<ComponentScores, size_t>> by_layer;
  bool any_pinyin = false;
  auto row = [&](const std::string& utt, const std::string& layer,
                 const ComponentScores& s, bool has_pinyin) {
    csv += CsvField(utt) + "," + layer + "," + Num(s.hypothesis) + "," +
           (has_pinyin ? Num(s.pinyin) : std::string()) + "," +
           Num(s.prediction) + "\n";
  };
  for (const auto& dump : dumps) {
    for (const auto& [utt, records] : GroupAttention(dump)) {
      const Json spans = records.front().spans.ToJson();
      for (const auto& r : records) {
        if (r.spans.ToJson() != spans) {
          throw InputError("attention records of '" + utt + "' disagree on spans");
        }
      }
      const auto scores = ComponentAttention(records, records.front().spans,
                                             cfg.attention);
      any_pinyin |= scores.has_pinyin;
      for (const auto& l : scores.layers) {
        row(utt, std::to_string(l.layer), l.scores, scores.has_pinyin);
        auto& [acc, n] = by_layer[l.layer];
        acc.hypothesis += l.scores.hypothesis;
        acc.pinyin += l.scores.pinyin;
        acc.prediction += l.scores.prediction;
        ++n;
      }
      row(utt, "total", scores.total, scores.has_pinyin);
    }
  }
  for (const auto& [layer, acc] : by_layer) {
    const double n = static_cast<double>(acc.second);
    ComponentScores mean{acc.first.hypothesis / n, acc.first.pinyin / n,
                         acc.first.prediction / n};
    row("*mean*", std::to_string(layer), mean, any_pinyin);
  }
  return csv;
}

std::vector<HiddenPair> AllPairs(const RunConfig& cfg,
                                 const std::vector<TensorDump>& dumps) {
  std::vector<HiddenPair> pairs;
  for (const auto& dump : dumps) {
    for (auto& p : PairHiddenStates(dump, cfg.layer)) pairs.push_back(std::move(p));
  }
  if (pairs.empty()) throw InputError("dump holds no text/pinyin hidden-state pairs");
  return pairs;
}

std::string AlignmentTable(const RunConfig& cfg,
                           const std::vector<TensorDump>& dumps) {
  const auto pairs = AllPairs(cfg, dumps);
  std::vector<std::pair<Matrix, Matrix>> mats;
  mats.reserve(pairs.size());
  for (const auto& p : pairs) mats.emplace_back(p.text, p.pinyin);
  const AlignmentReport report = AlignmentScore(mats);
  std::string csv = "# mean=" + Num(report.mean) + " min=" +
                    Num(report.quantiles.min) + " q25=" +
                    Num(report.quantiles.q25) + " median=" +
                    Num(report.quantiles.median) + " q75=" +
                    Num(report.quantiles.q75) + " max=" +
                    Num(report.quantiles.max) +
                    " excluded=" + std::to_string(report.excluded) + "\n";
  csv += "utt,cosine\n";
  for (size_t i = 0; i < pairs.size(); ++i) {
    csv += CsvField(pairs[i].utterance_id) + "," +
           (report.cosines[i] ? Num(*report.cosines[i]) : std::string()) + "\n";
  }
  return csv;
}

std::string PcaTable(const RunConfig& cfg, const std::vector<TensorDump>& dumps) {
  const auto pairs = AllPairs(cfg, dumps);
  const auto width = pairs.front().text.cols();
  Matrix data(static_cast<Eigen::Index>(2 * pairs.size()), width);
  for (size_t i = 0; i < pairs.size(); ++i) {
    const Vector tv = TextVector(pairs[i].text);
    const Vector pv = PinyinVector(pairs[i].pinyin, tv,
                                   static_cast<size_t>(pairs[i].text.rows()));
    data.row(static_cast<Eigen::Index>(2 * i)) = tv.transpose();
    data.row(static_cast<Eigen::Index>(2 * i + 1)) = pv.transpose();
  }
  const PcaResult pca = PcaProject(data, cfg.pca_components);
  std::string csv = "# explained_ratio=";
  for (Eigen::Index c = 0; c < pca.explained_ratio.size(); ++c) {
    csv += (c ? ";" : "") + Num(pca.explained_ratio[c]);
  }
  csv += "\nutt,role";
  for (size_t c = 0; c < cfg.pca_components; ++c) {
    csv += ",pc" + std::to_string(c + 1);
  }
  csv += "\n";
  for (Eigen::Index r = 0; r < pca.projections.rows(); ++r) {
    csv += CsvField(pairs[static_cast<size_t>(r / 2)].utterance_id) +
           (r % 2 == 0 ? ",text" : ",pinyin");
    for (Eigen::Index c = 0; c < pca.projections.cols(); ++c) {
      csv += "," + Num(pca.projections(r, c));
    }
    csv += "\n";
  }
  return csv;
}

int CmdAnalyze(const RunConfig& cfg, const AnalyzeFlags& flags, std::ostream& out) {
  if (flags.dumps.empty()) throw InputError("analyze: at least one --dump is required");
  if (!flags.payload.empty() && flags.dumps.size() != 1) {
    throw InputError("analyze: --payload applies to a single --dump");
  }
  std::vector<TensorDump> dumps;
  for (const auto& d : flags.dumps) {
    std::optional<fs::path> payload;
    if (!flags.payload.empty()) payload = flags.payload;
    dumps.push_back(LoadTensorDump(d, payload));
  }

  Json settings{{"kind", flags.kind}};
  std::string table;
  if (flags.kind == "attention") {
    settings["attention"] = cfg.attention.ToJson();
    table = AttentionTable(cfg, dumps);
  } else if (flags.kind == "alignment") {
    settings["layer"] = cfg.layer ? Json(*cfg.layer) : Json("last");
    settings["cosine"] = "per-utterance mean";
    table = AlignmentTable(cfg, dumps);
  } else if (flags.kind == "pca") {
    settings["layer"] = cfg.layer ? Json(*cfg.layer) : Json("last");
    settings["components"] = cfg.pca_components;
    table = PcaTable(cfg, dumps);
  } else {
    throw InputError("--kind must be attention, alignment or pca");
  }
  Json prov = MakeProvenance(cfg, "analysis").ToJson();
  prov["settings"] = settings;
  const std::string content = "# provenance " + prov.dump() + "\n" + table;
  if (flags.output.empty()) {
    out << content;
  } else {
    WriteFileAtomic(flags.output, content);
  }
  return kExitOk;
}

}  // namespace

// ---- RunConfig ----

void RunConfig::Validate() const {
  auto must_exist = [](const std::optional<fs::path>& p, const char* what) {
    if (p && !fs::exists(*p)) {
      throw InputError(std::string(what) + " not found: " + p->generic_string());
    }
  };
  must_exist(pinyin_dict, "pinyin_dict");
  must_exist(homophone_dict, "homophone_dict");
  must_exist(lexicon, "lexicon");
  must_exist(corpus, "corpus");
  if (workers == 0) throw InputError("workers must be at least 1");
  if (pca_components == 0) throw InputError("pca_components must be at least 1");
  if (!(attention.row_sum_tolerance >= 0.0)) {
    throw InputError("attention.row_sum_tolerance must be non-negative");
  }
  synthesis.Validate();
  endpoint.Validate();
}

Json RunConfig::ToJson() const {
  Json j{{"pinyin_dict", PathJson(pinyin_dict)},
         {"homophone_dict", PathJson(homophone_dict)},
         {"lexicon", PathJson(lexicon)},
         {"corpus", PathJson(corpus)},
         {"cache", PathJson(cache)},
         {"output_dir", output_dir.generic_string()},
         {"seed", seed},
         {"tone_mode", ToneModeName(tone_mode)},
         {"presegmented", presegmented},
         {"validate_entities", validate_entities},
         {"workers", workers},
         {"synthesis", synthesis.ToJson()},
         {"endpoint", endpoint.ToJson()},
         {"metrics", metrics.ToJson()},
         {"attention", attention.ToJson()},
         {"layer", layer ? Json(*layer) : Json(nullptr)},
         {"pca_components", pca_components},
         {"rerank", {{"include_input", rerank.include_input}}}};
  j["attention"]["row_sum_tolerance"] = attention.row_sum_tolerance;
  for (auto* key : {"pinyin_dict", "homophone_dict", "lexicon", "corpus", "cache"}) {
    if (j[key].is_null()) j.erase(key);
  }
  if (j["layer"].is_null()) j.erase("layer");
  return j;
}

std::string RunConfig::Hash() const {
  // Where outputs go and how many threads run do not change the results.
  Json j = ToJson();
  j.erase("output_dir");
  j.erase("workers");
  j.erase("cache");
  return Sha256Hex(j.dump());
}

RunConfig RunConfig::FromJson(const Json& j, const fs::path& base_dir) {
  if (!j.is_object()) throw InputError("config must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    if (!ConfigKeys().count(key)) throw InputError("unknown config key '" + key + "'");
  }
  auto path = [&](const char* key) -> std::optional<fs::path> {
    auto it = j.find(key);
    if (it == j.end() || it->is_null()) return std::nullopt;
    fs::path p = it->get<std::string>();
    if (p.is_relative()) p = (base_dir / p).lexically_normal();
    return p;
  };
  RunConfig c;
  try {
    c.pinyin_dict = path("pinyin_dict");
    c.homophone_dict = path("homophone_dict");
    c.lexicon = path("lexicon");
    c.corpus = path("corpus");
    c.cache = path("cache");
    if (auto out = path("output_dir")) c.output_dir = *out;
    if (j.contains("synthesis")) c.synthesis = SynthesisConfig::FromJson(j["synthesis"]);
    c.seed = j.value("seed", c.synthesis.seed);
    c.synthesis.seed = c.seed;
    if (j.contains("tone_mode")) {
      c.tone_mode = ParseToneMode(j["tone_mode"].get<std::string>());
    }
    c.presegmented = j.value("presegmented", c.presegmented);
    c.validate_entities = j.value("validate_entities", c.validate_entities);
    c.workers = j.value("workers", c.workers);
    if (j.contains("endpoint")) c.endpoint = EndpointConfig::FromJson(j["endpoint"]);
    if (j.contains("metrics")) c.metrics = NormalizeOptions::FromJson(j["metrics"]);
    if (j.contains("attention")) c.attention = AttentionFromJson(j["attention"]);
    if (j.contains("layer") && !j["layer"].is_null()) c.layer = j["layer"].get<int>();
    c.pca_components = j.value("pca_components", c.pca_components);
    if (j.contains("rerank")) {
      const Json& r = j["rerank"];
      for (const auto& [key, value] : r.items()) {
        if (key != "include_input") {
          throw InputError("unknown rerank config key '" + key + "'");
        }
      }
      c.rerank.include_input = r.value("include_input", true);
    }
  } catch (const Json::exception& e) {
    throw InputError(std::string("bad config: ") + e.what());
  }
  return c;
}

RunConfig LoadRunConfig(const fs::path& path) {
  const std::string text = ReadFile(path);
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw InputError(path.generic_string() + ": " + e.what());
  }
  fs::path base = path.parent_path();
  if (base.empty()) base = ".";
  return RunConfig::FromJson(j, base);
}

fs::path DefaultDataDir() {
  if (const char* env = std::getenv("PYGEC_DATA_DIR"); env && *env) return env;
  return PYGEC_DEFAULT_DATA_DIR;
}

// ---- command line ----

int RunCli(const std::vector<std::string>& args, std::istream& in,
           std::ostream& out, std::ostream& err) {
  CLI::App app{"Pinyin-aware generative error correction toolkit for Mandarin ASR",
               "pygec"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_version_flag("--version", std::string("pygec ") + kToolkitVersion);

  std::string config_path, pinyin_dict, homophone_dict, lexicon, corpus, cache,
      output_dir, tone_mode;
  uint64_t seed = 0;
  size_t workers = 1;
  app.add_option("--config", config_path, "JSON run config")->check(CLI::ExistingFile);
  app.add_option("--seed", seed, "Global seed (overrides the config)");
  app.add_option("--pinyin-dict", pinyin_dict, "Pinyin dictionary TSV");
  app.add_option("--homophone-dict", homophone_dict, "Homophone dictionary TSV");
  app.add_option("--lexicon", lexicon, "Word list for segmentation");
  app.add_option("--corpus", corpus, "Utterance JSONL or sentence-per-line corpus");
  app.add_option("--cache", cache, "Response cache file");
  app.add_option("--output-dir", output_dir, "Directory for default outputs");
  app.add_option("--tone-mode", tone_mode, "exact or toneless");
  app.add_option("--workers", workers, "Worker threads for synthesis");

  auto* pinyin = app.add_subcommand("pinyin", "Render text as tone-numbered Pinyin");
  std::vector<std::string> texts;
  std::string pinyin_input;
  pinyin->add_option("text", texts, "Literal text, one output line each");
  pinyin->add_option("--input", pinyin_input, "Text file, one line per sentence");

  auto* synth = app.add_subcommand("synth", "Synthesize the homophone-error training set");

  auto add_endpoint_flags = [](CLI::App* sub, EndpointFlags& f) {
    sub->add_option("--replay", f.replay, "Serve completions from a prompt/response JSONL");
    sub->add_option("--record", f.record, "Append every exchange to a JSONL file");
    sub->add_option("--base-url", f.base_url, "Endpoint base URL");
    sub->add_option("--model", f.model, "Model name sent to the endpoint");
  };

  auto* correct = app.add_subcommand("correct", "Run correction prompts through the endpoint");
  CorrectFlags cf;
  correct->add_option("--task", cf.tasks, "direct, pygec, pinyin2text or text2pinyin")
      ->take_all();
  correct->add_option("--input", cf.input, "Utterance JSONL (defaults to the corpus)");
  correct->add_option("--output", cf.output, "Corrections JSONL");
  correct->add_flag("--no-latency", cf.no_latency, "Omit latency fields");
  add_endpoint_flags(correct, cf.endpoint);

  auto* evaluate = app.add_subcommand("evaluate", "Score corrections: CER, entity recall, cases");
  EvaluateFlags ef;
  evaluate->add_option("--utterances", ef.utterances, "Utterance JSONL with references");
  evaluate->add_option("--corrections", ef.corrections,
                       "Corrections or selections JSONL (omit to score the baseline)");
  evaluate->add_option("--task", ef.task, "Only use records of this task");
  evaluate->add_option("--output", ef.output, "Report JSON");
  evaluate->add_option("--per-utterance", ef.per_utterance, "Per-utterance CSV");

  auto* ensemble = app.add_subcommand("ensemble", "Combine candidate corrections");
  EnsembleFlags nf;
  ensemble->add_option("--method", nf.method, "rover, pinyin-rerank or llm-rerank")
      ->required();
  ensemble->add_option("--input", nf.input, "Candidate-set JSONL");
  ensemble->add_option("--corrections", nf.corrections,
                       "Corrections JSONL files, each record one candidate")
      ->take_all();
  ensemble->add_option("--utterances", nf.utterances, "Utterance JSONL for --corrections");
  ensemble->add_option("--output", nf.output, "Selections JSONL");
  ensemble->add_flag("--exclude-input", nf.exclude_input,
                     "Leave the input out of the pinyin-rerank reference set");
  add_endpoint_flags(ensemble, nf.endpoint);

  auto* analyze = app.add_subcommand("analyze", "Attention and hidden-state analyses");
  AnalyzeFlags af;
  std::string aggregation;
  bool exclude_template = false;
  int layer = -1;
  size_t components = 0;
  analyze->add_option("--kind", af.kind, "attention, alignment or pca")->required();
  analyze->add_option("--dump", af.dumps, "Tensor dump header JSONL")->take_all();
  analyze->add_option("--payload", af.payload, "Binary payload for a single dump");
  analyze->add_option("--output", af.output, "CSV output (stdout if omitted)");
  analyze->add_option("--aggregation", aggregation, "mean or sum");
  analyze->add_flag("--exclude-template", exclude_template,
                    "Drop prompt-template keys before scoring");
  analyze->add_option("--layer", layer, "Hidden-state layer (default: highest)");
  analyze->add_option("--components", components, "Principal components");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kExitOk : kExitInputError;
  }

  try {
    RunConfig cfg = config_path.empty() ? RunConfig{} : LoadRunConfig(config_path);
    if (app.count("--seed")) cfg.seed = cfg.synthesis.seed = seed;
    if (!pinyin_dict.empty()) cfg.pinyin_dict = pinyin_dict;
    if (!homophone_dict.empty()) cfg.homophone_dict = homophone_dict;
    if (!lexicon.empty()) cfg.lexicon = lexicon;
    if (!corpus.empty()) cfg.corpus = corpus;
    if (!cache.empty()) cfg.cache = cache;
    if (!output_dir.empty()) cfg.output_dir = output_dir;
    if (!tone_mode.empty()) cfg.tone_mode = ParseToneMode(tone_mode);
    if (app.count("--workers")) cfg.workers = workers;
    for (const EndpointFlags* f : {&cf.endpoint, &nf.endpoint}) {
      if (!f->base_url.empty()) cfg.endpoint.base_url = f->base_url;
      if (!f->model.empty()) cfg.endpoint.model = f->model;
    }
    if (!aggregation.empty()) {
      cfg.attention = AttentionFromJson(
          Json{{"aggregation", aggregation},
               {"exclude_template_keys", cfg.attention.exclude_template_keys},
               {"row_sum_tolerance", cfg.attention.row_sum_tolerance}});
    }
    if (exclude_template) cfg.attention.exclude_template_keys = true;
    if (analyze->count("--layer")) cfg.layer = layer;
    if (analyze->count("--components")) cfg.pca_components = components;
    cfg.Validate();

    if (*pinyin) return CmdPinyin(cfg, texts, pinyin_input, in, out);
    if (*synth) return CmdSynth(cfg, "", out);
    if (*correct) return CmdCorrect(cfg, cf, out, err);
    if (*evaluate) return CmdEvaluate(cfg, ef, out);
    if (*ensemble) return CmdEnsemble(cfg, nf, out, err);
    if (*analyze) return CmdAnalyze(cfg, af, out);
  } catch (const Error& e) {
    err << "pygec: error: " << e.what() << '\n';
    return kExitInputError;
  } catch (const Json::exception& e) {
    err << "pygec: error: " << e.what() << '\n';
    return kExitInputError;
  } catch (const fs::filesystem_error& e) {
    err << "pygec: error: " << e.what() << '\n';
    return kExitInputError;
  }
  return kExitInputError;
}

}  // namespace pygec::cli
