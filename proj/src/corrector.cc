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

#include "pygec/corrector.h"

#include <chrono>
#include <map>

#include "pygec/common.h"
#include "pygec/parallel.h"

namespace pygec {

Json CorrectionResult::ToJson(bool include_latency) const {
  Json j{{"id", utterance_id},
         {"task", TaskName(task)},
         {"raw", raw},
         {"text", text},
         {"cache_hit", cache_hit},
         {"failed", failed}};
  if (!error.empty()) j["error"] = error;
  if (include_latency) j["latency_ms"] = latency_ms;
  return j;
}

CorrectionResult CorrectionResult::FromJson(const Json& j) {
  CorrectionResult r;
  try {
    r.utterance_id = j.at("id").get<std::string>();
    r.task = ParseTaskKind(j.at("task").get<std::string>());
    r.raw = j.value("raw", std::string());
    r.text = j.at("text").get<std::string>();
    r.cache_hit = j.value("cache_hit", false);
    r.failed = j.value("failed", false);
    r.error = j.value("error", std::string());
    r.latency_ms = j.value("latency_ms", 0.0);
  } catch (const Json::exception& e) {
    throw InputError(std::string("bad correction record: ") + e.what());
  }
  return r;
}

std::string Corrector::PromptFor(const Utterance& utterance,
                                 TaskKind task) const {
  if (!utterance.hypothesis) {
    throw InputError("utterance '" + utterance.id + "' has no hypothesis");
  }
  const std::string& hyp = *utterance.hypothesis;
  switch (task) {
    case TaskKind::kDirect:
      return BuildPrompt(task, hyp);
    case TaskKind::kPyGec:
    case TaskKind::kPinyinToText:
      return BuildPrompt(task, hyp, RenderPinyin(hyp, pdict_));
    case TaskKind::kTextToPinyin:
      return BuildPrompt(task, hyp, std::nullopt, hyp);
    case TaskKind::kRerank:
      break;
  }
  throw Error("rerank is not a per-utterance correction task");
}

std::pair<std::string, bool> Corrector::CompleteCached(TaskKind task,
                                                       const std::string& prompt) {
  const std::string key = ResponseCache::Key(client_.config().model, task, prompt);
  if (auto hit = cache_.Get(key)) return {std::move(*hit), true};
  std::string response = client_.Complete(prompt);
  cache_.Put(key, client_.config().model, task, prompt, response);
  return {std::move(response), false};
}

CorrectionResult Corrector::Correct(const Utterance& utterance, TaskKind task) {
  CorrectionResult r;
  r.utterance_id = utterance.id;
  r.task = task;
  const std::string prompt = PromptFor(utterance, task);
  const auto start = std::chrono::steady_clock::now();
  try {
    auto [raw, hit] = CompleteCached(task, prompt);
    r.raw = std::move(raw);
    r.cache_hit = hit;
    r.text = ExtractAnswer(r.raw);
    if (r.text.empty()) {
      r.failed = true;
      r.error = "empty model output";
    }
  } catch (const EndpointError& e) {
    r.failed = true;
    r.error = e.what();
  }
  if (r.failed) r.text = *utterance.hypothesis;
  r.latency_ms = std::chrono::duration<double, std::milli>(
                     std::chrono::steady_clock::now() - start)
                     .count();
  return r;
}

std::vector<CorrectionResult> Corrector::BatchCorrect(
    std::span<const Utterance> utterances, std::span<const TaskKind> tasks) {
  // Validate every prompt up front so input errors surface before any request.
  for (const auto& u : utterances) {
    for (TaskKind t : tasks) PromptFor(u, t);
  }
  const size_t n = utterances.size() * tasks.size();
  // Repeated (task, prompt) pairs are sent once; later copies reuse the
  // first answer as a cache hit, whatever the thread timing.
  std::vector<size_t> first(n);
  std::vector<size_t> unique;
  std::map<std::pair<TaskKind, std::string>, size_t> seen;
  for (size_t k = 0; k < n; ++k) {
    const TaskKind t = tasks[k % tasks.size()];
    auto [it, inserted] =
        seen.try_emplace({t, PromptFor(utterances[k / tasks.size()], t)}, k);
    first[k] = it->second;
    if (inserted) unique.push_back(k);
  }
  std::vector<CorrectionResult> results(n);
  ParallelFor(unique.size(), static_cast<size_t>(client_.config().max_concurrency),
              [&](size_t i) {
                const size_t k = unique[i];
                results[k] = Correct(utterances[k / tasks.size()],
                                     tasks[k % tasks.size()]);
              });
  for (size_t k = 0; k < n; ++k) {
    if (first[k] == k) continue;
    const Utterance& u = utterances[k / tasks.size()];
    CorrectionResult r = results[first[k]];
    r.utterance_id = u.id;
    r.latency_ms = 0.0;
    r.cache_hit = !r.failed;
    if (r.failed) r.text = *u.hypothesis;
    results[k] = std::move(r);
  }
  return results;
}

double FailureRate(std::span<const CorrectionResult> results) {
  if (results.empty()) return 0.0;
  size_t failed = 0;
  for (const auto& r : results) failed += r.failed ? 1 : 0;
  return static_cast<double>(failed) / static_cast<double>(results.size());
}

}  // namespace pygec
