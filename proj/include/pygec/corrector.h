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

#ifndef PYGEC_CORRECTOR_H_
#define PYGEC_CORRECTOR_H_

#include <span>
#include <string>
#include <utility>
#include <vector>

#include "pygec/chat_client.h"
#include "pygec/corpus.h"
#include "pygec/jsonl.h"
#include "pygec/pinyin.h"
#include "pygec/prompt.h"
#include "pygec/response_cache.h"

namespace pygec {

struct CorrectionResult {
  std::string utterance_id;
  TaskKind task = TaskKind::kDirect;
  std::string raw;   // assistant message as returned
  std::string text;  // ExtractAnswer(raw), or the input hypothesis if failed
  bool cache_hit = false;
  bool failed = false;
  std::string error;
  double latency_ms = 0.0;

  Json ToJson(bool include_latency = true) const;
  static CorrectionResult FromJson(const Json& j);
};

// Runs the correction tasks against a chat endpoint, through the cache.
class Corrector {
 public:
  Corrector(ChatClient& client, ResponseCache& cache,
            const PinyinDictionary& pdict)
      : client_(client), cache_(cache), pdict_(pdict) {}

  // Prompt for `task` on the utterance's hypothesis. The Pinyin slot is the
  // rendered Pinyin of the hypothesis; text2pinyin uses the hypothesis as
  // its text slot. Throws Error for kRerank or a missing hypothesis.
  std::string PromptFor(const Utterance& utterance, TaskKind task) const;

  // Never throws for endpoint trouble: failures come back flagged with the
  // hypothesis as text.
  CorrectionResult Correct(const Utterance& utterance, TaskKind task);

  // One result per (utterance, task) pair, utterance-major, in input order.
  // A prompt repeated within the batch is sent once and the copies are
  // reported as cache hits.
  // At most config().max_concurrency requests are in flight.
  std::vector<CorrectionResult> BatchCorrect(std::span<const Utterance> utterances,
                                             std::span<const TaskKind> tasks);

  // Raw completion through the cache: (response, cache_hit). Throws
  // EndpointError.
  std::pair<std::string, bool> CompleteCached(TaskKind task,
                                              const std::string& prompt);

  ChatClient& client() { return client_; }
  const PinyinDictionary& pinyin_dictionary() const { return pdict_; }

 private:
  ChatClient& client_;
  ResponseCache& cache_;
  const PinyinDictionary& pdict_;
};

// Share of flagged results; 0 for an empty list.
double FailureRate(std::span<const CorrectionResult> results);

}  // namespace pygec

#endif  // PYGEC_CORRECTOR_H_
