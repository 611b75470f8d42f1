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

#ifndef PYGEC_TENSOR_DUMP_H_
#define PYGEC_TENSOR_DUMP_H_

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pygec/analysis.h"

namespace pygec {

// Exported model tensors.
//
// Header: JSON lines, one per tensor:
//   {"utt": "u1", "role": "text"|"pinyin"|"attention", "layer": 31,
//    "head": 0, "shape": [rows, cols], "offset": <byte offset>,
//    "spans": {...}}                                  (spans: attention only)
// Payload: float32 little-endian, row-major, at `offset` bytes into the
// companion binary file. A record may instead inline its values as
// "data": [[...], ...], in which case no payload is needed.
struct TensorDump {
  std::vector<HiddenStateRecord> hidden;
  std::vector<AttentionRecord> attention;
};

// `payload` defaults to the header path with its extension replaced by
// ".bin"; it is only opened if some record references it.
TensorDump LoadTensorDump(const std::filesystem::path& header,
                          std::optional<std::filesystem::path> payload = std::nullopt);

// Binary variant (header + payload).
void WriteTensorDump(const std::filesystem::path& header,
                     const std::filesystem::path& payload, const TensorDump& dump);
// Text variant, all values inline.
void WriteTensorDumpText(const std::filesystem::path& header, const TensorDump& dump);

// Attention records per utterance, in first-seen order.
std::vector<std::pair<std::string, std::vector<AttentionRecord>>> GroupAttention(
    const TensorDump& dump);

// (utterance id, text states, Pinyin states) for every utterance having
// both roles. `layer` picks a layer; nullopt takes the highest present.
struct HiddenPair {
  std::string utterance_id;
  Matrix text;
  Matrix pinyin;
};
std::vector<HiddenPair> PairHiddenStates(const TensorDump& dump,
                                         std::optional<int> layer = std::nullopt);

}  // namespace pygec

#endif  // PYGEC_TENSOR_DUMP_H_
