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

#include "pygec/tensor_dump.h"

#include <bit>
#include <cstring>
#include <fstream>

#include "pygec/common.h"

namespace pygec {
namespace {

float LoadFloatLe(const char* p) {
  uint32_t bits;
  std::memcpy(&bits, p, sizeof(bits));
  if constexpr (std::endian::native == std::endian::big) {
    bits = __builtin_bswap32(bits);
  }
  float f;
  std::memcpy(&f, &bits, sizeof(f));
  return f;
}

void StoreFloatLe(float f, std::string& out) {
  uint32_t bits;
  std::memcpy(&bits, &f, sizeof(bits));
  if constexpr (std::endian::native == std::endian::big) {
    bits = __builtin_bswap32(bits);
  }
  char buf[4];
  std::memcpy(buf, &bits, sizeof(buf));
  out.append(buf, 4);
}

Json MatrixToJson(const Matrix& m) {
  Json rows = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

Matrix MatrixFromJson(const Json& data, size_t rows, size_t cols) {
  if (!data.is_array() || data.size() != rows) {
    throw InputError("inline data does not match shape");
  }
  Matrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (size_t r = 0; r < rows; ++r) {
    const auto& row = data[r];
    if (!row.is_array() || row.size() != cols) {
      throw InputError("inline data does not match shape");
    }
    for (size_t c = 0; c < cols; ++c) {
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = row[c].get<double>();
    }
  }
  return m;
}

Json HeaderFor(const std::string& utt, const std::string& role, int layer,
               std::optional<int> head, const Matrix& m) {
  Json j{{"utt", utt}, {"role", role}, {"shape", {m.rows(), m.cols()}}};
  if (layer >= 0 || role == "attention") j["layer"] = layer;
  if (head) j["head"] = *head;
  return j;
}

const char* RoleName(HiddenRole r) { return r == HiddenRole::kText ? "text" : "pinyin"; }

}  // namespace

TensorDump LoadTensorDump(const std::filesystem::path& header,
                          std::optional<std::filesystem::path> payload) {
  std::filesystem::path payload_path =
      payload ? *payload : std::filesystem::path(header).replace_extension(".bin");
  std::string blob;
  bool blob_loaded = false;

  TensorDump dump;
  ForEachJsonLine(header, [&](const Json& j, size_t line_no) {
    const auto where = header.string() + ":" + std::to_string(line_no) + ": ";
    try {
      const std::string utt = j.at("utt").get<std::string>();
      const std::string role = j.at("role").get<std::string>();
      const auto& shape = j.at("shape");
      if (!shape.is_array() || shape.size() != 2) {
        throw InputError("shape must be [rows, cols]");
      }
      const auto rows = shape[0].get<size_t>();
      const auto cols = shape[1].get<size_t>();
      if (rows == 0 || cols == 0) throw InputError("empty tensor");

      Matrix m;
      if (auto it = j.find("data"); it != j.end()) {
        m = MatrixFromJson(*it, rows, cols);
      } else {
        if (!blob_loaded) {
          blob = ReadFile(payload_path);
          blob_loaded = true;
        }
        const auto offset = j.at("offset").get<size_t>();
        const size_t bytes = rows * cols * sizeof(float);
        if (offset % sizeof(float) != 0 || offset > blob.size() ||
            bytes > blob.size() - offset) {
          throw InputError("payload range out of bounds of " + payload_path.string());
        }
        m.resize(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
        const char* p = blob.data() + offset;
        for (size_t r = 0; r < rows; ++r) {
          for (size_t c = 0; c < cols; ++c, p += 4) {
            m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = LoadFloatLe(p);
          }
        }
      }
      if (!m.allFinite()) throw InputError("tensor has non-finite values");

      if (role == "attention") {
        AttentionRecord rec;
        rec.utterance_id = utt;
        rec.layer = j.at("layer").get<int>();
        rec.head = j.value("head", 0);
        rec.weights = std::move(m);
        rec.spans = SpanMap::FromJson(j.at("spans"));
        dump.attention.push_back(std::move(rec));
      } else if (role == "text" || role == "pinyin") {
        HiddenStateRecord rec;
        rec.utterance_id = utt;
        rec.role = role == "text" ? HiddenRole::kText : HiddenRole::kPinyin;
        rec.layer = j.value("layer", -1);
        rec.states = std::move(m);
        dump.hidden.push_back(std::move(rec));
      } else {
        throw InputError("unknown role '" + role + "'");
      }
    } catch (const Json::exception& e) {
      throw InputError(where + e.what());
    } catch (const InputError& e) {
      throw InputError(where + e.what());
    }
  });
  return dump;
}

void WriteTensorDump(const std::filesystem::path& header,
                     const std::filesystem::path& payload, const TensorDump& dump) {
  std::string lines;
  std::string blob;
  auto emit = [&](Json j, const Matrix& m) {
    j["offset"] = blob.size();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      for (Eigen::Index c = 0; c < m.cols(); ++c) {
        StoreFloatLe(static_cast<float>(m(r, c)), blob);
      }
    }
    lines += DumpLine(j) + "\n";
  };
  for (const auto& h : dump.hidden) {
    emit(HeaderFor(h.utterance_id, RoleName(h.role), h.layer, std::nullopt, h.states),
         h.states);
  }
  for (const auto& a : dump.attention) {
    Json j = HeaderFor(a.utterance_id, "attention", a.layer, a.head, a.weights);
    j["spans"] = a.spans.ToJson();
    emit(std::move(j), a.weights);
  }
  WriteFileAtomic(payload, blob);
  WriteFileAtomic(header, lines);
}

void WriteTensorDumpText(const std::filesystem::path& header, const TensorDump& dump) {
  std::string lines;
  for (const auto& h : dump.hidden) {
    Json j = HeaderFor(h.utterance_id, RoleName(h.role), h.layer, std::nullopt, h.states);
    j["data"] = MatrixToJson(h.states);
    lines += DumpLine(j) + "\n";
  }
  for (const auto& a : dump.attention) {
    Json j = HeaderFor(a.utterance_id, "attention", a.layer, a.head, a.weights);
    j["spans"] = a.spans.ToJson();
    j["data"] = MatrixToJson(a.weights);
    lines += DumpLine(j) + "\n";
  }
  WriteFileAtomic(header, lines);
}

std::vector<std::pair<std::string, std::vector<AttentionRecord>>> GroupAttention(
    const TensorDump& dump) {
  std::vector<std::pair<std::string, std::vector<AttentionRecord>>> groups;
  std::map<std::string, size_t> index;
  for (const auto& rec : dump.attention) {
    auto [it, inserted] = index.try_emplace(rec.utterance_id, groups.size());
    if (inserted) groups.emplace_back(rec.utterance_id, std::vector<AttentionRecord>{});
    groups[it->second].second.push_back(rec);
  }
  return groups;
}

std::vector<HiddenPair> PairHiddenStates(const TensorDump& dump,
                                         std::optional<int> layer) {
  // utterance -> role -> chosen record
  std::vector<std::string> order;
  std::map<std::string, std::pair<const HiddenStateRecord*, const HiddenStateRecord*>> chosen;
  for (const auto& rec : dump.hidden) {
    if (layer && rec.layer != *layer) continue;
    auto [it, inserted] = chosen.try_emplace(rec.utterance_id, nullptr, nullptr);
    if (inserted) order.push_back(rec.utterance_id);
    auto& slot = rec.role == HiddenRole::kText ? it->second.first : it->second.second;
    if (slot == nullptr || rec.layer > slot->layer) slot = &rec;
  }
  std::vector<HiddenPair> pairs;
  Eigen::Index width = -1;
  for (const auto& id : order) {
    const auto& [text, pinyin] = chosen[id];
    if (text == nullptr || pinyin == nullptr) continue;
    if (text->states.cols() != pinyin->states.cols() ||
        (width >= 0 && text->states.cols() != width)) {
      throw InputError("hidden size differs for utterance '" + id + "'");
    }
    width = text->states.cols();
    pairs.push_back({id, text->states, pinyin->states});
  }
  return pairs;
}

}  // namespace pygec
