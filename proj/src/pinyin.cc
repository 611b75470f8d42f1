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

#include "pygec/pinyin.h"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "pygec/common.h"
#include "pygec/utf8.h"

namespace pygec {
namespace {

std::string_view Trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string_view> SplitReadings(std::string_view s) {
  std::vector<std::string_view> out;
  size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ',' || s[i] == ' ')) ++i;
    size_t j = i;
    while (j < s.size() && s[j] != ',' && s[j] != ' ') ++j;
    if (j > i) out.push_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

}  // namespace

ToneMode ParseToneMode(std::string_view name) {
  if (name == "exact") return ToneMode::kExact;
  if (name == "toneless") return ToneMode::kToneless;
  throw InputError("unknown tone mode '" + std::string(name) +
                   "' (expected exact|toneless)");
}

const char* ToneModeName(ToneMode mode) {
  return mode == ToneMode::kExact ? "exact" : "toneless";
}

Syllable Syllable::Parse(std::string_view token) {
  if (token.size() < 2) {
    throw InputError("bad syllable '" + std::string(token) + "'");
  }
  const char t = token.back();
  if (t < '1' || t > '5') {
    throw InputError("bad syllable '" + std::string(token) +
                     "': tone digit 1-5 required");
  }
  std::string_view base = token.substr(0, token.size() - 1);
  for (char c : base) {
    if (c < 'a' || c > 'z') {
      throw InputError("bad syllable '" + std::string(token) +
                       "': base must be lowercase ASCII letters");
    }
  }
  return Syllable{std::string(base), t - '0'};
}

PinyinDictionary PinyinDictionary::Load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open pinyin dictionary " + path.string());
  return Parse(in, path.string());
}

PinyinDictionary PinyinDictionary::Parse(std::istream& in,
                                         const std::string& source) {
  PinyinDictionary dict;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view row = line;
    if (!row.empty() && row.back() == '\r') row.remove_suffix(1);
    if (Trim(row).empty() || row.front() == '#') continue;
    const auto where = source + ":" + std::to_string(line_no) + ": ";
    const auto tab = row.find('\t');
    if (tab == std::string_view::npos) {
      throw InputError(where + "expected <char-or-word>\\t<readings>");
    }
    const std::u32string key = DecodeUtf8(Trim(row.substr(0, tab)));
    const auto tokens = SplitReadings(Trim(row.substr(tab + 1)));
    if (key.empty() || tokens.empty()) {
      throw InputError(where + "empty key or reading list");
    }
    std::vector<Syllable> readings;
    try {
      for (auto t : tokens) readings.push_back(Syllable::Parse(t));
      if (key.size() == 1) {
        for (const auto& r : readings) dict.AddCharReading(key[0], r);
      } else {
        dict.AddWordOverride(key, std::move(readings));
      }
    } catch (const InputError& e) {
      throw InputError(where + e.what());
    }
  }
  if (dict.empty()) throw InputError(source + ": empty dictionary");
  return dict;
}

void PinyinDictionary::AddCharReading(char32_t ch, const Syllable& reading) {
  auto& list = char_readings_[ch];
  if (std::find(list.begin(), list.end(), reading) == list.end()) {
    list.push_back(reading);
  }
}

void PinyinDictionary::AddWordOverride(std::u32string_view word,
                                       std::vector<Syllable> readings) {
  if (word.size() < 2) {
    throw InputError("word override needs at least two characters");
  }
  if (readings.size() != word.size()) {
    throw InputError("word override has " + std::to_string(readings.size()) +
                     " readings for " + std::to_string(word.size()) +
                     " characters");
  }
  word_overrides_.try_emplace(std::u32string(word), std::move(readings));
  max_override_length_ = std::max(max_override_length_, word.size());
}

const std::vector<Syllable>* PinyinDictionary::Readings(char32_t ch) const {
  auto it = char_readings_.find(ch);
  return it == char_readings_.end() ? nullptr : &it->second;
}

const Syllable* PinyinDictionary::PrimaryReading(char32_t ch) const {
  const auto* list = Readings(ch);
  return list ? &list->front() : nullptr;
}

const std::vector<Syllable>* PinyinDictionary::WordOverride(
    std::u32string_view word) const {
  auto it = word_overrides_.find(std::u32string(word));
  return it == word_overrides_.end() ? nullptr : &it->second;
}

PinyinSequence TextToPinyin(std::string_view text,
                            const PinyinDictionary& dict) {
  const std::u32string chars = DecodeUtf8(text);
  PinyinSequence seq;
  seq.reserve(chars.size());
  const std::u32string_view view(chars);
  size_t i = 0;
  while (i < chars.size()) {
    const size_t longest = std::min(dict.max_override_length(), chars.size() - i);
    size_t matched = 0;
    for (size_t len = longest; len >= 2; --len) {
      if (const auto* readings = dict.WordOverride(view.substr(i, len))) {
        for (size_t k = 0; k < len; ++k) {
          seq.push_back({chars[i + k], (*readings)[k]});
        }
        matched = len;
        break;
      }
    }
    if (matched > 0) {
      i += matched;
      continue;
    }
    const Syllable* primary = dict.PrimaryReading(chars[i]);
    seq.push_back({chars[i], primary ? std::optional<Syllable>(*primary)
                                     : std::nullopt});
    ++i;
  }
  return seq;
}

std::vector<std::string> PinyinTokens(const PinyinSequence& seq) {
  std::vector<std::string> tokens;
  tokens.reserve(seq.size());
  for (const auto& item : seq) {
    tokens.push_back(item.reading ? item.reading->ToString()
                                  : EncodeUtf8(item.ch));
  }
  return tokens;
}

std::string RenderPinyin(const PinyinSequence& seq) {
  std::string out;
  for (const auto& token : PinyinTokens(seq)) {
    if (!out.empty()) out.push_back(' ');
    out += token;
  }
  return out;
}

HomophoneDictionary HomophoneDictionary::Derive(const PinyinDictionary& pdict,
                                                ToneMode mode) {
  HomophoneDictionary h;
  h.mode_ = mode;
  for (const auto& [ch, readings] : pdict.char_readings()) {
    h.by_syllable_[readings.front().Key(mode)].push_back(ch);
  }
  for (auto& [key, chars] : h.by_syllable_) {
    std::sort(chars.begin(), chars.end());
  }
  return h;
}

HomophoneDictionary HomophoneDictionary::Load(const std::filesystem::path& path,
                                              ToneMode mode) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open homophone dictionary " + path.string());
  HomophoneDictionary h;
  h.mode_ = mode;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view row = line;
    if (!row.empty() && row.back() == '\r') row.remove_suffix(1);
    if (Trim(row).empty() || row.front() == '#') continue;
    const auto where = path.string() + ":" + std::to_string(line_no) + ": ";
    const auto tab = row.find('\t');
    if (tab == std::string_view::npos) {
      throw InputError(where + "expected <syllable>\\t<chars>");
    }
    Syllable syl;
    try {
      syl = Syllable::Parse(Trim(row.substr(0, tab)));
    } catch (const InputError& e) {
      throw InputError(where + e.what());
    }
    std::u32string chars = DecodeUtf8(Trim(row.substr(tab + 1)));
    std::erase_if(chars, [](char32_t c) { return c == U' ' || c == U','; });
    if (chars.empty()) throw InputError(where + "empty character set");
    auto& group = h.by_syllable_[syl.Key(mode)];
    group.insert(group.end(), chars.begin(), chars.end());
  }
  if (h.by_syllable_.empty()) {
    throw InputError(path.string() + ": empty homophone dictionary");
  }
  for (auto& [key, chars] : h.by_syllable_) {
    std::sort(chars.begin(), chars.end());
    chars.erase(std::unique(chars.begin(), chars.end()), chars.end());
  }
  return h;
}

std::vector<char32_t> HomophoneDictionary::HomophonesOf(
    char32_t ch, const PinyinDictionary& pdict) const {
  const Syllable* primary = pdict.PrimaryReading(ch);
  if (primary == nullptr) return {};
  const std::string key = primary->Key(mode_);
  auto it = by_syllable_.find(key);
  if (it == by_syllable_.end()) return {};
  std::vector<char32_t> out;
  for (char32_t c : it->second) {
    if (c == ch) continue;
    // Loaded files may list characters whose primary reading differs;
    // those would not be homophones under `pdict`.
    const Syllable* r = pdict.PrimaryReading(c);
    if (r != nullptr && r->Key(mode_) == key) out.push_back(c);
  }
  return out;
}

}  // namespace pygec
