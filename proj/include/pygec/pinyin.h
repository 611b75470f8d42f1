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

#ifndef PYGEC_PINYIN_H_
#define PYGEC_PINYIN_H_

#include <compare>
#include <cstddef>
#include <filesystem>
#include <istream>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace pygec {

// Whether homophony requires the same tone ("ni3" vs "ni2" differ) or only
// the same initial+final.
enum class ToneMode { kExact, kToneless };

ToneMode ParseToneMode(std::string_view name);
const char* ToneModeName(ToneMode mode);

// One toned syllable in tone-number form, e.g. {"hao", 3}. Tone 5 is neutral.
struct Syllable {
  std::string base;
  int tone = 5;

  // Parses "hao3". Throws InputError on anything else.
  static Syllable Parse(std::string_view token);

  std::string ToString() const { return base + static_cast<char>('0' + tone); }
  // Grouping key under `mode`: "hao3" or "hao".
  std::string Key(ToneMode mode) const {
    return mode == ToneMode::kExact ? ToString() : base;
  }

  auto operator<=>(const Syllable&) const = default;
};

struct PinyinItem {
  char32_t ch = 0;
  std::optional<Syllable> reading;  // absent for characters not in the dictionary

  bool operator==(const PinyinItem&) const = default;
};

// Per-character readings aligned one-to-one with the source string.
using PinyinSequence = std::vector<PinyinItem>;

// Character readings plus multi-character word overrides for polyphones.
//
// File format: UTF-8 TSV, `<char-or-word>\t<reading[,reading...]>`, `#`
// comment lines. A single character may list several readings, most
// frequent first; repeated rows merge in first-seen order. A word row lists
// exactly one reading per character (comma or space separated).
class PinyinDictionary {
 public:
  static PinyinDictionary Load(const std::filesystem::path& path);
  static PinyinDictionary Parse(std::istream& in, const std::string& source);

  // Appends `reading` unless already present.
  void AddCharReading(char32_t ch, const Syllable& reading);
  // Throws InputError when the word is shorter than two characters or the
  // reading count does not match. The first override for a word wins.
  void AddWordOverride(std::u32string_view word,
                       std::vector<Syllable> readings);

  const std::vector<Syllable>* Readings(char32_t ch) const;
  const Syllable* PrimaryReading(char32_t ch) const;
  const std::vector<Syllable>* WordOverride(std::u32string_view word) const;

  size_t max_override_length() const { return max_override_length_; }
  size_t char_count() const { return char_readings_.size(); }
  size_t word_count() const { return word_overrides_.size(); }
  bool empty() const { return char_readings_.empty() && word_overrides_.empty(); }

  const std::unordered_map<char32_t, std::vector<Syllable>>& char_readings()
      const {
    return char_readings_;
  }

 private:
  std::unordered_map<char32_t, std::vector<Syllable>> char_readings_;
  std::unordered_map<std::u32string, std::vector<Syllable>> word_overrides_;
  size_t max_override_length_ = 0;
};

// Greedy left-to-right longest word override first, then each remaining
// character's primary reading.
PinyinSequence TextToPinyin(std::string_view text, const PinyinDictionary& dict);

// One token per item: "hao3", or the character itself when unknown.
std::vector<std::string> PinyinTokens(const PinyinSequence& seq);

// Tokens joined by single spaces: "ni3 hao3".
std::string RenderPinyin(const PinyinSequence& seq);

inline std::string RenderPinyin(std::string_view text,
                                const PinyinDictionary& dict) {
  return RenderPinyin(TextToPinyin(text, dict));
}

// Characters grouped by reading key. Either derived from a PinyinDictionary
// (every character under its primary reading) or loaded from a TSV file of
// `<toned-syllable>\t<chars>` rows.
class HomophoneDictionary {
 public:
  static HomophoneDictionary Derive(const PinyinDictionary& pdict,
                                    ToneMode mode = ToneMode::kExact);
  static HomophoneDictionary Load(const std::filesystem::path& path,
                                  ToneMode mode = ToneMode::kExact);

  // Characters whose primary reading key equals that of `ch`, excluding
  // `ch`, ordered by code point. Empty when `ch` is unknown or unique.
  std::vector<char32_t> HomophonesOf(char32_t ch,
                                     const PinyinDictionary& pdict) const;

  ToneMode mode() const { return mode_; }
  const std::map<std::string, std::vector<char32_t>>& by_syllable() const {
    return by_syllable_;
  }

 private:
  ToneMode mode_ = ToneMode::kExact;
  std::map<std::string, std::vector<char32_t>> by_syllable_;
};

}  // namespace pygec

#endif  // PYGEC_PINYIN_H_
