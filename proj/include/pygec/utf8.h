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

#ifndef PYGEC_UTF8_H_
#define PYGEC_UTF8_H_

#include <string>
#include <string_view>

namespace pygec {

// Decodes UTF-8 into Unicode scalar values. Ill-formed sequences decode to
// U+FFFD, one per maximal invalid subpart.
std::u32string DecodeUtf8(std::string_view text);

std::string EncodeUtf8(std::u32string_view text);
std::string EncodeUtf8(char32_t ch);

// Number of Unicode scalar values in `text`.
size_t CharCount(std::string_view text);

// Canonical composition (NFC).
std::string NormalizeNfc(std::string_view text);

bool IsHan(char32_t ch);

}  // namespace pygec

#endif  // PYGEC_UTF8_H_
