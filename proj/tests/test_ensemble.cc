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

#include <atomic>
#include <functional>
#include <map>

#include "doctest.h"
#include "pygec/chat_client.h"
#include "pygec/common.h"
#include "pygec/corrector.h"
#include "pygec/ensemble.h"
#include "pygec/response_cache.h"
#include "pygec/utf8.h"
#include "test_support.h"

namespace pygec {
namespace {

using testing::TestRng;

class FnTransport : public ChatTransport {
 public:
  explicit FnTransport(std::function<std::string(const std::string&)> fn)
      : fn_(std::move(fn)) {}
  std::string Complete(const ChatRequest& request) override { return fn_(request.prompt); }

 private:
  std::function<std::string(const std::string&)> fn_;
};

CandidateSet MakeSet(std::string input, const std::vector<std::string>& texts) {
  CandidateSet s;
  s.id = "x";
  s.input = std::move(input);
  for (size_t i = 0; i < texts.size(); ++i) {
    s.candidates.push_back({"c" + std::to_string(i), texts[i]});
  }
  return s;
}

std::vector<std::string> ToyTokens(const std::string& text) {
  static const std::map<std::string, std::string> table(testing::ToyReadings().begin(),
                                                        testing::ToyReadings().end());
  std::vector<std::string> out;
  for (char32_t c : DecodeUtf8(text)) out.push_back(table.at(EncodeUtf8(std::u32string(1, c))));
  return out;
}

TEST_CASE("candidate set validation and json") {
  auto s = MakeSet("背景", {"北京", "背景"});
  s.Validate();
  CHECK(CandidateSet::FromJson(s.ToJson()).ToJson() == s.ToJson());
  CHECK(s.Texts() == std::vector<std::string>{"北京", "背景"});
  auto empty = MakeSet("背景", {});
  CHECK_THROWS_AS(empty.Validate(), InputError);
  auto dup = s;
  dup.candidates[1].source = "c0";
  CHECK_THROWS_AS(dup.Validate(), InputError);
}

TEST_CASE("rover identity") {
  TestRng rng(3);
  for (int trial = 0; trial < 200; ++trial) {
    const std::string text = testing::RandomToyString(rng, 12);
    for (size_t k : {1, 2, 5}) {
      CHECK(RoverMerge(MakeSet("", std::vector<std::string>(k, text))) == text);
    }
  }
}

TEST_CASE("rover slotwise majority") {
  TestRng rng(4);
  for (int trial = 0; trial < 2000; ++trial) {
    const size_t len = 1 + rng.Below(10);
    const size_t alphabet = trial % 2 == 0 ? 2 : 8;
    std::vector<std::u32string> c(3, std::u32string(len, U'a'));
    std::u32string majority(len, U'a');
    for (size_t i = 0; i < len; ++i) {
      const char32_t win = U'a' + static_cast<char32_t>(rng.Below(alphabet));
      char32_t lose = U'a' + static_cast<char32_t>(rng.Below(alphabet));
      const size_t odd = rng.Below(3);
      majority[i] = win;
      for (size_t j = 0; j < 3; ++j) c[j][i] = j == odd ? lose : win;
    }
    const auto merged = RoverMerge(MakeSet(
        "", {EncodeUtf8(c[0]), EncodeUtf8(c[1]), EncodeUtf8(c[2])}));
    CHECK(merged == EncodeUtf8(majority));
  }
}

TEST_CASE("rover with different lengths") {
  CHECK(RoverMerge(MakeSet("", {"abc", "abc", "ab"})) == "abc");
  CHECK(RoverMerge(MakeSet("", {"ab", "ab", "abc"})) == "ab");
  CHECK(RoverMerge(MakeSet("", {"", "", "abc"})) == "");
  CHECK(RoverMerge(MakeSet("", {"abcd", "xbcd", "abcdz"})) == "abcd");
  WordTransitionNetwork wtn;
  wtn.Add(U"ab");
  wtn.Add(U"b");
  REQUIRE(wtn.slots().size() == 2);
  CHECK(wtn.slots()[0][1] == std::nullopt);
  CHECK(wtn.slots()[1][1] == WordTransitionNetwork::Token(U'b'));
  CHECK(wtn.candidate_count() == 2);
}

TEST_CASE("rover ties go to the earliest candidate") {
  CHECK(RoverMerge(MakeSet("", {"北", "背"})) == "北");
  CHECK(RoverMerge(MakeSet("", {"背", "北"})) == "背");
  CHECK(RoverMerge(MakeSet("", {"a", "b", "c"})) == "a");
}

TEST_CASE("pinyin rerank scores") {
  const auto dict = testing::ToyDictionary();
  // 北京 and 背景 differ in both syllables; 被景 matches 背景 exactly.
  const auto r = PinyinRerank(MakeSet("北京", {"北京", "背景", "被景"}), dict);
  REQUIRE(r.scores.size() == 3);
  CHECK(r.scores[0].score == doctest::Approx(2.0));
  CHECK(r.scores[1].score == doctest::Approx(2.0));
  CHECK(r.scores[2].score == doctest::Approx(2.0));
  CHECK(r.selected == 0);

  const auto no_input =
      PinyinRerank(MakeSet("北京", {"北京", "背景", "被景"}), dict, {.include_input = false});
  CHECK(no_input.scores[0].score == doctest::Approx(2.0));
  CHECK(no_input.scores[1].score == doctest::Approx(1.0));
  CHECK(no_input.selected == 1);
  CHECK(no_input.text == "背景");
}

TEST_CASE("pinyin rerank against the literal objective") {
  const auto dict = testing::ToyDictionary();
  TestRng rng(5);
  for (int trial = 0; trial < 1000; ++trial) {
    const bool include_input = trial % 2 == 0;
    std::vector<std::string> texts;
    std::vector<std::vector<std::string>> tokens;
    for (int k = 0; k < 3; ++k) {
      texts.push_back(testing::RandomToyString(rng, 10));
      tokens.push_back(ToyTokens(texts.back()));
    }
    const std::string input = testing::RandomToyString(rng, 10);
    const auto r = PinyinRerank(MakeSet(input, texts), dict, {.include_input = include_input});
    CHECK(r.selected == testing::OracleRerankArgmin(tokens, ToyTokens(input), include_input));
    CHECK(r.text == texts[r.selected]);
  }
}

TEST_CASE("pinyin syllable tokens") {
  const auto dict = testing::ToyDictionary();
  CHECK(PinyinSyllableTokens("北京", dict) == std::vector<std::string>{"bei3", "jing1"});
  CHECK(PinyinSyllableTokens("", dict).empty());
}

TEST_CASE("llm rerank picks the named candidate") {
  const auto dict = testing::ToyDictionary();
  std::string answer = "2";
  int calls = 0;
  auto transport = std::make_shared<FnTransport>([&](const std::string&) {
    ++calls;
    if (answer == "throw") throw EndpointError("down", false);
    return answer;
  });
  EndpointConfig cfg;
  cfg.backoff_initial_ms = 1;
  ChatClient client(cfg, transport, [](int) {});
  ResponseCache cache;
  Corrector corrector(client, cache, dict);
  const auto set = MakeSet("北京", {"北京", "背景", "被景"});

  auto r = LlmRerank(set, corrector);
  CHECK_FALSE(r.fallback);
  CHECK(r.selected == 1);
  CHECK(r.text == "背景");
  CHECK_FALSE(r.cache_hit);
  r = LlmRerank(set, corrector);
  CHECK(r.cache_hit);
  CHECK(calls == 1);

  const auto by_pinyin = PinyinRerank(set, dict);
  answer = "无法判断";
  const auto set2 = MakeSet("背景", {"北京", "背景", "被景"});
  r = LlmRerank(set2, corrector);
  CHECK(r.fallback);
  CHECK(r.error == "answer names no candidate");
  CHECK(r.selected == PinyinRerank(set2, dict).selected);

  answer = "throw";
  const auto set3 = MakeSet("被景", {"北京", "背景", "被景"});
  r = LlmRerank(set3, corrector);
  CHECK(r.fallback);
  CHECK_FALSE(r.error.empty());
  CHECK(r.selected == PinyinRerank(set3, dict).selected);
  CHECK(by_pinyin.selected == 0);
}

TEST_CASE("batch llm rerank") {
  const auto dict = testing::ToyDictionary();
  std::atomic<int> calls{0};
  auto transport = std::make_shared<FnTransport>([&](const std::string& prompt) {
    ++calls;
    return prompt.find("被景") != std::string::npos ? std::string("3") : std::string("?");
  });
  EndpointConfig cfg;
  cfg.max_concurrency = 4;
  ChatClient client(cfg, transport, [](int) {});
  ResponseCache cache;
  Corrector corrector(client, cache, dict);
  std::vector<CandidateSet> sets = {MakeSet("北京", {"北京", "背景", "被景"}),
                                    MakeSet("背景", {"北京", "背景"}),
                                    MakeSet("北京", {"北京", "背景", "被景"})};
  sets[2].id = "y";
  const auto r = BatchLlmRerank(sets, corrector);
  REQUIRE(r.size() == 3);
  CHECK(calls == 2);
  CHECK(r[0].selected == 2);
  CHECK_FALSE(r[0].cache_hit);
  CHECK(r[2].selected == 2);
  CHECK(r[2].cache_hit);
  CHECK(r[1].fallback);
  CHECK(r[1].answered);
  CHECK(BatchLlmRerank({}, corrector).empty());
}

TEST_CASE("candidate sets from jsonl") {
  testing::TempDir dir;
  const auto s = MakeSet("背景", {"北京", "背景"});
  testing::WriteText(dir / "c.jsonl", s.ToJson().dump() + "\n\n" + s.ToJson().dump() + "\n");
  const auto sets = LoadCandidateSets(dir / "c.jsonl");
  REQUIRE(sets.size() == 2);
  CHECK(sets[1].ToJson() == s.ToJson());
  testing::WriteText(dir / "bad.jsonl", "{\"id\":\"x\"}\n");
  CHECK_THROWS_AS(LoadCandidateSets(dir / "bad.jsonl"), InputError);
}

}  // namespace
}  // namespace pygec
