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

#include <cmath>

#include "doctest.h"
#include "pygec/common.h"
#include "pygec/corpus.h"
#include "pygec/metrics.h"
#include "pygec/utf8.h"
#include "test_support.h"

namespace pygec {
namespace {

using testing::TestRng;

std::u32string RandomString(TestRng& rng, size_t max_len, size_t alphabet) {
  std::u32string s;
  const size_t n = rng.Below(max_len + 1);
  for (size_t i = 0; i < n; ++i) s += static_cast<char32_t>(U'a' + rng.Below(alphabet));
  return s;
}

// Rebuilds the hypothesis from the reference and the op list.
std::u32string Replay(const std::u32string& ref, const std::u32string& hyp,
                      const EditAlignment& a) {
  std::u32string out;
  size_t r = 0;
  for (const auto& op : a.ops) {
    switch (op.kind) {
      case EditKind::kMatch:
        REQUIRE(op.ref_index == r);
        out += ref[r++];
        break;
      case EditKind::kSubstitute:
        REQUIRE(op.ref_index == r);
        REQUIRE(ref[r] != hyp[op.hyp_index]);
        out += hyp[op.hyp_index];
        ++r;
        break;
      case EditKind::kDelete:
        REQUIRE(op.ref_index == r);
        ++r;
        break;
      case EditKind::kInsert:
        out += hyp[op.hyp_index];
        break;
    }
    if (op.kind != EditKind::kDelete) REQUIRE(op.hyp_index + 1 == out.size());
  }
  REQUIRE(r == ref.size());
  return out;
}

TEST_CASE("edit alignment examples") {
  const auto a = EditAlign(std::string_view("abc"), std::string_view("abc"));
  CHECK(a.counts.matches == 3);
  CHECK(a.counts.errors() == 0);
  const auto b = EditAlign(std::string_view("你好"), std::string_view(""));
  CHECK(b.counts.deletions == 2);
  CHECK(b.counts.substitutions + b.counts.insertions + b.counts.matches == 0);
}

TEST_CASE("tie-break prefers match, then substitution, then deletion") {
  // "ab" -> "ba": two substitutions and del+ins both cost 2.
  const auto a = EditAlign(std::u32string_view(U"ab"), std::u32string_view(U"ba"));
  CHECK(a.counts.substitutions == 2);
  CHECK(a.counts.insertions == 0);
  // "a" -> "" then "" -> "a"
  CHECK(EditAlign(std::u32string_view(U"a"), std::u32string_view(U"")).ops[0].kind ==
        EditKind::kDelete);
  CHECK(EditAlign(std::u32string_view(U""), std::u32string_view(U"a")).ops[0].kind ==
        EditKind::kInsert);
  // "aa" -> "a": the surviving character is matched to the last one.
  const auto c = EditAlign(std::u32string_view(U"aa"), std::u32string_view(U"a"));
  REQUIRE(c.ops.size() == 2);
  CHECK(c.ops[0].kind == EditKind::kDelete);
  CHECK(c.ops[1].kind == EditKind::kMatch);
}

TEST_CASE("random pairs agree with the recursive oracle and replay exactly") {
  TestRng rng(2024);
  for (int t = 0; t < 1000; ++t) {
    const auto ref = RandomString(rng, 12, 4);
    const auto hyp = RandomString(rng, 12, 4);
    const auto a = EditAlign(std::u32string_view(ref), std::u32string_view(hyp));
    REQUIRE(a.counts.errors() == testing::OracleEditDistance(ref, hyp));
    CHECK(a.counts.substitutions + a.counts.deletions + a.counts.matches == ref.size());
    CHECK(a.counts.substitutions + a.counts.insertions + a.counts.matches == hyp.size());
    CHECK(Replay(ref, hyp, a) == hyp);

    const auto swapped = EditAlign(std::u32string_view(hyp), std::u32string_view(ref));
    CHECK(swapped.counts.errors() == a.counts.errors());

    const auto third = RandomString(rng, 12, 4);
    const auto ac = EditAlign(std::u32string_view(ref), std::u32string_view(third));
    const auto bc = EditAlign(std::u32string_view(hyp), std::u32string_view(third));
    CHECK(ac.counts.errors() <= a.counts.errors() + bc.counts.errors());
  }
}

TEST_CASE("cer values") {
  CHECK(Cer("你好", "你好") == 0.0);
  CHECK(Cer("你好", "你号") == 0.5);
  CHECK(Cer("abcd", "") == 1.0);
  CHECK(Cer("ab", "abcdef") == 2.0);
  const auto empty = ComputeCer("", "");
  CHECK(empty.value == 0.0);
  CHECK(empty.empty_reference);
  const auto inserted = ComputeCer("", "多余");
  CHECK(inserted.value == 1.0);
  CHECK(inserted.empty_reference);

  TestRng rng(5);
  for (int t = 0; t < 300; ++t) {
    auto ref = RandomString(rng, 12, 4);
    if (ref.empty()) ref = U"a";
    const auto hyp = RandomString(rng, 12, 4);
    const double expected = static_cast<double>(testing::OracleEditDistance(ref, hyp)) /
                            static_cast<double>(ref.size());
    REQUIRE(Cer(EncodeUtf8(ref), EncodeUtf8(hyp)) == expected);
  }
}

TEST_CASE("scoring normalization") {
  CHECK(Cer("你好", "你 好!") == 0.0);
  CHECK(Cer("你好", "你好。") == 0.5);
  NormalizeOptions cjk;
  cjk.strip_cjk_punct = true;
  CHECK(Cer("你好", "你好。", cjk) == 0.0);
  NormalizeOptions raw{false, false, false, false};
  CHECK(Cer("你好", "你 好", raw) == 0.5);
  CHECK(Cer("\xc3\xa9", "e\xcc\x81") == 0.0);
  CHECK(Cer("\xc3\xa9", "e\xcc\x81", raw) == 2.0);
  const auto round = NormalizeOptions::FromJson(cjk.ToJson());
  CHECK(round.ToJson() == cjk.ToJson());
}

TEST_CASE("entity recall") {
  const std::vector<std::string> bj = {"北京"};
  CHECK(EntityRecall(bj, "我在北京工作") == std::optional<double>(1.0));
  CHECK(EntityRecall(bj, "上海") == std::optional<double>(0.0));
  CHECK_FALSE(EntityRecall({}, "上海").has_value());
  const std::vector<std::string> two = {"北京", "上海"};
  CHECK(EntityRecall(two, "北京") == std::optional<double>(0.5));
}

TEST_CASE("case statistics") {
  const std::vector<double> same = {0.1, 0.2, 0.0};
  auto s = ComputeCaseStats(same, same);
  CHECK(s.unchanged_pct == 100.0);
  CHECK(s.good_pct == 0.0);
  const std::vector<double> before = {0.5, 0.5}, after = {0.4, 0.6};
  s = ComputeCaseStats(before, after);
  CHECK(s.good_pct == 50.0);
  CHECK(s.bad_pct == 50.0);
  CHECK(s.unchanged_pct == 0.0);
  CHECK_THROWS_AS(ComputeCaseStats(before, same), Error);

  TestRng rng(8);
  for (int t = 0; t < 200; ++t) {
    std::vector<double> b, a;
    const size_t n = 1 + rng.Below(30);
    for (size_t i = 0; i < n; ++i) {
      b.push_back(static_cast<double>(rng.Below(4)) / 4);
      a.push_back(static_cast<double>(rng.Below(4)) / 4);
    }
    s = ComputeCaseStats(b, a);
    CHECK(s.good + s.bad + s.unchanged == n);
    CHECK(std::abs(s.good_pct + s.bad_pct + s.unchanged_pct - 100.0) < 1e-9);
  }
}

std::vector<Utterance> RandomCorpus(TestRng& rng, size_t n) {
  const std::u32string pool = U"北京上海你好天气银行很行";
  std::vector<Utterance> utts;
  for (size_t i = 0; i < n; ++i) {
    auto pick = [&](size_t max_len) {
      std::u32string s;
      const size_t len = rng.Below(max_len + 1);
      for (size_t k = 0; k < len; ++k) s += pool[rng.Below(pool.size())];
      return EncodeUtf8(s);
    };
    Utterance u;
    u.id = "u" + std::to_string(i);
    u.reference = pick(10);
    u.hypothesis = pick(10);
    const auto ref = DecodeUtf8(u.reference);
    if (ref.size() >= 2 && rng.Below(3) > 0) {
      const size_t begin = rng.Below(ref.size() - 1);
      u.entities.push_back(EncodeUtf8(ref.substr(begin, 2)));
      u.entities.push_back(EncodeUtf8(ref.substr(0, 1)));
    }
    utts.push_back(std::move(u));
  }
  return utts;
}

TEST_CASE("corpus report recount") {
  TestRng rng(99);
  const auto utts = RandomCorpus(rng, 200);
  std::vector<std::string> corrected;
  for (const auto& u : utts) corrected.push_back(u.reference.substr(0, u.reference.size() / 2));
  const auto report = EvaluateCorpus(utts, corrected);

  size_t errors = 0, chars = 0, hits = 0, total = 0, good = 0, bad = 0;
  double cer_sum = 0;
  for (size_t i = 0; i < utts.size(); ++i) {
    const auto ref = DecodeUtf8(utts[i].reference);
    const auto out = DecodeUtf8(corrected[i]);
    const size_t e = testing::OracleEditDistance(ref, out);
    errors += e;
    chars += ref.size();
    const double c = ref.empty() ? (out.empty() ? 0.0 : 1.0)
                                 : static_cast<double>(e) / static_cast<double>(ref.size());
    cer_sum += c;
    const auto hyp = DecodeUtf8(*utts[i].hypothesis);
    const size_t eb = testing::OracleEditDistance(ref, hyp);
    const double cb = ref.empty() ? (hyp.empty() ? 0.0 : 1.0)
                                  : static_cast<double>(eb) / static_cast<double>(ref.size());
    good += c < cb;
    bad += c > cb;
    for (const auto& ent : utts[i].entities) {
      ++total;
      hits += corrected[i].find(ent) != std::string::npos;
    }
  }
  CHECK(report.system.total_errors == errors);
  CHECK(report.system.total_ref_len == chars);
  CHECK(report.system.pooled_cer == static_cast<double>(errors) / static_cast<double>(chars));
  CHECK(report.system.mean_cer == doctest::Approx(cer_sum / utts.size()).epsilon(1e-12));
  CHECK(report.system.entities.hits == hits);
  CHECK(report.system.entities.total == total);
  CHECK(report.cases.good == good);
  CHECK(report.cases.bad == bad);
  CHECK(report.system.utterances.size() == utts.size());

  const auto j = report.ToJson();
  CHECK(j["system"]["errors"] == errors);
  CHECK(j["system"]["per_utterance"].size() == utts.size());
  CHECK(report.ToTable().find("baseline") != std::string::npos);
  const auto csv = report.PerUtteranceCsv();
  CHECK(std::count(csv.begin(), csv.end(), '\n') == static_cast<long>(utts.size() + 1));
}

TEST_CASE("identity pipelines") {
  TestRng rng(4);
  const auto utts = RandomCorpus(rng, 50);
  std::vector<std::string> refs, hyps;
  for (const auto& u : utts) {
    refs.push_back(u.reference);
    hyps.push_back(*u.hypothesis);
  }
  const auto perfect = EvaluateCorpus(utts, refs);
  CHECK(perfect.system.pooled_cer == 0.0);
  REQUIRE(perfect.system.entities.total > 0);
  CHECK(perfect.system.entities.recall() == std::optional<double>(1.0));

  const auto echo = EvaluateCorpus(utts, hyps);
  CHECK(echo.system.ToJson(true) == echo.baseline.ToJson(true));
  CHECK(echo.cases.unchanged_pct == 100.0);
}

TEST_CASE("missing hypothesis and size mismatch") {
  std::vector<Utterance> utts(1);
  utts[0].id = "x";
  utts[0].reference = "你好";
  const std::vector<std::string> out = {"你好"};
  CHECK_THROWS_AS(EvaluateCorpus(utts, out), InputError);
  utts[0].hypothesis = "你好";
  CHECK_THROWS_AS(EvaluateCorpus(utts, std::vector<std::string>{}), Error);
}

TEST_CASE("csv quotes awkward ids") {
  std::vector<Utterance> utts(1);
  utts[0].id = "a,b";
  utts[0].reference = "你好";
  utts[0].hypothesis = "你好";
  const std::vector<std::string> out = {"你好"};
  const auto csv = EvaluateCorpus(utts, out).PerUtteranceCsv();
  CHECK(csv.find("\"a,b\",2,") != std::string::npos);
}

}  // namespace
}  // namespace pygec
