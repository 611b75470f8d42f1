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
#include <cstdlib>
#include <deque>
#include <fstream>
#include <map>

#include "doctest.h"
#include "pygec/chat_client.h"
#include "pygec/common.h"
#include "pygec/corpus.h"
#include "pygec/corrector.h"
#include "pygec/metrics.h"
#include "pygec/parallel.h"
#include "pygec/prompt.h"
#include "pygec/response_cache.h"
#include "test_support.h"

namespace pygec {
namespace {

using testing::FixtureServer;
using testing::TempDir;

const PinyinDictionary& Dict() {
  static const PinyinDictionary d =
      PinyinDictionary::Load(testing::ShippedDataDir() / "pinyin.tsv");
  return d;
}

// Replays a fixed sequence of outcomes; an empty script answers "ok".
class ScriptedTransport : public ChatTransport {
 public:
  struct Step {
    bool fail = false;
    bool transient = true;
    std::string content;
  };
  explicit ScriptedTransport(std::deque<Step> script) : script_(std::move(script)) {}
  std::string Complete(const ChatRequest& request) override {
    last_ = request;
    ++calls;
    if (script_.empty()) return "ok";
    Step s = script_.front();
    script_.pop_front();
    if (s.fail) throw EndpointError("scripted failure", s.transient);
    return s.content;
  }
  ChatRequest last_;
  int calls = 0;

 private:
  std::deque<Step> script_;
};

EndpointConfig FastConfig(const std::string& base_url = "http://127.0.0.1:1") {
  EndpointConfig c;
  c.base_url = base_url;
  c.backoff_initial_ms = 1;
  c.backoff_max_ms = 4;
  c.timeout_seconds = 10;
  return c;
}

std::vector<Utterance> MakeUtterances(size_t n) {
  const std::vector<std::pair<std::string, std::string>> pairs = {
      {"北京欢迎你", "背景欢迎你"}, {"今天天气很好", "今天天汽很好"},
      {"我在银行工作", "我在银杭工作"}, {"你好", "你好"}};
  std::vector<Utterance> utts;
  for (size_t i = 0; i < n; ++i) {
    Utterance u;
    u.id = "u" + std::to_string(i);
    u.reference = pairs[i % pairs.size()].first + std::to_string(i);
    u.hypothesis = pairs[i % pairs.size()].second + std::to_string(i);
    utts.push_back(std::move(u));
  }
  return utts;
}

TEST_CASE("task names round trip") {
  for (auto t : {TaskKind::kDirect, TaskKind::kPyGec, TaskKind::kPinyinToText,
                 TaskKind::kTextToPinyin, TaskKind::kRerank}) {
    CHECK(ParseTaskKind(TaskName(t)) == t);
  }
  CHECK(std::string(TaskName(TaskKind::kPyGec)) == "pygec");
  CHECK_THROWS_AS(ParseTaskKind("Direct"), InputError);
}

TEST_CASE("prompt templates") {
  CHECK(BuildPrompt(TaskKind::kDirect, "你好") == "请改正转录文本。 转录文本：你好");
  CHECK(BuildPrompt(TaskKind::kPinyinToText, "", std::string_view("ni3 hao3")) ==
        "请将拼音转化为文本。拼音：ni3 hao3");
  CHECK(BuildPrompt(TaskKind::kPyGec, "你号", std::string_view("ni3 hao4")) ==
        "请根据转录文本的拼音，改正转录文本。（注意同音词的错误）转录文本：你号 拼音：ni3 hao4");
  CHECK(BuildPrompt(TaskKind::kTextToPinyin, "", std::nullopt, std::string_view("你好")) ==
        "请将文本转化为拼音。文本：你好");
  CHECK(BuildPrompt(TaskKind::kDirect, "你好") == BuildPrompt(TaskKind::kDirect, "你好"));
}

TEST_CASE("prompt slot preconditions") {
  CHECK_THROWS_AS(BuildPrompt(TaskKind::kPyGec, "你好"), Error);
  CHECK_THROWS_AS(BuildPrompt(TaskKind::kPinyinToText, "你好"), Error);
  CHECK_THROWS_AS(BuildPrompt(TaskKind::kDirect, "你好", std::string_view("ni3")), Error);
  CHECK_THROWS_AS(BuildPrompt(TaskKind::kTextToPinyin, "你好"), Error);
  CHECK_THROWS_AS(BuildPrompt(TaskKind::kRerank, "你好"), Error);
}

TEST_CASE("rerank prompt and choice parsing") {
  const std::vector<std::string> cands = {"北京欢迎你", "背景欢迎你"};
  CHECK(BuildRerankPrompt("背景欢迎你", cands) ==
        "请从以下候选改正结果中选出最准确的一项，只回答其编号。\n转录文本：背景欢迎你\n"
        "1. 北京欢迎你\n2. 背景欢迎你");
  CHECK(ParseRerankChoice("1", cands) == std::optional<size_t>(0));
  CHECK(ParseRerankChoice(" 第2项 ", cands) == std::optional<size_t>(1));
  CHECK(ParseRerankChoice("北京欢迎你。", cands) == std::optional<size_t>(0));
  CHECK_FALSE(ParseRerankChoice("3", cands).has_value());
  CHECK_FALSE(ParseRerankChoice("0", cands).has_value());
  CHECK_FALSE(ParseRerankChoice("不知道", cands).has_value());
}

TEST_CASE("answer extraction") {
  CHECK(ExtractAnswer("  北京欢迎你\n") == "北京欢迎你");
  CHECK(ExtractAnswer("转录文本：北京欢迎你") == "北京欢迎你");
  CHECK(ExtractAnswer("　文本: 北京") == "北京");
  CHECK(ExtractAnswer("拼音：ni3 hao3") == "ni3 hao3");
  CHECK(ExtractAnswer("答案：北京") == "答案：北京");
  CHECK(ExtractAnswer("") == "");
}

TEST_CASE("endpoint config") {
  EndpointConfig c;
  CHECK(c.temperature == 0.0);
  CHECK(c.api_key_env == "PYGEC_API_KEY");
  CHECK_FALSE(c.system_prompt.has_value());
  c.Validate();
  auto bad = c;
  bad.temperature = -1;
  CHECK_THROWS_AS(bad.Validate(), InputError);
  bad = c;
  bad.max_retries = -1;
  CHECK_THROWS_AS(bad.Validate(), InputError);
  bad = c;
  bad.max_concurrency = 0;
  CHECK_THROWS_AS(bad.Validate(), InputError);
  c.system_prompt = "sys";
  c.model = "m";
  CHECK(EndpointConfig::FromJson(c.ToJson()).ToJson() == c.ToJson());
  CHECK_THROWS_AS(EndpointConfig::FromJson(Json{{"api_key", "secret"}}), InputError);
}

TEST_CASE("chat request body") {
  ChatRequest r;
  r.model = "m";
  r.prompt = "你好";
  r.max_tokens = 7;
  auto j = r.ToJson();
  CHECK(j["model"] == "m");
  CHECK(j["temperature"] == 0.0);
  CHECK(j["max_tokens"] == 7);
  REQUIRE(j["messages"].size() == 1);
  CHECK(j["messages"][0]["role"] == "user");
  CHECK(j["messages"][0]["content"] == "你好");
  r.system_prompt = "sys";
  j = r.ToJson();
  REQUIRE(j["messages"].size() == 2);
  CHECK(j["messages"][0]["role"] == "system");
}

TEST_CASE("base url splitting") {
  using P = std::pair<std::string, std::string>;
  CHECK(HttpChatTransport::SplitBaseUrl("http://h:8000") == P{"http://h:8000", ""});
  CHECK(HttpChatTransport::SplitBaseUrl("https://h/api/") == P{"https://h", "/api"});
  CHECK_THROWS_AS(HttpChatTransport::SplitBaseUrl("h:8000"), InputError);
}

TEST_CASE("retries use capped exponential backoff") {
  auto t = std::make_shared<ScriptedTransport>(std::deque<ScriptedTransport::Step>{
      {true, true, ""}, {true, true, ""}, {true, true, ""}, {false, true, "好"}});
  std::vector<int> sleeps;
  EndpointConfig c = FastConfig();
  c.backoff_initial_ms = 100;
  c.backoff_max_ms = 300;
  ChatClient client(c, t, [&](int ms) { sleeps.push_back(ms); });
  CHECK(client.Complete("p") == "好");
  CHECK(sleeps == std::vector<int>{100, 200, 300});
  CHECK(client.attempts() == 4);
  CHECK(client.retries() == 3);
  CHECK(t->last_.prompt == "p");
}

TEST_CASE("permanent errors and exhausted retries") {
  auto perm = std::make_shared<ScriptedTransport>(
      std::deque<ScriptedTransport::Step>{{true, false, ""}});
  ChatClient a(FastConfig(), perm, [](int) {});
  CHECK_THROWS_AS(a.Complete("p"), EndpointError);
  CHECK(perm->calls == 1);

  std::deque<ScriptedTransport::Step> fails(10, {true, true, ""});
  auto flaky = std::make_shared<ScriptedTransport>(fails);
  ChatClient b(FastConfig(), flaky, [](int) {});
  try {
    b.Complete("p");
    FAIL("expected EndpointError");
  } catch (const EndpointError& e) {
    CHECK(e.transient());
  }
  CHECK(flaky->calls == 4);
}

TEST_CASE("http transport against a fixture server") {
  FixtureServer server([](const std::string& prompt) -> std::pair<int, std::string> {
    if (prompt == "boom") return {503, "busy"};
    if (prompt == "bad") return {400, "bad request"};
    return {200, "echo:" + prompt};
  });
  setenv("PYGEC_TEST_KEY", "sk-test", 1);
  EndpointConfig c = FastConfig(server.base_url());
  c.api_key_env = "PYGEC_TEST_KEY";
  HttpChatTransport http(c);
  ChatRequest r;
  r.model = "m";
  r.prompt = "你好";
  CHECK(http.Complete(r) == "echo:你好");
  CHECK(server.last_authorization() == "Bearer sk-test");

  r.prompt = "boom";
  try {
    http.Complete(r);
    FAIL("expected EndpointError");
  } catch (const EndpointError& e) {
    CHECK(e.transient());
  }
  r.prompt = "bad";
  try {
    http.Complete(r);
    FAIL("expected EndpointError");
  } catch (const EndpointError& e) {
    CHECK_FALSE(e.transient());
  }

  EndpointConfig v1 = FastConfig(server.base_url() + "/v1");
  r.prompt = "x";
  CHECK(HttpChatTransport(v1).Complete(r) == "echo:x");

  EndpointConfig dead = FastConfig("http://127.0.0.1:1");
  try {
    HttpChatTransport(dead).Complete(r);
    FAIL("expected EndpointError");
  } catch (const EndpointError& e) {
    CHECK(e.transient());
  }
  unsetenv("PYGEC_TEST_KEY");
}

TEST_CASE("response cache") {
  TempDir dir;
  const auto k1 = ResponseCache::Key("m", TaskKind::kDirect, "p");
  CHECK(k1 != ResponseCache::Key("m2", TaskKind::kDirect, "p"));
  CHECK(k1 != ResponseCache::Key("m", TaskKind::kPyGec, "p"));
  CHECK(k1 != ResponseCache::Key("m", TaskKind::kDirect, "q"));
  CHECK(k1.size() == 64);
  {
    ResponseCache cache(dir / "cache.jsonl");
    CHECK_FALSE(cache.Get(k1).has_value());
    cache.Put(k1, "m", TaskKind::kDirect, "p", "答案");
    CHECK(cache.Get(k1) == std::optional<std::string>("答案"));
  }
  {
    std::ofstream out(dir / "cache.jsonl", std::ios::app);
    out << "{\"key\":\"trunc";
  }
  ResponseCache reopened(dir / "cache.jsonl");
  CHECK(reopened.size() == 1);
  CHECK(reopened.Get(k1) == std::optional<std::string>("答案"));
}

TEST_CASE("response cache under concurrent use") {
  TempDir dir;
  {
    ResponseCache cache(dir / "c.jsonl");
    ParallelFor(400, 8, [&](size_t i) {
      const std::string p = "p" + std::to_string(i % 100);
      const auto key = ResponseCache::Key("m", TaskKind::kDirect, p);
      if (!cache.Get(key)) cache.Put(key, "m", TaskKind::kDirect, p, "r" + p);
    });
    CHECK(cache.size() == 100);
  }
  ResponseCache reopened(dir / "c.jsonl");
  CHECK(reopened.size() == 100);
  for (int i = 0; i < 100; ++i) {
    const std::string p = "p" + std::to_string(i);
    CHECK(reopened.Get(ResponseCache::Key("m", TaskKind::kDirect, p)) ==
          std::optional<std::string>("r" + p));
  }
}

TEST_CASE("corrector prompts") {
  auto t = std::make_shared<ScriptedTransport>(std::deque<ScriptedTransport::Step>{});
  ChatClient client(FastConfig(), t, [](int) {});
  ResponseCache cache;
  Corrector corrector(client, cache, Dict());
  Utterance u{"a", "你好", "你号", {}, ""};
  CHECK(corrector.PromptFor(u, TaskKind::kPyGec) ==
        BuildPrompt(TaskKind::kPyGec, "你号", RenderPinyin("你号", Dict())));
  CHECK(corrector.PromptFor(u, TaskKind::kPinyinToText) ==
        BuildPrompt(TaskKind::kPinyinToText, "", RenderPinyin("你号", Dict())));
  CHECK(corrector.PromptFor(u, TaskKind::kTextToPinyin) ==
        BuildPrompt(TaskKind::kTextToPinyin, "", std::nullopt, std::string_view("你号")));
  CHECK_THROWS_AS(corrector.PromptFor(u, TaskKind::kRerank), Error);
  u.hypothesis.reset();
  CHECK_THROWS_AS(corrector.PromptFor(u, TaskKind::kDirect), InputError);
}

TEST_CASE("echo and reference endpoints") {
  const auto utts = MakeUtterances(12);
  std::map<std::string, std::string> hyp_by_prompt, ref_by_prompt;
  {
    auto t = std::make_shared<ScriptedTransport>(std::deque<ScriptedTransport::Step>{});
    ChatClient client(FastConfig(), t);
    ResponseCache cache;
    Corrector c(client, cache, Dict());
    for (const auto& u : utts) {
      for (auto task : {TaskKind::kDirect, TaskKind::kPyGec}) {
        hyp_by_prompt[c.PromptFor(u, task)] = *u.hypothesis;
        ref_by_prompt[c.PromptFor(u, task)] = "转录文本：" + u.reference + "\n";
      }
    }
  }
  const std::vector<TaskKind> tasks = {TaskKind::kDirect, TaskKind::kPyGec};
  FixtureServer echo([&](const std::string& p) {
    return std::make_pair(200, hyp_by_prompt.at(p));
  });
  FixtureServer oracle([&](const std::string& p) {
    return std::make_pair(200, ref_by_prompt.at(p));
  });

  ChatClient echo_client(FastConfig(echo.base_url()),
                         std::make_shared<HttpChatTransport>(FastConfig(echo.base_url())));
  ResponseCache cache1;
  Corrector echo_corrector(echo_client, cache1, Dict());
  const auto echoed = echo_corrector.BatchCorrect(utts, tasks);
  REQUIRE(echoed.size() == utts.size() * 2);
  for (size_t i = 0; i < echoed.size(); ++i) {
    CHECK(echoed[i].utterance_id == utts[i / 2].id);
    CHECK(echoed[i].task == tasks[i % 2]);
    CHECK(echoed[i].text == *utts[i / 2].hypothesis);
    CHECK_FALSE(echoed[i].failed);
  }

  ChatClient oracle_client(FastConfig(oracle.base_url()),
                           std::make_shared<HttpChatTransport>(FastConfig(oracle.base_url())));
  ResponseCache cache2;
  Corrector oracle_corrector(oracle_client, cache2, Dict());
  const auto fixed = oracle_corrector.BatchCorrect(utts, tasks);
  std::vector<std::string> texts;
  for (size_t i = 0; i < fixed.size(); i += 2) texts.push_back(fixed[i].text);
  CHECK(EvaluateCorpus(utts, texts).system.pooled_cer == 0.0);

  // Second pass is served from the cache.
  const size_t before = oracle.requests();
  const auto again = oracle_corrector.BatchCorrect(utts, tasks);
  CHECK(oracle.requests() == before);
  for (size_t i = 0; i < again.size(); ++i) {
    CHECK(again[i].cache_hit);
    CHECK(again[i].text == fixed[i].text);
    CHECK(again[i].raw == fixed[i].raw);
  }
}

TEST_CASE("failures fall back to the hypothesis") {
  const auto utts = MakeUtterances(3);
  auto t = std::make_shared<ScriptedTransport>(std::deque<ScriptedTransport::Step>{
      {false, true, "  "}, {true, false, ""}, {false, true, "北京欢迎你"}});
  EndpointConfig c = FastConfig();
  c.max_concurrency = 1;
  ChatClient client(c, t, [](int) {});
  ResponseCache cache;
  Corrector corrector(client, cache, Dict());
  const std::vector<TaskKind> tasks = {TaskKind::kDirect};
  const auto r = corrector.BatchCorrect(utts, tasks);
  REQUIRE(r.size() == 3);
  CHECK(r[0].failed);
  CHECK(r[0].error == "empty model output");
  CHECK(r[0].text == *utts[0].hypothesis);
  CHECK(r[1].failed);
  CHECK(r[1].text == *utts[1].hypothesis);
  CHECK_FALSE(r[2].failed);
  CHECK(r[2].text == "北京欢迎你");
  CHECK(FailureRate(r) == doctest::Approx(2.0 / 3.0));
  CHECK(cache.size() == 2);

  CHECK(corrector.BatchCorrect({}, tasks).empty());
  CHECK(FailureRate({}) == 0.0);
}

TEST_CASE("batch order and bounded concurrency") {
  const auto utts = MakeUtterances(60);
  testing::TestRng jitter(1);
  std::mutex mu;
  FixtureServer server([&](const std::string& p) {
    int ms;
    {
      std::lock_guard<std::mutex> lock(mu);
      ms = static_cast<int>(jitter.Below(15));
    }
    std::this_thread::sleep_for(std::chrono::milliseconds(ms));
    return std::make_pair(200, "A" + std::to_string(p.size()));
  });
  EndpointConfig c = FastConfig(server.base_url());
  c.max_concurrency = 3;
  ChatClient client(c, std::make_shared<HttpChatTransport>(c));
  ResponseCache cache;
  Corrector corrector(client, cache, Dict());
  const std::vector<TaskKind> tasks = {TaskKind::kDirect};
  const auto r = corrector.BatchCorrect(utts, tasks);
  REQUIRE(r.size() == utts.size());
  for (size_t i = 0; i < r.size(); ++i) {
    CHECK(r[i].utterance_id == utts[i].id);
    CHECK(r[i].text == "A" + std::to_string(corrector.PromptFor(utts[i], tasks[0]).size()));
  }
  CHECK(server.max_in_flight() <= 3);
  CHECK(server.max_in_flight() >= 2);
  std::vector<std::string> expected;
  for (const auto& u : utts) expected.push_back(corrector.PromptFor(u, tasks[0]));
  CHECK(server.completion_order() != expected);
}

TEST_CASE("repeated prompts in a batch are sent once") {
  auto utts = MakeUtterances(4);
  utts[2].hypothesis = utts[0].hypothesis;
  std::atomic<int> calls{0};
  FixtureServer server([&](const std::string& p) {
    ++calls;
    return std::make_pair(200, "R" + std::to_string(p.size()));
  });
  EndpointConfig c = FastConfig(server.base_url());
  c.max_concurrency = 4;
  for (int run = 0; run < 5; ++run) {
    calls = 0;
    ChatClient client(c, std::make_shared<HttpChatTransport>(c));
    ResponseCache cache;
    Corrector corrector(client, cache, Dict());
    const std::vector<TaskKind> tasks = {TaskKind::kDirect};
    const auto r = corrector.BatchCorrect(utts, tasks);
    CHECK(calls == 3);
    CHECK_FALSE(r[0].cache_hit);
    CHECK(r[2].cache_hit);
    CHECK(r[2].utterance_id == "u2");
    CHECK(r[2].text == r[0].text);
  }

  FixtureServer down([](const std::string&) { return std::make_pair(400, "no"); });
  EndpointConfig d = FastConfig(down.base_url());
  ChatClient client(d, std::make_shared<HttpChatTransport>(d));
  ResponseCache cache;
  Corrector corrector(client, cache, Dict());
  auto same_pinyin = MakeUtterances(2);
  same_pinyin[1].hypothesis = "她来了";
  same_pinyin[0].hypothesis = "他来了";
  const std::vector<TaskKind> p2t = {TaskKind::kPinyinToText};
  const auto r = corrector.BatchCorrect(same_pinyin, p2t);
  CHECK(down.requests() == 1);
  CHECK(r[1].failed);
  CHECK_FALSE(r[1].cache_hit);
  CHECK(r[1].text == "她来了");
}

TEST_CASE("transient fault injection recovers every item") {
  const auto utts = MakeUtterances(80);
  testing::FaultInjector faults(0.3, 3, 17);
  FixtureServer server([&](const std::string& p) -> std::pair<int, std::string> {
    if (faults.ShouldFail(p)) return {503, "injected"};
    return {200, "R" + std::to_string(p.size())};
  });
  EndpointConfig c = FastConfig(server.base_url());
  c.max_retries = 3;
  ChatClient client(c, std::make_shared<HttpChatTransport>(c));
  ResponseCache cache;
  Corrector corrector(client, cache, Dict());
  const std::vector<TaskKind> tasks = {TaskKind::kDirect, TaskKind::kPyGec};
  const auto r = corrector.BatchCorrect(utts, tasks);
  REQUIRE(r.size() == 160);
  for (size_t i = 0; i < r.size(); ++i) {
    CHECK_FALSE(r[i].failed);
    const auto prompt = corrector.PromptFor(utts[i / 2], tasks[i % 2]);
    CHECK(r[i].text == "R" + std::to_string(prompt.size()));
  }
  CHECK(faults.injected() > 0);
  CHECK(client.retries() == faults.injected());
  const double rate = static_cast<double>(faults.injected()) / faults.decisions();
  CHECK(rate > 0.2);
  CHECK(rate < 0.4);
}

TEST_CASE("record and replay give identical results") {
  TempDir dir;
  const auto utts = MakeUtterances(10);
  const std::vector<TaskKind> tasks = {TaskKind::kDirect, TaskKind::kPinyinToText};
  FixtureServer server([](const std::string& p) {
    return std::make_pair(200, "out" + std::to_string(p.size()));
  });
  auto dump = [&](const std::vector<CorrectionResult>& rs) {
    std::string s;
    for (const auto& r : rs) s += r.ToJson(false).dump() + "\n";
    return s;
  };
  EndpointConfig c = FastConfig(server.base_url());
  std::string live;
  {
    auto rec = std::make_shared<RecordingTransport>(std::make_shared<HttpChatTransport>(c),
                                                    dir / "rec.jsonl");
    ChatClient client(c, rec);
    ResponseCache cache;
    Corrector corrector(client, cache, Dict());
    live = dump(corrector.BatchCorrect(utts, tasks));
  }
  for (int run = 0; run < 2; ++run) {
    auto replay = FixtureTransport::Load(dir / "rec.jsonl");
    CHECK(replay->size() == 20);
    ChatClient client(c, replay);
    ResponseCache cache;
    Corrector corrector(client, cache, Dict());
    CHECK(dump(corrector.BatchCorrect(utts, tasks)) == live);
  }
  auto replay = FixtureTransport::Load(dir / "rec.jsonl");
  ChatRequest unknown;
  unknown.prompt = "never recorded";
  try {
    replay->Complete(unknown);
    FAIL("expected EndpointError");
  } catch (const EndpointError& e) {
    CHECK_FALSE(e.transient());
  }
}

TEST_CASE("correction result json") {
  CorrectionResult r;
  r.utterance_id = "a";
  r.task = TaskKind::kPyGec;
  r.raw = "x";
  r.text = "x";
  r.latency_ms = 3.5;
  const auto j = r.ToJson();
  CHECK(j["latency_ms"] == 3.5);
  CHECK_FALSE(r.ToJson(false).contains("latency_ms"));
  CHECK(CorrectionResult::FromJson(j).ToJson() == j);
  CHECK_THROWS_AS(CorrectionResult::FromJson(Json{{"id", "a"}}), InputError);
}

}  // namespace
}  // namespace pygec
