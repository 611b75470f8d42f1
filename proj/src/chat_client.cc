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

#include "pygec/chat_client.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <thread>

#include "httplib.h"
#include "pygec/common.h"

namespace pygec {
namespace {

bool IsTransientStatus(int status) {
  return status == 408 || status == 429 || status >= 500;
}

void SetTimeout(httplib::Client& cli, double seconds) {
  const auto sec = static_cast<time_t>(seconds);
  const auto usec = static_cast<time_t>((seconds - static_cast<double>(sec)) * 1e6);
  cli.set_connection_timeout(sec, usec);
  cli.set_read_timeout(sec, usec);
  cli.set_write_timeout(sec, usec);
}

}  // namespace

void EndpointConfig::Validate() const {
  if (base_url.empty()) throw InputError("endpoint.base_url is empty");
  if (model.empty()) throw InputError("endpoint.model is empty");
  if (!(temperature >= 0.0)) throw InputError("endpoint.temperature must be >= 0");
  if (max_tokens < 1) throw InputError("endpoint.max_tokens must be >= 1");
  if (!(timeout_seconds > 0.0)) throw InputError("endpoint.timeout_seconds must be > 0");
  if (max_retries < 0) throw InputError("endpoint.max_retries must be >= 0");
  if (max_concurrency < 1) throw InputError("endpoint.max_concurrency must be >= 1");
  if (backoff_initial_ms < 0 || backoff_max_ms < 0) {
    throw InputError("endpoint backoff must be >= 0");
  }
  if (!(max_failure_rate >= 0.0 && max_failure_rate <= 1.0)) {
    throw InputError("endpoint.max_failure_rate must be in [0, 1]");
  }
}

Json EndpointConfig::ToJson() const {
  Json j{{"base_url", base_url},
         {"model", model},
         {"api_key_env", api_key_env},
         {"temperature", temperature},
         {"max_tokens", max_tokens},
         {"timeout_seconds", timeout_seconds},
         {"max_retries", max_retries},
         {"max_concurrency", max_concurrency},
         {"backoff_initial_ms", backoff_initial_ms},
         {"backoff_max_ms", backoff_max_ms},
         {"max_failure_rate", max_failure_rate}};
  j["system_prompt"] = system_prompt ? Json(*system_prompt) : Json(nullptr);
  return j;
}

EndpointConfig EndpointConfig::FromJson(const Json& j) {
  if (!j.is_object()) throw InputError("endpoint config must be an object");
  static const char* kKnown[] = {
      "base_url",        "model",         "api_key_env",        "temperature",
      "max_tokens",      "timeout_seconds", "max_retries",      "max_concurrency",
      "backoff_initial_ms", "backoff_max_ms", "system_prompt", "max_failure_rate"};
  for (const auto& [key, value] : j.items()) {
    if (std::find_if(std::begin(kKnown), std::end(kKnown),
                     [&](const char* k) { return key == k; }) == std::end(kKnown)) {
      throw InputError("unknown endpoint field '" + key + "'");
    }
  }
  EndpointConfig c;
  try {
    c.base_url = j.value("base_url", c.base_url);
    c.model = j.value("model", c.model);
    c.api_key_env = j.value("api_key_env", c.api_key_env);
    c.temperature = j.value("temperature", c.temperature);
    c.max_tokens = j.value("max_tokens", c.max_tokens);
    c.timeout_seconds = j.value("timeout_seconds", c.timeout_seconds);
    c.max_retries = j.value("max_retries", c.max_retries);
    c.max_concurrency = j.value("max_concurrency", c.max_concurrency);
    c.backoff_initial_ms = j.value("backoff_initial_ms", c.backoff_initial_ms);
    c.backoff_max_ms = j.value("backoff_max_ms", c.backoff_max_ms);
    c.max_failure_rate = j.value("max_failure_rate", c.max_failure_rate);
    if (auto it = j.find("system_prompt"); it != j.end() && !it->is_null()) {
      c.system_prompt = it->get<std::string>();
    }
  } catch (const Json::exception& e) {
    throw InputError(std::string("bad endpoint config: ") + e.what());
  }
  return c;
}

Json ChatRequest::ToJson() const {
  Json messages = Json::array();
  if (system_prompt) {
    messages.push_back({{"role", "system"}, {"content", *system_prompt}});
  }
  messages.push_back({{"role", "user"}, {"content", prompt}});
  return Json{{"model", model},
              {"messages", std::move(messages)},
              {"temperature", temperature},
              {"max_tokens", max_tokens}};
}

std::pair<std::string, std::string> HttpChatTransport::SplitBaseUrl(
    const std::string& url) {
  const auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos) {
    throw InputError("endpoint.base_url needs a scheme: " + url);
  }
  const auto path_begin = url.find('/', scheme_end + 3);
  if (path_begin == std::string::npos) return {url, ""};
  std::string path = url.substr(path_begin);
  while (!path.empty() && path.back() == '/') path.pop_back();
  return {url.substr(0, path_begin), path};
}

HttpChatTransport::HttpChatTransport(const EndpointConfig& config)
    : timeout_seconds_(config.timeout_seconds) {
  auto [origin, prefix] = SplitBaseUrl(config.base_url);
  origin_ = std::move(origin);
  path_ = prefix.ends_with("/v1") ? prefix + "/chat/completions"
                                  : prefix + "/v1/chat/completions";
  if (!config.api_key_env.empty()) {
    if (const char* key = std::getenv(config.api_key_env.c_str())) api_key_ = key;
  }
}

std::string HttpChatTransport::Complete(const ChatRequest& request) {
  httplib::Client cli(origin_);
  SetTimeout(cli, timeout_seconds_);
  httplib::Headers headers;
  if (!api_key_.empty()) {
    headers.emplace("Authorization", "Bearer " + api_key_);
  }
  auto res = cli.Post(path_, headers, request.ToJson().dump(), "application/json");
  if (!res) {
    throw EndpointError("transport error: " + httplib::to_string(res.error()),
                        /*transient=*/true);
  }
  if (res->status != 200) {
    throw EndpointError("HTTP " + std::to_string(res->status) + ": " +
                            res->body.substr(0, 200),
                        IsTransientStatus(res->status));
  }
  try {
    const Json body = Json::parse(res->body);
    const auto& content = body.at("choices").at(0).at("message").at("content");
    return content.is_null() ? std::string() : content.get<std::string>();
  } catch (const Json::exception& e) {
    throw EndpointError(std::string("malformed completion body: ") + e.what(),
                        /*transient=*/true);
  }
}

std::shared_ptr<FixtureTransport> FixtureTransport::Load(
    const std::filesystem::path& path) {
  auto fixture = std::make_shared<FixtureTransport>();
  ForEachJsonLine(path, [&](const Json& record, size_t line_no) {
    try {
      fixture->Add(record.at("prompt").get<std::string>(),
                   record.at("response").get<std::string>());
    } catch (const Json::exception& e) {
      throw InputError(path.string() + ":" + std::to_string(line_no) + ": " +
                       e.what());
    }
  });
  return fixture;
}

void FixtureTransport::Add(std::string prompt, std::string response) {
  responses_.insert_or_assign(std::move(prompt), std::move(response));
}

std::string FixtureTransport::Complete(const ChatRequest& request) {
  auto it = responses_.find(request.prompt);
  if (it == responses_.end()) {
    throw EndpointError("no recorded response for prompt", /*transient=*/false);
  }
  return it->second;
}

RecordingTransport::RecordingTransport(std::shared_ptr<ChatTransport> inner,
                                       const std::filesystem::path& path)
    : inner_(std::move(inner)), out_(path, std::ios::binary | std::ios::app) {
  if (!out_) throw InputError("cannot open recording file " + path.string());
}

std::string RecordingTransport::Complete(const ChatRequest& request) {
  std::string response = inner_->Complete(request);
  std::lock_guard<std::mutex> lock(mu_);
  out_ << DumpLine(Json{{"prompt", request.prompt}, {"response", response}})
       << '\n';
  out_.flush();
  return response;
}

ChatClient::ChatClient(EndpointConfig config,
                       std::shared_ptr<ChatTransport> transport, SleepFn sleep)
    : config_(std::move(config)),
      transport_(std::move(transport)),
      sleep_(std::move(sleep)) {
  config_.Validate();
  if (!sleep_) {
    sleep_ = [](int ms) {
      std::this_thread::sleep_for(std::chrono::milliseconds(ms));
    };
  }
}

std::string ChatClient::Complete(const std::string& prompt) {
  ChatRequest request;
  request.model = config_.model;
  request.system_prompt = config_.system_prompt;
  request.prompt = prompt;
  request.temperature = config_.temperature;
  request.max_tokens = config_.max_tokens;
  for (int attempt = 0;; ++attempt) {
    ++attempts_;
    try {
      return transport_->Complete(request);
    } catch (const EndpointError& e) {
      if (!e.transient() || attempt >= config_.max_retries) {
        throw EndpointError(std::string(e.what()) + " (after " +
                                std::to_string(attempt + 1) + " attempt(s))",
                            e.transient());
      }
    }
    ++retries_;
    const double delay = std::min<double>(
        config_.backoff_max_ms, config_.backoff_initial_ms * std::ldexp(1.0, attempt));
    sleep_(static_cast<int>(delay));
  }
}

}  // namespace pygec
