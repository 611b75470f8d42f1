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

#ifndef PYGEC_CHAT_CLIENT_H_
#define PYGEC_CHAT_CLIENT_H_

#include <atomic>
#include <filesystem>
#include <fstream>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <unordered_map>

#include "pygec/jsonl.h"

namespace pygec {

// OpenAI-compatible chat-completions endpoint. The API key itself never
// appears here: only the name of the environment variable holding it.
struct EndpointConfig {
  std::string base_url = "http://127.0.0.1:8000";
  std::string model = "default";
  std::string api_key_env = "PYGEC_API_KEY";
  double temperature = 0.0;  // greedy decoding
  int max_tokens = 512;
  double timeout_seconds = 60.0;
  int max_retries = 3;
  int max_concurrency = 4;
  int backoff_initial_ms = 500;
  int backoff_max_ms = 8000;
  std::optional<std::string> system_prompt;
  // Share of failed items above which a batch run is a partial failure.
  double max_failure_rate = 0.0;

  // Throws InputError on out-of-range values.
  void Validate() const;
  Json ToJson() const;
  static EndpointConfig FromJson(const Json& j);
};

struct ChatRequest {
  std::string model;
  std::optional<std::string> system_prompt;
  std::string prompt;
  double temperature = 0.0;
  int max_tokens = 512;

  // Body of POST /v1/chat/completions.
  Json ToJson() const;
};

// Sends one request and returns the assistant message content. Failures
// throw EndpointError; transient() marks retryable ones.
class ChatTransport {
 public:
  virtual ~ChatTransport() = default;
  virtual std::string Complete(const ChatRequest& request) = 0;
};

class HttpChatTransport : public ChatTransport {
 public:
  explicit HttpChatTransport(const EndpointConfig& config);
  std::string Complete(const ChatRequest& request) override;

  // Splits "https://host:8000/prefix" into ("https://host:8000", "/prefix").
  static std::pair<std::string, std::string> SplitBaseUrl(const std::string& url);

 private:
  std::string origin_;
  std::string path_;
  std::string api_key_;
  double timeout_seconds_;
};

// Replays recorded {"prompt", "response"} lines; unknown prompts are a
// permanent failure.
class FixtureTransport : public ChatTransport {
 public:
  static std::shared_ptr<FixtureTransport> Load(const std::filesystem::path& path);
  void Add(std::string prompt, std::string response);
  std::string Complete(const ChatRequest& request) override;
  size_t size() const { return responses_.size(); }

 private:
  std::unordered_map<std::string, std::string> responses_;
};

// Forwards to `inner` and appends every successful exchange to `path` in
// the FixtureTransport format.
class RecordingTransport : public ChatTransport {
 public:
  RecordingTransport(std::shared_ptr<ChatTransport> inner,
                     const std::filesystem::path& path);
  std::string Complete(const ChatRequest& request) override;

 private:
  std::shared_ptr<ChatTransport> inner_;
  std::mutex mu_;
  std::ofstream out_;
};

// Single-turn completion with retries. Transient failures are retried up
// to max_retries times with exponential backoff
// min(backoff_max_ms, backoff_initial_ms * 2^attempt).
class ChatClient {
 public:
  using SleepFn = std::function<void(int milliseconds)>;

  ChatClient(EndpointConfig config, std::shared_ptr<ChatTransport> transport,
             SleepFn sleep = nullptr);

  // Thread-safe. Throws EndpointError once retries are exhausted or on a
  // permanent failure.
  std::string Complete(const std::string& prompt);

  const EndpointConfig& config() const { return config_; }
  size_t attempts() const { return attempts_.load(); }
  size_t retries() const { return retries_.load(); }

 private:
  EndpointConfig config_;
  std::shared_ptr<ChatTransport> transport_;
  SleepFn sleep_;
  std::atomic<size_t> attempts_{0};
  std::atomic<size_t> retries_{0};
};

}  // namespace pygec

#endif  // PYGEC_CHAT_CLIENT_H_
