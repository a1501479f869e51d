#pragma once

#include <atomic>
#include <chrono>
#include <cstddef>
#include <filesystem>
#include <functional>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "verifact/executor.hpp"
#include "verifact/mock_transcript.hpp"

namespace verifact {

struct GenerationParams {
  double temperature = 0.0;
  int max_tokens = 1024;
};

/// Where an OpenAI-compatible chat endpoint lives. `base_url` includes any
/// path prefix, e.g. "https://api.openai.com/v1".
struct EndpointConfig {
  std::string base_url;
  std::string model;
  std::string api_key;
  double max_requests_per_second = 0.0;
  std::chrono::seconds timeout{120};
};

/// Retry schedule for transport errors and HTTP 5xx. One initial attempt plus
/// one retry per backoff entry.
struct RetryPolicy {
  std::vector<std::chrono::milliseconds> backoff{std::chrono::seconds(1),
                                                 std::chrono::seconds(2),
                                                 std::chrono::seconds(4)};
  std::function<void(std::chrono::milliseconds)> sleep = [](std::chrono::milliseconds d) {
    std::this_thread::sleep_for(d);
  };

  static RetryPolicy none() {
    RetryPolicy p;
    p.backoff.clear();
    return p;
  }
};

/// Runs `attempt` under `policy`. Non-retryable BackendErrors and all other
/// exceptions propagate immediately.
void run_with_retries(const RetryPolicy& policy, const std::function<void()>& attempt);

class ChatBackend {
 public:
  virtual ~ChatBackend() = default;

  /// Sends `prompt` as a single user message and returns the first choice's
  /// content. Throws BackendError.
  virtual std::string complete(std::string_view prompt, const GenerationParams& params) = 0;

  /// Identifier recorded in outputs (model name or "mock:<file>").
  virtual std::string id() const = 0;

  /// Number of completed or attempted requests dispatched by this backend.
  virtual std::size_t call_count() const = 0;
};

/// Builds the JSON body sent to POST <base_url>/chat/completions.
std::string chat_request_body(std::string_view model, std::string_view prompt,
                              const GenerationParams& params);
/// Extracts choices[0].message.content; BackendError on a malformed body.
std::string parse_chat_response(std::string_view body);

class HttpChatBackend final : public ChatBackend {
 public:
  HttpChatBackend(EndpointConfig endpoint, RetryPolicy retry = {});

  std::string complete(std::string_view prompt, const GenerationParams& params) override;
  std::string id() const override { return endpoint_.model; }
  std::size_t call_count() const override { return calls_.load(); }

 private:
  EndpointConfig endpoint_;
  RetryPolicy retry_;
  RateLimiter limiter_;
  std::atomic<std::size_t> calls_{0};
};

/// Replays canned completions keyed by the SHA-256 of the prompt text.
class MockChatBackend final : public ChatBackend {
 public:
  MockChatBackend(MockTranscript transcript, std::string id = "mock");
  static std::unique_ptr<MockChatBackend> from_file(const std::filesystem::path& path);

  std::string complete(std::string_view prompt, const GenerationParams& params) override;
  std::string id() const override { return id_; }
  std::size_t call_count() const override { return calls_.load(); }
  void reset_call_count() { calls_.store(0); }

 private:
  MockTranscript transcript_;
  std::string id_;
  std::atomic<std::size_t> calls_{0};
};

}  // namespace verifact
