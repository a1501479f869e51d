#include "verifact/chat_backend.hpp"

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include "http_client.hpp"
#include "verifact/errors.hpp"
#include "verifact/hash.hpp"

namespace verifact {

using nlohmann::json;

void run_with_retries(const RetryPolicy& policy, const std::function<void()>& attempt) {
  for (std::size_t tries = 0;; ++tries) {
    try {
      attempt();
      return;
    } catch (const BackendError& e) {
      if (!e.retryable() || tries >= policy.backoff.size()) throw;
      spdlog::warn("retrying after backend error ({}): {}", tries + 1, e.what());
      if (policy.sleep) policy.sleep(policy.backoff[tries]);
    }
  }
}

std::string chat_request_body(std::string_view model, std::string_view prompt,
                              const GenerationParams& params) {
  json body{{"model", model},
            {"messages", json::array({json{{"role", "user"}, {"content", prompt}}})},
            {"temperature", params.temperature},
            {"max_tokens", params.max_tokens}};
  return body.dump();
}

std::string parse_chat_response(std::string_view body) {
  json parsed;
  try {
    parsed = json::parse(body);
  } catch (const json::parse_error& e) {
    throw BackendError(fmt::format("chat response is not JSON: {}", e.what()), false);
  }
  try {
    const auto& content = parsed.at("choices").at(0).at("message").at("content");
    if (content.is_null()) return {};
    return content.get<std::string>();
  } catch (const json::exception& e) {
    throw BackendError(fmt::format("chat response lacks choices[0].message.content: {}",
                                   e.what()),
                       false);
  }
}

HttpChatBackend::HttpChatBackend(EndpointConfig endpoint, RetryPolicy retry)
    : endpoint_(std::move(endpoint)),
      retry_(std::move(retry)),
      limiter_(endpoint_.max_requests_per_second) {
  if (endpoint_.base_url.empty()) throw ConfigError("chat endpoint has no base URL");
  if (endpoint_.model.empty()) throw ConfigError("chat endpoint has no model name");
}

std::string HttpChatBackend::complete(std::string_view prompt, const GenerationParams& params) {
  const std::string body = chat_request_body(endpoint_.model, prompt, params);
  std::vector<std::pair<std::string, std::string>> headers;
  if (!endpoint_.api_key.empty()) {
    headers.emplace_back("Authorization", "Bearer " + endpoint_.api_key);
  }
  std::string content;
  run_with_retries(retry_, [&] {
    limiter_.acquire();
    calls_.fetch_add(1);
    const auto response =
        detail::post_json(endpoint_.base_url, "/chat/completions", headers, body,
                          endpoint_.timeout);
    if (response.status < 200 || response.status >= 300) {
      detail::throw_http_status("chat completion", response);
    }
    content = parse_chat_response(response.body);
  });
  return content;
}

MockChatBackend::MockChatBackend(MockTranscript transcript, std::string id)
    : transcript_(std::move(transcript)), id_(std::move(id)) {}

std::unique_ptr<MockChatBackend> MockChatBackend::from_file(const std::filesystem::path& path) {
  return std::make_unique<MockChatBackend>(MockTranscript::load(path),
                                           "mock:" + path.filename().string());
}

std::string MockChatBackend::complete(std::string_view prompt, const GenerationParams&) {
  calls_.fetch_add(1);
  const auto hit = transcript_.find(prompt);
  if (!hit) {
    throw BackendError(
        fmt::format("mock transcript has no entry for request {}", sha256_hex(prompt)), false);
  }
  if (!hit->is_string()) {
    throw BackendError("mock chat transcript entries must be strings", false);
  }
  return hit->get<std::string>();
}

}  // namespace verifact
