#pragma once

#include <nlohmann/json.hpp>

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>

namespace verifact {

/// Request-hash → canned response table backing the mock chat and search
/// backends.
///
/// File format: one JSON object per line, each with a "response" (any JSON
/// value) and exactly one key selector:
///   "key":     lower-case hex SHA-256 of the request content, or
///   "request": the raw request content (hashed on load), or
///   "default": true, the fallback answer for unknown requests.
class MockTranscript {
 public:
  MockTranscript() = default;

  static MockTranscript load(const std::filesystem::path& path);
  static MockTranscript parse(std::string_view text, std::string_view source = "<transcript>");

  void add(std::string_view request, nlohmann::json response);
  void add_by_key(std::string key, nlohmann::json response);
  void set_default(nlohmann::json response);

  /// Lookup by request content; falls back to the default entry.
  std::optional<nlohmann::json> find(std::string_view request) const;
  std::size_t size() const noexcept { return entries_.size(); }

  /// Serialises back to the file format ("key" selectors, sorted by key).
  std::string dump() const;

 private:
  std::unordered_map<std::string, nlohmann::json> entries_;
  std::optional<nlohmann::json> fallback_;
};

}  // namespace verifact
