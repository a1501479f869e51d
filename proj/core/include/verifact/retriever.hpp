#pragma once

#include <nlohmann/json.hpp>

#include <atomic>
#include <chrono>
#include <cstddef>
#include <filesystem>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "verifact/chat_backend.hpp"
#include "verifact/corpus.hpp"
#include "verifact/executor.hpp"
#include "verifact/mock_transcript.hpp"

namespace verifact {

inline constexpr int kMaxSearchResults = 10;
inline constexpr std::string_view kNoSearchResults = "No search results found.";

struct SearchResult {
  int rank = 0;
  std::string title;
  std::string snippet;
  std::string link;

  friend bool operator==(const SearchResult&, const SearchResult&) = default;
};

struct EvidenceList {
  std::string claim_id;
  std::string query;
  std::vector<SearchResult> results;
  std::string retrieved_at;
  bool cache_hit = false;

  friend bool operator==(const EvidenceList&, const EvidenceList&) = default;
};

void to_json(nlohmann::json& j, const SearchResult& r);
void from_json(const nlohmann::json& j, SearchResult& r);
void to_json(nlohmann::json& j, const EvidenceList& e);
void from_json(const nlohmann::json& j, EvidenceList& e);

/// A Serper-compatible web search API. Returns the raw response body.
class SearchClient {
 public:
  virtual ~SearchClient() = default;
  virtual nlohmann::json search(std::string_view query, int num_results) = 0;
  virtual std::size_t call_count() const = 0;
};

/// JSON body sent to POST <base_url>/search.
std::string search_request_body(std::string_view query, int num_results);

class HttpSearchClient final : public SearchClient {
 public:
  HttpSearchClient(EndpointConfig endpoint, RetryPolicy retry = {});

  nlohmann::json search(std::string_view query, int num_results) override;
  std::size_t call_count() const override { return calls_.load(); }

 private:
  EndpointConfig endpoint_;
  RetryPolicy retry_;
  RateLimiter limiter_;
  std::atomic<std::size_t> calls_{0};
};

/// Replays canned search bodies keyed by the SHA-256 of the query string.
class MockSearchClient final : public SearchClient {
 public:
  explicit MockSearchClient(MockTranscript transcript);
  static std::unique_ptr<MockSearchClient> from_file(const std::filesystem::path& path);

  nlohmann::json search(std::string_view query, int num_results) override;
  std::size_t call_count() const override { return calls_.load(); }
  void reset_call_count() { calls_.store(0); }

 private:
  MockTranscript transcript_;
  std::atomic<std::size_t> calls_{0};
};

/// Content-addressed on-disk cache: <dir>/<first 2 hex>/<sha256(query)>.json
/// holding the raw search body. Entries never expire unless `max_age` is set.
class SearchCache {
 public:
  explicit SearchCache(std::filesystem::path dir,
                       std::optional<std::chrono::seconds> max_age = std::nullopt);

  std::filesystem::path entry_path(std::string_view query) const;
  std::optional<nlohmann::json> get(std::string_view query) const;
  void put(std::string_view query, const nlohmann::json& body);

 private:
  std::filesystem::path dir_;
  std::optional<std::chrono::seconds> max_age_;
  mutable std::mutex mutex_;
};

/// Keeps up to `limit` entries of the body's "organic" array, in wire order,
/// dropping entries without a link and numbering ranks 1..n.
std::vector<SearchResult> parse_organic_results(const nlohmann::json& body, int limit);

using Clock = std::function<std::chrono::system_clock::time_point()>;
/// ISO-8601 UTC with second precision, e.g. "2024-06-01T12:00:00Z".
std::string format_timestamp(std::chrono::system_clock::time_point t);

struct RetrieveOptions {
  int num_results = kMaxSearchResults;
  std::size_t concurrency = 8;
  Clock clock = [] { return std::chrono::system_clock::now(); };
};

/// Searches with the claim text verbatim, consulting the cache first.
EvidenceList retrieve(const Claim& claim, SearchClient& client, SearchCache& cache,
                      const RetrieveOptions& options = {});

/// Retrieves evidence for many claims. Each distinct query is fetched at most
/// once; among claims sharing a query, only the first (in input order) whose
/// query missed the cache reports cache_hit = false.
std::vector<EvidenceList> retrieve_batch(std::span<const Claim> claims, SearchClient& client,
                                         SearchCache& cache, const RetrieveOptions& options = {});

/// "Search result <rank>\nTitle: ...\nContent: ...\nLink: ...\n" per result,
/// or the no-results sentinel. Newlines inside fields become single spaces.
std::string render_evidence(const EvidenceList& evidence);

}  // namespace verifact
