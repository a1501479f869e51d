#include "verifact/retriever.hpp"

#include <fmt/chrono.h>
#include <fmt/format.h>

#include <ctime>
#include <fstream>
#include <set>
#include <unordered_map>

#include "http_client.hpp"
#include "verifact/errors.hpp"
#include "verifact/hash.hpp"

namespace verifact {

namespace fs = std::filesystem;
using nlohmann::json;

void to_json(json& j, const SearchResult& r) {
  j = json{{"rank", r.rank}, {"title", r.title}, {"snippet", r.snippet}, {"link", r.link}};
}

void from_json(const json& j, SearchResult& r) {
  j.at("rank").get_to(r.rank);
  j.at("title").get_to(r.title);
  j.at("snippet").get_to(r.snippet);
  j.at("link").get_to(r.link);
}

void to_json(json& j, const EvidenceList& e) {
  j = json{{"claim_id", e.claim_id},
           {"query", e.query},
           {"results", e.results},
           {"retrieved_at", e.retrieved_at},
           {"cache_hit", e.cache_hit}};
}

void from_json(const json& j, EvidenceList& e) {
  j.at("claim_id").get_to(e.claim_id);
  j.at("query").get_to(e.query);
  j.at("results").get_to(e.results);
  j.at("retrieved_at").get_to(e.retrieved_at);
  j.at("cache_hit").get_to(e.cache_hit);
}

std::string search_request_body(std::string_view query, int num_results) {
  return json{{"q", query}, {"num", num_results}}.dump();
}

HttpSearchClient::HttpSearchClient(EndpointConfig endpoint, RetryPolicy retry)
    : endpoint_(std::move(endpoint)),
      retry_(std::move(retry)),
      limiter_(endpoint_.max_requests_per_second) {
  if (endpoint_.base_url.empty()) throw ConfigError("search endpoint has no base URL");
}

json HttpSearchClient::search(std::string_view query, int num_results) {
  const std::string body = search_request_body(query, num_results);
  std::vector<std::pair<std::string, std::string>> headers;
  if (!endpoint_.api_key.empty()) headers.emplace_back("X-API-KEY", endpoint_.api_key);
  json parsed;
  run_with_retries(retry_, [&] {
    limiter_.acquire();
    calls_.fetch_add(1);
    const auto response =
        detail::post_json(endpoint_.base_url, "/search", headers, body, endpoint_.timeout);
    if (response.status < 200 || response.status >= 300) {
      detail::throw_http_status("search", response);
    }
    try {
      parsed = json::parse(response.body);
    } catch (const json::parse_error& e) {
      throw BackendError(fmt::format("search response is not JSON: {}", e.what()), false);
    }
  });
  return parsed;
}

MockSearchClient::MockSearchClient(MockTranscript transcript)
    : transcript_(std::move(transcript)) {}

std::unique_ptr<MockSearchClient> MockSearchClient::from_file(const fs::path& path) {
  return std::make_unique<MockSearchClient>(MockTranscript::load(path));
}

json MockSearchClient::search(std::string_view query, int) {
  calls_.fetch_add(1);
  auto hit = transcript_.find(query);
  if (!hit) {
    throw BackendError(
        fmt::format("mock search transcript has no entry for query {}", sha256_hex(query)),
        false);
  }
  return *hit;
}

SearchCache::SearchCache(fs::path dir, std::optional<std::chrono::seconds> max_age)
    : dir_(std::move(dir)), max_age_(max_age) {}

fs::path SearchCache::entry_path(std::string_view query) const {
  const std::string key = sha256_hex(query);
  return dir_ / key.substr(0, 2) / (key + ".json");
}

std::optional<json> SearchCache::get(std::string_view query) const {
  const fs::path path = entry_path(query);
  std::error_code ec;
  if (!fs::exists(path, ec)) return std::nullopt;
  if (max_age_) {
    const auto written = fs::last_write_time(path, ec);
    if (ec) return std::nullopt;
    if (fs::file_time_type::clock::now() - written > *max_age_) return std::nullopt;
  }
  try {
    auto entry = json::parse(read_file(path));
    // Guard against hash collisions and hand-edited entries.
    if (entry.value("query", std::string{}) != query) return std::nullopt;
    return entry.at("body");
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

void SearchCache::put(std::string_view query, const json& body) {
  const json entry{{"query", query}, {"body", body}};
  std::lock_guard lock(mutex_);
  write_file_atomic(entry_path(query), entry.dump() + "\n");
}

std::vector<SearchResult> parse_organic_results(const json& body, int limit) {
  std::vector<SearchResult> out;
  const auto it = body.find("organic");
  if (it == body.end() || !it->is_array()) return out;
  auto text_field = [](const json& entry, const char* key) {
    const auto f = entry.find(key);
    return f != entry.end() && f->is_string() ? f->get<std::string>() : std::string{};
  };
  for (const auto& entry : *it) {
    if (static_cast<int>(out.size()) >= limit) break;
    if (!entry.is_object()) continue;
    SearchResult r;
    r.link = text_field(entry, "link");
    if (r.link.empty()) continue;
    r.title = text_field(entry, "title");
    r.snippet = text_field(entry, "snippet");
    r.rank = static_cast<int>(out.size()) + 1;
    out.push_back(std::move(r));
  }
  return out;
}

std::string format_timestamp(std::chrono::system_clock::time_point t) {
  const std::time_t tt = std::chrono::system_clock::to_time_t(t);
  std::tm tm{};
  gmtime_r(&tt, &tm);
  return fmt::format("{:%Y-%m-%dT%H:%M:%SZ}", tm);
}

namespace {

int clamp_results(int n) {
  if (n < 1 || n > kMaxSearchResults) {
    throw ConfigError(fmt::format("num_results must be in [1, {}], got {}", kMaxSearchResults, n));
  }
  return n;
}

}  // namespace

EvidenceList retrieve(const Claim& claim, SearchClient& client, SearchCache& cache,
                      const RetrieveOptions& options) {
  auto results = retrieve_batch(std::span<const Claim>(&claim, 1), client, cache, options);
  return std::move(results.front());
}

std::vector<EvidenceList> retrieve_batch(std::span<const Claim> claims, SearchClient& client,
                                         SearchCache& cache, const RetrieveOptions& options) {
  const int limit = clamp_results(options.num_results);

  // Distinct queries in first-seen order.
  std::vector<std::string> queries;
  std::unordered_map<std::string, std::size_t> query_index;
  for (const auto& c : claims) {
    if (c.text.empty()) {
      throw StageError(fmt::format("claim '{}' has empty text", c.id));
    }
    if (query_index.emplace(c.text, queries.size()).second) queries.push_back(c.text);
  }

  struct Fetched {
    json body;
    bool from_cache;
  };
  const auto fetched = parallel_map(
      std::span<const std::string>(queries), options.concurrency,
      [&](const std::string& q, std::size_t) -> Fetched {
        if (auto cached = cache.get(q)) return {std::move(*cached), true};
        try {
          json body = client.search(q, limit);
          cache.put(q, body);
          return {std::move(body), false};
        } catch (const BackendError& e) {
          std::string owner;
          for (const auto& c : claims) {
            if (c.text == q) {
              owner = c.id;
              break;
            }
          }
          throw StageError(fmt::format("retrieval failed for claim '{}': {}", owner, e.what()));
        }
      });

  const std::string now = format_timestamp(options.clock());
  std::vector<bool> network_reported(queries.size(), false);
  std::vector<EvidenceList> out;
  out.reserve(claims.size());
  for (const auto& c : claims) {
    const std::size_t qi = query_index.at(c.text);
    EvidenceList e;
    e.claim_id = c.id;
    e.query = c.text;
    e.results = parse_organic_results(fetched[qi].body, limit);
    e.retrieved_at = now;
    e.cache_hit = fetched[qi].from_cache || network_reported[qi];
    network_reported[qi] = true;
    out.push_back(std::move(e));
  }
  return out;
}

namespace {

std::string single_line(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  bool in_break = false;
  for (char c : s) {
    if (c == '\n' || c == '\r') {
      if (!in_break) out.push_back(' ');
      in_break = true;
    } else {
      out.push_back(c);
      in_break = false;
    }
  }
  return out;
}

}  // namespace

std::string render_evidence(const EvidenceList& evidence) {
  if (evidence.results.empty()) return std::string(kNoSearchResults);
  std::string out;
  for (const auto& r : evidence.results) {
    out += fmt::format("Search result {}\nTitle: {}\nContent: {}\nLink: {}\n", r.rank,
                       single_line(r.title), single_line(r.snippet), single_line(r.link));
  }
  return out;
}

}  // namespace verifact
