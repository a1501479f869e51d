#include "http_client.hpp"

#include <fmt/format.h>
#include <httplib.h>

#include "verifact/errors.hpp"

namespace verifact::detail {

namespace {

struct ParsedUrl {
  std::string origin;  // scheme://host[:port]
  std::string prefix;  // path prefix without trailing slash
};

ParsedUrl split_url(std::string_view url) {
  const auto scheme_end = url.find("://");
  if (scheme_end == std::string_view::npos) {
    throw ConfigError(fmt::format("base URL '{}' has no scheme", url));
  }
  const auto path_start = url.find('/', scheme_end + 3);
  ParsedUrl out;
  if (path_start == std::string_view::npos) {
    out.origin = std::string(url);
  } else {
    out.origin = std::string(url.substr(0, path_start));
    out.prefix = std::string(url.substr(path_start));
    while (!out.prefix.empty() && out.prefix.back() == '/') out.prefix.pop_back();
  }
  return out;
}

}  // namespace

HttpResponse post_json(std::string_view base_url, std::string_view path,
                       const std::vector<std::pair<std::string, std::string>>& headers,
                       const std::string& body, std::chrono::seconds timeout) {
  const ParsedUrl url = split_url(base_url);
  httplib::Client client(url.origin);
  client.set_connection_timeout(timeout);
  client.set_read_timeout(timeout);
  client.set_write_timeout(timeout);

  httplib::Headers h;
  for (const auto& [k, v] : headers) h.emplace(k, v);

  const std::string full_path = url.prefix + std::string(path);
  auto result = client.Post(full_path, h, body, "application/json");
  if (!result) {
    throw BackendError(fmt::format("POST {}{}: {}", url.origin, full_path,
                                   httplib::to_string(result.error())),
                       /*retryable=*/true);
  }
  return HttpResponse{result->status, result->body};
}

void throw_http_status(std::string_view what, const HttpResponse& response) {
  const bool retryable = response.status >= 500 || response.status == 429;
  std::string excerpt = response.body.substr(0, 200);
  throw BackendError(fmt::format("{}: HTTP {}: {}", what, response.status, excerpt), retryable);
}

}  // namespace verifact::detail
