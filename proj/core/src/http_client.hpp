#pragma once

#include <chrono>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace verifact::detail {

struct HttpResponse {
  int status = 0;
  std::string body;
};

/// POSTs a JSON body to <base_url><path>. Connection failures throw a
/// retryable BackendError; HTTP status handling is left to the caller.
HttpResponse post_json(std::string_view base_url, std::string_view path,
                       const std::vector<std::pair<std::string, std::string>>& headers,
                       const std::string& body, std::chrono::seconds timeout);

/// Maps a non-2xx status to a BackendError (5xx and 429 retryable).
[[noreturn]] void throw_http_status(std::string_view what, const HttpResponse& response);

}  // namespace verifact::detail
