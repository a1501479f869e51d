#include "verifact/mock_transcript.hpp"

#include <fmt/format.h>

#include <map>

#include "verifact/corpus.hpp"
#include "verifact/errors.hpp"
#include "verifact/hash.hpp"

namespace verifact {

using nlohmann::json;

MockTranscript MockTranscript::load(const std::filesystem::path& path) {
  return parse(read_file(path), path.string());
}

MockTranscript MockTranscript::parse(std::string_view text, std::string_view source) {
  MockTranscript t;
  for (const auto& row : parse_jsonl(text, source)) {
    const auto line = row.at("__line").get<std::size_t>();
    if (!row.contains("response")) {
      throw FormatError(fmt::format("{}:{}: transcript entry has no 'response'", source, line));
    }
    const json& response = row.at("response");
    const int selectors = int(row.contains("key")) + int(row.contains("request")) +
                          int(row.contains("default"));
    if (selectors != 1) {
      throw FormatError(fmt::format(
          "{}:{}: transcript entry needs exactly one of 'key', 'request', 'default'", source,
          line));
    }
    if (row.contains("key")) {
      t.add_by_key(row.at("key").get<std::string>(), response);
    } else if (row.contains("request")) {
      t.add(row.at("request").get<std::string>(), response);
    } else {
      t.set_default(response);
    }
  }
  return t;
}

void MockTranscript::add(std::string_view request, json response) {
  entries_[sha256_hex(request)] = std::move(response);
}

void MockTranscript::add_by_key(std::string key, json response) {
  entries_[std::move(key)] = std::move(response);
}

void MockTranscript::set_default(json response) { fallback_ = std::move(response); }

std::optional<json> MockTranscript::find(std::string_view request) const {
  if (const auto it = entries_.find(sha256_hex(request)); it != entries_.end()) {
    return std::optional<json>(std::in_place, it->second);
  }
  return fallback_;
}

std::string MockTranscript::dump() const {
  std::map<std::string, const json*> sorted;
  for (const auto& [k, v] : entries_) sorted.emplace(k, &v);
  std::string out;
  for (const auto& [k, v] : sorted) {
    out += json{{"key", k}, {"response", *v}}.dump();
    out += '\n';
  }
  if (fallback_) {
    out += json{{"default", true}, {"response", *fallback_}}.dump();
    out += '\n';
  }
  return out;
}

}  // namespace verifact
