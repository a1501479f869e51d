#include "verifact/config.hpp"

#include <fmt/format.h>

#include <cstdlib>

#include "verifact/errors.hpp"
#include "verifact/retriever.hpp"

namespace verifact {

using nlohmann::json;

EnvLookup process_env() {
  return [](std::string_view name) -> std::optional<std::string> {
    const char* v = std::getenv(std::string(name).c_str());
    if (v == nullptr || *v == '\0') return std::nullopt;
    return std::string(v);
  };
}

std::pair<std::string, Rational> parse_k_override(std::string_view text) {
  const auto eq = text.find('=');
  if (eq == std::string_view::npos || eq == 0 || eq + 1 >= text.size()) {
    throw ConfigError(fmt::format("--k expects domain=value, got '{}'", text));
  }
  Rational k;
  try {
    k = parse_rational(text.substr(eq + 1));
  } catch (const FormatError& e) {
    throw ConfigError(fmt::format("--k {}: {}", text, e.what()));
  }
  if (k <= 0) throw ConfigError(fmt::format("--k {}: K must be positive", text));
  return {std::string(text.substr(0, eq)), k};
}

void PipelineConfig::validate(bool extractor, bool search_used, bool verifier_used) const {
  if (run_dir.empty()) throw ConfigError("no run directory given (--run-dir)");
  if (concurrency < 1) throw ConfigError("concurrency must be at least 1");
  if (num_search_results < 1 || num_search_results > kMaxSearchResults) {
    throw ConfigError(fmt::format("num_results must be in [1, {}], got {}", kMaxSearchResults,
                                  num_search_results));
  }
  if (search_used && !search.mocked() && search.endpoint.api_key.empty()) {
    throw ConfigError("live search needs SEARCH_API_KEY (or pass --mock-search)");
  }
  auto check_llm = [](const BackendSettings& b, std::string_view role, std::string_view key_var) {
    if (b.mocked()) return;
    if (b.endpoint.base_url.empty() || b.endpoint.model.empty()) {
      throw ConfigError(fmt::format("{} backend needs a base URL and a model", role));
    }
    if (b.endpoint.api_key.empty() && b.endpoint.base_url == kDefaultLlmBaseUrl) {
      throw ConfigError(fmt::format("{} backend at {} needs {} (or pass --mock-llm)", role,
                                    kDefaultLlmBaseUrl, key_var));
    }
  };
  if (extractor) check_llm(this->extractor, "extractor", "LLM_API_KEY");
  if (verifier_used) check_llm(verifier, "verifier", "VERIFIER_API_KEY or LLM_API_KEY");
}

namespace {

template <class T>
std::optional<T> file_value(const std::optional<json>& file, const char* key) {
  if (!file || !file->contains(key)) return std::nullopt;
  try {
    return file->at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(fmt::format("config key '{}': {}", key, e.what()));
  }
}

std::optional<json> file_section(const std::optional<json>& file, const char* key) {
  if (!file || !file->contains(key)) return std::nullopt;
  const json& section = file->at(key);
  if (!section.is_object()) throw ConfigError(fmt::format("config key '{}' must be an object", key));
  return std::optional<json>(std::in_place, section);
}

template <class T>
T first_of(std::optional<T> a, std::optional<T> b, std::optional<T> c, T fallback) {
  if (a) return *a;
  if (b) return *b;
  if (c) return *c;
  return fallback;
}

Rational k_from_json(const json& v, const std::string& domain) {
  try {
    if (v.is_string()) return parse_rational(v.get<std::string>());
    if (v.is_number_integer()) return Rational(v.get<std::int64_t>());
    if (v.is_number()) return parse_rational(fmt::format("{}", v.get<double>()));
  } catch (const FormatError& e) {
    throw ConfigError(fmt::format("config k.{}: {}", domain, e.what()));
  }
  throw ConfigError(fmt::format("config k.{} must be a number or \"p/q\"", domain));
}

}  // namespace

PipelineConfig resolve_config(const ConfigOverrides& cli, const EnvLookup& env,
                              const std::optional<json>& file) {
  PipelineConfig cfg;
  const auto ext = file_section(file, "extractor");
  const auto ver = file_section(file, "verifier");
  const auto sea = file_section(file, "search");

  if (cli.run_dir) {
    cfg.run_dir = *cli.run_dir;
  } else if (const auto rd = file_value<std::string>(file, "run_dir")) {
    cfg.run_dir = *rd;
  }
  cfg.default_kind = parse_prompt_kind(
      first_of<std::string>(cli.kind, std::nullopt, file_value<std::string>(file, "kind"), "qa"));
  cfg.concurrency = first_of<std::size_t>(cli.concurrency, std::nullopt,
                                          file_value<std::size_t>(file, "concurrency"), 8);
  cfg.num_search_results =
      first_of<int>(cli.num_results, std::nullopt, file_value<int>(file, "num_results"), 10);
  cfg.label_mode = parse_label_mode(first_of<std::string>(
      cli.label_mode, std::nullopt, file_value<std::string>(file, "label_mode"), "binary"));
  cfg.field_order = parse_field_order(first_of<std::string>(
      cli.field_order, std::nullopt, file_value<std::string>(file, "field_order"), "standard"));

  if (file && file->contains("k")) {
    const json& ks = file->at("k");
    if (!ks.is_object()) throw ConfigError("config key 'k' must be an object");
    for (const auto& [domain, value] : ks.items()) {
      const Rational k = k_from_json(value, domain);
      if (k <= 0) throw ConfigError(fmt::format("config k.{} must be positive", domain));
      cfg.k_overrides[domain] = k;
    }
  }
  for (const auto& [domain, text] : cli.k_overrides) {
    cfg.k_overrides[domain] = parse_k_override(domain + "=" + text).second;
  }

  auto section_str = [](const std::optional<json>& s, const char* key) -> std::optional<std::string> {
    if (!s || !s->contains(key)) return std::nullopt;
    return s->at(key).get<std::string>();
  };
  auto section_num = [](const std::optional<json>& s, const char* key) -> std::optional<double> {
    if (!s || !s->contains(key)) return std::nullopt;
    return s->at(key).get<double>();
  };

  const auto llm_key = env("LLM_API_KEY");
  const auto llm_url = env("LLM_BASE_URL");

  auto& e = cfg.extractor.endpoint;
  e.base_url = first_of<std::string>(std::nullopt, llm_url, section_str(ext, "base_url"),
                                     std::string(kDefaultLlmBaseUrl));
  e.api_key = first_of<std::string>(std::nullopt, llm_key, section_str(ext, "api_key"), "");
  e.model = first_of<std::string>(cli.extractor_model, std::nullopt, section_str(ext, "model"),
                                  std::string(kDefaultExtractorModel));
  e.max_requests_per_second =
      first_of<double>(cli.max_rps, std::nullopt, section_num(ext, "max_rps"), 0.0);

  auto& v = cfg.verifier.endpoint;
  v.base_url = first_of<std::string>(std::nullopt, env("VERIFIER_BASE_URL"),
                                     section_str(ver, "base_url"), e.base_url);
  if (!env("VERIFIER_BASE_URL") && !section_str(ver, "base_url") && llm_url) v.base_url = *llm_url;
  v.api_key = first_of<std::string>(std::nullopt, env("VERIFIER_API_KEY"),
                                    section_str(ver, "api_key"), e.api_key);
  v.model = first_of<std::string>(cli.verifier_model, std::nullopt, section_str(ver, "model"),
                                  std::string(kDefaultVerifierModel));
  v.max_requests_per_second =
      first_of<double>(cli.max_rps, std::nullopt, section_num(ver, "max_rps"), 0.0);

  auto& s = cfg.search.endpoint;
  s.base_url = first_of<std::string>(std::nullopt, env("SEARCH_BASE_URL"),
                                     section_str(sea, "base_url"),
                                     std::string(kDefaultSearchBaseUrl));
  s.api_key = first_of<std::string>(std::nullopt, env("SEARCH_API_KEY"),
                                    section_str(sea, "api_key"), "");
  s.max_requests_per_second =
      first_of<double>(cli.max_rps, std::nullopt, section_num(sea, "max_rps"), 0.0);
  if (const auto age = section_num(sea, "cache_max_age_s")) {
    cfg.search.cache_max_age = std::chrono::seconds(static_cast<std::int64_t>(*age));
  }

  auto path_opt = [](std::optional<std::string> s) -> std::optional<std::filesystem::path> {
    if (!s) return std::nullopt;
    return std::filesystem::path(*s);
  };
  cfg.extractor.mock_transcript = cli.mock_llm ? cli.mock_llm : path_opt(file_value<std::string>(file, "mock_llm"));
  cfg.verifier.mock_transcript =
      cli.mock_verifier ? cli.mock_verifier
                        : path_opt(file_value<std::string>(file, "mock_verifier"));
  if (!cfg.verifier.mock_transcript) cfg.verifier.mock_transcript = cfg.extractor.mock_transcript;
  cfg.search.mock_transcript =
      cli.mock_search ? cli.mock_search : path_opt(file_value<std::string>(file, "mock_search"));

  cfg.force = cli.force;
  cfg.dry_run = cli.dry_run;

  if (const auto epoch = env("SOURCE_DATE_EPOCH")) {
    try {
      cfg.fixed_epoch = std::stoll(*epoch);
    } catch (const std::exception&) {
      throw ConfigError(fmt::format("SOURCE_DATE_EPOCH is not an integer: '{}'", *epoch));
    }
  } else if (const auto fe = file_value<std::int64_t>(file, "fixed_epoch")) {
    cfg.fixed_epoch = fe;
  } else if (cfg.fully_mocked()) {
    cfg.fixed_epoch = 0;
  }
  return cfg;
}

}  // namespace verifact
