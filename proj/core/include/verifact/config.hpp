#pragma once

#include <nlohmann/json.hpp>

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>

#include "verifact/chat_backend.hpp"
#include "verifact/corpus.hpp"
#include "verifact/rational.hpp"
#include "verifact/verifier.hpp"

namespace verifact {

inline constexpr std::string_view kDefaultLlmBaseUrl = "https://api.openai.com/v1";
inline constexpr std::string_view kDefaultSearchBaseUrl = "https://google.serper.dev";
inline constexpr std::string_view kDefaultExtractorModel = "gpt-4-0125-preview";
inline constexpr std::string_view kDefaultVerifierModel = "gpt-4o";

struct BackendSettings {
  EndpointConfig endpoint;
  std::optional<std::filesystem::path> mock_transcript;

  bool mocked() const noexcept { return mock_transcript.has_value(); }
};

struct SearchSettings {
  EndpointConfig endpoint;
  std::optional<std::filesystem::path> mock_transcript;
  std::optional<std::chrono::seconds> cache_max_age;

  bool mocked() const noexcept { return mock_transcript.has_value(); }
};

struct PipelineConfig {
  std::filesystem::path run_dir;
  BackendSettings extractor;
  BackendSettings verifier;
  SearchSettings search;
  std::size_t concurrency = 8;
  int num_search_results = 10;
  LabelMode label_mode = LabelMode::Binary;
  FieldOrder field_order = FieldOrder::Standard;
  std::map<std::string, Rational> k_overrides;
  PromptKind default_kind = PromptKind::QA;
  GenerationParams extraction_params{0.0, 1024};
  GenerationParams verification_params{0.0, 1024};
  bool force = false;
  bool dry_run = false;
  /// When set, every timestamp written to the run directory is this instant
  /// (seconds since the Unix epoch).
  std::optional<std::int64_t> fixed_epoch;
  RetryPolicy retry;

  bool fully_mocked() const noexcept {
    return extractor.mocked() && verifier.mocked() && search.mocked();
  }

  /// Range checks plus credential checks for the live backends a command
  /// will use. Throws ConfigError before any work is dispatched.
  void validate(bool extractor = true, bool search = true, bool verifier = true) const;
};

/// Values supplied on the command line; unset fields fall through to the
/// environment, then the config file, then defaults.
struct ConfigOverrides {
  std::optional<std::filesystem::path> run_dir;
  std::optional<std::string> kind;
  std::optional<std::size_t> concurrency;
  std::optional<int> num_results;
  std::optional<std::string> label_mode;
  std::optional<std::string> field_order;
  std::map<std::string, std::string> k_overrides;
  std::optional<std::filesystem::path> mock_llm;
  std::optional<std::filesystem::path> mock_verifier;
  std::optional<std::filesystem::path> mock_search;
  std::optional<std::string> extractor_model;
  std::optional<std::string> verifier_model;
  std::optional<double> max_rps;
  bool force = false;
  bool dry_run = false;
};

using EnvLookup = std::function<std::optional<std::string>(std::string_view)>;

/// Reads the real process environment.
EnvLookup process_env();

/// Layers CLI flags > environment > config file > defaults.
///
/// Environment: LLM_API_KEY, LLM_BASE_URL, VERIFIER_API_KEY,
/// VERIFIER_BASE_URL (verifier falls back to the LLM_* values),
/// SEARCH_API_KEY, SEARCH_BASE_URL, SOURCE_DATE_EPOCH.
///
/// Config file keys: run_dir, kind, concurrency, num_results, label_mode,
/// field_order, k (object domain → number or "p/q"), mock_llm,
/// mock_verifier, mock_search, fixed_epoch, and objects extractor /
/// verifier / search with base_url, model, api_key, max_rps (search also
/// cache_max_age_s).
///
/// A fully mocked run without an explicit epoch pins timestamps to 0 so
/// that run directories are reproducible.
PipelineConfig resolve_config(const ConfigOverrides& cli, const EnvLookup& env,
                              const std::optional<nlohmann::json>& file = std::nullopt);

/// Parses "domain=value" into its parts; value may be "3", "3.5" or "7/2".
std::pair<std::string, Rational> parse_k_override(std::string_view text);

}  // namespace verifact
