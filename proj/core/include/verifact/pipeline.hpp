#pragma once

#include <nlohmann/json.hpp>

#include <cstddef>
#include <filesystem>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "verifact/analyzer.hpp"
#include "verifact/chat_backend.hpp"
#include "verifact/config.hpp"
#include "verifact/corpus.hpp"
#include "verifact/rational.hpp"
#include "verifact/retriever.hpp"
#include "verifact/scorer.hpp"

namespace verifact {

/// One line of scores.jsonl.
struct ScoreRecord {
  std::string model_id;
  std::string domain;
  Rational k;
  std::int64_t sentence_count = 0;
  ResponseScore score;

  friend bool operator==(const ScoreRecord&, const ScoreRecord&) = default;
};

void to_json(nlohmann::json& j, const ScoreRecord& r);
void from_json(const nlohmann::json& j, ScoreRecord& r);

struct Backends {
  std::shared_ptr<ChatBackend> extractor;
  std::shared_ptr<ChatBackend> verifier;
  std::shared_ptr<SearchClient> search;
};

/// Mock backends when transcripts are configured, HTTP clients otherwise.
/// Constructing an HTTP client does not touch the network.
Backends make_backends(const PipelineConfig& config);

struct StageReport {
  std::string stage;
  bool skipped = false;
  std::size_t backend_calls = 0;
  std::vector<std::filesystem::path> outputs;
};

struct RunReport {
  std::vector<StageReport> stages;

  std::size_t total_calls() const;
  std::string render() const;
};

/// Backend calls each stage would make. Unknown until the earlier stage has
/// produced its file.
struct DryRunPlan {
  std::optional<std::size_t> extraction_calls;
  std::optional<std::size_t> search_calls;
  std::optional<std::size_t> verification_calls;
  std::vector<std::string> skipped;

  std::string render() const;
};

/// Paths inside a run directory.
namespace run_files {
inline constexpr const char* kPrompts = "prompts.jsonl";
inline constexpr const char* kResponses = "responses.jsonl";
inline constexpr const char* kManifest = "manifest.json";
inline constexpr const char* kSearchCache = "search_cache";
inline constexpr const char* kScorecards = "scorecards";
inline constexpr const char* kScorecardText = "scorecard.txt";
inline constexpr const char* kLeaderboardCsv = "leaderboard.csv";
inline constexpr const char* kLeaderboardText = "leaderboard.txt";
inline constexpr const char* kCorrelations = "correlations.csv";
}  // namespace run_files

/// File name used for a model's scorecard; characters outside [A-Za-z0-9._-]
/// become '_'.
std::string scorecard_file_name(std::string_view model_id);

class Pipeline {
 public:
  Pipeline(PipelineConfig config, Backends backends);

  const PipelineConfig& config() const noexcept { return config_; }

  /// Copies validated inputs into the run directory and writes the manifest.
  /// An existing run directory holding different inputs is refused unless
  /// config.force is set.
  void ingest(const std::filesystem::path& prompts, const std::filesystem::path& responses);

  /// ingest, then every stage in order. Stages whose output exists are
  /// skipped unless config.force is set.
  RunReport run(const std::filesystem::path& prompts, const std::filesystem::path& responses);

  /// Single stages. With `resume`, a stage whose output exists is skipped.
  StageReport extract(bool resume = false);
  StageReport retrieve(bool resume = false);
  StageReport verify(bool resume = false);
  StageReport score(bool resume = false);
  StageReport analyze(bool resume = false);

  /// Counts calls without dispatching any. Inputs default to the copies in
  /// the run directory.
  DryRunPlan plan(const std::optional<std::filesystem::path>& prompts = std::nullopt,
                  const std::optional<std::filesystem::path>& responses = std::nullopt) const;

 private:
  std::filesystem::path file(const char* name) const { return config_.run_dir / name; }
  std::vector<Prompt> load_prompts() const;
  std::vector<Response> load_responses(std::span<const Prompt> prompts) const;
  Clock clock() const;
  nlohmann::json manifest_config() const;

  PipelineConfig config_;
  Backends backends_;
};

/// Cross-run leaderboard from per-model scorecard CSVs (one file per model,
/// model id taken from the file stem). Every file must cover the same domains.
ModelDomainMatrix matrix_from_scorecards(std::span<const std::filesystem::path> paths);

/// Writes leaderboard.{txt,csv} and, with two or more models,
/// correlations.csv under `out_dir`. Returns the written paths.
std::vector<std::filesystem::path> write_analysis(const ModelDomainMatrix& matrix,
                                                  const std::filesystem::path& out_dir);

}  // namespace verifact
