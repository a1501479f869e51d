// verifact: command-line driver for the factuality pipeline.

#include <CLI11.hpp>
#include <fmt/format.h>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include <cstdio>
#include <iostream>
#include <iterator>
#include <optional>
#include <string>
#include <vector>

#include "verifact/config.hpp"
#include "verifact/corpus.hpp"
#include "verifact/errors.hpp"
#include "verifact/hash.hpp"
#include "verifact/pipeline.hpp"

namespace fs = std::filesystem;
using namespace verifact;

namespace {

struct Options {
  ConfigOverrides cli;
  std::optional<std::string> config_file;
  std::optional<std::string> prompts;
  std::optional<std::string> responses;
  std::vector<std::string> k_flags;
  std::vector<std::string> score_files;
  std::optional<std::string> out_dir;
  bool verbose = false;
  bool quiet = false;
};

void add_common(CLI::App* cmd, Options& o) {
  cmd->add_option("--run-dir", o.cli.run_dir, "Run directory");
  cmd->add_option("--config", o.config_file, "JSON config file")->check(CLI::ExistingFile);
  cmd->add_option("--kind", o.cli.kind, "Default prompt kind")
      ->check(CLI::IsMember({"qa", "nonqa"}));
  cmd->add_option("--concurrency", o.cli.concurrency, "Parallel requests")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--num-results", o.cli.num_results, "Search results per claim (1-10)")
      ->check(CLI::Range(1, 10));
  cmd->add_option("--label-mode", o.cli.label_mode, "Verification labels")
      ->check(CLI::IsMember({"binary", "ternary"}));
  cmd->add_option("--field-order", o.cli.field_order, "Verification prompt layout")
      ->check(CLI::IsMember({"standard", "claude"}));
  cmd->add_option("--k", o.k_flags, "Recall target override, domain=value (repeatable)");
  cmd->add_option("--mock-llm", o.cli.mock_llm, "Replay LLM replies from a transcript")
      ->check(CLI::ExistingFile);
  cmd->add_option("--mock-verifier", o.cli.mock_verifier,
                  "Separate transcript for the verifier (defaults to --mock-llm)")
      ->check(CLI::ExistingFile);
  cmd->add_option("--mock-search", o.cli.mock_search, "Replay search bodies from a transcript")
      ->check(CLI::ExistingFile);
  cmd->add_option("--extractor-model", o.cli.extractor_model, "Extraction model name");
  cmd->add_option("--verifier-model", o.cli.verifier_model, "Verification model name");
  cmd->add_option("--max-rps", o.cli.max_rps, "Request rate cap per backend (0 = none)");
  cmd->add_flag("--force", o.cli.force, "Re-run stages whose output exists");
  cmd->add_flag("--dry-run", o.cli.dry_run, "Print the call plan and exit");
  cmd->add_flag("-v,--verbose", o.verbose, "Debug logging");
  cmd->add_flag("-q,--quiet", o.quiet, "Warnings and errors only");
}

PipelineConfig build_config(Options& o) {
  for (const auto& flag : o.k_flags) {
    const auto [domain, k] = parse_k_override(flag);
    o.cli.k_overrides[domain] = to_string(k);
  }
  std::optional<nlohmann::json> file;
  if (o.config_file) {
    try {
      file = nlohmann::json::parse(read_file(*o.config_file));
    } catch (const nlohmann::json::parse_error& e) {
      throw ConfigError(fmt::format("{}: {}", *o.config_file, e.what()));
    }
  }
  return resolve_config(o.cli, process_env(), file);
}

void setup_logging(const Options& o) {
  auto logger = spdlog::stderr_color_mt("verifact");
  spdlog::set_default_logger(logger);
  spdlog::set_pattern("%^%l%$: %v");
  spdlog::set_level(o.quiet ? spdlog::level::warn
                    : o.verbose ? spdlog::level::debug
                                : spdlog::level::info);
}

int run_command(const std::string& name, Options& o) {
  PipelineConfig config = build_config(o);
  const bool uses_extractor = name == "run" || name == "extract";
  const bool uses_search = name == "run" || name == "retrieve";
  const bool uses_verifier = name == "run" || name == "verify";

  if (config.dry_run) {
    if (config.run_dir.empty()) config.run_dir = ".";
    Pipeline p(config, Backends{});
    std::optional<fs::path> prompts, responses;
    if (o.prompts) prompts = *o.prompts;
    if (o.responses) responses = *o.responses;
    std::cout << p.plan(prompts, responses).render();
    return 0;
  }

  config.validate(uses_extractor, uses_search, uses_verifier);
  Pipeline pipeline(config, make_backends(config));
  RunReport report;
  if (name == "run") {
    if (!o.prompts || !o.responses) throw ConfigError("run needs --prompts and --responses");
    report = pipeline.run(*o.prompts, *o.responses);
  } else if (name == "extract") {
    if (o.prompts || o.responses) {
      if (!o.prompts || !o.responses) throw ConfigError("give both --prompts and --responses");
      pipeline.ingest(*o.prompts, *o.responses);
    }
    report.stages.push_back(pipeline.extract());
  } else if (name == "retrieve") {
    report.stages.push_back(pipeline.retrieve());
  } else if (name == "verify") {
    report.stages.push_back(pipeline.verify());
  } else if (name == "score") {
    report.stages.push_back(pipeline.score());
  } else if (name == "analyze") {
    report.stages.push_back(pipeline.analyze());
  }
  std::cerr << report.render();
  if (name == "score" || name == "run") {
    std::cout << read_file(config.run_dir / run_files::kScorecardText);
  }
  if (name == "analyze" || name == "run") {
    std::cout << read_file(config.run_dir / run_files::kLeaderboardText);
  }
  return 0;
}

int analyze_scorecards(const Options& o) {
  std::vector<fs::path> paths(o.score_files.begin(), o.score_files.end());
  const auto matrix = matrix_from_scorecards(paths);
  if (o.out_dir) {
    write_analysis(matrix, *o.out_dir);
  }
  const auto board = render_leaderboard(matrix);
  std::cout << board.text;
  if (matrix.models.size() >= 2) {
    std::cout << "\nKendall tau-b\n" << correlation_csv(correlation_matrix(matrix));
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"verifact: claim-level factuality scoring for long-form model output"};
  app.require_subcommand(1);
  Options o;

  const std::vector<std::pair<std::string, std::string>> commands = {
      {"run", "Ingest inputs and run every stage (resumable)"},
      {"extract", "Extract claims from the run's responses"},
      {"retrieve", "Search evidence for every claim"},
      {"verify", "Label every claim against its evidence"},
      {"score", "Compute per-domain scorecards"},
      {"analyze", "Leaderboard and rank correlations"},
  };
  std::vector<CLI::App*> subs;
  for (const auto& [name, help] : commands) {
    auto* cmd = app.add_subcommand(name, help);
    add_common(cmd, o);
    if (name == "run" || name == "extract") {
      cmd->add_option("--prompts", o.prompts, "Prompt file (JSONL)")->check(CLI::ExistingFile);
      cmd->add_option("--responses", o.responses, "Response file (JSONL)")
          ->check(CLI::ExistingFile);
    }
    if (name == "analyze") {
      cmd->add_option("--scores", o.score_files, "Per-model scorecard CSVs from any runs")
          ->check(CLI::ExistingFile);
      cmd->add_option("--out", o.out_dir, "Write leaderboard files here (with --scores)");
    }
    subs.push_back(cmd);
  }
  auto* key_cmd = app.add_subcommand("mock-key", "Print the transcript key of stdin");

  CLI11_PARSE(app, argc, argv);

  if (key_cmd->parsed()) {
    const std::string input{std::istreambuf_iterator<char>(std::cin), {}};
    std::cout << sha256_hex(input) << "\n";
    return 0;
  }

  setup_logging(o);
  try {
    for (auto* cmd : subs) {
      if (!cmd->parsed()) continue;
      if (cmd->get_name() == "analyze" && !o.score_files.empty()) return analyze_scorecards(o);
      return run_command(cmd->get_name(), o);
    }
  } catch (const ConfigError& e) {
    spdlog::error("{}", e.what());
    return 2;
  } catch (const std::exception& e) {
    spdlog::error("{}", e.what());
    return 1;
  }
  return 0;
}
