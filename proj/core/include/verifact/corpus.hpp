#pragma once

#include <nlohmann/json.hpp>

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace verifact {

enum class PromptKind { QA, NonQA };

std::string_view to_string(PromptKind kind);
/// "qa" / "nonqa" (case-insensitive). Throws FormatError otherwise.
PromptKind parse_prompt_kind(std::string_view text);

/// One prompt x in a domain. For QA prompts `text` is the question that is
/// prepended to every extraction window; NonQA prompts carry no question.
struct Prompt {
  std::string id;
  std::string domain;
  PromptKind kind = PromptKind::QA;
  std::string text;

  friend bool operator==(const Prompt&, const Prompt&) = default;
};

/// Half-open byte range into Response::text.
struct Span {
  std::size_t begin = 0;
  std::size_t end = 0;

  std::size_t size() const noexcept { return end - begin; }
  friend bool operator==(const Span&, const Span&) = default;
};

/// Half-open range of sentence indices forming one paragraph.
struct ParagraphRange {
  std::size_t first = 0;
  std::size_t last = 0;

  std::size_t size() const noexcept { return last - first; }
  bool contains(std::size_t sentence) const noexcept {
    return sentence >= first && sentence < last;
  }
  friend bool operator==(const ParagraphRange&, const ParagraphRange&) = default;
};

/// One model output under evaluation. Sentence spans and paragraph ranges are
/// filled by the segmenter at ingestion time.
struct Response {
  std::string prompt_id;
  std::string model_id;
  std::string text;
  std::vector<Span> sentences;
  std::vector<ParagraphRange> paragraphs;

  /// "<model_id>/<prompt_id>"; unique within a run.
  std::string id() const;
  /// Sentence text with internal whitespace runs collapsed to one space.
  std::string sentence(std::size_t index) const;
  std::size_t sentence_count() const noexcept { return sentences.size(); }
  /// Index of the paragraph containing `sentence`.
  std::size_t paragraph_of(std::size_t sentence) const;

  friend bool operator==(const Response&, const Response&) = default;
};

struct Claim {
  std::string id;
  std::string response_id;
  std::size_t sentence_index = 0;
  std::string text;

  friend bool operator==(const Claim&, const Claim&) = default;
};

struct RunManifest {
  std::string run_id;
  std::vector<std::string> model_ids;
  std::vector<std::string> domains;
  nlohmann::json backend_config = nlohmann::json::object();
  std::string created_at;

  friend bool operator==(const RunManifest&, const RunManifest&) = default;
};

enum class Stage { Claims, Evidence, Verdicts, Scores };

std::string_view to_string(Stage stage);
/// <run_dir>/<stage>.jsonl
std::filesystem::path stage_path(const std::filesystem::path& run_dir, Stage stage);

void to_json(nlohmann::json& j, const Prompt& p);
void from_json(const nlohmann::json& j, Prompt& p);
void to_json(nlohmann::json& j, const Claim& c);
void from_json(const nlohmann::json& j, Claim& c);
void to_json(nlohmann::json& j, const RunManifest& m);
void from_json(const nlohmann::json& j, RunManifest& m);

/// Reads a prompt file: one JSON object per line with id, domain, text and an
/// optional kind ("qa" | "nonqa") that overrides `default_kind`. Blank lines
/// are skipped. Errors name the 1-based line number; duplicate ids name the
/// id and the line of the second occurrence.
std::vector<Prompt> ingest_prompts(const std::filesystem::path& path,
                                   PromptKind default_kind);

/// Reads a response file (prompt_id, model_id, text per line), segments every
/// response and checks that each prompt_id resolves in `prompts`.
std::vector<Response> ingest_responses(const std::filesystem::path& path,
                                       std::span<const Prompt> prompts);

/// Serialises a response (text only; segmentation is recomputed on load).
nlohmann::json response_record(const Response& r);

/// Parses `text` as line-delimited JSON objects. `source` names the input in
/// error messages.
std::vector<nlohmann::json> parse_jsonl(std::string_view text, std::string_view source);
std::vector<nlohmann::json> read_jsonl(const std::filesystem::path& path);

/// Writes `content` to `path` through a sibling temp file and rename, so a
/// reader never observes a partially written file. Creates parent dirs.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);
std::string read_file(const std::filesystem::path& path);

/// Replaces <run_dir>/<stage>.jsonl with one line per record. Writes for the
/// same run directory are serialised. Throws IoError when the directory is not
/// writable; no partial stage file is left behind.
std::filesystem::path persist_stage(const std::filesystem::path& run_dir, Stage stage,
                                    std::span<const nlohmann::json> records);

/// Loads a stage file; StageError naming the file when it does not exist.
std::vector<nlohmann::json> load_stage(const std::filesystem::path& run_dir, Stage stage);

template <class Record>
std::filesystem::path persist_records(const std::filesystem::path& run_dir, Stage stage,
                                      std::span<const Record> records) {
  std::vector<nlohmann::json> rows;
  rows.reserve(records.size());
  for (const auto& r : records) rows.emplace_back(r);
  return persist_stage(run_dir, stage, rows);
}

template <class Record>
std::vector<Record> load_records(const std::filesystem::path& run_dir, Stage stage) {
  std::vector<Record> out;
  for (const auto& row : load_stage(run_dir, stage)) out.push_back(row.get<Record>());
  return out;
}

/// Rejects responses whose prompt_id does not resolve and claims whose
/// response_id or sentence_index does not resolve. Throws FormatError.
void check_references(std::span<const Prompt> prompts, std::span<const Response> responses,
                      std::span<const Claim> claims);

}  // namespace verifact
