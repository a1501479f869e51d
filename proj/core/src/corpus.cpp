#include "verifact/corpus.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <mutex>
#include <set>
#include <sstream>
#include <system_error>
#include <unordered_map>
#include <unordered_set>

#include "verifact/errors.hpp"
#include "verifact/segmenter.hpp"

namespace verifact {

namespace fs = std::filesystem;
using nlohmann::json;

std::string_view to_string(PromptKind kind) {
  return kind == PromptKind::QA ? "qa" : "nonqa";
}

PromptKind parse_prompt_kind(std::string_view text) {
  std::string lower(text);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (lower == "qa") return PromptKind::QA;
  if (lower == "nonqa" || lower == "non-qa") return PromptKind::NonQA;
  throw FormatError(fmt::format("unknown prompt kind '{}' (expected qa or nonqa)", text));
}

std::string Response::id() const { return model_id + "/" + prompt_id; }

std::string Response::sentence(std::size_t index) const {
  const Span& span = sentences.at(index);
  std::string out;
  out.reserve(span.size());
  bool pending_space = false;
  for (std::size_t i = span.begin; i < span.end; ++i) {
    const auto c = static_cast<unsigned char>(text[i]);
    if (std::isspace(c)) {
      pending_space = true;
      continue;
    }
    if (pending_space && !out.empty()) out.push_back(' ');
    pending_space = false;
    out.push_back(static_cast<char>(c));
  }
  return out;
}

std::size_t Response::paragraph_of(std::size_t sentence) const {
  for (std::size_t p = 0; p < paragraphs.size(); ++p) {
    if (paragraphs[p].contains(sentence)) return p;
  }
  throw Error(fmt::format("sentence {} is outside every paragraph of {}", sentence, id()));
}

std::string_view to_string(Stage stage) {
  switch (stage) {
    case Stage::Claims: return "claims";
    case Stage::Evidence: return "evidence";
    case Stage::Verdicts: return "verdicts";
    case Stage::Scores: return "scores";
  }
  return "unknown";
}

fs::path stage_path(const fs::path& run_dir, Stage stage) {
  return run_dir / (std::string(to_string(stage)) + ".jsonl");
}

void to_json(json& j, const Prompt& p) {
  j = json{{"id", p.id}, {"domain", p.domain}, {"kind", to_string(p.kind)}, {"text", p.text}};
}

void from_json(const json& j, Prompt& p) {
  j.at("id").get_to(p.id);
  j.at("domain").get_to(p.domain);
  j.at("text").get_to(p.text);
  p.kind = parse_prompt_kind(j.at("kind").get<std::string>());
}

void to_json(json& j, const Claim& c) {
  j = json{{"id", c.id},
           {"response_id", c.response_id},
           {"sentence_index", c.sentence_index},
           {"text", c.text}};
}

void from_json(const json& j, Claim& c) {
  j.at("id").get_to(c.id);
  j.at("response_id").get_to(c.response_id);
  j.at("sentence_index").get_to(c.sentence_index);
  j.at("text").get_to(c.text);
}

void to_json(json& j, const RunManifest& m) {
  j = json{{"run_id", m.run_id},
           {"model_ids", m.model_ids},
           {"domains", m.domains},
           {"backend_config", m.backend_config},
           {"created_at", m.created_at}};
}

void from_json(const json& j, RunManifest& m) {
  j.at("run_id").get_to(m.run_id);
  j.at("model_ids").get_to(m.model_ids);
  j.at("domains").get_to(m.domains);
  m.backend_config = j.at("backend_config");
  j.at("created_at").get_to(m.created_at);
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError(fmt::format("cannot open '{}' for reading", path.string()));
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

std::vector<json> parse_jsonl(std::string_view text, std::string_view source) {
  std::vector<json> rows;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t nl = text.find('\n', pos);
    const std::size_t end = nl == std::string_view::npos ? text.size() : nl;
    std::string_view line = text.substr(pos, end - pos);
    ++line_no;
    pos = end + 1;
    if (std::all_of(line.begin(), line.end(),
                    [](unsigned char c) { return std::isspace(c) != 0; })) {
      if (nl == std::string_view::npos) break;
      continue;
    }
    json row;
    try {
      row = json::parse(line);
    } catch (const json::parse_error& e) {
      throw FormatError(fmt::format("{}:{}: malformed record: {}", source, line_no, e.what()));
    }
    if (!row.is_object()) {
      throw FormatError(fmt::format("{}:{}: record is not a JSON object", source, line_no));
    }
    row["__line"] = line_no;
    rows.push_back(std::move(row));
    if (nl == std::string_view::npos) break;
  }
  return rows;
}

std::vector<json> read_jsonl(const fs::path& path) {
  auto rows = parse_jsonl(read_file(path), path.string());
  for (auto& row : rows) row.erase("__line");
  return rows;
}

namespace {

std::string require_string(const json& row, const char* field, std::string_view source,
                           std::size_t line) {
  const auto it = row.find(field);
  if (it == row.end() || !it->is_string()) {
    throw FormatError(fmt::format("{}:{}: missing string field '{}'", source, line, field));
  }
  return it->get<std::string>();
}

std::mutex& writer_mutex(const fs::path& run_dir) {
  static std::mutex registry_mutex;
  static std::map<std::string, std::unique_ptr<std::mutex>> registry;
  std::error_code ec;
  auto key = fs::weakly_canonical(run_dir, ec).string();
  if (ec) key = run_dir.string();
  std::lock_guard lock(registry_mutex);
  auto& slot = registry[key];
  if (!slot) slot = std::make_unique<std::mutex>();
  return *slot;
}

}  // namespace

std::vector<Prompt> ingest_prompts(const fs::path& path, PromptKind default_kind) {
  const std::string source = path.string();
  std::vector<Prompt> prompts;
  std::unordered_map<std::string, std::size_t> seen;
  for (const auto& row : parse_jsonl(read_file(path), source)) {
    const auto line = row.at("__line").get<std::size_t>();
    Prompt p;
    p.id = require_string(row, "id", source, line);
    p.domain = require_string(row, "domain", source, line);
    p.text = require_string(row, "text", source, line);
    p.kind = default_kind;
    if (const auto it = row.find("kind"); it != row.end()) {
      if (!it->is_string()) {
        throw FormatError(fmt::format("{}:{}: field 'kind' must be a string", source, line));
      }
      try {
        p.kind = parse_prompt_kind(it->get<std::string>());
      } catch (const FormatError& e) {
        throw FormatError(fmt::format("{}:{}: {}", source, line, e.what()));
      }
    }
    if (p.id.empty()) {
      throw FormatError(fmt::format("{}:{}: prompt id is empty", source, line));
    }
    if (const auto [it, inserted] = seen.emplace(p.id, line); !inserted) {
      throw FormatError(fmt::format("{}:{}: duplicate prompt id '{}' (first seen on line {})",
                                    source, line, p.id, it->second));
    }
    prompts.push_back(std::move(p));
  }
  return prompts;
}

std::vector<Response> ingest_responses(const fs::path& path, std::span<const Prompt> prompts) {
  const std::string source = path.string();
  std::unordered_set<std::string> prompt_ids;
  for (const auto& p : prompts) prompt_ids.insert(p.id);

  std::vector<Response> responses;
  std::unordered_map<std::string, std::size_t> seen;
  for (const auto& row : parse_jsonl(read_file(path), source)) {
    const auto line = row.at("__line").get<std::size_t>();
    Response r;
    r.prompt_id = require_string(row, "prompt_id", source, line);
    r.model_id = require_string(row, "model_id", source, line);
    r.text = require_string(row, "text", source, line);
    if (r.model_id.empty()) {
      throw FormatError(fmt::format("{}:{}: model_id is empty", source, line));
    }
    if (!prompt_ids.contains(r.prompt_id)) {
      throw FormatError(fmt::format("{}:{}: prompt_id '{}' does not resolve to any prompt",
                                    source, line, r.prompt_id));
    }
    if (const auto [it, inserted] = seen.emplace(r.id(), line); !inserted) {
      throw FormatError(fmt::format("{}:{}: duplicate response '{}' (first seen on line {})",
                                    source, line, r.id(), it->second));
    }
    auto seg = segment(r.text);
    r.sentences = std::move(seg.sentences);
    r.paragraphs = std::move(seg.paragraphs);
    responses.push_back(std::move(r));
  }
  return responses;
}

json response_record(const Response& r) {
  return json{{"prompt_id", r.prompt_id}, {"model_id", r.model_id}, {"text", r.text}};
}

void write_file_atomic(const fs::path& path, std::string_view content) {
  std::error_code ec;
  if (path.has_parent_path()) {
    fs::create_directories(path.parent_path(), ec);
    if (ec) {
      throw IoError(fmt::format("cannot create directory '{}': {}",
                                path.parent_path().string(), ec.message()));
    }
  }
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) {
      throw IoError(fmt::format("cannot open '{}' for writing", tmp.string()));
    }
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) {
      out.close();
      fs::remove(tmp, ec);
      throw IoError(fmt::format("short write to '{}'", tmp.string()));
    }
  }
  fs::rename(tmp, path, ec);
  if (ec) {
    std::error_code ignored;
    fs::remove(tmp, ignored);
    throw IoError(fmt::format("cannot rename '{}' to '{}': {}", tmp.string(), path.string(),
                              ec.message()));
  }
}

fs::path persist_stage(const fs::path& run_dir, Stage stage, std::span<const json> records) {
  std::string body;
  for (const auto& r : records) {
    body += r.dump(-1, ' ', false, json::error_handler_t::replace);
    body += '\n';
  }
  const fs::path target = stage_path(run_dir, stage);
  std::lock_guard lock(writer_mutex(run_dir));
  write_file_atomic(target, body);
  return target;
}

std::vector<json> load_stage(const fs::path& run_dir, Stage stage) {
  const fs::path path = stage_path(run_dir, stage);
  if (!fs::exists(path)) {
    throw StageError(fmt::format("missing stage file '{}'", path.string()));
  }
  return read_jsonl(path);
}

void check_references(std::span<const Prompt> prompts, std::span<const Response> responses,
                      std::span<const Claim> claims) {
  std::unordered_set<std::string> prompt_ids;
  for (const auto& p : prompts) prompt_ids.insert(p.id);
  std::unordered_map<std::string, const Response*> by_id;
  for (const auto& r : responses) {
    if (!prompt_ids.contains(r.prompt_id)) {
      throw FormatError(fmt::format("response '{}' references unknown prompt '{}'", r.id(),
                                    r.prompt_id));
    }
    by_id.emplace(r.id(), &r);
  }
  std::unordered_set<std::string> claim_ids;
  for (const auto& c : claims) {
    const auto it = by_id.find(c.response_id);
    if (it == by_id.end()) {
      throw FormatError(fmt::format("claim '{}' references unknown response '{}'", c.id,
                                    c.response_id));
    }
    if (c.sentence_index >= it->second->sentence_count()) {
      throw FormatError(fmt::format("claim '{}' has sentence_index {} but response '{}' has {} "
                                    "sentences",
                                    c.id, c.sentence_index, c.response_id,
                                    it->second->sentence_count()));
    }
    if (!claim_ids.insert(c.id).second) {
      throw FormatError(fmt::format("duplicate claim id '{}'", c.id));
    }
  }
}

}  // namespace verifact
