#include "verifact/pipeline.hpp"

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

#include "verifact/errors.hpp"
#include "verifact/extractor.hpp"
#include "verifact/hash.hpp"
#include "verifact/verifier.hpp"

namespace verifact {

namespace fs = std::filesystem;
using nlohmann::json;

void to_json(json& j, const ScoreRecord& r) {
  j = r.score;
  j["model_id"] = r.model_id;
  j["domain"] = r.domain;
  j["k"] = to_string(r.k);
  j["sentence_count"] = r.sentence_count;
}

void from_json(const json& j, ScoreRecord& r) {
  j.at("model_id").get_to(r.model_id);
  j.at("domain").get_to(r.domain);
  r.k = parse_rational(j.at("k").get<std::string>());
  j.at("sentence_count").get_to(r.sentence_count);
  const auto claims = j.at("claim_count").get<std::int64_t>();
  const auto supported = j.at("supported_count").get<std::int64_t>();
  // Derived fields are recomputed rather than trusted.
  r.score = score_response(claims, supported, r.k);
  j.at("response_id").get_to(r.score.response_id);
}

Backends make_backends(const PipelineConfig& config) {
  Backends b;
  auto chat = [&](const BackendSettings& s) -> std::shared_ptr<ChatBackend> {
    if (s.mock_transcript) return MockChatBackend::from_file(*s.mock_transcript);
    return std::make_shared<HttpChatBackend>(s.endpoint, config.retry);
  };
  b.extractor = chat(config.extractor);
  // One transcript file serves both roles when only --mock-llm is given.
  if (config.verifier.mock_transcript && config.extractor.mock_transcript &&
      *config.verifier.mock_transcript == *config.extractor.mock_transcript) {
    b.verifier = b.extractor;
  } else {
    b.verifier = chat(config.verifier);
  }
  if (config.search.mock_transcript) {
    b.search = MockSearchClient::from_file(*config.search.mock_transcript);
  } else {
    b.search = std::make_shared<HttpSearchClient>(config.search.endpoint, config.retry);
  }
  return b;
}

std::size_t RunReport::total_calls() const {
  std::size_t n = 0;
  for (const auto& s : stages) n += s.backend_calls;
  return n;
}

std::string RunReport::render() const {
  std::string out;
  for (const auto& s : stages) {
    if (s.skipped) {
      out += fmt::format("{:<9} skipped (output exists)\n", s.stage);
    } else {
      out += fmt::format("{:<9} {} backend calls\n", s.stage, s.backend_calls);
    }
  }
  return out;
}

std::string DryRunPlan::render() const {
  auto count = [](const std::optional<std::size_t>& n) {
    return n ? fmt::format("{}", *n) : std::string("unknown until the previous stage runs");
  };
  std::string out = "plan (no requests sent):\n";
  out += fmt::format("  extract   LLM calls:    {}\n", count(extraction_calls));
  out += fmt::format("  retrieve  search calls: {}\n", count(search_calls));
  out += fmt::format("  verify    LLM calls:    {}\n", count(verification_calls));
  for (const auto& s : skipped) out += fmt::format("  {} output exists, stage would be skipped\n", s);
  return out;
}

std::string scorecard_file_name(std::string_view model_id) {
  std::string out;
  for (char c : model_id) {
    const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
                    c == '.' || c == '_' || c == '-';
    out += ok ? c : '_';
  }
  if (out.empty() || out == "." || out == "..") out = "_" + out;
  return out + ".csv";
}

namespace {

void require_file(const fs::path& p, std::string_view needed_by) {
  if (!fs::exists(p)) {
    throw StageError(fmt::format("{} needs '{}', which does not exist", needed_by, p.string()));
  }
}

std::string jsonl(std::span<const json> rows) {
  std::string out;
  for (const auto& r : rows) {
    out += r.dump();
    out += '\n';
  }
  return out;
}

template <class Fn>
std::size_t calls_during(const std::shared_ptr<ChatBackend>& b, Fn&& fn) {
  const std::size_t before = b->call_count();
  fn();
  return b->call_count() - before;
}

}  // namespace

Pipeline::Pipeline(PipelineConfig config, Backends backends)
    : config_(std::move(config)), backends_(std::move(backends)) {}

Clock Pipeline::clock() const {
  if (config_.fixed_epoch) {
    const auto t = std::chrono::system_clock::time_point(std::chrono::seconds(*config_.fixed_epoch));
    return [t] { return t; };
  }
  return [] { return std::chrono::system_clock::now(); };
}

json Pipeline::manifest_config() const {
  auto chat = [](const BackendSettings& s) {
    if (s.mock_transcript) return json{{"mock", s.mock_transcript->filename().string()}};
    return json{{"base_url", s.endpoint.base_url}, {"model", s.endpoint.model}};
  };
  json search = config_.search.mock_transcript
                    ? json{{"mock", config_.search.mock_transcript->filename().string()}}
                    : json{{"base_url", config_.search.endpoint.base_url}};
  json ks = json::object();
  for (const auto& [d, k] : config_.k_overrides) ks[d] = to_string(k);
  return json{{"extractor", chat(config_.extractor)},
              {"verifier", chat(config_.verifier)},
              {"search", search},
              {"label_mode", to_string(config_.label_mode)},
              {"field_order", to_string(config_.field_order)},
              {"num_results", config_.num_search_results},
              {"max_tokens", config_.extraction_params.max_tokens},
              {"temperature", config_.extraction_params.temperature},
              {"k_overrides", ks}};
}

std::vector<Prompt> Pipeline::load_prompts() const {
  const fs::path p = file(run_files::kPrompts);
  require_file(p, "this stage");
  return ingest_prompts(p, config_.default_kind);
}

std::vector<Response> Pipeline::load_responses(std::span<const Prompt> prompts) const {
  const fs::path p = file(run_files::kResponses);
  require_file(p, "this stage");
  return ingest_responses(p, prompts);
}

void Pipeline::ingest(const fs::path& prompts_path, const fs::path& responses_path) {
  const auto prompts = ingest_prompts(prompts_path, config_.default_kind);
  const auto responses = ingest_responses(responses_path, prompts);

  std::vector<json> prompt_rows(prompts.begin(), prompts.end());
  std::vector<json> response_rows;
  for (const auto& r : responses) response_rows.push_back(response_record(r));
  const std::string prompt_text = jsonl(prompt_rows);
  const std::string response_text = jsonl(response_rows);

  RunManifest m;
  m.backend_config = manifest_config();
  m.run_id = sha256_hex(prompt_text + '\0' + response_text + '\0' + m.backend_config.dump())
                 .substr(0, 16);
  std::map<std::string, std::string> domain_of;
  for (const auto& p : prompts) domain_of[p.id] = p.domain;
  std::set<std::string> models, domains;
  for (const auto& r : responses) {
    models.insert(r.model_id);
    domains.insert(domain_of.at(r.prompt_id));
  }
  m.model_ids.assign(models.begin(), models.end());
  m.domains.assign(domains.begin(), domains.end());
  m.created_at = format_timestamp(clock()());

  const fs::path manifest_path = file(run_files::kManifest);
  if (fs::exists(manifest_path)) {
    const auto existing = json::parse(read_file(manifest_path)).get<RunManifest>();
    if (existing.run_id == m.run_id && fs::exists(file(run_files::kPrompts)) &&
        fs::exists(file(run_files::kResponses))) {
      return;  // same run, keep the directory untouched
    }
    if (!config_.force) {
      throw ConfigError(fmt::format(
          "'{}' holds run {} with different inputs or settings; pass --force to overwrite",
          config_.run_dir.string(), existing.run_id));
    }
  }
  write_file_atomic(file(run_files::kPrompts), prompt_text);
  write_file_atomic(file(run_files::kResponses), response_text);
  write_file_atomic(manifest_path, json(m).dump(2) + "\n");
}

RunReport Pipeline::run(const fs::path& prompts, const fs::path& responses) {
  ingest(prompts, responses);
  const bool resume = !config_.force;
  RunReport report;
  report.stages.push_back(extract(resume));
  report.stages.push_back(retrieve(resume));
  report.stages.push_back(verify(resume));
  report.stages.push_back(score(resume));
  report.stages.push_back(analyze(resume));
  return report;
}

StageReport Pipeline::extract(bool resume) {
  StageReport rep;
  rep.stage = "extract";
  const fs::path out = stage_path(config_.run_dir, Stage::Claims);
  if (resume && fs::exists(out)) {
    rep.skipped = true;
    return rep;
  }
  const auto prompts = load_prompts();
  const auto responses = load_responses(prompts);
  std::map<std::string, Prompt> by_id;
  for (const auto& p : prompts) by_id.emplace(p.id, p);

  std::vector<Claim> claims;
  rep.backend_calls = calls_during(backends_.extractor, [&] {
    const auto results = extract_claims_batch(
        responses, by_id, *backends_.extractor,
        ExtractionOptions{config_.extraction_params, config_.concurrency});
    for (const auto& r : results) claims.insert(claims.end(), r.claims.begin(), r.claims.end());
  });
  spdlog::info("extract: {} claims from {} responses", claims.size(), responses.size());
  rep.outputs.push_back(persist_records<Claim>(config_.run_dir, Stage::Claims, claims));
  return rep;
}

StageReport Pipeline::retrieve(bool resume) {
  StageReport rep;
  rep.stage = "retrieve";
  const fs::path out = stage_path(config_.run_dir, Stage::Evidence);
  if (resume && fs::exists(out)) {
    rep.skipped = true;
    return rep;
  }
  require_file(stage_path(config_.run_dir, Stage::Claims), "retrieve");
  const auto prompts = load_prompts();
  const auto responses = load_responses(prompts);
  const auto claims = load_records<Claim>(config_.run_dir, Stage::Claims);
  check_references(prompts, responses, claims);

  SearchCache cache(file(run_files::kSearchCache), config_.search.cache_max_age);
  RetrieveOptions opts;
  opts.num_results = config_.num_search_results;
  opts.concurrency = config_.concurrency;
  opts.clock = clock();
  const std::size_t before = backends_.search->call_count();
  const auto evidence = retrieve_batch(claims, *backends_.search, cache, opts);
  rep.backend_calls = backends_.search->call_count() - before;
  spdlog::info("retrieve: {} evidence lists, {} searches", evidence.size(), rep.backend_calls);
  rep.outputs.push_back(persist_records<EvidenceList>(config_.run_dir, Stage::Evidence, evidence));
  return rep;
}

StageReport Pipeline::verify(bool resume) {
  StageReport rep;
  rep.stage = "verify";
  const fs::path out = stage_path(config_.run_dir, Stage::Verdicts);
  if (resume && fs::exists(out)) {
    rep.skipped = true;
    return rep;
  }
  require_file(stage_path(config_.run_dir, Stage::Claims), "verify");
  require_file(stage_path(config_.run_dir, Stage::Evidence), "verify");
  const auto claims = load_records<Claim>(config_.run_dir, Stage::Claims);
  const auto evidence = load_records<EvidenceList>(config_.run_dir, Stage::Evidence);

  std::map<std::string, const EvidenceList*> by_claim;
  for (const auto& e : evidence) by_claim[e.claim_id] = &e;
  std::set<std::string> claim_ids;
  std::vector<EvidenceList> aligned;
  aligned.reserve(claims.size());
  for (const auto& c : claims) {
    claim_ids.insert(c.id);
    const auto it = by_claim.find(c.id);
    if (it == by_claim.end()) {
      throw StageError(fmt::format("evidence.jsonl has no entry for claim '{}'", c.id));
    }
    aligned.push_back(*it->second);
  }
  for (const auto& e : evidence) {
    if (!claim_ids.contains(e.claim_id)) {
      throw FormatError(fmt::format("evidence.jsonl refers to unknown claim '{}'", e.claim_id));
    }
  }

  VerifyOptions opts;
  opts.label_mode = config_.label_mode;
  opts.field_order = config_.field_order;
  opts.params = config_.verification_params;
  opts.concurrency = config_.concurrency;
  std::vector<VerificationRecord> verdicts;
  rep.backend_calls = calls_during(backends_.verifier, [&] {
    verdicts = verify_batch(claims, aligned, *backends_.verifier, opts);
  });
  const auto failures = std::count_if(verdicts.begin(), verdicts.end(),
                                      [](const auto& v) { return v.parse_failure; });
  spdlog::info("verify: {} verdicts, {} unparseable", verdicts.size(), failures);
  rep.outputs.push_back(
      persist_records<VerificationRecord>(config_.run_dir, Stage::Verdicts, verdicts));
  return rep;
}

StageReport Pipeline::score(bool resume) {
  StageReport rep;
  rep.stage = "score";
  const fs::path out = stage_path(config_.run_dir, Stage::Scores);
  if (resume && fs::exists(out)) {
    rep.skipped = true;
    return rep;
  }
  require_file(stage_path(config_.run_dir, Stage::Claims), "score");
  require_file(stage_path(config_.run_dir, Stage::Verdicts), "score");
  const auto prompts = load_prompts();
  const auto responses = load_responses(prompts);
  const auto claims = load_records<Claim>(config_.run_dir, Stage::Claims);
  const auto verdicts = load_records<VerificationRecord>(config_.run_dir, Stage::Verdicts);
  check_references(prompts, responses, claims);

  std::map<std::string, BinaryLabel> labels;
  std::set<std::string> claim_ids;
  for (const auto& c : claims) claim_ids.insert(c.id);
  for (const auto& v : verdicts) {
    if (!claim_ids.contains(v.claim_id)) {
      throw FormatError(fmt::format("verdicts.jsonl refers to unknown claim '{}'", v.claim_id));
    }
    labels[v.claim_id] = v.binary;
  }

  std::map<std::string, std::string> domain_of;
  for (const auto& p : prompts) domain_of[p.id] = p.domain;
  std::map<std::string, std::vector<std::string>> claims_of;
  for (const auto& c : claims) claims_of[c.response_id].push_back(c.id);

  // domain -> model -> responses
  std::map<std::string, std::map<std::string, std::vector<ResponseClaims>>> groups;
  std::map<std::string, std::vector<std::int64_t>> counts_by_domain;
  for (const auto& r : responses) {
    ResponseClaims rc;
    rc.response_id = r.id();
    rc.sentence_count = static_cast<std::int64_t>(r.sentence_count());
    if (const auto it = claims_of.find(rc.response_id); it != claims_of.end()) {
      rc.claim_ids = it->second;
    }
    const std::string& domain = domain_of.at(r.prompt_id);
    counts_by_domain[domain].push_back(static_cast<std::int64_t>(rc.claim_ids.size()));
    groups[domain][r.model_id].push_back(std::move(rc));
  }

  std::map<std::string, std::vector<DomainScorecard>> cards_by_model;
  std::vector<ScoreRecord> records;
  for (const auto& [domain, by_model] : groups) {
    std::optional<Rational> override;
    if (const auto it = config_.k_overrides.find(domain); it != config_.k_overrides.end()) {
      override = it->second;
    }
    const Rational k = compute_k(counts_by_domain.at(domain), override);
    for (const auto& [model, rcs] : by_model) {
      auto card = score_domain(domain, rcs, labels, k);
      std::map<std::string, std::int64_t> sentences;
      for (const auto& rc : rcs) sentences[rc.response_id] = rc.sentence_count;
      for (const auto& s : card.response_scores) {
        records.push_back(ScoreRecord{model, domain, k, sentences.at(s.response_id), s});
      }
      cards_by_model[model].push_back(std::move(card));
    }
  }
  std::stable_sort(records.begin(), records.end(), [](const auto& a, const auto& b) {
    return std::tie(a.model_id, a.domain) < std::tie(b.model_id, b.domain);
  });
  rep.outputs.push_back(persist_records<ScoreRecord>(config_.run_dir, Stage::Scores, records));

  std::string table;
  for (const auto& [model, cards] : cards_by_model) {
    std::string csv = scorecard_csv_header() + "\n";
    for (const auto& c : cards) csv += scorecard_csv_row(c) + "\n";
    const fs::path p = file(run_files::kScorecards) / scorecard_file_name(model);
    write_file_atomic(p, csv);
    rep.outputs.push_back(p);
    table += fmt::format("Model: {}\n{}\n", model, render_scorecard_table(cards));
  }
  write_file_atomic(file(run_files::kScorecardText), table);
  rep.outputs.push_back(file(run_files::kScorecardText));
  return rep;
}

StageReport Pipeline::analyze(bool resume) {
  StageReport rep;
  rep.stage = "analyze";
  if (resume && fs::exists(file(run_files::kLeaderboardCsv))) {
    rep.skipped = true;
    return rep;
  }
  require_file(stage_path(config_.run_dir, Stage::Scores), "analyze");
  const auto records = load_records<ScoreRecord>(config_.run_dir, Stage::Scores);

  std::map<std::string, std::map<std::string, std::pair<Rational, std::int64_t>>> sums;
  std::set<std::string> domains;
  for (const auto& r : records) {
    auto& [sum, n] = sums[r.model_id][r.domain];
    sum += r.score.f1_at_k;
    ++n;
    domains.insert(r.domain);
  }
  std::vector<std::string> models;
  std::vector<std::vector<double>> scores;
  for (const auto& [model, by_domain] : sums) {
    std::vector<double> row;
    for (const auto& d : domains) {
      const auto it = by_domain.find(d);
      if (it == by_domain.end()) {
        throw ScoringError(fmt::format("model '{}' has no scores for domain '{}'", model, d));
      }
      row.push_back(to_double(it->second.first / it->second.second));
    }
    models.push_back(model);
    scores.push_back(std::move(row));
  }
  const auto matrix = ModelDomainMatrix::from_scores(
      std::move(models), std::vector<std::string>(domains.begin(), domains.end()),
      std::move(scores));
  rep.outputs = write_analysis(matrix, config_.run_dir);
  return rep;
}

DryRunPlan Pipeline::plan(const std::optional<fs::path>& prompts_path,
                          const std::optional<fs::path>& responses_path) const {
  DryRunPlan plan;
  const bool resume = !config_.force;
  const fs::path claims_file = stage_path(config_.run_dir, Stage::Claims);
  const fs::path evidence_file = stage_path(config_.run_dir, Stage::Evidence);
  const fs::path verdicts_file = stage_path(config_.run_dir, Stage::Verdicts);

  const bool extract_skipped = resume && fs::exists(claims_file);
  if (extract_skipped) {
    plan.extraction_calls = 0;
    plan.skipped.push_back("extract");
  } else {
    const auto prompts = prompts_path ? ingest_prompts(*prompts_path, config_.default_kind)
                                      : load_prompts();
    const auto responses =
        responses_path ? ingest_responses(*responses_path, prompts) : load_responses(prompts);
    plan.extraction_calls = count_extraction_calls(responses);
  }

  // Claims are only known once extraction has happened.
  std::optional<std::vector<Claim>> claims;
  if (extract_skipped) claims = load_records<Claim>(config_.run_dir, Stage::Claims);

  if (resume && fs::exists(evidence_file)) {
    plan.search_calls = 0;
    plan.skipped.push_back("retrieve");
  } else if (claims) {
    SearchCache cache(file(run_files::kSearchCache), config_.search.cache_max_age);
    std::set<std::string> misses;
    for (const auto& c : *claims) {
      if (!cache.get(c.text)) misses.insert(c.text);
    }
    plan.search_calls = misses.size();
  }

  if (resume && fs::exists(verdicts_file)) {
    plan.verification_calls = 0;
    plan.skipped.push_back("verify");
  } else if (claims) {
    plan.verification_calls = claims->size();
  }
  return plan;
}

ModelDomainMatrix matrix_from_scorecards(std::span<const fs::path> paths) {
  if (paths.empty()) throw ConfigError("no scorecard files given");
  std::vector<std::string> models;
  std::vector<std::string> domains;
  std::vector<std::vector<double>> scores;
  const std::string header = scorecard_csv_header();
  for (const auto& p : paths) {
    std::istringstream in(read_file(p));
    std::string line;
    if (!std::getline(in, line) || line != header) {
      throw FormatError(fmt::format("{}: expected header '{}'", p.string(), header));
    }
    std::vector<std::string> file_domains;
    std::vector<double> row;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
      ++line_no;
      if (line.empty()) continue;
      std::vector<std::string> cells;
      std::stringstream ss(line);
      std::string cell;
      while (std::getline(ss, cell, ',')) cells.push_back(cell);
      if (cells.size() != 8) {
        throw FormatError(fmt::format("{}:{}: expected 8 columns, got {}", p.string(), line_no,
                                      cells.size()));
      }
      file_domains.push_back(cells[0]);
      try {
        row.push_back(to_double(parse_rational(cells[5])));
      } catch (const FormatError& e) {
        throw FormatError(fmt::format("{}:{}: {}", p.string(), line_no, e.what()));
      }
    }
    // Align columns by domain name.
    std::vector<std::size_t> order(file_domains.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return file_domains[a] < file_domains[b]; });
    std::vector<std::string> sorted_domains;
    std::vector<double> sorted_row;
    for (auto i : order) {
      sorted_domains.push_back(file_domains[i]);
      sorted_row.push_back(row[i]);
    }
    if (models.empty()) {
      domains = sorted_domains;
    } else if (sorted_domains != domains) {
      throw FormatError(fmt::format("{}: domains differ from '{}'", p.string(), paths[0].string()));
    }
    models.push_back(p.stem().string());
    scores.push_back(std::move(sorted_row));
  }
  return ModelDomainMatrix::from_scores(std::move(models), std::move(domains), std::move(scores));
}

std::vector<fs::path> write_analysis(const ModelDomainMatrix& matrix, const fs::path& out_dir) {
  std::vector<fs::path> written;
  const auto board = render_leaderboard(matrix);
  write_file_atomic(out_dir / run_files::kLeaderboardText, board.text);
  written.push_back(out_dir / run_files::kLeaderboardText);
  write_file_atomic(out_dir / run_files::kLeaderboardCsv, board.csv);
  written.push_back(out_dir / run_files::kLeaderboardCsv);
  if (matrix.models.size() >= 2) {
    write_file_atomic(out_dir / run_files::kCorrelations,
                      correlation_csv(correlation_matrix(matrix)));
    written.push_back(out_dir / run_files::kCorrelations);
  }
  return written;
}

}  // namespace verifact
