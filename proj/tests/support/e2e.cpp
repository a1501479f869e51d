#include "e2e.hpp"

#include <fmt/format.h>

#include "temp_dir.hpp"
#include "verifact/corpus.hpp"
#include "verifact/extractor.hpp"
#include "verifact/segmenter.hpp"

namespace fs = std::filesystem;
using namespace verifact;

namespace vt {

fs::path fixtures_dir() { return VERIFACT_FIXTURES; }
fs::path golden_dir() { return VERIFACT_GOLDEN; }
fs::path e2e_dir() { return fixtures_dir() / "e2e"; }

nlohmann::json e2e_expected() { return nlohmann::json::parse(read_file(e2e_dir() / "expected.json")); }

PipelineConfig e2e_config(const fs::path& run_dir) {
  ConfigOverrides cli;
  cli.run_dir = run_dir;
  cli.mock_llm = e2e_dir() / "llm_transcript.jsonl";
  cli.mock_search = e2e_dir() / "search_transcript.jsonl";
  cli.concurrency = 4;
  auto cfg = resolve_config(cli, [](std::string_view) { return std::nullopt; });
  cfg.retry = RetryPolicy::none();
  return cfg;
}

Mocks e2e_mocks() {
  Mocks m;
  m.llm = MockChatBackend::from_file(e2e_dir() / "llm_transcript.jsonl");
  m.search = MockSearchClient::from_file(e2e_dir() / "search_transcript.jsonl");
  return m;
}

E2ERun run_e2e(const fs::path& run_dir) {
  const Mocks mocks = e2e_mocks();
  Pipeline p(e2e_config(run_dir), mocks.backends());
  E2ERun out;
  out.report = p.run(e2e_dir() / "prompts.jsonl", e2e_dir() / "responses.jsonl");
  out.llm_calls = mocks.llm->call_count();
  out.search_calls = mocks.search->call_count();
  return out;
}

Rational fiction_ver_ratio(const fs::path& work_dir) {
  constexpr int kResponses = 10;
  constexpr int kSentences = 34;
  std::string prompts, responses;
  MockTranscript llm;
  llm.set_default(std::string(kNoVerifiableClaim));
  MockTranscript search;
  search.set_default(nlohmann::json{{"organic", nlohmann::json::array()}});

  for (int r = 0; r < kResponses; ++r) {
    Prompt p{fmt::format("wp-{}", r), "fiction", PromptKind::NonQA,
             fmt::format("Write a story about lighthouse number {}.", r)};
    prompts += nlohmann::json(p).dump() + "\n";
    std::string text;
    for (int s = 0; s < kSentences; ++s) {
      if (s > 0) text += (s % 6 == 0) ? "\n\n" : " ";
      text += fmt::format("The keeper of lighthouse {} climbed stair {} slowly.", r, s);
    }
    Response resp;
    resp.prompt_id = p.id;
    resp.model_id = "storyteller";
    resp.text = text;
    responses += response_record(resp).dump() + "\n";

    // Script one claim for the window at sentence (3r mod 34).
    auto seg = segment(text);
    resp.sentences = seg.sentences;
    resp.paragraphs = seg.paragraphs;
    const auto windows = build_windows(resp, p);
    const auto& w = windows.at(static_cast<std::size_t>((3 * r) % kSentences));
    llm.add(assemble_extraction_prompt(render_window(w), w.focus, p.kind),
            fmt::format("- Lighthouse {} has a keeper.", r));
  }
  write_text(work_dir / "prompts.jsonl", prompts);
  write_text(work_dir / "responses.jsonl", responses);

  auto chat = std::make_shared<MockChatBackend>(llm, "mock:fiction");
  auto client = std::make_shared<MockSearchClient>(search);
  ConfigOverrides cli;
  cli.run_dir = work_dir / "run";
  cli.mock_llm = work_dir / "unused-llm";
  cli.mock_search = work_dir / "unused-search";
  auto cfg = resolve_config(cli, [](std::string_view) { return std::nullopt; });
  Pipeline pipeline(cfg, Backends{chat, chat, client});
  pipeline.run(work_dir / "prompts.jsonl", work_dir / "responses.jsonl");

  // VerRatio recomputed from the persisted stage files rather than the CSV's
  // rounded column.
  const auto scores = load_records<ScoreRecord>(cfg.run_dir, Stage::Scores);
  Rational sum = 0;
  for (const auto& s : scores) {
    sum += Rational(s.score.claim_count) / s.sentence_count;
  }
  return sum / static_cast<std::int64_t>(scores.size());
}

}  // namespace vt
