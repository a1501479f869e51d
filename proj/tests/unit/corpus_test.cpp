#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <thread>

#include "temp_dir.hpp"
#include "verifact/corpus.hpp"
#include "verifact/errors.hpp"
#include "verifact/pipeline.hpp"
#include "verifact/retriever.hpp"
#include "verifact/verifier.hpp"

using namespace verifact;
namespace fs = std::filesystem;

namespace {

std::size_t line_count(const fs::path& p) {
  std::ifstream in(p);
  std::size_t n = 0;
  std::string line;
  while (std::getline(in, line)) ++n;
  return n;
}

std::string what_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const std::exception& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST(IngestPrompts, TwoQaLines) {
  vt::TempDir d;
  vt::write_text(d / "p.jsonl",
                 "{\"id\":\"q1\",\"domain\":\"eli5\",\"text\":\"Why?\"}\n"
                 "{\"id\":\"q2\",\"domain\":\"eli5\",\"text\":\"How?\"}\n");
  const auto prompts = ingest_prompts(d / "p.jsonl", PromptKind::QA);
  ASSERT_EQ(prompts.size(), 2u);
  EXPECT_EQ(prompts[0].kind, PromptKind::QA);
  EXPECT_EQ(prompts[1].text, "How?");
}

TEST(IngestPrompts, PerLineKindOverrides) {
  vt::TempDir d;
  vt::write_text(d / "p.jsonl",
                 "{\"id\":\"a\",\"domain\":\"x\",\"text\":\"t\",\"kind\":\"nonqa\"}\n"
                 "{\"id\":\"b\",\"domain\":\"x\",\"text\":\"t\"}\n");
  const auto prompts = ingest_prompts(d / "p.jsonl", PromptKind::QA);
  EXPECT_EQ(prompts[0].kind, PromptKind::NonQA);
  EXPECT_EQ(prompts[1].kind, PromptKind::QA);
}

TEST(IngestPrompts, DuplicateIdNamesIdAndLine) {
  vt::TempDir d;
  vt::write_text(d / "p.jsonl",
                 "{\"id\":\"q1\",\"domain\":\"x\",\"text\":\"a\"}\n"
                 "{\"id\":\"q2\",\"domain\":\"x\",\"text\":\"b\"}\n"
                 "{\"id\":\"q1\",\"domain\":\"x\",\"text\":\"c\"}\n");
  const std::string msg = what_of([&] { ingest_prompts(d / "p.jsonl", PromptKind::QA); });
  EXPECT_NE(msg.find("q1"), std::string::npos) << msg;
  EXPECT_NE(msg.find(":3:"), std::string::npos) << msg;
}

TEST(IngestPrompts, EmptyFileIsEmptyList) {
  vt::TempDir d;
  vt::write_text(d / "p.jsonl", "");
  EXPECT_TRUE(ingest_prompts(d / "p.jsonl", PromptKind::QA).empty());
}

TEST(IngestPrompts, MalformedLineNamesLineNumber) {
  vt::TempDir d;
  vt::write_text(d / "p.jsonl",
                 "{\"id\":\"q1\",\"domain\":\"x\",\"text\":\"a\"}\n\n{\"id\": oops}\n");
  const std::string msg = what_of([&] { ingest_prompts(d / "p.jsonl", PromptKind::QA); });
  EXPECT_NE(msg.find(":3"), std::string::npos) << msg;
}

TEST(IngestPrompts, MissingFieldRejected) {
  vt::TempDir d;
  vt::write_text(d / "p.jsonl", "{\"id\":\"q1\",\"text\":\"a\"}\n");
  EXPECT_THROW(ingest_prompts(d / "p.jsonl", PromptKind::QA), FormatError);
}

TEST(IngestResponses, DanglingPromptRejected) {
  vt::TempDir d;
  vt::write_text(d / "r.jsonl", "{\"prompt_id\":\"nope\",\"model_id\":\"m\",\"text\":\"A.\"}\n");
  std::vector<Prompt> prompts{{"q1", "x", PromptKind::QA, "Q?"}};
  EXPECT_THROW(ingest_responses(d / "r.jsonl", prompts), FormatError);
}

TEST(IngestResponses, SegmentsOnLoad) {
  vt::TempDir d;
  vt::write_text(d / "r.jsonl",
                 "{\"prompt_id\":\"q1\",\"model_id\":\"m\",\"text\":\"A one. B two.\\n\\nC three.\"}\n");
  std::vector<Prompt> prompts{{"q1", "x", PromptKind::QA, "Q?"}};
  const auto rs = ingest_responses(d / "r.jsonl", prompts);
  ASSERT_EQ(rs.size(), 1u);
  EXPECT_EQ(rs[0].id(), "m/q1");
  EXPECT_EQ(rs[0].sentence_count(), 3u);
  EXPECT_EQ(rs[0].paragraphs.size(), 2u);
  EXPECT_EQ(rs[0].sentence(2), "C three.");
}

TEST(PersistStage, CountAndIdempotence) {
  vt::TempDir d;
  std::vector<Claim> claims{{"m/q#1", "m/q", 0, "A."}, {"m/q#2", "m/q", 1, "B."},
                            {"m/q#3", "m/q", 1, "C."}};
  const auto p = persist_records<Claim>(d.path(), Stage::Claims, claims);
  EXPECT_EQ(p, d / "claims.jsonl");
  EXPECT_EQ(line_count(p), 3u);
  persist_records<Claim>(d.path(), Stage::Claims, claims);
  EXPECT_EQ(line_count(p), 3u);
}

TEST(PersistStage, UnwritableDirectoryLeavesNothing) {
  vt::TempDir d;
  // A regular file where the run directory should be; root ignores mode bits,
  // so permissions alone would not make this fail.
  vt::write_text(d / "blocker", "x");
  std::vector<Claim> claims{{"a#1", "a", 0, "A."}};
  EXPECT_THROW(persist_records<Claim>(d / "blocker" / "run", Stage::Claims, claims), IoError);
  EXPECT_FALSE(fs::exists(d / "blocker" / "run" / "claims.jsonl"));
}

TEST(PersistStage, NoTempFilesLeftBehind) {
  vt::TempDir d;
  std::vector<Claim> claims{{"a#1", "a", 0, "A."}};
  persist_records<Claim>(d.path(), Stage::Claims, claims);
  std::size_t files = 0;
  for (const auto& e : fs::directory_iterator(d.path())) {
    (void)e;
    ++files;
  }
  EXPECT_EQ(files, 1u);
}

TEST(PersistStage, ConcurrentWritersSerialised) {
  vt::TempDir d;
  std::vector<Claim> a(50, Claim{"a#1", "a", 0, "A."});
  std::vector<Claim> b(80, Claim{"b#1", "b", 0, "B."});
  std::thread t1([&] { for (int i = 0; i < 20; ++i) persist_records<Claim>(d.path(), Stage::Claims, a); });
  std::thread t2([&] { for (int i = 0; i < 20; ++i) persist_records<Claim>(d.path(), Stage::Claims, b); });
  t1.join();
  t2.join();
  const auto n = line_count(d / "claims.jsonl");
  EXPECT_TRUE(n == 50 || n == 80) << n;
}

TEST(RoundTrip, EveryStageType) {
  vt::TempDir d;
  std::vector<Claim> claims{{"m/q#1", "m/q", 2, "Ünïcode \"quoted\" claim."}};
  persist_records<Claim>(d.path(), Stage::Claims, claims);
  EXPECT_EQ(load_records<Claim>(d.path(), Stage::Claims), claims);

  std::vector<EvidenceList> ev{{"m/q#1", "q", {{1, "T", "S\nx", "https://a"}}, "1970-01-01T00:00:00Z", true}};
  persist_records<EvidenceList>(d.path(), Stage::Evidence, ev);
  EXPECT_EQ(load_records<EvidenceList>(d.path(), Stage::Evidence), ev);

  std::vector<VerificationRecord> vr{
      {"m/q#1", TernaryLabel::Contradicted, BinaryLabel::Unsupported, "raw ###x###", "gpt", false},
      {"m/q#2", std::nullopt, BinaryLabel::Supported, "", "reference-algebra", false},
      {"m/q#3", std::nullopt, BinaryLabel::Unsupported, "??", "gpt", true}};
  persist_records<VerificationRecord>(d.path(), Stage::Verdicts, vr);
  EXPECT_EQ(load_records<VerificationRecord>(d.path(), Stage::Verdicts), vr);

  ScoreRecord sr{"model/x", "eli5", make_rational(7, 2), 9,
                 score_response(4, 3, make_rational(7, 2))};
  sr.score.response_id = "model/x/q";
  std::vector<ScoreRecord> srs{sr};
  persist_records<ScoreRecord>(d.path(), Stage::Scores, srs);
  EXPECT_EQ(load_records<ScoreRecord>(d.path(), Stage::Scores), srs);
}

TEST(RoundTrip, ManifestAndPrompt) {
  RunManifest m{"abc", {"m1", "m2"}, {"eli5"}, {{"k", 1}}, "1970-01-01T00:00:00Z"};
  EXPECT_EQ(nlohmann::json(m).get<RunManifest>(), m);
  Prompt p{"q", "d", PromptKind::NonQA, "text"};
  EXPECT_EQ(nlohmann::json(p).get<Prompt>(), p);
}

TEST(LoadStage, MissingFileNamed) {
  vt::TempDir d;
  const std::string msg = what_of([&] { load_stage(d.path(), Stage::Verdicts); });
  EXPECT_NE(msg.find("verdicts.jsonl"), std::string::npos) << msg;
}

TEST(References, DanglingClaimRejected) {
  std::vector<Prompt> prompts{{"q", "d", PromptKind::QA, "Q?"}};
  Response r;
  r.prompt_id = "q";
  r.model_id = "m";
  r.text = "A.";
  r.sentences = {{0, 2}};
  r.paragraphs = {{0, 1}};
  std::vector<Response> rs{r};
  std::vector<Claim> ok{{"m/q#1", "m/q", 0, "A."}};
  EXPECT_NO_THROW(check_references(prompts, rs, ok));
  std::vector<Claim> bad_resp{{"x#1", "x/q", 0, "A."}};
  EXPECT_THROW(check_references(prompts, rs, bad_resp), FormatError);
  std::vector<Claim> bad_index{{"m/q#1", "m/q", 5, "A."}};
  EXPECT_THROW(check_references(prompts, rs, bad_index), FormatError);
}
