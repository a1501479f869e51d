#include <gtest/gtest.h>

#include "oracles.hpp"
#include "verifact/errors.hpp"
#include "verifact/verifier.hpp"

using namespace verifact;

namespace {

PartJudgmentMatrix grid(std::size_t parts, std::size_t ev,
                        std::initializer_list<std::tuple<int, int, Judgment>> cells) {
  PartJudgmentMatrix m(std::vector<std::string>(parts, "part"), ev);
  for (auto [p, e, j] : cells) m.set(static_cast<std::size_t>(p), static_cast<std::size_t>(e), j);
  return m;
}

constexpr auto S = Judgment::Supports;
constexpr auto C = Judgment::Contradicts;

}  // namespace

TEST(Algebra, SpecExamples) {
  EXPECT_EQ(classify_by_algebra(grid(2, 2, {{0, 0, S}, {1, 1, S}})), AlgebraLabel::Supported);
  EXPECT_EQ(classify_by_algebra(grid(1, 1, {{0, 0, C}})), AlgebraLabel::Contradicted);
  EXPECT_EQ(classify_by_algebra(grid(1, 0, {})), AlgebraLabel::InconclusiveA);
  EXPECT_EQ(classify_by_algebra(grid(1, 2, {{0, 0, S}, {0, 1, C}})), AlgebraLabel::InconclusiveB);
}

TEST(Algebra, PrecedenceWhenPredicatesOverlap) {
  // part 0 contradicted, part 1 mixed, part 2 unjudged
  EXPECT_EQ(classify_by_algebra(grid(3, 2, {{0, 0, C}, {1, 0, S}, {1, 1, C}})),
            AlgebraLabel::Contradicted);
  EXPECT_EQ(classify_by_algebra(grid(2, 2, {{0, 0, S}, {0, 1, C}})), AlgebraLabel::InconclusiveB);
}

TEST(Algebra, MatchesOracleUpToTwoByThree) {
  for (std::size_t p = 1; p <= 2; ++p) {
    for (std::size_t e = 0; e <= 3; ++e) {
      for (const auto& g : vt::all_grids(p, e)) {
        PartJudgmentMatrix m(std::vector<std::string>(p, "x"), e);
        for (std::size_t i = 0; i < p; ++i) {
          for (std::size_t k = 0; k < e; ++k) m.set(i, k, g[i][k]);
        }
        EXPECT_EQ(classify_by_algebra(m), vt::oracle_label(g, e));
      }
    }
  }
}

TEST(Algebra, MatrixValidation) {
  EXPECT_THROW(PartJudgmentMatrix({}, 2), FormatError);
  PartJudgmentMatrix m({"a"}, 1);
  EXPECT_THROW(m.set(1, 0, S), std::out_of_range);
  EXPECT_THROW(m.at(0, 1), std::out_of_range);
}

TEST(Collapse, AllLabels) {
  EXPECT_EQ(collapse(AlgebraLabel::Supported), BinaryLabel::Supported);
  EXPECT_EQ(collapse(AlgebraLabel::Contradicted), BinaryLabel::Unsupported);
  EXPECT_EQ(collapse(AlgebraLabel::InconclusiveA), BinaryLabel::Unsupported);
  EXPECT_EQ(collapse(AlgebraLabel::InconclusiveB), BinaryLabel::Unsupported);
  EXPECT_EQ(collapse(TernaryLabel::Inconclusive), BinaryLabel::Unsupported);
  EXPECT_EQ(to_ternary(AlgebraLabel::InconclusiveA), TernaryLabel::Inconclusive);
  EXPECT_EQ(to_ternary(AlgebraLabel::InconclusiveB), TernaryLabel::Inconclusive);
}

TEST(VerificationPrompt, StandardOrder) {
  const auto p = assemble_verification_prompt("The sky is blue.", "Search result 1\nTitle: t\n",
                                               LabelMode::Binary, FieldOrder::Standard);
  const auto claim_at = p.rfind("Claim: The sky is blue.");
  const auto ev_at = p.rfind("Search result 1\nTitle: t");
  ASSERT_NE(claim_at, std::string::npos);
  ASSERT_NE(ev_at, std::string::npos);
  EXPECT_LT(claim_at, ev_at);
  EXPECT_TRUE(p.ends_with("Your decision:"));
}

TEST(VerificationPrompt, ReorderedPutsEvidenceFirst) {
  const auto p = assemble_verification_prompt("The sky is blue.", "Search result 1\nTitle: t\n",
                                               LabelMode::Ternary, FieldOrder::ClaudeReordered);
  EXPECT_LT(p.rfind("Search result 1\nTitle: t"), p.rfind("Claim: The sky is blue."));
  EXPECT_TRUE(p.ends_with("Your decision:"));
}

TEST(VerificationPrompt, ModesDiffer) {
  const auto b = assemble_verification_prompt("c", "e", LabelMode::Binary, FieldOrder::Standard);
  const auto t = assemble_verification_prompt("c", "e", LabelMode::Ternary, FieldOrder::Standard);
  EXPECT_NE(b, t);
  EXPECT_NE(t.find("Inconclusive"), std::string::npos);
  EXPECT_NE(b.find("Unsupported"), std::string::npos);
}

TEST(ParseDecision, Basics) {
  EXPECT_EQ(parse_decision("###Supported.###", LabelMode::Binary), Decision::Supported);
  EXPECT_EQ(parse_decision("x ###unsupported### y", LabelMode::Binary), Decision::Unsupported);
  EXPECT_EQ(parse_decision("###Inconclusive###", LabelMode::Ternary), Decision::Inconclusive);
  EXPECT_FALSE(parse_decision("Supported", LabelMode::Binary));
  EXPECT_FALSE(parse_decision("###Inconclusive###", LabelMode::Binary));
}

TEST(VerifyClaim, BinaryAndTernaryRecords) {
  MockTranscript t;
  t.set_default("reasoning ###Contradicted.###");
  MockChatBackend b(t, "mock:v");
  const Claim c{"r#0", "r", 0, "X."};
  EvidenceList ev;
  ev.claim_id = c.id;
  VerifyOptions o;
  o.label_mode = LabelMode::Ternary;
  const auto rec = verify_claim(c, ev, b, o);
  EXPECT_EQ(rec.ternary, TernaryLabel::Contradicted);
  EXPECT_EQ(rec.binary, BinaryLabel::Unsupported);
  EXPECT_EQ(rec.verifier_id, "mock:v");
  EXPECT_EQ(rec.raw_output, "reasoning ###Contradicted.###");

  MockTranscript t2;
  t2.set_default("###Supported###");
  MockChatBackend b2(t2);
  const auto rec2 = verify_claim(c, ev, b2);
  EXPECT_FALSE(rec2.ternary);
  EXPECT_EQ(rec2.binary, BinaryLabel::Supported);
  EXPECT_FALSE(rec2.parse_failure);
}

TEST(VerifyClaim, UnparseableIsUnsupported) {
  MockTranscript t;
  t.set_default("I cannot tell.");
  MockChatBackend b(t);
  const auto rec = verify_claim(Claim{"r#0", "r", 0, "X."}, EvidenceList{"r#0", "X.", {}, "", false}, b);
  EXPECT_TRUE(rec.parse_failure);
  EXPECT_EQ(rec.binary, BinaryLabel::Unsupported);
}

TEST(VerifyClaim, PromptCarriesRenderedEvidence) {
  const Claim c{"r#0", "r", 0, "Water boils at 100 C."};
  EvidenceList ev;
  ev.claim_id = c.id;
  ev.results = {{1, "Boiling", "Water boils at 100 degrees.", "https://b"}};
  MockTranscript t;
  t.add(assemble_verification_prompt(c.text, render_evidence(ev), LabelMode::Binary,
                                     FieldOrder::Standard),
        "###Supported###");
  MockChatBackend b(t);
  EXPECT_EQ(verify_claim(c, ev, b).binary, BinaryLabel::Supported);
}

TEST(VerifyBatch, KeepsOrder) {
  MockTranscript t;
  std::vector<Claim> cs;
  std::vector<EvidenceList> evs;
  for (int i = 0; i < 30; ++i) {
    const std::string text = "Claim " + std::to_string(i) + ".";
    cs.push_back({"r#" + std::to_string(i), "r", 0, text});
    evs.push_back({});
    evs.back().claim_id = cs.back().id;
    t.add(assemble_verification_prompt(text, render_evidence(evs.back()), LabelMode::Binary,
                                       FieldOrder::Standard),
          i % 3 == 0 ? "###Supported###" : "###Unsupported###");
  }
  MockChatBackend b(t);
  VerifyOptions o;
  o.concurrency = 5;
  const auto recs = verify_batch(cs, evs, b, o);
  ASSERT_EQ(recs.size(), 30u);
  for (int i = 0; i < 30; ++i) {
    EXPECT_EQ(recs[static_cast<std::size_t>(i)].claim_id, "r#" + std::to_string(i));
    EXPECT_EQ(recs[static_cast<std::size_t>(i)].binary,
              i % 3 == 0 ? BinaryLabel::Supported : BinaryLabel::Unsupported);
  }
}

TEST(VerifyByAlgebra, RecordsReferenceVerifier) {
  const auto rec = verify_by_algebra("c#1", grid(1, 2, {{0, 0, S}, {0, 1, C}}));
  EXPECT_EQ(rec.verifier_id, "reference-algebra");
  EXPECT_EQ(rec.ternary, TernaryLabel::Inconclusive);
  EXPECT_EQ(rec.binary, BinaryLabel::Unsupported);
}

TEST(VerificationRecordJson, RejectsInconsistentLabels) {
  nlohmann::json j{{"claim_id", "c"}, {"ternary", "supported"}, {"binary", "unsupported"},
                   {"raw_output", ""}, {"verifier_id", "v"}};
  EXPECT_THROW(j.get<VerificationRecord>(), FormatError);
}

TEST(VerifyBatch, MispairedEvidenceIsStageError) {
  MockTranscript t;
  t.set_default("###Supported###");
  MockChatBackend b(t);
  const Claim c{"r#0", "r", 0, "X."};
  EvidenceList ev;
  ev.claim_id = "r#9";
  EXPECT_THROW(verify_claim(c, ev, b), StageError);
}
