#pragma once

#include <nlohmann/json.hpp>

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "verifact/rational.hpp"
#include "verifact/verifier.hpp"

namespace verifact {

/// Per-domain recall target. Returns `override` when given, else the median
/// of `claim_counts` (mean of the two middle values for even sizes, kept
/// exact). Throws ScoringError for an empty list without override and when
/// the resulting K is not positive.
Rational compute_k(std::span<const std::int64_t> claim_counts,
                   std::optional<Rational> override = std::nullopt);

struct ResponseScore {
  std::string response_id;
  std::int64_t claim_count = 0;      // |C|
  std::int64_t supported_count = 0;  // S(r), a raw count
  Rational precision;                // S / |C|, 0 when |C| = 0
  Rational recall;                   // min(S / K, 1)
  Rational f1_at_k;                  // 2PR / (P + R), 0 when S = 0

  friend bool operator==(const ResponseScore&, const ResponseScore&) = default;
};

/// F1@K for one response. Throws ScoringError when supported_count exceeds
/// claim_count, when a count is negative, or when k is not positive.
ResponseScore score_response(std::int64_t claim_count, std::int64_t supported_count,
                             const Rational& k);

/// Claims and sentence count of one response, the unit score_domain consumes.
struct ResponseClaims {
  std::string response_id;
  std::int64_t sentence_count = 0;
  std::vector<std::string> claim_ids;
};

struct DomainScorecard {
  std::string domain;
  Rational k;
  std::vector<ResponseScore> response_scores;  // sorted by response_id
  Rational veriscore;        // mean F1@K
  Rational ver_ratio;        // mean claims / sentences
  Rational mean_precision;
  Rational mean_recall;
  Rational mean_sentences;   // L

  std::size_t size() const noexcept { return response_scores.size(); }
};

/// Scores every response of one domain. `labels` maps claim id → binary label
/// and must cover every listed claim. K is taken from `k_override` or computed
/// from this domain's claim counts. Responses with no sentences contribute a
/// ratio of 0 to VerRatio.
DomainScorecard score_domain(std::string domain, std::span<const ResponseClaims> responses,
                             const std::map<std::string, BinaryLabel>& labels,
                             std::optional<Rational> k_override = std::nullopt);

void to_json(nlohmann::json& j, const ResponseScore& s);

/// Fixed-precision decimal rendering used in every report.
std::string format_fixed(const Rational& value, int decimals);

/// "domain,K,L,P,R,F,VerRatio,N"
std::string scorecard_csv_header();
std::string scorecard_csv_row(const DomainScorecard& card);

/// Aligned plain-text table of scorecards with columns
/// Domain, K, L, P, R, F, VerRatio, N (P/R/F as percentages).
std::string render_scorecard_table(std::span<const DomainScorecard> cards);

}  // namespace verifact
