#include "verifact/scorer.hpp"

#include <fmt/format.h>

#include <algorithm>

#include "verifact/errors.hpp"

namespace verifact {

namespace mp = boost::multiprecision;
using nlohmann::json;

Rational compute_k(std::span<const std::int64_t> claim_counts, std::optional<Rational> override) {
  if (override) {
    if (*override <= 0) {
      throw ScoringError(fmt::format("K override must be positive, got {}", to_string(*override)));
    }
    return *override;
  }
  if (claim_counts.empty()) {
    throw ScoringError("cannot compute K from an empty list of claim counts");
  }
  std::vector<std::int64_t> sorted(claim_counts.begin(), claim_counts.end());
  std::sort(sorted.begin(), sorted.end());
  const std::size_t n = sorted.size();
  Rational k = n % 2 == 1 ? Rational(sorted[n / 2])
                          : Rational(mp::cpp_int(sorted[n / 2 - 1]) + sorted[n / 2], 2);
  if (k <= 0) {
    throw ScoringError("no factual claims in domain (median claim count is 0)");
  }
  return k;
}

ResponseScore score_response(std::int64_t claim_count, std::int64_t supported_count,
                             const Rational& k) {
  if (claim_count < 0 || supported_count < 0) {
    throw ScoringError("claim counts must be non-negative");
  }
  if (supported_count > claim_count) {
    throw ScoringError(fmt::format("supported count {} exceeds claim count {}", supported_count,
                                   claim_count));
  }
  if (k <= 0) throw ScoringError("K must be positive");

  ResponseScore s;
  s.claim_count = claim_count;
  s.supported_count = supported_count;
  if (supported_count == 0) return s;  // P, R, F1 all 0
  s.precision = Rational(supported_count, claim_count);
  s.recall = std::min(Rational(supported_count) / k, Rational(1));
  s.f1_at_k = 2 * s.precision * s.recall / (s.precision + s.recall);
  return s;
}

DomainScorecard score_domain(std::string domain, std::span<const ResponseClaims> responses,
                             const std::map<std::string, BinaryLabel>& labels,
                             std::optional<Rational> k_override) {
  DomainScorecard card;
  card.domain = std::move(domain);

  std::vector<const ResponseClaims*> ordered;
  ordered.reserve(responses.size());
  for (const auto& r : responses) ordered.push_back(&r);
  std::sort(ordered.begin(), ordered.end(),
            [](const auto* a, const auto* b) { return a->response_id < b->response_id; });

  std::vector<std::int64_t> counts;
  counts.reserve(ordered.size());
  for (const auto* r : ordered) counts.push_back(static_cast<std::int64_t>(r->claim_ids.size()));
  card.k = compute_k(counts, k_override);

  Rational f1_sum, ratio_sum, p_sum, r_sum, sentence_sum;
  for (const auto* r : ordered) {
    std::int64_t supported = 0;
    for (const auto& id : r->claim_ids) {
      const auto it = labels.find(id);
      if (it == labels.end()) {
        throw ScoringError(fmt::format("claim '{}' has no verification label", id));
      }
      if (it->second == BinaryLabel::Supported) ++supported;
    }
    auto score = score_response(static_cast<std::int64_t>(r->claim_ids.size()), supported, card.k);
    score.response_id = r->response_id;
    f1_sum += score.f1_at_k;
    p_sum += score.precision;
    r_sum += score.recall;
    sentence_sum += r->sentence_count;
    if (r->sentence_count > 0) {
      ratio_sum += Rational(static_cast<std::int64_t>(r->claim_ids.size()), r->sentence_count);
    }
    card.response_scores.push_back(std::move(score));
  }
  if (!ordered.empty()) {
    const Rational n(static_cast<std::int64_t>(ordered.size()));
    card.veriscore = f1_sum / n;
    card.ver_ratio = ratio_sum / n;
    card.mean_precision = p_sum / n;
    card.mean_recall = r_sum / n;
    card.mean_sentences = sentence_sum / n;
  }
  return card;
}

void to_json(json& j, const ResponseScore& s) {
  j = json{{"response_id", s.response_id},
           {"claim_count", s.claim_count},
           {"supported_count", s.supported_count},
           {"precision", to_double(s.precision)},
           {"recall", to_double(s.recall)},
           {"f1_at_k", to_double(s.f1_at_k)},
           {"f1_at_k_exact", to_string(s.f1_at_k)}};
}

std::string format_fixed(const Rational& value, int decimals) {
  // Round half away from zero on the exact value.
  mp::cpp_int scale = 1;
  for (int i = 0; i < decimals; ++i) scale *= 10;
  const Rational scaled = value * Rational(scale);
  const bool negative = scaled < 0;
  const Rational magnitude = negative ? Rational(-scaled) : scaled;
  const mp::cpp_int num = mp::numerator(magnitude);
  const mp::cpp_int den = mp::denominator(magnitude);
  mp::cpp_int q = num / den;
  if ((num % den) * 2 >= den) q += 1;
  std::string digits = q.str();
  if (decimals > 0) {
    if (digits.size() <= static_cast<std::size_t>(decimals)) {
      digits.insert(0, static_cast<std::size_t>(decimals) + 1 - digits.size(), '0');
    }
    digits.insert(digits.size() - static_cast<std::size_t>(decimals), ".");
  }
  return (negative && q != 0 ? "-" : "") + digits;
}

std::string scorecard_csv_header() { return "domain,K,L,P,R,F,VerRatio,N"; }

std::string scorecard_csv_row(const DomainScorecard& card) {
  return fmt::format("{},{},{},{},{},{},{},{}", card.domain, format_fixed(card.k, 1),
                     format_fixed(card.mean_sentences, 2), format_fixed(card.mean_precision, 4),
                     format_fixed(card.mean_recall, 4), format_fixed(card.veriscore, 4),
                     format_fixed(card.ver_ratio, 4), card.size());
}

std::string render_scorecard_table(std::span<const DomainScorecard> cards) {
  std::size_t width = 6;
  for (const auto& c : cards) width = std::max(width, c.domain.size());
  std::string out = fmt::format("{:<{}}  {:>6}  {:>6}  {:>6}  {:>6}  {:>6}  {:>8}  {:>4}\n",
                                "Domain", width, "K", "L", "P", "R", "F", "VerRatio", "N");
  for (const auto& c : cards) {
    out += fmt::format("{:<{}}  {:>6}  {:>6}  {:>6}  {:>6}  {:>6}  {:>8}  {:>4}\n", c.domain,
                       width, format_fixed(c.k, 1), format_fixed(c.mean_sentences, 2),
                       format_fixed(c.mean_precision * 100, 1),
                       format_fixed(c.mean_recall * 100, 1), format_fixed(c.veriscore * 100, 1),
                       format_fixed(c.ver_ratio, 2), c.size());
  }
  return out;
}

}  // namespace verifact
