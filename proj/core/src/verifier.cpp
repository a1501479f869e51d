#include "verifact/verifier.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cctype>

#include "prompt_templates.hpp"
#include "verifact/errors.hpp"
#include "verifact/executor.hpp"

namespace verifact {

using nlohmann::json;

namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

}  // namespace

std::string_view to_string(TernaryLabel label) {
  switch (label) {
    case TernaryLabel::Supported: return "supported";
    case TernaryLabel::Contradicted: return "contradicted";
    case TernaryLabel::Inconclusive: return "inconclusive";
  }
  return "unknown";
}

std::string_view to_string(BinaryLabel label) {
  return label == BinaryLabel::Supported ? "supported" : "unsupported";
}

std::string_view to_string(AlgebraLabel label) {
  switch (label) {
    case AlgebraLabel::Supported: return "supported";
    case AlgebraLabel::Contradicted: return "contradicted";
    case AlgebraLabel::InconclusiveA: return "inconclusive_a";
    case AlgebraLabel::InconclusiveB: return "inconclusive_b";
  }
  return "unknown";
}

std::string_view to_string(LabelMode mode) {
  return mode == LabelMode::Binary ? "binary" : "ternary";
}

std::string_view to_string(FieldOrder order) {
  return order == FieldOrder::Standard ? "standard" : "claude";
}

std::string_view to_string(Decision d) {
  switch (d) {
    case Decision::Supported: return "Supported";
    case Decision::Unsupported: return "Unsupported";
    case Decision::Contradicted: return "Contradicted";
    case Decision::Inconclusive: return "Inconclusive";
  }
  return "unknown";
}

TernaryLabel parse_ternary_label(std::string_view text) {
  const auto l = lower(text);
  if (l == "supported") return TernaryLabel::Supported;
  if (l == "contradicted") return TernaryLabel::Contradicted;
  if (l == "inconclusive") return TernaryLabel::Inconclusive;
  throw FormatError(fmt::format("unknown ternary label '{}'", text));
}

BinaryLabel parse_binary_label(std::string_view text) {
  const auto l = lower(text);
  if (l == "supported") return BinaryLabel::Supported;
  if (l == "unsupported") return BinaryLabel::Unsupported;
  throw FormatError(fmt::format("unknown binary label '{}'", text));
}

LabelMode parse_label_mode(std::string_view text) {
  const auto l = lower(text);
  if (l == "binary") return LabelMode::Binary;
  if (l == "ternary") return LabelMode::Ternary;
  throw ConfigError(fmt::format("unknown label mode '{}' (expected binary or ternary)", text));
}

FieldOrder parse_field_order(std::string_view text) {
  const auto l = lower(text);
  if (l == "standard") return FieldOrder::Standard;
  if (l == "claude" || l == "claude-reordered") return FieldOrder::ClaudeReordered;
  throw ConfigError(fmt::format("unknown field order '{}' (expected standard or claude)", text));
}

PartJudgmentMatrix::PartJudgmentMatrix(std::vector<std::string> parts,
                                       std::size_t evidence_count)
    : parts_(std::move(parts)),
      evidence_count_(evidence_count),
      cells_(parts_.size() * evidence_count, Judgment::Neither) {
  if (parts_.empty()) throw FormatError("a claim needs at least one part");
}

Judgment PartJudgmentMatrix::at(std::size_t part, std::size_t evidence) const {
  if (part >= parts_.size() || evidence >= evidence_count_) {
    throw std::out_of_range("PartJudgmentMatrix::at");
  }
  return cells_[part * evidence_count_ + evidence];
}

void PartJudgmentMatrix::set(std::size_t part, std::size_t evidence, Judgment j) {
  if (part >= parts_.size() || evidence >= evidence_count_) {
    throw std::out_of_range("PartJudgmentMatrix::set");
  }
  cells_[part * evidence_count_ + evidence] = j;
}

bool PartJudgmentMatrix::supported(std::size_t part) const {
  const auto row = cells_.begin() + static_cast<std::ptrdiff_t>(part * evidence_count_);
  return std::find(row, row + static_cast<std::ptrdiff_t>(evidence_count_),
                   Judgment::Supports) != row + static_cast<std::ptrdiff_t>(evidence_count_);
}

bool PartJudgmentMatrix::contradicted(std::size_t part) const {
  const auto row = cells_.begin() + static_cast<std::ptrdiff_t>(part * evidence_count_);
  return std::find(row, row + static_cast<std::ptrdiff_t>(evidence_count_),
                   Judgment::Contradicts) != row + static_cast<std::ptrdiff_t>(evidence_count_);
}

AlgebraLabel classify_by_algebra(const PartJudgmentMatrix& matrix) {
  bool all_supported = true;
  bool any_contradicted = false;
  bool any_conflicting = false;
  bool any_unjudged = false;
  for (std::size_t p = 0; p < matrix.part_count(); ++p) {
    const bool sup = matrix.supported(p);
    const bool con = matrix.contradicted(p);
    all_supported = all_supported && sup && !con;
    any_contradicted = any_contradicted || (!sup && con);
    any_conflicting = any_conflicting || (sup && con);
    any_unjudged = any_unjudged || (!sup && !con);
  }
  if (all_supported) return AlgebraLabel::Supported;
  if (any_contradicted) return AlgebraLabel::Contradicted;
  if (any_conflicting) return AlgebraLabel::InconclusiveB;
  return AlgebraLabel::InconclusiveA;
}

BinaryLabel collapse(AlgebraLabel label) {
  return label == AlgebraLabel::Supported ? BinaryLabel::Supported : BinaryLabel::Unsupported;
}

BinaryLabel collapse(TernaryLabel label) {
  return label == TernaryLabel::Supported ? BinaryLabel::Supported : BinaryLabel::Unsupported;
}

TernaryLabel to_ternary(AlgebraLabel label) {
  switch (label) {
    case AlgebraLabel::Supported: return TernaryLabel::Supported;
    case AlgebraLabel::Contradicted: return TernaryLabel::Contradicted;
    default: return TernaryLabel::Inconclusive;
  }
}

namespace {

std::string_view without_trailing_newlines(std::string_view s) {
  while (!s.empty() && (s.back() == '\n' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

}  // namespace

std::string assemble_verification_prompt(std::string_view claim, std::string_view evidence_render,
                                         LabelMode mode, FieldOrder order) {
  const bool binary = mode == LabelMode::Binary;
  const std::string_view evidence = without_trailing_newlines(evidence_render);
  std::string out;
  out.append(templates::kVerifyIntro)
      .append(binary ? templates::kBinaryDefinitions : templates::kTernaryDefinitions)
      .append(binary ? templates::kBinaryExamples : templates::kTernaryExamples)
      .append(templates::kTaskHeader);
  if (order == FieldOrder::Standard) {
    out.append("Claim: ").append(claim).append("\n\n");
    out.append(evidence).append("\n\n");
  } else {
    out.append(evidence).append("\n\n");
    out.append("Claim: ").append(claim).append("\n\n");
    out.append(binary ? templates::kBinaryShortTask : templates::kTernaryShortTask)
        .append("\n\n");
  }
  out.append(templates::kDecisionSlot);
  return out;
}

std::optional<Decision> parse_decision(std::string_view raw, LabelMode mode) {
  constexpr std::string_view kMarker = "###";
  // Pair markers left to right; remember the last closed span.
  std::optional<std::string_view> last;
  std::size_t pos = raw.find(kMarker);
  while (pos != std::string_view::npos) {
    const std::size_t open_end = pos + kMarker.size();
    const std::size_t close = raw.find(kMarker, open_end);
    if (close == std::string_view::npos) break;
    last = raw.substr(open_end, close - open_end);
    pos = raw.find(kMarker, close + kMarker.size());
  }
  if (!last) return std::nullopt;

  std::string_view body = *last;
  auto is_trim = [](unsigned char c) { return std::isspace(c) || std::ispunct(c); };
  while (!body.empty() && is_trim(static_cast<unsigned char>(body.front()))) body.remove_prefix(1);
  while (!body.empty() && is_trim(static_cast<unsigned char>(body.back()))) body.remove_suffix(1);
  const std::string label = lower(body);

  if (label == "supported") return Decision::Supported;
  if (mode == LabelMode::Binary) {
    if (label == "unsupported") return Decision::Unsupported;
  } else {
    if (label == "contradicted") return Decision::Contradicted;
    if (label == "inconclusive") return Decision::Inconclusive;
  }
  return std::nullopt;
}

void to_json(json& j, const VerificationRecord& r) {
  j = json{{"claim_id", r.claim_id},
           {"binary", to_string(r.binary)},
           {"raw_output", r.raw_output},
           {"verifier_id", r.verifier_id},
           {"parse_failure", r.parse_failure}};
  j["ternary"] = r.ternary ? json(to_string(*r.ternary)) : json(nullptr);
}

void from_json(const json& j, VerificationRecord& r) {
  j.at("claim_id").get_to(r.claim_id);
  r.binary = parse_binary_label(j.at("binary").get<std::string>());
  j.at("raw_output").get_to(r.raw_output);
  j.at("verifier_id").get_to(r.verifier_id);
  r.parse_failure = j.value("parse_failure", false);
  r.ternary.reset();
  if (const auto it = j.find("ternary"); it != j.end() && !it->is_null()) {
    r.ternary = parse_ternary_label(it->get<std::string>());
  }
  if (r.ternary && collapse(*r.ternary) != r.binary) {
    throw FormatError(fmt::format("verdict for '{}' has ternary '{}' but binary '{}'",
                                  r.claim_id, to_string(*r.ternary), to_string(r.binary)));
  }
}

namespace {

VerificationRecord record_from_output(std::string claim_id, std::string raw, std::string verifier,
                                      LabelMode mode) {
  VerificationRecord rec;
  rec.claim_id = std::move(claim_id);
  rec.verifier_id = std::move(verifier);
  const auto decision = parse_decision(raw, mode);
  rec.raw_output = std::move(raw);
  if (!decision) {
    rec.parse_failure = true;
    rec.binary = BinaryLabel::Unsupported;
    return rec;
  }
  switch (*decision) {
    case Decision::Supported:
      rec.binary = BinaryLabel::Supported;
      if (mode == LabelMode::Ternary) rec.ternary = TernaryLabel::Supported;
      break;
    case Decision::Unsupported:
      rec.binary = BinaryLabel::Unsupported;
      break;
    case Decision::Contradicted:
      rec.ternary = TernaryLabel::Contradicted;
      rec.binary = collapse(*rec.ternary);
      break;
    case Decision::Inconclusive:
      rec.ternary = TernaryLabel::Inconclusive;
      rec.binary = collapse(*rec.ternary);
      break;
  }
  return rec;
}

}  // namespace

VerificationRecord verify_claim(const Claim& claim, const EvidenceList& evidence,
                                ChatBackend& backend, const VerifyOptions& options) {
  auto out = verify_batch(std::span<const Claim>(&claim, 1),
                          std::span<const EvidenceList>(&evidence, 1), backend, options);
  return std::move(out.front());
}

std::vector<VerificationRecord> verify_batch(std::span<const Claim> claims,
                                             std::span<const EvidenceList> evidence,
                                             ChatBackend& backend, const VerifyOptions& options) {
  if (claims.size() != evidence.size()) {
    throw StageError(fmt::format("{} claims but {} evidence lists", claims.size(),
                                 evidence.size()));
  }
  for (std::size_t i = 0; i < claims.size(); ++i) {
    if (claims[i].id != evidence[i].claim_id) {
      throw StageError(fmt::format("evidence for claim '{}' is missing (found '{}')",
                                   claims[i].id, evidence[i].claim_id));
    }
  }
  const std::string verifier = backend.id();
  return parallel_map(claims, options.concurrency,
                      [&](const Claim& c, std::size_t i) -> VerificationRecord {
                        const std::string prompt = assemble_verification_prompt(
                            c.text, render_evidence(evidence[i]), options.label_mode,
                            options.field_order);
                        std::string raw;
                        try {
                          raw = backend.complete(prompt, options.params);
                        } catch (const BackendError& e) {
                          throw StageError(fmt::format("verification failed for claim '{}': {}",
                                                       c.id, e.what()));
                        }
                        return record_from_output(c.id, std::move(raw), verifier,
                                                  options.label_mode);
                      });
}

VerificationRecord verify_by_algebra(std::string claim_id, const PartJudgmentMatrix& matrix) {
  const AlgebraLabel label = classify_by_algebra(matrix);
  VerificationRecord rec;
  rec.claim_id = std::move(claim_id);
  rec.ternary = to_ternary(label);
  rec.binary = collapse(label);
  rec.raw_output = std::string(to_string(label));
  rec.verifier_id = "reference-algebra";
  return rec;
}

}  // namespace verifact
