#pragma once

#include <nlohmann/json.hpp>

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "verifact/chat_backend.hpp"
#include "verifact/corpus.hpp"
#include "verifact/retriever.hpp"

namespace verifact {

enum class TernaryLabel { Supported, Contradicted, Inconclusive };
enum class BinaryLabel { Supported, Unsupported };

/// Outcome of the part/evidence label algebra. InconclusiveA: some part is
/// neither supported nor contradicted by any evidence. InconclusiveB: some
/// part is both supported and contradicted by different evidence.
enum class AlgebraLabel { Supported, Contradicted, InconclusiveA, InconclusiveB };

/// How one evidence item bears on one claim part.
enum class Judgment : std::uint8_t { Neither, Supports, Contradicts };

enum class LabelMode { Binary, Ternary };
enum class FieldOrder { Standard, ClaudeReordered };

std::string_view to_string(TernaryLabel label);
std::string_view to_string(BinaryLabel label);
std::string_view to_string(AlgebraLabel label);
std::string_view to_string(LabelMode mode);
std::string_view to_string(FieldOrder order);
TernaryLabel parse_ternary_label(std::string_view text);
BinaryLabel parse_binary_label(std::string_view text);
LabelMode parse_label_mode(std::string_view text);
FieldOrder parse_field_order(std::string_view text);

/// |parts| x |evidence| grid of judgments, all Neither initially.
class PartJudgmentMatrix {
 public:
  PartJudgmentMatrix(std::vector<std::string> parts, std::size_t evidence_count);

  std::size_t part_count() const noexcept { return parts_.size(); }
  std::size_t evidence_count() const noexcept { return evidence_count_; }
  const std::vector<std::string>& parts() const noexcept { return parts_; }

  Judgment at(std::size_t part, std::size_t evidence) const;
  void set(std::size_t part, std::size_t evidence, Judgment j);

  /// ∃e: support(e, part)
  bool supported(std::size_t part) const;
  /// ∃e: contradict(e, part)
  bool contradicted(std::size_t part) const;

 private:
  std::vector<std::string> parts_;
  std::size_t evidence_count_;
  std::vector<Judgment> cells_;
};

/// Supported iff every part has a supporting and no contradicting evidence.
/// Otherwise the first of Contradicted, InconclusiveB, InconclusiveA whose
/// predicate holds for some part.
AlgebraLabel classify_by_algebra(const PartJudgmentMatrix& matrix);

BinaryLabel collapse(AlgebraLabel label);
BinaryLabel collapse(TernaryLabel label);
TernaryLabel to_ternary(AlgebraLabel label);

std::string assemble_verification_prompt(std::string_view claim, std::string_view evidence_render,
                                         LabelMode mode, FieldOrder order);

/// A label as it appears between ### markers.
enum class Decision { Supported, Unsupported, Contradicted, Inconclusive };

std::string_view to_string(Decision d);

/// Takes the last ###...### span, trims whitespace and punctuation, and
/// matches it case-insensitively against the labels of `mode`.
std::optional<Decision> parse_decision(std::string_view raw, LabelMode mode);

struct VerificationRecord {
  std::string claim_id;
  std::optional<TernaryLabel> ternary;
  BinaryLabel binary = BinaryLabel::Unsupported;
  std::string raw_output;
  std::string verifier_id;
  bool parse_failure = false;

  friend bool operator==(const VerificationRecord&, const VerificationRecord&) = default;
};

void to_json(nlohmann::json& j, const VerificationRecord& r);
void from_json(const nlohmann::json& j, VerificationRecord& r);

struct VerifyOptions {
  LabelMode label_mode = LabelMode::Binary;
  FieldOrder field_order = FieldOrder::Standard;
  GenerationParams params{0.0, 1024};
  std::size_t concurrency = 8;
};

VerificationRecord verify_claim(const Claim& claim, const EvidenceList& evidence,
                                ChatBackend& backend, const VerifyOptions& options = {});

/// Verifies claims[i] against evidence[i] under bounded parallelism.
std::vector<VerificationRecord> verify_batch(std::span<const Claim> claims,
                                             std::span<const EvidenceList> evidence,
                                             ChatBackend& backend,
                                             const VerifyOptions& options = {});

/// Builds a verification record from an externally supplied judgment matrix.
VerificationRecord verify_by_algebra(std::string claim_id, const PartJudgmentMatrix& matrix);

}  // namespace verifact
