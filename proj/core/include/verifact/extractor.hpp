#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "verifact/chat_backend.hpp"
#include "verifact/corpus.hpp"

namespace verifact {

/// The exact string a backend must emit when a sentence has nothing to check.
inline constexpr std::string_view kNoVerifiableClaim = "No verifiable claim.";

/// Fills the QA or NonQA few-shot template with a rendered window and its
/// focus sentence. The result always ends with "Facts:".
std::string assemble_extraction_prompt(std::string_view window_render, std::string_view focus,
                                       PromptKind kind);

struct ParsedClaims {
  std::vector<std::string> claims;
  bool is_no_claim = false;
  /// Non-empty lines that were neither bullets nor the no-claim sentinel.
  std::size_t ignored_lines = 0;

  /// Neither claims nor the sentinel were found.
  bool unparseable() const noexcept { return claims.empty() && !is_no_claim; }
};

/// Parses a backend reply. Lines starting with "- " (after trimming) become
/// claims; a line equal to "No verifiable claim" (trailing period optional,
/// any case) marks the window as claim-free. If both appear, the bullets win.
/// Focus markers are stripped from claim text.
ParsedClaims parse_claim_lines(std::string_view raw);

struct ExtractionResult {
  std::size_t window_index = 0;
  std::string raw_output;
  std::vector<std::string> claims;
  bool is_no_claim = false;
  bool parse_failed = false;
};

struct ExtractionOptions {
  GenerationParams params{};
  std::size_t concurrency = 8;
};

/// Exact-text dedup, first occurrence wins. Order and ids are preserved.
std::vector<Claim> deduplicate_claims(std::vector<Claim> claims);

struct ResponseExtraction {
  std::vector<ExtractionResult> windows;
  std::vector<Claim> claims;
};

/// Extracts claims from several responses, dispatching every window of every
/// response through one bounded executor. `prompts` maps prompt id → prompt.
/// Claim ids are "<response_id>#<n>" numbered after dedup.
std::vector<ResponseExtraction> extract_claims_batch(
    std::span<const Response> responses, const std::map<std::string, Prompt>& prompts,
    ChatBackend& backend, const ExtractionOptions& options = {});

std::vector<Claim> extract_claims(const Response& response, const Prompt& prompt,
                                  ChatBackend& backend, const ExtractionOptions& options = {});

/// Number of backend calls extract_claims would issue (one per sentence).
std::size_t count_extraction_calls(std::span<const Response> responses);

}  // namespace verifact
