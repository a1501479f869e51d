#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "verifact/corpus.hpp"

namespace verifact {

inline constexpr std::string_view kFocusStart = "<SOS>";
inline constexpr std::string_view kFocusEnd = "<EOS>";

struct Segmentation {
  std::vector<Span> sentences;
  std::vector<ParagraphRange> paragraphs;
};

/// Rule-based English segmentation.
///
/// Paragraphs are separated by blank lines. A line starting with a list marker
/// ("-", "*", "N." or "N)" followed by whitespace) is one sentence on its own.
/// Other lines of a paragraph are joined and split after '.', '!' or '?'
/// (plus any closing quotes/brackets) when followed by whitespace and a token
/// that does not start with a lower-case letter. Known abbreviations such as
/// "Dr." or "e.g." never end a sentence. Spans are trimmed of whitespace.
Segmentation segment(std::string_view text);

/// Input unit for claim extraction: the focus sentence plus up to three
/// preceding and one following sentence of the same paragraph, and an
/// optional anchor (the question for QA prompts, the paragraph's first
/// sentence for long NonQA paragraphs).
struct SentenceWindow {
  std::size_t sentence_index = 0;
  std::optional<std::string> anchor;
  std::vector<std::string> left_context;
  std::string focus;
  std::optional<std::string> right_context;

  friend bool operator==(const SentenceWindow&, const SentenceWindow&) = default;
};

inline constexpr std::size_t kMaxLeftContext = 3;
/// NonQA paragraphs longer than this get their first sentence as anchor.
inline constexpr std::size_t kAnchorParagraphThreshold = 5;

/// One window per sentence of `response`, in sentence order.
std::vector<SentenceWindow> build_windows(const Response& response, const Prompt& prompt);

/// "<anchor> <left...> <SOS>focus<EOS> <right>" joined by single spaces.
std::string render_window(const SentenceWindow& window);

}  // namespace verifact
