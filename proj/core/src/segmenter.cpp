#include "verifact/segmenter.hpp"

#include <algorithm>
#include <array>
#include <cctype>

namespace verifact {

namespace {

bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }
bool is_lower(char c) { return c >= 'a' && c <= 'z'; }

// Lower-cased tokens (including the final period) that never end a sentence.
constexpr std::array<std::string_view, 40> kAbbreviations = {
    "mr.",   "mrs.",  "ms.",   "dr.",    "prof.", "sr.",   "jr.",   "st.",
    "mt.",   "ft.",   "vs.",   "v.",     "e.g.",  "i.e.",  "cf.",   "al.",
    "u.s.",  "u.k.",  "u.n.",  "a.m.",   "p.m.",  "inc.",  "ltd.",  "co.",
    "corp.", "gen.",  "gov.",  "sen.",   "rep.",  "rev.",  "jan.",  "feb.",
    "aug.",  "sept.", "oct.",  "nov.",   "dec.",  "approx.", "fig.", "ca.",
};

bool is_abbreviation(std::string_view text, std::size_t block_begin, std::size_t period) {
  std::size_t start = period;
  while (start > block_begin && !is_space(text[start - 1])) --start;
  while (start < period && (text[start] == '(' || text[start] == '"' ||
                            text[start] == '\'' || text[start] == '[')) {
    ++start;
  }
  std::string token(text.substr(start, period - start + 1));
  std::transform(token.begin(), token.end(), token.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return std::find(kAbbreviations.begin(), kAbbreviations.end(), token) !=
         kAbbreviations.end();
}

// Length of a closing quote/bracket at `pos` (UTF-8 aware for ” and ’), or 0.
std::size_t closer_length(std::string_view text, std::size_t pos) {
  const char c = text[pos];
  if (c == '"' || c == '\'' || c == ')' || c == ']') return 1;
  if (pos + 2 < text.size() && static_cast<unsigned char>(c) == 0xE2 &&
      static_cast<unsigned char>(text[pos + 1]) == 0x80) {
    const auto third = static_cast<unsigned char>(text[pos + 2]);
    if (third == 0x9D || third == 0x99) return 3;
  }
  return 0;
}

bool is_list_item(std::string_view line) {
  std::size_t i = 0;
  while (i < line.size() && is_space(line[i])) ++i;
  if (i >= line.size()) return false;
  if (line[i] == '-' || line[i] == '*') {
    return i + 1 < line.size() && is_space(line[i + 1]);
  }
  std::size_t digits = 0;
  while (i < line.size() && std::isdigit(static_cast<unsigned char>(line[i]))) {
    ++i;
    ++digits;
  }
  if (digits == 0 || i >= line.size() || (line[i] != '.' && line[i] != ')')) return false;
  return i + 1 < line.size() && is_space(line[i + 1]);
}

void push_trimmed(std::string_view text, std::size_t begin, std::size_t end,
                  std::vector<Span>& out) {
  while (begin < end && is_space(text[begin])) ++begin;
  while (end > begin && is_space(text[end - 1])) --end;
  if (begin < end) out.push_back({begin, end});
}

void split_prose(std::string_view text, std::size_t begin, std::size_t end,
                 std::vector<Span>& out) {
  std::size_t sentence_start = begin;
  std::size_t i = begin;
  while (i < end) {
    const char c = text[i];
    if (c != '.' && c != '!' && c != '?') {
      ++i;
      continue;
    }
    std::size_t j = i + 1;
    while (j < end && (text[j] == '.' || text[j] == '!' || text[j] == '?')) ++j;
    while (j < end) {
      const std::size_t n = closer_length(text, j);
      if (n == 0 || j + n > end) break;
      j += n;
    }
    bool boundary = false;
    if (j >= end) {
      boundary = true;
    } else if (is_space(text[j])) {
      std::size_t k = j;
      while (k < end && is_space(text[k])) ++k;
      boundary = k >= end || !is_lower(text[k]);
    }
    if (boundary && c == '.' && j == i + 1 && is_abbreviation(text, sentence_start, i)) {
      boundary = false;
    }
    if (boundary) {
      push_trimmed(text, sentence_start, j, out);
      sentence_start = j;
    }
    i = j;
  }
  push_trimmed(text, sentence_start, end, out);
}

}  // namespace

Segmentation segment(std::string_view text) {
  Segmentation seg;
  std::size_t prose_begin = 0;
  bool in_prose = false;
  bool in_paragraph = false;
  std::size_t paragraph_first = 0;

  auto flush_prose = [&](std::size_t end) {
    if (in_prose) split_prose(text, prose_begin, end, seg.sentences);
    in_prose = false;
  };
  auto close_paragraph = [&](std::size_t end) {
    flush_prose(end);
    if (in_paragraph && seg.sentences.size() > paragraph_first) {
      seg.paragraphs.push_back({paragraph_first, seg.sentences.size()});
    }
    in_paragraph = false;
  };

  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t nl = text.find('\n', pos);
    const std::size_t line_end = nl == std::string_view::npos ? text.size() : nl;
    const std::string_view line = text.substr(pos, line_end - pos);
    const bool blank = std::all_of(line.begin(), line.end(), is_space);
    if (blank) {
      close_paragraph(pos);
    } else {
      if (!in_paragraph) {
        in_paragraph = true;
        paragraph_first = seg.sentences.size();
      }
      if (is_list_item(line)) {
        flush_prose(pos);
        push_trimmed(text, pos, line_end, seg.sentences);
      } else if (!in_prose) {
        in_prose = true;
        prose_begin = pos;
      }
    }
    if (nl == std::string_view::npos) {
      pos = text.size();
    } else {
      pos = nl + 1;
    }
  }
  close_paragraph(text.size());
  return seg;
}

std::vector<SentenceWindow> build_windows(const Response& response, const Prompt& prompt) {
  std::vector<SentenceWindow> windows;
  windows.reserve(response.sentence_count());
  for (const auto& paragraph : response.paragraphs) {
    for (std::size_t s = paragraph.first; s < paragraph.last; ++s) {
      SentenceWindow w;
      w.sentence_index = s;
      w.focus = response.sentence(s);
      const std::size_t left_begin =
          std::max(paragraph.first, s >= kMaxLeftContext ? s - kMaxLeftContext : 0);
      for (std::size_t l = left_begin; l < s; ++l) w.left_context.push_back(response.sentence(l));
      if (s + 1 < paragraph.last) w.right_context = response.sentence(s + 1);

      if (prompt.kind == PromptKind::QA) {
        w.anchor = prompt.text;
      } else if (paragraph.size() > kAnchorParagraphThreshold && s != paragraph.first) {
        w.anchor = response.sentence(paragraph.first);
      }
      windows.push_back(std::move(w));
    }
  }
  return windows;
}

std::string render_window(const SentenceWindow& window) {
  std::string out;
  auto append = [&out](std::string_view piece) {
    if (piece.empty()) return;
    if (!out.empty()) out.push_back(' ');
    out.append(piece);
  };
  if (window.anchor) append(*window.anchor);
  for (const auto& s : window.left_context) append(s);
  std::string focus;
  focus.reserve(window.focus.size() + kFocusStart.size() + kFocusEnd.size());
  focus.append(kFocusStart).append(window.focus).append(kFocusEnd);
  append(focus);
  if (window.right_context) append(*window.right_context);
  return out;
}

}  // namespace verifact
