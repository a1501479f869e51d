#include "verifact/extractor.hpp"

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include <algorithm>
#include <cctype>
#include <unordered_set>

#include "prompt_templates.hpp"
#include "verifact/errors.hpp"
#include "verifact/executor.hpp"
#include "verifact/segmenter.hpp"

namespace verifact {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

bool is_no_claim_line(std::string_view line) {
  constexpr std::string_view kBare = "no verifiable claim";
  if (!line.empty() && line.back() == '.') line.remove_suffix(1);
  if (line.size() != kBare.size()) return false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (std::tolower(static_cast<unsigned char>(line[i])) != kBare[i]) return false;
  }
  return true;
}

std::string strip_markers(std::string_view text) {
  std::string out(text);
  for (const auto marker : {kFocusStart, kFocusEnd}) {
    for (auto pos = out.find(marker); pos != std::string::npos; pos = out.find(marker, pos)) {
      out.erase(pos, marker.size());
    }
  }
  return std::string(trim(out));
}

}  // namespace

std::string assemble_extraction_prompt(std::string_view window_render, std::string_view focus,
                                       PromptKind kind) {
  const std::string_view head =
      kind == PromptKind::QA ? templates::kQaHead : templates::kNonQaHead;
  std::string out;
  out.reserve(head.size() + window_render.size() + focus.size() + 64);
  out.append(head)
      .append(window_render)
      .append(templates::kFocusLine)
      .append(focus)
      .append(templates::kFactsTail);
  return out;
}

ParsedClaims parse_claim_lines(std::string_view raw) {
  ParsedClaims parsed;
  bool saw_sentinel = false;
  std::size_t pos = 0;
  while (pos <= raw.size()) {
    const auto nl = raw.find('\n', pos);
    const auto end = nl == std::string_view::npos ? raw.size() : nl;
    const std::string_view line = trim(raw.substr(pos, end - pos));
    pos = end + 1;
    if (!line.empty()) {
      if (line.starts_with("- ")) {
        std::string claim = strip_markers(line.substr(2));
        if (!claim.empty()) parsed.claims.push_back(std::move(claim));
      } else if (is_no_claim_line(line)) {
        saw_sentinel = true;
      } else {
        ++parsed.ignored_lines;
      }
    }
    if (nl == std::string_view::npos) break;
  }
  parsed.is_no_claim = saw_sentinel && parsed.claims.empty();
  return parsed;
}

std::vector<Claim> deduplicate_claims(std::vector<Claim> claims) {
  std::unordered_set<std::string> seen;
  std::vector<Claim> out;
  out.reserve(claims.size());
  for (auto& c : claims) {
    if (seen.insert(c.text).second) out.push_back(std::move(c));
  }
  return out;
}

std::size_t count_extraction_calls(std::span<const Response> responses) {
  std::size_t n = 0;
  for (const auto& r : responses) n += r.sentence_count();
  return n;
}

std::vector<ResponseExtraction> extract_claims_batch(std::span<const Response> responses,
                                                     const std::map<std::string, Prompt>& prompts,
                                                     ChatBackend& backend,
                                                     const ExtractionOptions& options) {
  struct Job {
    std::size_t response;
    std::size_t window;
    std::string prompt;
  };
  std::vector<std::vector<SentenceWindow>> windows(responses.size());
  std::vector<Job> jobs;
  for (std::size_t r = 0; r < responses.size(); ++r) {
    const auto it = prompts.find(responses[r].prompt_id);
    if (it == prompts.end()) {
      throw FormatError(fmt::format("response '{}' references unknown prompt '{}'",
                                    responses[r].id(), responses[r].prompt_id));
    }
    windows[r] = build_windows(responses[r], it->second);
    for (std::size_t w = 0; w < windows[r].size(); ++w) {
      const auto& win = windows[r][w];
      jobs.push_back({r, w,
                      assemble_extraction_prompt(render_window(win), win.focus,
                                                 it->second.kind)});
    }
  }

  const auto outputs = parallel_map(
      std::span<const Job>(jobs), options.concurrency,
      [&](const Job& job, std::size_t) -> std::string {
        try {
          return backend.complete(job.prompt, options.params);
        } catch (const BackendError& e) {
          throw StageError(fmt::format("extraction failed for response '{}' window {}: {}",
                                       responses[job.response].id(), job.window, e.what()));
        }
      });

  std::vector<ResponseExtraction> results(responses.size());
  for (std::size_t j = 0; j < jobs.size(); ++j) {
    const Job& job = jobs[j];
    const auto& win = windows[job.response][job.window];
    auto parsed = parse_claim_lines(outputs[j]);
    ExtractionResult er;
    er.window_index = job.window;
    er.raw_output = outputs[j];
    er.is_no_claim = parsed.is_no_claim;
    er.parse_failed = parsed.unparseable();
    if (er.parse_failed) {
      spdlog::warn("unparseable extraction output for response '{}' window {}",
                   responses[job.response].id(), job.window);
    }
    auto& target = results[job.response];
    for (auto& text : parsed.claims) {
      target.claims.push_back(
          Claim{"", responses[job.response].id(), win.sentence_index, text});
    }
    er.claims = std::move(parsed.claims);
    target.windows.push_back(std::move(er));
  }

  for (std::size_t r = 0; r < responses.size(); ++r) {
    auto& claims = results[r].claims;
    claims = deduplicate_claims(std::move(claims));
    for (std::size_t i = 0; i < claims.size(); ++i) {
      claims[i].id = fmt::format("{}#{}", responses[r].id(), i);
    }
  }
  return results;
}

std::vector<Claim> extract_claims(const Response& response, const Prompt& prompt,
                                  ChatBackend& backend, const ExtractionOptions& options) {
  const std::map<std::string, Prompt> prompts{{response.prompt_id, prompt}};
  auto results =
      extract_claims_batch(std::span<const Response>(&response, 1), prompts, backend, options);
  return std::move(results.front().claims);
}

}  // namespace verifact
