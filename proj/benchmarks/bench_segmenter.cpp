#include <benchmark/benchmark.h>

#include <string>

#include "verifact/segmenter.hpp"

using namespace verifact;

namespace {

std::string essay(int paragraphs) {
  std::string out;
  for (int p = 0; p < paragraphs; ++p) {
    if (p) out += "\n\n";
    out += "The U.S. Senate met in 1789. Dr. Smith said \"it was cold.\" Members argued, e.g. "
           "about tariffs. Was it useful? Yes! The session ended in March.\n"
           "- first point\n- second point";
  }
  return out;
}

void BM_Segment(benchmark::State& state) {
  const auto text = essay(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(segment(text));
  state.SetBytesProcessed(static_cast<std::int64_t>(state.iterations() * text.size()));
}
BENCHMARK(BM_Segment)->Arg(1)->Arg(16)->Arg(256);

void BM_BuildWindows(benchmark::State& state) {
  Response r;
  r.prompt_id = "p";
  r.model_id = "m";
  r.text = essay(static_cast<int>(state.range(0)));
  const auto seg = segment(r.text);
  r.sentences = seg.sentences;
  r.paragraphs = seg.paragraphs;
  const Prompt prompt{"p", "d", PromptKind::NonQA, "Write about the Senate."};
  for (auto _ : state) {
    for (const auto& w : build_windows(r, prompt)) benchmark::DoNotOptimize(render_window(w));
  }
}
BENCHMARK(BM_BuildWindows)->Arg(16)->Arg(256);

}  // namespace
