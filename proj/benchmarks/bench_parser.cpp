// SPDX-License-Identifier: Apache-2.0
#include <benchmark/benchmark.h>

#include "slra/categories.hpp"
#include "slra/parser.hpp"
#include "slra/prompt.hpp"

using namespace slra;

namespace {

void BM_StrictParse(benchmark::State& state) {
    std::string transcript = fill_person_template(
        "The person shows raised eyebrows, wide-open eyes, and a faint smile across "
        "several frames of the clip.",
        "Happily Surprised");
    for (auto _ : state) {
        benchmark::DoNotOptimize(parse(transcript, challenge_emotions()));
    }
}
BENCHMARK(BM_StrictParse);

void BM_LenientScan(benchmark::State& state) {
    std::string transcript =
        "The subject first reads as Angrily Surprised, then settles; overall this clip "
        "is best described as sadly fearful given the tension around the eyes.";
    for (auto _ : state) {
        benchmark::DoNotOptimize(parse_lenient(transcript, challenge_emotions()));
    }
}
BENCHMARK(BM_LenientScan);

void BM_BuildPrompt(benchmark::State& state) {
    PromptSpec spec = make_prompt_spec(compound_emotions());
    for (auto _ : state) {
        benchmark::DoNotOptimize(build_prompt(spec));
    }
}
BENCHMARK(BM_BuildPrompt);

} // namespace
