// SPDX-License-Identifier: Apache-2.0
#include <benchmark/benchmark.h>

#include "slra/checkpoint.hpp"
#include "slra/dataset.hpp"
#include "slra/model.hpp"
#include "slra/train.hpp"

using namespace slra;

namespace {

void BM_StageEpoch(benchmark::State& state) {
    SynthSpec spec = SynthSpec::defaults(17);
    spec.examples_per_class = static_cast<std::size_t>(state.range(0));
    auto [basic, compound] = generate(spec);
    StageConfig config = stage1_defaults(basic.header.labels, 18);
    config.epochs = 1;
    auto data = index_examples(basic.split_records(Split::Train), config.label_set);

    for (auto _ : state) {
        state.PauseTiming();
        ClassifierNet net = make_net(spec.d_in, basic.header.labels, 19);
        install_adapters(net, config.rank, 20);
        state.ResumeTiming();
        run_stage(net, config, data);
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(data.size()));
}
BENCHMARK(BM_StageEpoch)->Arg(25)->Arg(100)->Unit(benchmark::kMillisecond);

void BM_CheckpointSerialize(benchmark::State& state) {
    Checkpoint cp;
    cp.stage_id = 1;
    cp.net = make_net(16, SynthSpec::defaults(0).basic_labels, 21);
    install_adapters(cp.net, 16, 22);
    for (auto _ : state) {
        std::string bytes = checkpoint_to_bytes(cp);
        benchmark::DoNotOptimize(checkpoint_from_bytes(bytes));
    }
}
BENCHMARK(BM_CheckpointSerialize);

} // namespace
