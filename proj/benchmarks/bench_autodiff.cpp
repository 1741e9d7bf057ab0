// SPDX-License-Identifier: Apache-2.0
#include <benchmark/benchmark.h>

#include "slra/autodiff.hpp"
#include "slra/lora.hpp"
#include "slra/rng.hpp"

using namespace slra;

namespace {

Matrix random_matrix(std::size_t rows, std::size_t cols, Rng& rng) {
    Matrix m(rows, cols);
    for (std::size_t i = 0; i < m.size(); ++i) m.data()[i] = rng.gaussian(0.0, 1.0);
    return m;
}

void BM_MatmulForward(benchmark::State& state) {
    std::size_t n = static_cast<std::size_t>(state.range(0));
    Rng rng(1);
    Matrix a = random_matrix(n, n, rng);
    Matrix b = random_matrix(n, 1, rng);
    for (auto _ : state) {
        benchmark::DoNotOptimize(matmul(a, b));
    }
}
BENCHMARK(BM_MatmulForward)->Arg(16)->Arg(64)->Arg(256);

void BM_GraphForwardBackward(benchmark::State& state) {
    std::size_t n = static_cast<std::size_t>(state.range(0));
    Rng rng(2);
    Matrix w_value = random_matrix(n, n, rng);
    Matrix x_value = random_matrix(n, 1, rng);
    for (auto _ : state) {
        Tape tape;
        NodePtr w = tape.leaf(w_value, true);
        NodePtr x = tape.leaf(x_value, false);
        NodePtr loss = tape.sum(tape.relu(tape.matmul(w, x)));
        tape.backward(loss);
        benchmark::DoNotOptimize(w->grad);
    }
}
BENCHMARK(BM_GraphForwardBackward)->Arg(16)->Arg(64)->Arg(256);

void BM_LoraForwardLowRank(benchmark::State& state) {
    std::size_t d = static_cast<std::size_t>(state.range(0));
    Rng rng(3);
    AdaptedLinear layer;
    layer.W0 = random_matrix(d, d, rng);
    layer.bias = random_matrix(d, 1, rng);
    layer.adapter = init_adapter(d, d, 16, 4);
    layer.adapter->B = random_matrix(d, 16, rng);
    Matrix x = random_matrix(d, 1, rng);
    for (auto _ : state) {
        benchmark::DoNotOptimize(lora_forward(layer, x));
    }
}
BENCHMARK(BM_LoraForwardLowRank)->Arg(64)->Arg(256)->Arg(512);

// The dense route materializes BA; the low-rank route above should win
// at large d.
void BM_LoraForwardDenseMerge(benchmark::State& state) {
    std::size_t d = static_cast<std::size_t>(state.range(0));
    Rng rng(3);
    AdaptedLinear layer;
    layer.W0 = random_matrix(d, d, rng);
    layer.bias = random_matrix(d, 1, rng);
    layer.adapter = init_adapter(d, d, 16, 4);
    layer.adapter->B = random_matrix(d, 16, rng);
    Matrix x = random_matrix(d, 1, rng);
    for (auto _ : state) {
        AdaptedLinear merged = merge(layer);
        benchmark::DoNotOptimize(lora_forward(merged, x));
    }
}
BENCHMARK(BM_LoraForwardDenseMerge)->Arg(64)->Arg(256)->Arg(512);

} // namespace

BENCHMARK_MAIN();
