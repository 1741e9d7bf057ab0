// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "slra/errors.hpp"
#include "slra/lora.hpp"
#include "slra/rng.hpp"

using namespace slra;

namespace {

Matrix random_matrix(std::size_t rows, std::size_t cols, Rng& rng, double stddev = 1.0) {
    Matrix m(rows, cols);
    for (std::size_t i = 0; i < m.size(); ++i) m.data()[i] = rng.gaussian(0.0, stddev);
    return m;
}

AdaptedLinear random_layer(std::size_t d_in, std::size_t d_out, std::uint64_t seed) {
    Rng rng(seed);
    AdaptedLinear layer;
    layer.W0 = random_matrix(d_out, d_in, rng);
    layer.bias = random_matrix(d_out, 1, rng);
    return layer;
}

} // namespace

TEST_CASE("init_adapter: B zero, A gaussian, deterministic per seed") {
    LoraAdapter a1 = init_adapter(8, 4, 3, 77);
    LoraAdapter a2 = init_adapter(8, 4, 3, 77);
    CHECK(a1.A == a2.A);
    CHECK(a1.B == a2.B);
    CHECK(a1.B == Matrix(4, 3));
    CHECK(a1.scale == 1.0);
    CHECK(a1.rank == 3);

    // Fresh adapter means a zero update matrix.
    Matrix delta = scale(matmul(a1.B, a1.A), a1.scale);
    CHECK(delta == Matrix(4, 8));

    LoraAdapter other = init_adapter(8, 4, 3, 78);
    CHECK(!(other.A == a1.A));
}

TEST_CASE("init_adapter rank bounds") {
    CHECK_NOTHROW(init_adapter(8, 4, 4, 1)); // r == min(d_in, d_out)
    CHECK_THROWS_AS(init_adapter(8, 4, 5, 1), ContractError);
    CHECK_THROWS_AS(init_adapter(8, 4, 0, 1), ContractError);
}

TEST_CASE("fresh adapter is a bit-exact no-op") {
    AdaptedLinear layer = random_layer(6, 5, 11);
    Rng rng(12);
    Matrix x = random_matrix(6, 1, rng);
    Matrix base = lora_forward(layer, x);

    layer.adapter = init_adapter(6, 5, 2, 13);
    Matrix adapted = lora_forward(layer, x);
    CHECK(base == adapted);
}

TEST_CASE("lora_forward hand arithmetic of B(Ax)") {
    AdaptedLinear layer;
    layer.W0 = Matrix(2, 2);
    layer.bias = Matrix(2, 1);
    LoraAdapter adapter;
    adapter.rank = 1;
    adapter.scale = 1.0;
    adapter.A = Matrix::from_rows({{1, 0}});
    adapter.B = Matrix::from_rows({{2}, {0}});
    layer.adapter = adapter;

    Matrix y = lora_forward(layer, Matrix::from_rows({{3}, {5}}));
    CHECK(y(0, 0) == 6.0);
    CHECK(y(1, 0) == 0.0);
}

TEST_CASE("lora_forward rejects wrong input height") {
    AdaptedLinear layer = random_layer(4, 3, 5);
    CHECK_THROWS_AS(lora_forward(layer, Matrix(5, 1)), DimensionError);
}

TEST_CASE("lora_forward equals the dense-merge route") {
    for (std::uint64_t seed = 0; seed < 8; ++seed) {
        AdaptedLinear layer = random_layer(7, 5, seed);
        layer.adapter = init_adapter(7, 5, 3, seed + 100);
        Rng rng(seed + 200);
        // Give B real content so the update is non-trivial.
        layer.adapter->B = random_matrix(5, 3, rng, 0.3);
        layer.adapter->scale = 1.5;

        Matrix x = random_matrix(7, 1, rng);
        Matrix via_lowrank = lora_forward(layer, x);
        Matrix dense = add(layer.W0, scale(matmul(layer.adapter->B, layer.adapter->A),
                                           layer.adapter->scale));
        Matrix via_dense = add(matmul(dense, x), layer.bias);
        for (std::size_t i = 0; i < via_lowrank.size(); ++i) {
            CHECK(std::fabs(via_lowrank.data()[i] - via_dense.data()[i]) <= 1e-10);
        }
    }
}

TEST_CASE("merge: fresh adapter leaves W0 unchanged") {
    AdaptedLinear layer = random_layer(6, 4, 21);
    layer.adapter = init_adapter(6, 4, 2, 22);
    AdaptedLinear merged = merge(layer);
    CHECK(merged.W0 == layer.W0);
    CHECK(!merged.adapter.has_value());
}

TEST_CASE("merge hand arithmetic: rank-1 update on the identity") {
    AdaptedLinear layer;
    layer.W0 = Matrix::from_rows({{1, 0}, {0, 1}});
    layer.bias = Matrix(2, 1);
    LoraAdapter adapter;
    adapter.rank = 1;
    adapter.scale = 1.0;
    adapter.A = Matrix::from_rows({{1, 1}});
    adapter.B = Matrix::from_rows({{1}, {0}});
    layer.adapter = adapter;

    AdaptedLinear merged = merge(layer);
    CHECK(merged.W0 == Matrix::from_rows({{2, 1}, {0, 1}}));
}

TEST_CASE("merge without an adapter is a contract error") {
    AdaptedLinear layer = random_layer(3, 3, 31);
    CHECK_THROWS_AS(merge(layer), ContractError);
}

TEST_CASE("property: merge equivalence over 50 random inputs") {
    AdaptedLinear layer = random_layer(8, 6, 41);
    layer.adapter = init_adapter(8, 6, 4, 42);
    Rng rng(43);
    layer.adapter->B = random_matrix(6, 4, rng, 0.5);
    AdaptedLinear merged = merge(layer);

    double worst = 0.0;
    for (int i = 0; i < 50; ++i) {
        Matrix x = random_matrix(8, 1, rng);
        Matrix adapted = lora_forward(layer, x);
        Matrix folded = lora_forward(merged, x);
        for (std::size_t j = 0; j < adapted.size(); ++j) {
            worst = std::max(worst, std::fabs(adapted.data()[j] - folded.data()[j]));
        }
    }
    CHECK(worst <= 1e-10);
}

TEST_CASE("trainable_param_count follows the 2dr law") {
    AdaptedLinear square = random_layer(512, 512, 51);
    square.adapter = init_adapter(512, 512, 16, 52);
    CHECK(trainable_param_count(square) == 16384);
    CHECK(square.W0.size() == 262144); // 16x reduction against the dense base

    square.adapter = init_adapter(512, 512, 8, 53);
    CHECK(trainable_param_count(square) == 8192);

    AdaptedLinear frozen = random_layer(512, 512, 54);
    CHECK(trainable_param_count(frozen) == 0);

    // Rectangular generalization: r * (d_in + d_out).
    AdaptedLinear rect = random_layer(64, 32, 55);
    rect.adapter = init_adapter(64, 32, 8, 56);
    CHECK(trainable_param_count(rect) == 8 * (64 + 32));
}

TEST_CASE("graph path: frozen base receives no gradient while adapter trains") {
    AdaptedLinear layer = random_layer(5, 4, 61);
    layer.adapter = init_adapter(5, 4, 2, 62);
    Matrix w0_before = layer.W0;

    Rng rng(63);
    for (int step = 0; step < 3; ++step) {
        Tape tape;
        NodePtr x = tape.leaf(random_matrix(5, 1, rng), false);
        LinearNodes nodes = lora_forward(tape, layer, x);
        tape.backward(tape.sum(nodes.out));

        CHECK(nodes.W0->grad == Matrix(4, 5));
        CHECK(nodes.bias->grad == Matrix(4, 1));
        CHECK(!(nodes.B->grad == Matrix(4, 2))); // the adapter does learn
    }
    CHECK(layer.W0 == w0_before);
}

TEST_CASE("graph and value paths agree bitwise") {
    AdaptedLinear layer = random_layer(6, 3, 71);
    layer.adapter = init_adapter(6, 3, 2, 72);
    Rng rng(73);
    layer.adapter->B = random_matrix(3, 2, rng, 0.4);

    Matrix x = random_matrix(6, 1, rng);
    Tape tape;
    LinearNodes nodes = lora_forward(tape, layer, tape.leaf(x, false));
    CHECK(nodes.out->value == lora_forward(layer, x));
}
