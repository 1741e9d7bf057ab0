// SPDX-License-Identifier: Apache-2.0
#include "slra/lora.hpp"

#include <algorithm>
#include <string>

#include "slra/errors.hpp"
#include "slra/rng.hpp"

namespace slra {

LoraAdapter init_adapter(std::size_t d_in, std::size_t d_out, std::size_t rank,
                         std::uint64_t seed) {
    std::size_t max_rank = std::min(d_in, d_out);
    if (rank < 1 || rank > max_rank) {
        throw ContractError("init_adapter: rank " + std::to_string(rank) +
                            " outside [1, " + std::to_string(max_rank) + "] for " +
                            std::to_string(d_out) + "x" + std::to_string(d_in) + " layer");
    }
    LoraAdapter adapter;
    adapter.rank = rank;
    adapter.scale = 1.0;
    adapter.A = Matrix(rank, d_in);
    adapter.B = Matrix(d_out, rank); // zeros: fresh adapter leaves the layer unchanged
    Rng rng(seed);
    for (std::size_t i = 0; i < adapter.A.size(); ++i) {
        adapter.A.data()[i] = rng.gaussian(0.0, 0.02);
    }
    return adapter;
}

static void check_input(const AdaptedLinear& layer, std::size_t x_rows) {
    if (x_rows != layer.d_in()) {
        throw DimensionError("lora_forward: input has " + std::to_string(x_rows) +
                             " rows, layer expects " + std::to_string(layer.d_in()));
    }
}

Matrix lora_forward(const AdaptedLinear& layer, const Matrix& x) {
    check_input(layer, x.rows());
    Matrix base = add(matmul(layer.W0, x), layer.bias);
    if (!layer.adapter) {
        return base;
    }
    const LoraAdapter& ad = *layer.adapter;
    Matrix update = scale(matmul(ad.B, matmul(ad.A, x)), ad.scale);
    return add(base, update);
}

LinearNodes lora_forward(Tape& tape, const AdaptedLinear& layer, const NodePtr& x,
                         bool train_base) {
    check_input(layer, x->value.rows());
    LinearNodes nodes;
    bool base_grad = train_base && !layer.adapter.has_value();
    nodes.W0 = tape.leaf(layer.W0, base_grad);
    nodes.bias = tape.leaf(layer.bias, base_grad);
    NodePtr base = tape.add(tape.matmul(nodes.W0, x), nodes.bias);
    if (!layer.adapter) {
        nodes.out = base;
        return nodes;
    }
    const LoraAdapter& ad = *layer.adapter;
    nodes.A = tape.leaf(ad.A, true);
    nodes.B = tape.leaf(ad.B, true);
    NodePtr update = tape.scale(tape.matmul(nodes.B, tape.matmul(nodes.A, x)), ad.scale);
    nodes.out = tape.add(base, update);
    return nodes;
}

AdaptedLinear merge(const AdaptedLinear& layer) {
    if (!layer.adapter) {
        throw ContractError("merge: layer has no adapter");
    }
    const LoraAdapter& ad = *layer.adapter;
    AdaptedLinear merged;
    merged.W0 = add(layer.W0, scale(matmul(ad.B, ad.A), ad.scale));
    merged.bias = layer.bias;
    return merged;
}

std::size_t trainable_param_count(const AdaptedLinear& layer) {
    if (!layer.adapter) return 0;
    return layer.adapter->rank * (layer.d_in() + layer.d_out());
}

} // namespace slra
