// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>

#include "slra/autodiff.hpp"
#include "slra/matrix.hpp"

namespace slra {

/// Low-rank adapter pair. A is the rank x d_in down-projection, B the
/// d_out x rank up-projection. B starts all-zero so a fresh adapter is a
/// functional no-op; scale multiplies the BA update (default 1).
struct LoraAdapter {
    Matrix A;
    Matrix B;
    std::size_t rank = 0;
    double scale = 1.0;
};

/// A ~ Gaussian(0, 0.02^2) from the seeded stream, B = 0, scale = 1.
/// Requires 1 <= rank <= min(d_in, d_out).
LoraAdapter init_adapter(std::size_t d_in, std::size_t d_out, std::size_t rank,
                         std::uint64_t seed);

/// Linear layer with a frozen base and an optional adapter. While an
/// adapter is attached, W0 and bias never receive gradient.
struct AdaptedLinear {
    Matrix W0;   // d_out x d_in
    Matrix bias; // d_out x 1
    std::optional<LoraAdapter> adapter;

    std::size_t d_in() const { return W0.cols(); }
    std::size_t d_out() const { return W0.rows(); }
};

/// Value-path forward: W0.x + bias + scale.(B.(A.x)). The update is
/// applied as two rank-r products; BA is never formed here.
Matrix lora_forward(const AdaptedLinear& layer, const Matrix& x);

/// Trainable leaves of one layer in a forward graph.
struct LinearNodes {
    NodePtr W0;
    NodePtr bias;
    NodePtr A; // null when no adapter
    NodePtr B; // null when no adapter
    NodePtr out;
};

/// Graph-path forward, same arithmetic and op order as the value path.
/// Base leaves are trainable only when train_base is set and no adapter
/// is attached; adapter leaves are always trainable.
LinearNodes lora_forward(Tape& tape, const AdaptedLinear& layer, const NodePtr& x,
                         bool train_base = false);

/// Folds the adapter into the base: W0' = W0 + scale.B.A, no adapter on
/// the result. ContractError when no adapter is attached.
AdaptedLinear merge(const AdaptedLinear& layer);

/// rank * (d_in + d_out) with an adapter attached (2dr when square), 0
/// without one (frozen base).
std::size_t trainable_param_count(const AdaptedLinear& layer);

} // namespace slra
