// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <vector>

#include "slra/matrix.hpp"

namespace slra {

/// One value in the computation graph. Gradient buffers always match the
/// value shape; nodes with requires_grad = false never accumulate gradient.
struct Node {
    Matrix value;
    Matrix grad;
    bool requires_grad = false;

    Node(Matrix v, bool rg)
        : value(std::move(v)), grad(value.rows(), value.cols()), requires_grad(rg) {}
};

using NodePtr = std::shared_ptr<Node>;

/// Reverse-mode tape, rebuilt per forward pass. Records one pull step per
/// executed op and replays them in exact reverse order on backward().
class Tape {
public:
    NodePtr leaf(Matrix value, bool requires_grad = false);

    /// Matrix product. Backward: dL/da = dL/dout . b^T, dL/db = a^T . dL/dout.
    NodePtr matmul(const NodePtr& a, const NodePtr& b);

    /// Elementwise sum of same-shaped matrices; gradient passes through.
    NodePtr add(const NodePtr& a, const NodePtr& b);

    /// Elementwise max(0, x). Subgradient at exactly 0 is 0.
    NodePtr relu(const NodePtr& a);

    /// Scalar multiple of a matrix (the only broadcast-like op).
    NodePtr scale(const NodePtr& a, double s);

    /// Sum of all entries, as a 1x1 node.
    NodePtr sum(const NodePtr& a);

    /// -log softmax(logits)[label] for a 1xC or Cx1 logits vector.
    /// Backward yields softmax(logits) - onehot(label).
    NodePtr softmax_cross_entropy(const NodePtr& logits, std::size_t label);

    /// Seeds d(loss)/d(loss) = 1 and pulls gradients to every
    /// requires_grad node. loss must be scalar (1x1); running twice
    /// without reset() is a StateError.
    void backward(const NodePtr& loss);

    void reset();

    std::size_t recorded_ops() const { return steps_.size(); }

private:
    std::vector<std::function<void()>> steps_;
    bool backward_done_ = false;
};

} // namespace slra
