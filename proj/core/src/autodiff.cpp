// SPDX-License-Identifier: Apache-2.0
#include "slra/autodiff.hpp"

#include <cmath>
#include <string>

#include "slra/errors.hpp"

namespace slra {

NodePtr Tape::leaf(Matrix value, bool requires_grad) {
    return std::make_shared<Node>(std::move(value), requires_grad);
}

NodePtr Tape::matmul(const NodePtr& a, const NodePtr& b) {
    Matrix value = slra::matmul(a->value, b->value);
    bool rg = a->requires_grad || b->requires_grad;
    NodePtr out = std::make_shared<Node>(std::move(value), rg);
    if (rg) {
        steps_.push_back([a, b, out]() {
            if (a->requires_grad) {
                add_in_place(a->grad, slra::matmul(out->grad, transpose(b->value)));
            }
            if (b->requires_grad) {
                add_in_place(b->grad, slra::matmul(transpose(a->value), out->grad));
            }
        });
    }
    return out;
}

NodePtr Tape::add(const NodePtr& a, const NodePtr& b) {
    Matrix value = slra::add(a->value, b->value);
    bool rg = a->requires_grad || b->requires_grad;
    NodePtr out = std::make_shared<Node>(std::move(value), rg);
    if (rg) {
        steps_.push_back([a, b, out]() {
            if (a->requires_grad) add_in_place(a->grad, out->grad);
            if (b->requires_grad) add_in_place(b->grad, out->grad);
        });
    }
    return out;
}

NodePtr Tape::relu(const NodePtr& a) {
    Matrix value = slra::relu(a->value);
    bool rg = a->requires_grad;
    NodePtr out = std::make_shared<Node>(std::move(value), rg);
    if (rg) {
        steps_.push_back([a, out]() {
            for (std::size_t i = 0; i < a->grad.size(); ++i) {
                if (a->value.data()[i] > 0.0) {
                    a->grad.data()[i] += out->grad.data()[i];
                }
            }
        });
    }
    return out;
}

NodePtr Tape::scale(const NodePtr& a, double s) {
    Matrix value = slra::scale(a->value, s);
    bool rg = a->requires_grad;
    NodePtr out = std::make_shared<Node>(std::move(value), rg);
    if (rg) {
        steps_.push_back([a, out, s]() {
            add_in_place(a->grad, slra::scale(out->grad, s));
        });
    }
    return out;
}

NodePtr Tape::sum(const NodePtr& a) {
    Matrix value(1, 1);
    value(0, 0) = slra::sum(a->value);
    bool rg = a->requires_grad;
    NodePtr out = std::make_shared<Node>(std::move(value), rg);
    if (rg) {
        steps_.push_back([a, out]() {
            double g = out->grad(0, 0);
            for (std::size_t i = 0; i < a->grad.size(); ++i) a->grad.data()[i] += g;
        });
    }
    return out;
}

NodePtr Tape::softmax_cross_entropy(const NodePtr& logits, std::size_t label) {
    const Matrix& l = logits->value;
    if (l.rows() != 1 && l.cols() != 1) {
        throw DimensionError("softmax_cross_entropy: logits must be 1xC or Cx1, got " +
                             shape_string(l));
    }
    std::size_t classes = l.size();
    if (label >= classes) {
        throw std::out_of_range("softmax_cross_entropy: label " + std::to_string(label) +
                                " out of range for " + std::to_string(classes) + " classes");
    }

    // loss = logsumexp(l) - l[label]; probabilities kept for the backward.
    double maxv = l.data()[0];
    for (std::size_t i = 1; i < classes; ++i) maxv = std::max(maxv, l.data()[i]);
    double denom = 0.0;
    std::vector<double> probs(classes);
    for (std::size_t i = 0; i < classes; ++i) {
        probs[i] = std::exp(l.data()[i] - maxv);
        denom += probs[i];
    }
    for (std::size_t i = 0; i < classes; ++i) probs[i] /= denom;

    Matrix value(1, 1);
    value(0, 0) = std::log(denom) + maxv - l.data()[label];

    bool rg = logits->requires_grad;
    NodePtr out = std::make_shared<Node>(std::move(value), rg);
    if (rg) {
        steps_.push_back([logits, out, probs = std::move(probs), label]() {
            double g = out->grad(0, 0);
            for (std::size_t i = 0; i < probs.size(); ++i) {
                double delta = probs[i] - (i == label ? 1.0 : 0.0);
                logits->grad.data()[i] += g * delta;
            }
        });
    }
    return out;
}

void Tape::backward(const NodePtr& loss) {
    if (loss->value.rows() != 1 || loss->value.cols() != 1) {
        throw ContractError("backward: loss must be scalar, got " + shape_string(loss->value));
    }
    if (steps_.empty()) {
        throw StateError("backward: tape is empty");
    }
    if (backward_done_) {
        throw StateError("backward: already run on this tape; call reset() first");
    }
    backward_done_ = true;
    if (loss->requires_grad) {
        loss->grad(0, 0) += 1.0;
    }
    for (auto it = steps_.rbegin(); it != steps_.rend(); ++it) {
        (*it)();
    }
}

void Tape::reset() {
    steps_.clear();
    backward_done_ = false;
}

} // namespace slra
