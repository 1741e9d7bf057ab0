// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "slra/lora.hpp"

namespace slra {

/// Feed-forward expression classifier: ReLU after every backbone layer,
/// then a linear head sized to the active label set.
struct ClassifierNet {
    std::vector<AdaptedLinear> backbone;
    AdaptedLinear head;
    std::vector<std::string> active_labels;

    std::size_t d_in() const { return backbone.empty() ? head.d_in() : backbone.front().d_in(); }
};

/// Fresh network with seeded weights: backbone entries ~ N(0, 2/fan_in)
/// so activations keep unit scale through the ReLU stack, head entries
/// ~ N(0, 0.02^2), all biases zero. hidden defaults to {64, 32}.
ClassifierNet make_net(std::size_t d_in, const std::vector<std::string>& labels,
                       std::uint64_t seed,
                       const std::vector<std::size_t>& hidden = {64, 32});

/// Installs a fresh adapter of the given rank on every backbone layer,
/// replacing any existing ones. Per-layer seeds derive from seed.
void install_adapters(ClassifierNet& net, std::size_t rank, std::uint64_t seed);

bool has_adapters(const ClassifierNet& net);

/// Logits for one feature vector, as a |labels| x 1 column.
Matrix forward(const ClassifierNet& net, const std::vector<double>& features);

/// argmax of the logits; exact ties resolve to the lowest index.
std::string predict(const ClassifierNet& net, const std::vector<double>& features);
std::size_t predict_index(const ClassifierNet& net, const std::vector<double>& features);

/// Replaces the head with a freshly seeded one sized to new_labels. The
/// backbone is untouched; swapping to an identical label list still
/// re-initializes the head.
void swap_head(ClassifierNet& net, const std::vector<std::string>& new_labels,
               std::uint64_t seed);

/// Training-time forward pass. Bit-identical values to forward(): both
/// paths run the same kernels in the same order.
struct ForwardGraph {
    std::vector<LinearNodes> backbone;
    LinearNodes head;
    NodePtr logits;
};
ForwardGraph forward_graph(Tape& tape, const ClassifierNet& net, const NodePtr& x,
                           bool train_head);

} // namespace slra
