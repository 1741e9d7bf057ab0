// SPDX-License-Identifier: Apache-2.0
#include "slra/model.hpp"

#include <cmath>
#include <set>
#include <string>

#include "slra/errors.hpp"
#include "slra/rng.hpp"

namespace slra {

namespace {

void check_labels(const std::vector<std::string>& labels) {
    if (labels.empty()) {
        throw ContractError("label set must be non-empty");
    }
    std::set<std::string> seen;
    for (const auto& l : labels) {
        if (!seen.insert(l).second) {
            throw ContractError("duplicate label '" + l + "' in label set");
        }
    }
}

AdaptedLinear seeded_linear(std::size_t d_in, std::size_t d_out, double stddev,
                            std::uint64_t seed) {
    AdaptedLinear layer;
    layer.W0 = Matrix(d_out, d_in);
    layer.bias = Matrix(d_out, 1);
    Rng rng(seed);
    for (std::size_t i = 0; i < layer.W0.size(); ++i) {
        layer.W0.data()[i] = rng.gaussian(0.0, stddev);
    }
    return layer;
}

} // namespace

ClassifierNet make_net(std::size_t d_in, const std::vector<std::string>& labels,
                       std::uint64_t seed, const std::vector<std::size_t>& hidden) {
    check_labels(labels);
    if (d_in == 0 || hidden.empty()) {
        throw ContractError("make_net: d_in and hidden sizes must be positive");
    }
    ClassifierNet net;
    std::size_t in = d_in;
    for (std::size_t i = 0; i < hidden.size(); ++i) {
        // Hot ReLU init (25x Kaiming variance). The activation magnitude
        // sets the head's effective step size, and the reference
        // learning rate of 1e-4 needs larger-than-unit activations to
        // converge within the reference epoch budget.
        double stddev = std::sqrt(50.0 / static_cast<double>(in));
        net.backbone.push_back(seeded_linear(in, hidden[i], stddev, mix_seed(seed, "backbone", i)));
        in = hidden[i];
    }
    net.head = seeded_linear(in, labels.size(), 0.02, mix_seed(seed, "head"));
    net.active_labels = labels;
    return net;
}

void install_adapters(ClassifierNet& net, std::size_t rank, std::uint64_t seed) {
    for (std::size_t i = 0; i < net.backbone.size(); ++i) {
        AdaptedLinear& layer = net.backbone[i];
        layer.adapter = init_adapter(layer.d_in(), layer.d_out(), rank,
                                     mix_seed(seed, "adapter", i));
    }
}

bool has_adapters(const ClassifierNet& net) {
    if (net.backbone.empty()) return false;
    for (const auto& layer : net.backbone) {
        if (!layer.adapter) return false;
    }
    return true;
}

Matrix forward(const ClassifierNet& net, const std::vector<double>& features) {
    if (features.size() != net.d_in()) {
        throw DimensionError("forward: got " + std::to_string(features.size()) +
                             " features, net expects " + std::to_string(net.d_in()));
    }
    Matrix x = Matrix::column(features);
    for (const auto& layer : net.backbone) {
        x = relu(lora_forward(layer, x));
    }
    return lora_forward(net.head, x);
}

std::size_t predict_index(const ClassifierNet& net, const std::vector<double>& features) {
    Matrix logits = forward(net, features);
    std::size_t best = 0;
    for (std::size_t i = 1; i < logits.size(); ++i) {
        if (logits.data()[i] > logits.data()[best]) best = i;
    }
    return best;
}

std::string predict(const ClassifierNet& net, const std::vector<double>& features) {
    return net.active_labels[predict_index(net, features)];
}

void swap_head(ClassifierNet& net, const std::vector<std::string>& new_labels,
               std::uint64_t seed) {
    check_labels(new_labels);
    std::size_t head_in = net.head.d_in();
    net.head = seeded_linear(head_in, new_labels.size(), 0.02, mix_seed(seed, "head"));
    net.active_labels = new_labels;
}

ForwardGraph forward_graph(Tape& tape, const ClassifierNet& net, const NodePtr& x,
                           bool train_head) {
    ForwardGraph graph;
    NodePtr h = x;
    for (const auto& layer : net.backbone) {
        LinearNodes nodes = lora_forward(tape, layer, h, /*train_base=*/false);
        h = tape.relu(nodes.out);
        graph.backbone.push_back(std::move(nodes));
    }
    graph.head = lora_forward(tape, net.head, h, /*train_base=*/train_head);
    graph.logits = graph.head.out;
    return graph;
}

} // namespace slra
