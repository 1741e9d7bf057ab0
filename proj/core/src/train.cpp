// SPDX-License-Identifier: Apache-2.0
#include "slra/train.hpp"

#include <cstdio>
#include <numeric>
#include <ostream>

#include "slra/errors.hpp"
#include "slra/rng.hpp"

namespace slra {

StageConfig stage1_defaults(std::vector<std::string> label_set, std::uint64_t seed) {
    StageConfig config;
    config.stage_id = 1;
    config.rank = 16;
    config.learning_rate = 1e-4;
    config.epochs = 20;
    config.batch_size = 1;
    config.label_set = std::move(label_set);
    config.seed = seed;
    return config;
}

StageConfig stage2_defaults(std::vector<std::string> label_set, std::uint64_t seed) {
    StageConfig config;
    config.stage_id = 2;
    config.rank = 8;
    config.learning_rate = 1e-4;
    config.epochs = 10;
    config.batch_size = 1;
    config.label_set = std::move(label_set);
    config.seed = seed;
    return config;
}

std::vector<LabeledExample> index_examples(const std::vector<ExampleRecord>& records,
                                           const std::vector<std::string>& label_set) {
    std::vector<LabeledExample> out;
    out.reserve(records.size());
    for (const auto& r : records) {
        std::size_t index = label_set.size();
        for (std::size_t i = 0; i < label_set.size(); ++i) {
            if (label_set[i] == r.label) {
                index = i;
                break;
            }
        }
        if (index == label_set.size()) {
            throw DataError("record '" + r.id + "' has label '" + r.label +
                            "' outside the stage label set");
        }
        out.push_back({r.id, r.features, index});
    }
    return out;
}

void sgd_step(Matrix& param, const Matrix& grad, double learning_rate) {
    require_same_shape(param, grad, "sgd_step");
    for (std::size_t i = 0; i < param.size(); ++i) {
        param.data()[i] -= learning_rate * grad.data()[i];
    }
}

namespace {

// The mutable tensors of one stage: every adapter pair plus the head.
struct TrainableTensor {
    Matrix* param;
    Matrix grad_sum;
    Matrix velocity;

    explicit TrainableTensor(Matrix* p)
        : param(p), grad_sum(p->rows(), p->cols()), velocity(p->rows(), p->cols()) {}
};

std::vector<TrainableTensor> collect_trainables(ClassifierNet& net) {
    std::vector<TrainableTensor> out;
    for (auto& layer : net.backbone) {
        if (layer.adapter) {
            out.emplace_back(&layer.adapter->A);
            out.emplace_back(&layer.adapter->B);
        }
    }
    out.emplace_back(&net.head.W0);
    out.emplace_back(&net.head.bias);
    return out;
}

void apply_updates(std::vector<TrainableTensor>& tensors, const StageConfig& config,
                   std::size_t batch_count) {
    if (batch_count == 0) return;
    double inv = 1.0 / static_cast<double>(batch_count);
    for (auto& t : tensors) {
        Matrix grad = scale(t.grad_sum, inv);
        if (config.momentum != 0.0) {
            for (std::size_t i = 0; i < grad.size(); ++i) {
                t.velocity.data()[i] =
                    config.momentum * t.velocity.data()[i] + grad.data()[i];
            }
            grad = t.velocity;
        }
        sgd_step(*t.param, grad, config.learning_rate);
        t.grad_sum = Matrix(t.grad_sum.rows(), t.grad_sum.cols());
    }
}

// Gradient leaves of the graph, in the same order as collect_trainables.
std::vector<NodePtr> graph_leaves(const ForwardGraph& graph) {
    std::vector<NodePtr> out;
    for (const auto& layer : graph.backbone) {
        if (layer.A) {
            out.push_back(layer.A);
            out.push_back(layer.B);
        }
    }
    out.push_back(graph.head.W0);
    out.push_back(graph.head.bias);
    return out;
}

std::size_t argmax(const Matrix& logits) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < logits.size(); ++i) {
        if (logits.data()[i] > logits.data()[best]) best = i;
    }
    return best;
}

} // namespace

std::vector<TrainRecord> run_stage(ClassifierNet& net, const StageConfig& config,
                                   const std::vector<LabeledExample>& data,
                                   std::ostream* log, std::string* final_rng_state) {
    if (net.active_labels != config.label_set) {
        throw ContractError("run_stage: net head does not match the stage label set");
    }
    if (config.learning_rate < 0.0) {
        throw ContractError("run_stage: learning_rate must be >= 0");
    }
    if (config.batch_size < 1) {
        throw ContractError("run_stage: batch_size must be >= 1");
    }
    for (const auto& ex : data) {
        if (ex.label >= config.label_set.size()) {
            throw DataError("record '" + ex.id + "' carries label index " +
                            std::to_string(ex.label) + " outside the stage label set");
        }
    }

    std::vector<TrainRecord> records;
    Rng shuffle_rng(mix_seed(config.seed, "shuffle"));
    if (config.epochs == 0 || data.empty()) {
        if (final_rng_state) *final_rng_state = shuffle_rng.state();
        return records;
    }

    auto trainables = collect_trainables(net);

    std::vector<std::size_t> order(data.size());
    std::iota(order.begin(), order.end(), 0);
    // Per-example losses keyed by dataset index, so the epoch mean does
    // not depend on the shuffle order.
    std::vector<double> losses(data.size(), 0.0);

    for (std::size_t epoch = 1; epoch <= config.epochs; ++epoch) {
        shuffle_rng.shuffle(order);
        std::size_t correct = 0;
        std::size_t pending = 0;

        for (std::size_t idx : order) {
            const LabeledExample& ex = data[idx];
            Tape tape;
            NodePtr x = tape.leaf(Matrix::column(ex.features), false);
            ForwardGraph graph = forward_graph(tape, net, x, /*train_head=*/true);
            NodePtr loss = tape.softmax_cross_entropy(graph.logits, ex.label);
            losses[idx] = loss->value(0, 0);
            if (argmax(graph.logits->value) == ex.label) ++correct;

            tape.backward(loss);
            auto leaves = graph_leaves(graph);
            for (std::size_t t = 0; t < trainables.size(); ++t) {
                add_in_place(trainables[t].grad_sum, leaves[t]->grad);
            }
            if (++pending == config.batch_size) {
                apply_updates(trainables, config, pending);
                pending = 0;
            }
        }
        apply_updates(trainables, config, pending);

        double total = 0.0;
        for (double l : losses) total += l;
        TrainRecord record;
        record.epoch = epoch;
        record.mean_loss = total / static_cast<double>(data.size());
        record.train_accuracy =
            static_cast<double>(correct) / static_cast<double>(data.size());
        if (log) {
            char line[96];
            std::snprintf(line, sizeof(line), "epoch=%zu loss=%.6f acc=%.6f", epoch,
                          record.mean_loss, record.train_accuracy);
            (*log) << line << "\n";
        }
        records.push_back(record);
    }
    if (final_rng_state) *final_rng_state = shuffle_rng.state();
    return records;
}

void transition(ClassifierNet& net, const StageConfig& stage2) {
    if (!has_adapters(net)) {
        throw StateError("transition: net has no adapters; run stage 1 first");
    }
    for (std::size_t i = 0; i < net.backbone.size(); ++i) {
        net.backbone[i] = merge(net.backbone[i]);
    }
    install_adapters(net, stage2.rank, mix_seed(stage2.seed, "stage2-adapters"));
    swap_head(net, stage2.label_set, mix_seed(stage2.seed, "stage2-head"));
}

} // namespace slra
