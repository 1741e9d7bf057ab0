// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "slra/dataset.hpp"
#include "slra/model.hpp"

namespace slra {

/// One fine-tuning stage's hyperparameters. Defaults reproduce the
/// reference configuration: stage 1 rank 16 / 20 epochs, stage 2 rank 8 /
/// 10 epochs, learning rate 1e-4 and batch size 1 for both.
struct StageConfig {
    int stage_id = 1;
    std::size_t rank = 16;
    double learning_rate = 1e-4;
    std::size_t epochs = 20;
    std::size_t batch_size = 1;
    double momentum = 0.0;
    std::vector<std::string> label_set;
    std::uint64_t seed = 0;
};

StageConfig stage1_defaults(std::vector<std::string> label_set, std::uint64_t seed);
StageConfig stage2_defaults(std::vector<std::string> label_set, std::uint64_t seed);

struct TrainRecord {
    std::size_t epoch = 0;
    double mean_loss = 0.0;
    double train_accuracy = 0.0;
};

struct LabeledExample {
    std::string id;
    std::vector<double> features;
    std::size_t label = 0; // index into the stage's label_set
};

/// Maps records onto label indices in label_set order. DataError naming
/// the offending record when a label falls outside the set.
std::vector<LabeledExample> index_examples(const std::vector<ExampleRecord>& records,
                                           const std::vector<std::string>& label_set);

/// p <- p - lr * g, elementwise.
void sgd_step(Matrix& param, const Matrix& grad, double learning_rate);

/// One stage of fine-tuning. Only adapter matrices and the current head
/// change; backbone bases stay bit-identical. One record per epoch;
/// examples are reshuffled per epoch from the stage seed. When log is
/// given, emits one `epoch=<n> loss=<f> acc=<f>` line per epoch. When
/// final_rng_state is given, receives the shuffle stream's end state
/// (checkpoints persist it).
std::vector<TrainRecord> run_stage(ClassifierNet& net, const StageConfig& config,
                                   const std::vector<LabeledExample>& data,
                                   std::ostream* log = nullptr,
                                   std::string* final_rng_state = nullptr);

/// Stage-1 -> stage-2 handover: merges the trained adapters into the
/// backbone bases, installs fresh adapters at the stage-2 rank, and swaps
/// the head to the stage-2 label set. StateError without adapters.
void transition(ClassifierNet& net, const StageConfig& stage2);

} // namespace slra
