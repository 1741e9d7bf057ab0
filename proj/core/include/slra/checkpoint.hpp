// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "slra/errors.hpp"
#include "slra/model.hpp"
#include "slra/train.hpp"

namespace slra {

class CheckpointError : public DataError {
public:
    using DataError::DataError;
};

/// Magic bytes are not "SLRA".
class CheckpointFormatError : public CheckpointError {
public:
    using CheckpointError::CheckpointError;
};

/// Unsupported format version.
class CheckpointVersionError : public CheckpointError {
public:
    using CheckpointError::CheckpointError;
};

/// File ends mid-record.
class CheckpointTruncatedError : public CheckpointError {
public:
    using CheckpointError::CheckpointError;
};

/// Declared shapes or totals disagree with the payload.
class CheckpointSizeError : public CheckpointError {
public:
    using CheckpointError::CheckpointError;
};

struct StageEpochRecord {
    int stage_id = 0;
    TrainRecord record;
};

/// Everything needed to resume or evaluate: the network, the stage it
/// came from, its label set, the training RNG state, and the per-epoch
/// history of every completed stage. Tensor round-trips are bit-exact.
struct Checkpoint {
    std::uint32_t version = 1;
    int stage_id = 0;
    std::string rng_state;
    std::vector<StageEpochRecord> history;
    ClassifierNet net;
};

std::string checkpoint_to_bytes(const Checkpoint& cp);
Checkpoint checkpoint_from_bytes(const std::string& bytes);

void save_checkpoint(const Checkpoint& cp, const std::string& path);
Checkpoint load_checkpoint(const std::string& path);

} // namespace slra
