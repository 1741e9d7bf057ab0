// SPDX-License-Identifier: Apache-2.0
#include "slra/checkpoint.hpp"

#include <cstring>
#include <map>

#include "slra/io.hpp"

namespace slra {

namespace {

constexpr char kMagic[4] = {'S', 'L', 'R', 'A'};
constexpr std::uint32_t kVersion = 1;
// Upper bound on declared tensor elements; corrupt headers fail fast
// instead of attempting a huge allocation.
constexpr std::uint64_t kMaxTensorElems = 100'000'000;

void put_u8(std::string& out, std::uint8_t v) { out.push_back(static_cast<char>(v)); }

void put_u32(std::string& out, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

void put_u64(std::string& out, std::uint64_t v) {
    for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

void put_f64(std::string& out, double v) {
    std::uint64_t bits;
    std::memcpy(&bits, &v, sizeof(bits));
    put_u64(out, bits);
}

void put_string(std::string& out, const std::string& s) {
    put_u32(out, static_cast<std::uint32_t>(s.size()));
    out.append(s);
}

void put_tensor(std::string& out, const std::string& name, const Matrix& m) {
    put_string(out, name);
    put_u64(out, m.rows());
    put_u64(out, m.cols());
    for (std::size_t i = 0; i < m.size(); ++i) put_f64(out, m.data()[i]);
}

class Reader {
public:
    explicit Reader(const std::string& bytes) : bytes_(bytes) {}

    std::uint8_t u8() {
        need(1, "byte");
        return static_cast<std::uint8_t>(bytes_[pos_++]);
    }

    std::uint32_t u32() {
        need(4, "u32");
        std::uint32_t v = 0;
        for (int i = 0; i < 4; ++i) {
            v |= static_cast<std::uint32_t>(static_cast<unsigned char>(bytes_[pos_++])) << (8 * i);
        }
        return v;
    }

    std::uint64_t u64() {
        need(8, "u64");
        std::uint64_t v = 0;
        for (int i = 0; i < 8; ++i) {
            v |= static_cast<std::uint64_t>(static_cast<unsigned char>(bytes_[pos_++])) << (8 * i);
        }
        return v;
    }

    double f64() {
        std::uint64_t bits = u64();
        double v;
        std::memcpy(&v, &bits, sizeof(v));
        return v;
    }

    std::string str() {
        std::uint32_t len = u32();
        need(len, "string payload");
        std::string s = bytes_.substr(pos_, len);
        pos_ += len;
        return s;
    }

    bool at_end() const { return pos_ == bytes_.size(); }

private:
    void need(std::size_t n, const char* what) const {
        if (pos_ + n > bytes_.size()) {
            throw CheckpointTruncatedError(std::string("checkpoint truncated while reading ") +
                                           what);
        }
    }

    const std::string& bytes_;
    std::size_t pos_ = 0;
};

Matrix read_tensor_data(Reader& r, std::uint64_t rows, std::uint64_t cols,
                        const std::string& name) {
    if (rows == 0 || cols == 0 || rows * cols > kMaxTensorElems) {
        throw CheckpointSizeError("tensor '" + name + "' declares implausible shape " +
                                  std::to_string(rows) + "x" + std::to_string(cols));
    }
    Matrix m(static_cast<std::size_t>(rows), static_cast<std::size_t>(cols));
    for (std::size_t i = 0; i < m.size(); ++i) m.data()[i] = r.f64();
    return m;
}

const Matrix& require_tensor(const std::map<std::string, Matrix>& tensors,
                             const std::string& name) {
    auto it = tensors.find(name);
    if (it == tensors.end()) {
        throw CheckpointSizeError("checkpoint is missing tensor '" + name + "'");
    }
    return it->second;
}

} // namespace

std::string checkpoint_to_bytes(const Checkpoint& cp) {
    std::string out;
    out.append(kMagic, sizeof(kMagic));
    put_u32(out, kVersion);
    put_u8(out, static_cast<std::uint8_t>(cp.stage_id));

    put_u32(out, static_cast<std::uint32_t>(cp.net.active_labels.size()));
    for (const auto& label : cp.net.active_labels) put_string(out, label);

    std::uint32_t tensor_count = static_cast<std::uint32_t>(2 * cp.net.backbone.size() + 2);
    for (const auto& layer : cp.net.backbone) {
        if (layer.adapter) tensor_count += 3;
    }
    put_u32(out, tensor_count);
    for (std::size_t i = 0; i < cp.net.backbone.size(); ++i) {
        const auto& layer = cp.net.backbone[i];
        std::string prefix = "backbone." + std::to_string(i) + ".";
        put_tensor(out, prefix + "W0", layer.W0);
        put_tensor(out, prefix + "bias", layer.bias);
        if (layer.adapter) {
            put_tensor(out, prefix + "lora.A", layer.adapter->A);
            put_tensor(out, prefix + "lora.B", layer.adapter->B);
            Matrix scale(1, 1);
            scale(0, 0) = layer.adapter->scale;
            put_tensor(out, prefix + "lora.scale", scale);
        }
    }
    put_tensor(out, "head.W0", cp.net.head.W0);
    put_tensor(out, "head.bias", cp.net.head.bias);

    put_string(out, cp.rng_state);
    put_u32(out, static_cast<std::uint32_t>(cp.history.size()));
    for (const auto& h : cp.history) {
        put_u8(out, static_cast<std::uint8_t>(h.stage_id));
        put_u32(out, static_cast<std::uint32_t>(h.record.epoch));
        put_f64(out, h.record.mean_loss);
        put_f64(out, h.record.train_accuracy);
    }
    return out;
}

Checkpoint checkpoint_from_bytes(const std::string& bytes) {
    Reader r(bytes);
    if (bytes.size() < sizeof(kMagic) ||
        std::memcmp(bytes.data(), kMagic, sizeof(kMagic)) != 0) {
        throw CheckpointFormatError("not a checkpoint file: bad magic bytes");
    }
    for (std::size_t i = 0; i < sizeof(kMagic); ++i) r.u8();

    Checkpoint cp;
    cp.version = r.u32();
    if (cp.version != kVersion) {
        throw CheckpointVersionError("unsupported checkpoint version " +
                                     std::to_string(cp.version) + ", expected " +
                                     std::to_string(kVersion));
    }
    cp.stage_id = r.u8();

    std::uint32_t label_count = r.u32();
    std::vector<std::string> labels;
    for (std::uint32_t i = 0; i < label_count; ++i) labels.push_back(r.str());

    std::uint32_t tensor_count = r.u32();
    std::map<std::string, Matrix> tensors;
    for (std::uint32_t i = 0; i < tensor_count; ++i) {
        std::string name = r.str();
        std::uint64_t rows = r.u64();
        std::uint64_t cols = r.u64();
        tensors.emplace(name, read_tensor_data(r, rows, cols, name));
    }

    cp.rng_state = r.str();
    std::uint32_t history_count = r.u32();
    for (std::uint32_t i = 0; i < history_count; ++i) {
        StageEpochRecord h;
        h.stage_id = r.u8();
        h.record.epoch = r.u32();
        h.record.mean_loss = r.f64();
        h.record.train_accuracy = r.f64();
        cp.history.push_back(h);
    }
    if (!r.at_end()) {
        throw CheckpointSizeError("checkpoint carries trailing bytes after the last record");
    }

    // Rebuild the network and cross-check every declared shape.
    std::size_t layer_count = 0;
    while (tensors.count("backbone." + std::to_string(layer_count) + ".W0")) ++layer_count;
    for (std::size_t i = 0; i < layer_count; ++i) {
        std::string prefix = "backbone." + std::to_string(i) + ".";
        AdaptedLinear layer;
        layer.W0 = require_tensor(tensors, prefix + "W0");
        layer.bias = require_tensor(tensors, prefix + "bias");
        if (layer.bias.rows() != layer.W0.rows() || layer.bias.cols() != 1) {
            throw CheckpointSizeError("tensor '" + prefix + "bias' shape disagrees with W0");
        }
        if (tensors.count(prefix + "lora.A")) {
            LoraAdapter adapter;
            adapter.A = require_tensor(tensors, prefix + "lora.A");
            adapter.B = require_tensor(tensors, prefix + "lora.B");
            const Matrix& scale = require_tensor(tensors, prefix + "lora.scale");
            if (scale.rows() != 1 || scale.cols() != 1) {
                throw CheckpointSizeError("tensor '" + prefix + "lora.scale' must be 1x1");
            }
            if (adapter.A.cols() != layer.W0.cols() || adapter.B.rows() != layer.W0.rows() ||
                adapter.A.rows() != adapter.B.cols() || adapter.A.rows() == 0) {
                throw CheckpointSizeError("adapter shapes of '" + prefix +
                                          "' disagree with the host layer");
            }
            adapter.rank = adapter.A.rows();
            adapter.scale = scale(0, 0);
            layer.adapter = std::move(adapter);
        }
        if (i > 0 && layer.d_in() != cp.net.backbone.back().d_out()) {
            throw CheckpointSizeError("backbone layer " + std::to_string(i) +
                                      " input width disagrees with the previous layer");
        }
        cp.net.backbone.push_back(std::move(layer));
    }
    cp.net.head.W0 = require_tensor(tensors, "head.W0");
    cp.net.head.bias = require_tensor(tensors, "head.bias");
    if (cp.net.head.bias.rows() != cp.net.head.W0.rows() || cp.net.head.bias.cols() != 1) {
        throw CheckpointSizeError("tensor 'head.bias' shape disagrees with head.W0");
    }
    if (!cp.net.backbone.empty() &&
        cp.net.head.d_in() != cp.net.backbone.back().d_out()) {
        throw CheckpointSizeError("head input width disagrees with the last backbone layer");
    }
    if (cp.net.head.W0.rows() != labels.size()) {
        throw CheckpointSizeError("head output width " +
                                  std::to_string(cp.net.head.W0.rows()) +
                                  " disagrees with label count " +
                                  std::to_string(labels.size()));
    }
    std::size_t expected = 2 * layer_count + 2;
    for (std::size_t i = 0; i < layer_count; ++i) {
        if (tensors.count("backbone." + std::to_string(i) + ".lora.A")) expected += 3;
    }
    if (tensors.size() != expected) {
        throw CheckpointSizeError("checkpoint carries unexpected tensors");
    }
    cp.net.active_labels = std::move(labels);
    return cp;
}

void save_checkpoint(const Checkpoint& cp, const std::string& path) {
    atomic_write_file(path, checkpoint_to_bytes(cp));
}

Checkpoint load_checkpoint(const std::string& path) {
    return checkpoint_from_bytes(read_file(path));
}

} // namespace slra
