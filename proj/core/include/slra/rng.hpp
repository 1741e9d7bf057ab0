// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

namespace slra {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Derive an independent sub-seed from a root seed and a component tag,
/// so one --seed flag reproducibly fans out to data/init/shuffle streams.
inline std::uint64_t mix_seed(std::uint64_t seed, std::string_view tag) {
    std::uint64_t h = 0xcbf29ce484222325ULL; // FNV-1a
    for (unsigned char c : tag) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return splitmix64(seed ^ h);
}

inline std::uint64_t mix_seed(std::uint64_t seed, std::string_view tag, std::uint64_t index) {
    return splitmix64(mix_seed(seed, tag) ^ splitmix64(index));
}

/// Deterministic random stream. The engine is std::mt19937_64 (fully
/// specified by the standard); uniform and gaussian mappings are written
/// out here because the standard library distributions are
/// implementation-defined and would break cross-platform reproducibility.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform01() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    /// Box-Muller gaussian. Draws two uniforms per sample.
    double gaussian(double mean, double stddev) {
        double u1 = 1.0 - uniform01(); // (0, 1], keeps log finite
        double u2 = uniform01();
        double radius = std::sqrt(-2.0 * std::log(u1));
        return mean + stddev * radius * std::cos(2.0 * M_PI * u2);
    }

    /// Seeded Fisher-Yates shuffle.
    template <typename T>
    void shuffle(std::vector<T>& v) {
        if (v.size() < 2) return;
        for (std::size_t i = v.size() - 1; i > 0; --i) {
            std::size_t j = static_cast<std::size_t>(next_u64() % (i + 1));
            std::swap(v[i], v[j]);
        }
    }

    std::string state() const {
        std::ostringstream os;
        os << engine_;
        return os.str();
    }

    void restore(const std::string& state) {
        std::istringstream is(state);
        is >> engine_;
    }

private:
    std::mt19937_64 engine_;
};

} // namespace slra
