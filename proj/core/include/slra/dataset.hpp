// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace slra {

enum class Split { Train, Val, Test };

std::string split_name(Split s);
Split split_from_name(const std::string& name);

/// One labeled feature vector, standing in for an annotated face image.
struct ExampleRecord {
    std::string id;
    std::vector<double> features;
    std::string label;
    Split split = Split::Train;
};

struct ManifestHeader {
    std::size_t dimension = 0;
    std::vector<std::string> labels;
    std::uint32_t version = 1;
};

/// Line-delimited dataset file: a JSON header line, then one JSON record
/// per line. Serialization is canonical, so write(read(m)) is
/// byte-identical.
struct Manifest {
    ManifestHeader header;
    std::vector<ExampleRecord> records;

    std::vector<ExampleRecord> split_records(Split s) const;
};

struct CompoundLabel {
    std::string name;
    std::string parent_a;
    std::string parent_b;
};

/// Default compound set: the registry's eleven, parents from the registry.
std::vector<CompoundLabel> default_compound_labels();

struct SynthSpec {
    std::size_t d_in = 16;
    std::vector<std::string> basic_labels;    // defaults to basic_emotions()
    std::vector<CompoundLabel> compound_labels; // defaults to default_compound_labels()
    double noise_sigma = 0.05;
    std::size_t examples_per_class = 100;
    std::uint64_t seed = 0;

    static SynthSpec defaults(std::uint64_t seed);
};

/// Seeded synthetic data. Every basic label gets a fixed unit-norm
/// prototype; basic examples are prototype + noise, compound examples
/// the exact midpoint of their parents' prototypes + noise. Splits are
/// 80/10/10 per class (up to rounding), assigned by seeded shuffle.
std::pair<Manifest, Manifest> generate(const SynthSpec& spec);

Manifest read_manifest(std::istream& in, const std::string& source_name);
Manifest read_manifest_file(const std::string& path);
void write_manifest(const Manifest& manifest, std::ostream& out);
std::string manifest_to_string(const Manifest& manifest);
void write_manifest_file(const Manifest& manifest, const std::string& path);

} // namespace slra
