// SPDX-License-Identifier: Apache-2.0
#include "slra/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>

#include "json.hpp"

#include "slra/categories.hpp"
#include "slra/errors.hpp"
#include "slra/io.hpp"
#include "slra/rng.hpp"

namespace slra {

using nlohmann::json;

std::string split_name(Split s) {
    switch (s) {
    case Split::Train: return "train";
    case Split::Val: return "val";
    case Split::Test: return "test";
    }
    throw ContractError("split_name: bad split value");
}

Split split_from_name(const std::string& name) {
    if (name == "train") return Split::Train;
    if (name == "val") return Split::Val;
    if (name == "test") return Split::Test;
    throw DataError("unknown split '" + name + "'");
}

std::vector<ExampleRecord> Manifest::split_records(Split s) const {
    std::vector<ExampleRecord> out;
    for (const auto& r : records) {
        if (r.split == s) out.push_back(r);
    }
    return out;
}

std::vector<CompoundLabel> default_compound_labels() {
    std::vector<CompoundLabel> out;
    for (const auto& name : compound_emotions()) {
        auto [a, b] = compound_parents(name);
        out.push_back({name, a, b});
    }
    return out;
}

SynthSpec SynthSpec::defaults(std::uint64_t seed) {
    SynthSpec spec;
    spec.basic_labels = basic_emotions();
    spec.compound_labels = default_compound_labels();
    spec.seed = seed;
    return spec;
}

namespace {

std::string record_id(const std::string& label, std::size_t index) {
    std::string id;
    for (char c : label) id.push_back(c == ' ' ? '_' : c);
    char buf[16];
    std::snprintf(buf, sizeof(buf), "_%04zu", index);
    return id + buf;
}

// 80/10/10 allocation (exact up to rounding), order assigned by seeded
// shuffle. A pure per-example draw would miss the per-class proportion
// guarantee.
std::vector<Split> split_tags(std::size_t n, Rng& rng) {
    auto n_train = static_cast<std::size_t>(std::llround(0.8 * static_cast<double>(n)));
    auto n_val = static_cast<std::size_t>(std::llround(0.1 * static_cast<double>(n)));
    n_train = std::min(n_train, n);
    n_val = std::min(n_val, n - n_train);
    std::vector<Split> tags(n, Split::Test);
    std::fill(tags.begin(), tags.begin() + static_cast<std::ptrdiff_t>(n_train), Split::Train);
    std::fill(tags.begin() + static_cast<std::ptrdiff_t>(n_train),
              tags.begin() + static_cast<std::ptrdiff_t>(n_train + n_val), Split::Val);
    rng.shuffle(tags);
    return tags;
}

std::vector<double> noisy(const std::vector<double>& center, double sigma, Rng& rng) {
    std::vector<double> out(center.size());
    for (std::size_t i = 0; i < center.size(); ++i) {
        out[i] = sigma == 0.0 ? center[i] : center[i] + rng.gaussian(0.0, sigma);
    }
    return out;
}

} // namespace

std::pair<Manifest, Manifest> generate(const SynthSpec& spec) {
    if (spec.examples_per_class < 1) {
        throw ContractError("generate: examples_per_class must be >= 1");
    }
    if (spec.noise_sigma < 0.0) {
        throw ContractError("generate: noise_sigma must be >= 0");
    }
    if (spec.basic_labels.empty()) {
        throw ContractError("generate: basic label set is empty");
    }
    std::set<std::string> basic_set(spec.basic_labels.begin(), spec.basic_labels.end());
    for (const auto& c : spec.compound_labels) {
        if (!basic_set.count(c.parent_a) || !basic_set.count(c.parent_b)) {
            throw ContractError("generate: compound '" + c.name +
                                "' has a parent outside the basic label set");
        }
    }

    // Fixed unit-norm prototype per basic label.
    Rng proto_rng(mix_seed(spec.seed, "prototypes"));
    std::vector<std::vector<double>> prototypes;
    for (std::size_t k = 0; k < spec.basic_labels.size(); ++k) {
        std::vector<double> p(spec.d_in);
        double norm_sq = 0.0;
        for (auto& v : p) {
            v = proto_rng.gaussian(0.0, 1.0);
            norm_sq += v * v;
        }
        double norm = std::sqrt(norm_sq);
        for (auto& v : p) v /= norm;
        prototypes.push_back(std::move(p));
    }
    auto prototype_of = [&](const std::string& label) -> const std::vector<double>& {
        for (std::size_t k = 0; k < spec.basic_labels.size(); ++k) {
            if (spec.basic_labels[k] == label) return prototypes[k];
        }
        throw ContractError("generate: no prototype for '" + label + "'");
    };

    Manifest basic;
    basic.header.dimension = spec.d_in;
    basic.header.labels = spec.basic_labels;
    Rng basic_rng(mix_seed(spec.seed, "basic"));
    for (const auto& label : spec.basic_labels) {
        auto tags = split_tags(spec.examples_per_class, basic_rng);
        const auto& proto = prototype_of(label);
        for (std::size_t i = 0; i < spec.examples_per_class; ++i) {
            basic.records.push_back(
                {record_id(label, i), noisy(proto, spec.noise_sigma, basic_rng), label, tags[i]});
        }
    }

    Manifest compound;
    compound.header.dimension = spec.d_in;
    for (const auto& c : spec.compound_labels) compound.header.labels.push_back(c.name);
    Rng compound_rng(mix_seed(spec.seed, "compound"));
    for (const auto& c : spec.compound_labels) {
        const auto& pa = prototype_of(c.parent_a);
        const auto& pb = prototype_of(c.parent_b);
        std::vector<double> blend(spec.d_in);
        for (std::size_t i = 0; i < spec.d_in; ++i) blend[i] = 0.5 * pa[i] + 0.5 * pb[i];
        auto tags = split_tags(spec.examples_per_class, compound_rng);
        for (std::size_t i = 0; i < spec.examples_per_class; ++i) {
            compound.records.push_back(
                {record_id(c.name, i), noisy(blend, spec.noise_sigma, compound_rng), c.name,
                 tags[i]});
        }
    }

    return {std::move(basic), std::move(compound)};
}

namespace {

json header_to_json(const ManifestHeader& h) {
    return json{{"dimension", h.dimension}, {"labels", h.labels}, {"version", h.version}};
}

json record_to_json(const ExampleRecord& r) {
    return json{{"features", r.features},
                {"id", r.id},
                {"label", r.label},
                {"split", split_name(r.split)}};
}

json parse_line(const std::string& line, std::size_t line_no, const std::string& source) {
    json parsed = json::parse(line, nullptr, /*allow_exceptions=*/false);
    if (parsed.is_discarded() || !parsed.is_object()) {
        throw ParseError(source + ":" + std::to_string(line_no) + ": malformed manifest line");
    }
    return parsed;
}

} // namespace

Manifest read_manifest(std::istream& in, const std::string& source_name) {
    std::string line;
    std::size_t line_no = 0;

    Manifest manifest;
    if (!std::getline(in, line)) {
        throw ParseError(source_name + ": empty file, expected a header line");
    }
    ++line_no;
    json header = parse_line(line, line_no, source_name);
    if (!header.contains("dimension") || !header.contains("labels") ||
        !header.contains("version") || !header["dimension"].is_number_unsigned() ||
        !header["labels"].is_array()) {
        throw ParseError(source_name + ":1: header must carry dimension, labels, version");
    }
    manifest.header.dimension = header["dimension"].get<std::size_t>();
    manifest.header.labels = header["labels"].get<std::vector<std::string>>();
    manifest.header.version = header["version"].get<std::uint32_t>();

    std::set<std::string> label_set(manifest.header.labels.begin(),
                                    manifest.header.labels.end());
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        json rec = parse_line(line, line_no, source_name);
        if (!rec.contains("id") || !rec.contains("features") || !rec.contains("label") ||
            !rec.contains("split") || !rec["features"].is_array()) {
            throw ParseError(source_name + ":" + std::to_string(line_no) +
                             ": record must carry id, features, label, split");
        }
        ExampleRecord record;
        record.id = rec["id"].get<std::string>();
        record.features = rec["features"].get<std::vector<double>>();
        record.label = rec["label"].get<std::string>();
        record.split = split_from_name(rec["split"].get<std::string>());
        if (record.features.size() != manifest.header.dimension) {
            throw ValidationError("record '" + record.id + "' has " +
                                  std::to_string(record.features.size()) +
                                  " features, manifest declares " +
                                  std::to_string(manifest.header.dimension));
        }
        if (!label_set.count(record.label)) {
            throw ValidationError("record '" + record.id + "' has label '" + record.label +
                                  "' outside the declared label set");
        }
        manifest.records.push_back(std::move(record));
    }
    return manifest;
}

Manifest read_manifest_file(const std::string& path) {
    std::istringstream in(read_file(path));
    return read_manifest(in, path);
}

void write_manifest(const Manifest& manifest, std::ostream& out) {
    out << header_to_json(manifest.header).dump() << "\n";
    for (const auto& r : manifest.records) {
        out << record_to_json(r).dump() << "\n";
    }
}

std::string manifest_to_string(const Manifest& manifest) {
    std::ostringstream out;
    write_manifest(manifest, out);
    return out.str();
}

void write_manifest_file(const Manifest& manifest, const std::string& path) {
    atomic_write_file(path, manifest_to_string(manifest));
}

} // namespace slra
