// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <map>
#include <sstream>

#include "slra/categories.hpp"
#include "slra/dataset.hpp"
#include "slra/errors.hpp"

using namespace slra;

TEST_CASE("generate: zero noise pins every example to its prototype or blend") {
    SynthSpec spec = SynthSpec::defaults(5);
    spec.noise_sigma = 0.0;
    spec.examples_per_class = 4;
    auto [basic, compound] = generate(spec);

    std::map<std::string, std::vector<double>> prototype;
    for (const auto& r : basic.records) {
        auto [it, fresh] = prototype.emplace(r.label, r.features);
        if (!fresh) CHECK(r.features == it->second);
    }
    // Prototypes are unit-norm.
    for (const auto& [label, p] : prototype) {
        double norm_sq = 0.0;
        for (double v : p) norm_sq += v * v;
        CHECK(norm_sq == doctest::Approx(1.0).epsilon(1e-12));
    }

    // Compound examples sit at the exact midpoint of their parents.
    for (const auto& r : compound.records) {
        auto [a, b] = compound_parents(r.label);
        for (std::size_t i = 0; i < r.features.size(); ++i) {
            double mid = 0.5 * prototype.at(a)[i] + 0.5 * prototype.at(b)[i];
            CHECK(std::fabs(r.features[i] - mid) <= 1e-12);
        }
    }
}

TEST_CASE("generate: same seed gives byte-identical manifests") {
    SynthSpec spec = SynthSpec::defaults(77);
    spec.examples_per_class = 6;
    auto [b1, c1] = generate(spec);
    auto [b2, c2] = generate(spec);
    CHECK(manifest_to_string(b1) == manifest_to_string(b2));
    CHECK(manifest_to_string(c1) == manifest_to_string(c2));

    spec.seed = 78;
    auto [b3, c3] = generate(spec);
    CHECK(manifest_to_string(b1) != manifest_to_string(b3));
}

TEST_CASE("generate: nearest-prototype oracle classifies basic examples >= 99%") {
    SynthSpec spec = SynthSpec::defaults(11);
    spec.noise_sigma = 0.05;
    auto [basic, compound] = generate(spec);

    // Recover prototypes from a zero-noise run of the same seed.
    SynthSpec clean = spec;
    clean.noise_sigma = 0.0;
    clean.examples_per_class = 1;
    auto [basic_clean, compound_clean] = generate(clean);
    std::map<std::string, std::vector<double>> prototype;
    for (const auto& r : basic_clean.records) prototype[r.label] = r.features;

    std::size_t correct = 0;
    for (const auto& r : basic.records) {
        std::string best;
        double best_dist = 0.0;
        for (const auto& [label, p] : prototype) {
            double dist = 0.0;
            for (std::size_t i = 0; i < p.size(); ++i) {
                double d = r.features[i] - p[i];
                dist += d * d;
            }
            if (best.empty() || dist < best_dist) {
                best = label;
                best_dist = dist;
            }
        }
        if (best == r.label) ++correct;
    }
    double accuracy = static_cast<double>(correct) / static_cast<double>(basic.records.size());
    CHECK(accuracy >= 0.99);
}

TEST_CASE("generate: split proportions within +-2 of 80/10/10 per class") {
    SynthSpec spec = SynthSpec::defaults(21);
    spec.examples_per_class = 100;
    auto [basic, compound] = generate(spec);
    for (const Manifest* m : {&basic, &compound}) {
        std::map<std::string, std::map<Split, std::size_t>> counts;
        for (const auto& r : m->records) counts[r.label][r.split] += 1;
        for (const auto& [label, by_split] : counts) {
            auto count = [&](Split s) {
                auto it = by_split.find(s);
                return it == by_split.end() ? std::size_t{0} : it->second;
            };
            CHECK(std::llabs(static_cast<long long>(count(Split::Train)) - 80) <= 2);
            CHECK(std::llabs(static_cast<long long>(count(Split::Val)) - 10) <= 2);
            CHECK(std::llabs(static_cast<long long>(count(Split::Test)) - 10) <= 2);
        }
    }
}

TEST_CASE("generate rejects a compound parent outside the basic set") {
    SynthSpec spec = SynthSpec::defaults(1);
    spec.compound_labels.push_back({"Oddly Mixed", "Happiness", "Boredom"});
    CHECK_THROWS_AS(generate(spec), ContractError);
}

TEST_CASE("generate rejects degenerate settings") {
    SynthSpec spec = SynthSpec::defaults(1);
    spec.examples_per_class = 0;
    CHECK_THROWS_AS(generate(spec), ContractError);

    spec = SynthSpec::defaults(1);
    spec.noise_sigma = -0.5;
    CHECK_THROWS_AS(generate(spec), ContractError);
}

TEST_CASE("read_manifest: empty body under a valid header is an empty list") {
    std::istringstream in(R"({"dimension":4,"labels":["a","b"],"version":1})" "\n");
    Manifest m = read_manifest(in, "test");
    CHECK(m.records.empty());
    CHECK(m.header.dimension == 4);
    CHECK(m.header.labels == std::vector<std::string>{"a", "b"});
}

TEST_CASE("read_manifest: wrong feature count names the record") {
    std::istringstream in(
        "{\"dimension\":3,\"labels\":[\"a\"],\"version\":1}\n"
        "{\"features\":[1.0,2.0],\"id\":\"bad_rec\",\"label\":\"a\",\"split\":\"train\"}\n");
    CHECK_THROWS_WITH_AS(read_manifest(in, "test"), doctest::Contains("bad_rec"),
                         ValidationError);
}

TEST_CASE("read_manifest: label outside the declared set names the record") {
    std::istringstream in(
        "{\"dimension\":1,\"labels\":[\"a\"],\"version\":1}\n"
        "{\"features\":[1.0],\"id\":\"r1\",\"label\":\"zz\",\"split\":\"train\"}\n");
    CHECK_THROWS_WITH_AS(read_manifest(in, "test"), doctest::Contains("r1"), ValidationError);
}

TEST_CASE("read_manifest: malformed line reports its line number") {
    std::istringstream in(
        "{\"dimension\":1,\"labels\":[\"a\"],\"version\":1}\n"
        "{\"features\":[1.0],\"id\":\"r1\",\"label\":\"a\",\"split\":\"train\"}\n"
        "not json at all\n");
    CHECK_THROWS_WITH_AS(read_manifest(in, "test"), doctest::Contains(":3"), ParseError);

    std::istringstream empty("");
    CHECK_THROWS_AS(read_manifest(empty, "test"), ParseError);
}

TEST_CASE("manifest round-trip is byte-identical") {
    SynthSpec spec = SynthSpec::defaults(31);
    spec.examples_per_class = 5;
    auto [basic, compound] = generate(spec);

    for (const Manifest* m : {&basic, &compound}) {
        std::string once = manifest_to_string(*m);
        std::istringstream in(once);
        Manifest reread = read_manifest(in, "roundtrip");
        CHECK(manifest_to_string(reread) == once);
        CHECK(reread.records.size() == m->records.size());
    }
}

TEST_CASE("split_records filters and preserves order") {
    SynthSpec spec = SynthSpec::defaults(41);
    spec.examples_per_class = 10;
    auto [basic, compound] = generate(spec);
    auto train = basic.split_records(Split::Train);
    auto val = basic.split_records(Split::Val);
    auto test = basic.split_records(Split::Test);
    CHECK(train.size() + val.size() + test.size() == basic.records.size());
    for (const auto& r : train) CHECK(r.split == Split::Train);
}
