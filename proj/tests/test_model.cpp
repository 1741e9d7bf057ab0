// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "slra/categories.hpp"
#include "slra/errors.hpp"
#include "slra/model.hpp"
#include "slra/rng.hpp"

using namespace slra;

namespace {

std::vector<double> random_features(std::size_t n, Rng& rng) {
    std::vector<double> v(n);
    for (auto& x : v) x = rng.gaussian(0.0, 1.0);
    return v;
}

} // namespace

TEST_CASE("forward: all-zero weights give all-zero logits") {
    ClassifierNet net = make_net(4, {"a", "b", "c"}, 1, {5, 3});
    for (auto& layer : net.backbone) {
        layer.W0 = Matrix(layer.d_out(), layer.d_in());
        layer.bias = Matrix(layer.d_out(), 1);
    }
    net.head.W0 = Matrix(3, 3);
    net.head.bias = Matrix(3, 1);
    CHECK(forward(net, {1, 2, 3, 4}) == Matrix(3, 1));
}

TEST_CASE("forward: default shapes chain d_in -> 64 -> 32 -> classes") {
    ClassifierNet net = make_net(16, basic_emotions(), 5);
    CHECK(net.backbone.size() == 2);
    CHECK(net.backbone[0].d_in() == 16);
    CHECK(net.backbone[0].d_out() == 64);
    CHECK(net.backbone[1].d_in() == 64);
    CHECK(net.backbone[1].d_out() == 32);
    CHECK(net.head.d_in() == 32);
    CHECK(net.head.d_out() == 7);

    Rng rng(6);
    Matrix logits = forward(net, random_features(16, rng));
    CHECK(logits.rows() == net.active_labels.size());
    CHECK(all_finite(logits));
}

TEST_CASE("forward: fresh adapters leave logits bit-identical") {
    ClassifierNet net = make_net(8, {"x", "y"}, 2, {6, 4});
    Rng rng(3);
    auto features = random_features(8, rng);
    Matrix base = forward(net, features);

    install_adapters(net, 2, 99);
    CHECK(has_adapters(net));
    CHECK(forward(net, features) == base);
}

TEST_CASE("forward: deterministic for fixed seed and input") {
    ClassifierNet a = make_net(8, {"x", "y", "z"}, 7, {6, 4});
    ClassifierNet b = make_net(8, {"x", "y", "z"}, 7, {6, 4});
    Rng rng(4);
    auto features = random_features(8, rng);
    CHECK(forward(a, features) == forward(b, features));
}

TEST_CASE("forward rejects wrong feature count") {
    ClassifierNet net = make_net(8, {"x", "y"}, 2, {6, 4});
    CHECK_THROWS_AS(forward(net, {1, 2, 3}), DimensionError);
}

TEST_CASE("predict: argmax with lowest-index tie break") {
    ClassifierNet net = make_net(2, {"Sadness", "Surprise", "Happiness"}, 1, {2});
    // Zeroed backbone and identity-free head let us pin exact logits via bias.
    net.backbone[0].W0 = Matrix(2, 2);
    net.backbone[0].bias = Matrix(2, 1);
    net.head.W0 = Matrix(3, 2);

    net.head.bias = Matrix::from_rows({{0.1}, {0.9}, {0.2}});
    CHECK(predict(net, {0, 0}) == "Surprise");

    net.head.bias = Matrix::from_rows({{1}, {1}, {0}});
    CHECK(predict(net, {0, 0}) == "Sadness"); // exact tie: first label

    net.head.bias = Matrix(3, 1, 0.5);
    CHECK(predict(net, {0, 0}) == "Sadness"); // uniform: first label
}

TEST_CASE("swap_head: resizes to the new label set and preserves the backbone") {
    ClassifierNet net = make_net(16, basic_emotions(), 11);
    install_adapters(net, 4, 12);
    auto backbone_before = net.backbone;

    swap_head(net, compound_emotions(), 13);
    CHECK(net.head.W0.rows() == 11);
    CHECK(net.head.W0.cols() == 32);
    CHECK(net.head.bias == Matrix(11, 1));
    CHECK(net.active_labels == compound_emotions());
    REQUIRE(net.backbone.size() == backbone_before.size());
    for (std::size_t i = 0; i < net.backbone.size(); ++i) {
        CHECK(net.backbone[i].W0 == backbone_before[i].W0);
        CHECK(net.backbone[i].bias == backbone_before[i].bias);
        CHECK(net.backbone[i].adapter->A == backbone_before[i].adapter->A);
    }
}

TEST_CASE("swap_head to the identical label list still re-initializes") {
    ClassifierNet net = make_net(8, {"x", "y"}, 21, {6, 4});
    Matrix head_before = net.head.W0;
    swap_head(net, {"x", "y"}, 22);
    CHECK(!(net.head.W0 == head_before));
    CHECK(net.head.bias == Matrix(2, 1));
}

TEST_CASE("swap_head rejects duplicate labels") {
    ClassifierNet net = make_net(8, {"x", "y"}, 23, {6, 4});
    CHECK_THROWS_AS(swap_head(net, {"a", "a"}, 24), ContractError);
    CHECK_THROWS_AS(swap_head(net, {}, 24), ContractError);
}

TEST_CASE("predict never leaves the active label set") {
    ClassifierNet net = make_net(8, {"left", "right", "middle"}, 31, {6, 4});
    Rng rng(32);
    for (int i = 0; i < 40; ++i) {
        std::string label = predict(net, random_features(8, rng));
        bool member = label == "left" || label == "right" || label == "middle";
        CHECK(member);
    }
}

TEST_CASE("graph forward matches plain forward bitwise on a full net") {
    ClassifierNet net = make_net(8, {"x", "y", "z"}, 41, {6, 4});
    install_adapters(net, 3, 42);
    Rng rng(43);
    auto features = random_features(8, rng);

    Tape tape;
    ForwardGraph graph = forward_graph(tape, net, tape.leaf(Matrix::column(features), false),
                                       /*train_head=*/true);
    CHECK(graph.logits->value == forward(net, features));
}
