/* SPDX-License-Identifier: Apache-2.0
 *
 * Copyright 2026 The relureach Authors
 */

#include <cmath>
#include <fstream>
#include <random>

#include "doctest.h"
#include "relureach/network.hpp"
#include "test_support.hpp"

using namespace relureach;
using relureach::testing::abs_net;

TEST_CASE("load_network: minimal file")
{
    const std::string text = R"({"input_dim": 2, "layers": [
        {"weights": [[1, 0], [0, 1]], "bias": [0, 0], "activation": "relu"},
        {"weights": [[1, 1]], "bias": [0], "activation": "linear"}]})";
    const std::string path = testing::scratch_path("minimal.json");
    std::ofstream(path) << text;
    const Network net = load_network(path);
    CHECK(net.layer_count() == 3);
    CHECK(net.input_dim() == 2);
    CHECK(net.output_dim() == 1);
    CHECK(net.layers()[0].activation == Activation::ReLU);
    CHECK(net.layers()[1].activation == Activation::Linear);
}

TEST_CASE("load_network: shape mismatch names both layers")
{
    const std::string text = R"({"input_dim": 2, "layers": [
        {"weights": [[1, 0, 0]], "bias": [0], "activation": "relu"}]})";
    try {
        (void)parse_network(text);
        FAIL("expected ShapeError");
    } catch (const ShapeError & e) {
        CHECK(e.first_layer() == 1);
        CHECK(e.second_layer() == 2);
    }

    const std::string deeper = R"({"input_dim": 1, "layers": [
        {"weights": [[1], [2]], "bias": [0, 0], "activation": "relu"},
        {"weights": [[1, 1, 1]], "bias": [0], "activation": "linear"}]})";
    try {
        (void)parse_network(deeper);
        FAIL("expected ShapeError");
    } catch (const ShapeError & e) {
        CHECK(e.first_layer() == 2);
        CHECK(e.second_layer() == 3);
    }
}

TEST_CASE("load_network: 4-16-16-16-2 architecture")
{
    std::mt19937_64 rng(1);
    testing::RandomNetConfig cfg;
    cfg.input_dim = 4;
    cfg.hidden = {16, 16, 16};
    cfg.output_dim = 2;
    const Network generated = testing::random_network(rng, cfg);
    const std::string path = testing::scratch_path("ipcp_shape.json");
    save_network(generated, path);

    const Network net = load_network(path);
    REQUIRE(net.layers().size() == 4);
    for (std::size_t l = 0; l < 3; ++l) {
        CHECK(net.layers()[l].output_dim() == 16);
        CHECK(net.layers()[l].activation == Activation::ReLU);
    }
    CHECK(net.layers()[3].output_dim() == 2);
    CHECK(net.layers()[3].activation == Activation::Linear);
    // Shortest round-trip printing keeps every weight bit-exact.
    for (std::size_t l = 0; l < 4; ++l) {
        CHECK(net.layers()[l].weights == generated.layers()[l].weights);
        CHECK(net.layers()[l].bias == generated.layers()[l].bias);
    }
}

TEST_CASE("parse errors carry location")
{
    try {
        (void)parse_network("{\"input_dim\": 1,\n \"layers\": [ }");
        FAIL("expected ParseError");
    } catch (const ParseError & e) {
        CHECK(e.line() == 2);
    }
    try {
        (void)parse_network(R"({"input_dim": 1, "layers": [{"weights": [[1]], "bias": ["a"], "activation": "relu"}]})");
        FAIL("expected ParseError");
    } catch (const ParseError & e) {
        CHECK(e.field() == "layers[0].bias[0]");
    }
    CHECK_THROWS_AS(parse_network(R"({"input_dim": 1, "layers": [{"weights": [[1]], "bias": [0], "activation": "tanh"}]})"),
                    ParseError);
    CHECK_THROWS_AS(parse_network(R"({"input_dim": 1, "layers": []})"), ParseError);
    CHECK_THROWS_AS(parse_network(R"({"input_dim": 2, "layers": [{"weights": [[1, 2], [3]], "bias": [0, 0], "activation": "relu"}]})"),
                    ParseError);
}

TEST_CASE("non-finite weights are rejected")
{
    // JSON has no literal for infinity; an overflowing literal parses as one.
    CHECK_THROWS_AS(parse_network(R"({"input_dim": 1, "layers": [{"weights": [[1e999]], "bias": [0], "activation": "relu"}]})"),
                    Error);
}

TEST_CASE("forward examples")
{
    {
        std::vector<Layer> layers;
        layers.emplace_back(Mat::from_rows({{1.0}}), Vec{0.0}, Activation::ReLU);
        CHECK(forward(Network(1, std::move(layers)), Vec{-5.0}) == Vec{0.0});
    }
    const Network net = abs_net();
    for (double x : {3.0, -3.0, 0.25, -0.7, 0.0}) {
        CHECK(forward(net, Vec{x}) == Vec{std::abs(x)});
    }
    {
        std::vector<Layer> layers;
        layers.emplace_back(Mat::zeros(2, 3), Vec{0.5, -0.5}, Activation::ReLU);
        const Network bias_only(3, std::move(layers));
        CHECK(forward(bias_only, Vec{1.0, -2.0, 3.0}) == Vec{0.5, 0.0});
    }
    CHECK_THROWS_AS(forward(net, Vec{1.0, 2.0}), DimensionError);
}

TEST_CASE("layer_forward examples")
{
    const Layer id(Mat::identity(2), Vec{0.0, 0.0}, Activation::ReLU);
    CHECK(layer_forward(id, Vec{1.0, -1.0}) == Vec{1.0, 0.0});
    const Layer lin(Mat::from_rows({{2.0, 0.0}}), Vec{1.0}, Activation::Linear);
    CHECK(layer_forward(lin, Vec{3.0, 9.0}) == Vec{7.0});
}

TEST_CASE("property: forward is the fold of layer_forward, ReLU outputs are nonnegative")
{
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 100; ++trial) {
        testing::RandomNetConfig cfg;
        cfg.input_dim = 1 + rng() % 4;
        cfg.hidden = {1 + rng() % 5, 1 + rng() % 5};
        cfg.output_dim = 1 + rng() % 3;
        cfg.output_activation = Activation::ReLU;
        const Network net = testing::random_network(rng, cfg);
        const Vec x = testing::sample_box(rng, std::vector<Interval>(cfg.input_dim, {-3.0, 3.0}));

        Vec folded = x;
        for (const auto & l : net.layers()) {
            folded = layer_forward(l, folded);
            if (l.activation == Activation::ReLU)
                for (double v : folded) CHECK(v >= 0.0);
        }
        CHECK(forward(net, x) == folded);
        const auto trace = forward_trace(net, x);
        CHECK(trace.back() == folded);
    }
}

TEST_CASE("property: forward is locally affine away from activation boundaries")
{
    std::mt19937_64 rng(9);
    int checked = 0;
    for (int trial = 0; trial < 200; ++trial) {
        testing::RandomNetConfig cfg;
        cfg.input_dim = 2;
        cfg.hidden = {4, 4};
        const Network net = testing::random_network(rng, cfg);
        const Vec x = testing::sample_box(rng, {{-1, 1}, {-1, 1}});
        const double h = 1e-4;
        auto at = [&](double a, double b) { return forward(net, Vec{x[0] + a, x[1] + b})[0]; };
        // Central and one-sided differences agree unless a kink is crossed.
        const double d1 = (at(h, 0) - at(0, 0)) / h;
        const double d2 = (at(2 * h, 0) - at(h, 0)) / h;
        const double d3 = (at(0, 0) - at(-h, 0)) / h;
        if (std::abs(d1 - d3) < 1e-7) {
            CHECK(d1 == doctest::Approx(d2).epsilon(1e-7));
            ++checked;
        }
    }
    CHECK(checked > 150);
}

TEST_CASE("network JSON round trip")
{
    const Network net = abs_net();
    const Network back = parse_network(network_to_json(net));
    CHECK(back.layers()[0].weights == net.layers()[0].weights);
    CHECK(back.layers()[1].activation == Activation::Linear);
}
