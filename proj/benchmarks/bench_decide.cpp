/* SPDX-License-Identifier: Apache-2.0
 *
 * Copyright 2026 The relureach Authors
 */

#include <cmath>
#include <random>
#include <vector>

#include <benchmark/benchmark.h>

#include "relureach/milp.hpp"
#include "relureach/pipeline.hpp"

using namespace relureach;

namespace {

Network random_network(std::size_t input_dim, const std::vector<std::size_t> & hidden,
                       std::size_t output_dim, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    std::vector<Layer> layers;
    std::size_t fan_in = input_dim;
    auto make_layer = [&](std::size_t width, Activation act) {
        const double s = 1.0 / std::sqrt(static_cast<double>(fan_in));
        std::vector<double> w(width * fan_in);
        for (double & v : w) v = s * unit(rng);
        std::vector<double> b(width);
        for (double & v : b) v = 0.5 * unit(rng);
        layers.emplace_back(Mat(width, fan_in, std::move(w)), Vec(std::move(b)), act);
        fan_in = width;
    };
    for (std::size_t width : hidden) make_layer(width, Activation::ReLU);
    make_layer(output_dim, Activation::Linear);
    return Network(input_dim, std::move(layers));
}

PropertySpec margin_spec(std::size_t input_dim)
{
    PropertySpec spec;
    for (std::size_t i = 0; i < input_dim; ++i) {
        spec.input_constraints.emplace_back(Side::Input, std::vector<Term>{{i, 1.0}}, Relation::GreaterEq, -1.0);
        spec.input_constraints.emplace_back(Side::Input, std::vector<Term>{{i, 1.0}}, Relation::LessEq, 1.0);
    }
    spec.output_constraints.emplace_back(Side::Output, std::vector<Term>{{1, 1.0}, {0, -1.0}}, Relation::GreaterEq, 0.0);
    return spec;
}

void BM_PrepareQuery(benchmark::State & state)
{
    const Network net = random_network(4, {16, 16, 16}, 2, static_cast<std::uint64_t>(state.range(0)));
    const PropertySpec spec = margin_spec(4);
    for (auto _ : state) benchmark::DoNotOptimize(prepare_query(net, spec));
}

void BM_Decide(benchmark::State & state)
{
    const Network net = random_network(4, {16, 16, 16}, 2, static_cast<std::uint64_t>(state.range(0)));
    const PropertySpec spec = margin_spec(4);
    const PreparedQuery q = prepare_query(net, spec);
    std::size_t nodes = 0;
    for (auto _ : state) {
        const Verdict v = decide(q.problem, net, spec);
        nodes = v.stats.nodes;
        benchmark::DoNotOptimize(v);
    }
    state.counters["nodes"] = static_cast<double>(nodes);
    state.counters["binaries"] = static_cast<double>(q.problem.binary_count());
}

} // namespace

BENCHMARK(BM_PrepareQuery)->DenseRange(0, 3);
BENCHMARK(BM_Decide)->DenseRange(0, 3)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
