/* SPDX-License-Identifier: Apache-2.0
 *
 * Copyright 2026 The relureach Authors
 */

#include <random>

#include "doctest.h"
#include "relureach/oracle.hpp"
#include "relureach/pipeline.hpp"
#include "test_support.hpp"

using namespace relureach;

namespace {

PropertySpec abs_spec(Relation rel, double c)
{
    return testing::make_spec({{-1, 1}}, {LinConstraint(Side::Output, {{0, 1.0}}, rel, c)});
}

} // namespace

TEST_CASE("enumerate_decide examples")
{
    const Network net = testing::abs_net();
    {
        const PropertySpec spec = abs_spec(Relation::GreaterEq, 0.5);
        const Verdict v = enumerate_decide(net, spec, input_bounds(net, spec));
        REQUIRE(v.kind == VerdictKind::Reachable);
        REQUIRE(v.witness);
        CHECK(validate_witness(net, spec, *v.witness, 0.0, 1e-5).valid);
    }
    {
        const PropertySpec spec = abs_spec(Relation::LessEq, -0.5);
        CHECK(enumerate_decide(net, spec, input_bounds(net, spec)).kind == VerdictKind::Unreachable);
    }
    {
        const PropertySpec spec = abs_spec(Relation::GreaterEq, 1.5);
        CHECK(enumerate_decide(net, spec, input_bounds(net, spec)).kind == VerdictKind::Unreachable);
    }
}

TEST_CASE("enumerate_decide: pattern count cap")
{
    const Network net = testing::identity_relu_net(5);
    const PropertySpec spec = testing::make_spec(std::vector<Interval>(5, Interval{-1, 1}),
                                                 {LinConstraint(Side::Output, {{0, 1.0}}, Relation::GreaterEq, 0.5)});
    EnumerateOptions opt;
    opt.max_unstable = 4;
    CHECK_THROWS_AS(enumerate_decide(net, spec, input_bounds(net, spec), opt), OracleCapError);
    opt.max_unstable = 5;
    CHECK(enumerate_decide(net, spec, input_bounds(net, spec), opt).kind == VerdictKind::Reachable);
}

TEST_CASE("pattern_lp: the active pattern of the absolute value net")
{
    const Network net = testing::abs_net();
    const PropertySpec spec = abs_spec(Relation::GreaterEq, 0.5);
    const auto bounds = input_bounds(net, spec);
    const std::vector<Interval> box{{-1, 1}};
    // First neuron active, second inactive: x in [0.5, 1].
    const LpSolution s = solve(pattern_lp(net, spec, bounds, box, PhasePattern{{true, false}}));
    REQUIRE(s.status == LpStatus::Optimal);
    CHECK(s.point[0] >= 0.5 - 1e-7);
    // Both active forces x >= 0 and -x >= 0, so |x| = 0 < 0.5.
    CHECK(solve(pattern_lp(net, spec, bounds, box, PhasePattern{{true, true}})).status == LpStatus::Infeasible);
}

TEST_CASE("sample_decide examples")
{
    const Network net = testing::abs_net();
    const SampleResult hit = sample_decide(net, abs_spec(Relation::GreaterEq, 0.5), 1000, 1);
    CHECK(hit.found);
    REQUIRE(hit.witness);
    CHECK(std::abs((*hit.witness)[0]) >= 0.5);
    const SampleResult miss = sample_decide(net, abs_spec(Relation::LessEq, -0.5), 1000, 1);
    CHECK_FALSE(miss.found);
    CHECK(miss.drawn == 1000);
    CHECK(miss.in_input_set == 1000);

    const SampleResult again = sample_decide(net, abs_spec(Relation::GreaterEq, 0.5), 1000, 1);
    CHECK(again.drawn == hit.drawn);
    CHECK(*again.witness == *hit.witness);

    PropertySpec open;
    open.output_constraints = abs_spec(Relation::GreaterEq, 0.5).output_constraints;
    CHECK_THROWS_AS(sample_decide(net, open, 10, 1), UnboundedInputError);
}

TEST_CASE("property: sampling never finds a witness the enumeration rules out")
{
    std::mt19937_64 rng(41);
    std::size_t unreachable = 0;
    for (int trial = 0; trial < 150; ++trial) {
        testing::RandomNetConfig cfg;
        cfg.input_dim = 1 + rng() % 3;
        cfg.hidden = {2 + rng() % 3, 2 + rng() % 3};
        const Network net = testing::random_network(rng, cfg);
        const auto box = testing::random_box(rng, cfg.input_dim);
        const PropertySpec spec = testing::make_spec(box, {testing::random_output_halfspace(rng, net, box)});
        const Verdict v = enumerate_decide(net, spec, input_bounds(net, spec));
        if (v.kind == VerdictKind::Reachable) {
            CHECK(validate_witness(net, spec, *v.witness, 0.0, 1e-5).valid);
            continue;
        }
        REQUIRE(v.kind == VerdictKind::Unreachable);
        ++unreachable;
        CHECK_FALSE(sample_decide(net, spec, 2000, trial).found);
    }
    CHECK(unreachable > 10);
}
