/* SPDX-License-Identifier: Apache-2.0
 *
 * Copyright 2026 The relureach Authors
 */

#include <cmath>
#include <random>

#include "doctest.h"
#include "relureach/milp.hpp"
#include "relureach/pipeline.hpp"
#include "test_support.hpp"

using namespace relureach;

namespace {

PropertySpec abs_spec(Relation rel, double c)
{
    return testing::make_spec({{-1, 1}}, {LinConstraint(Side::Output, {{0, 1.0}}, rel, c)});
}

Verdict run(const Network & net, const PropertySpec & spec, const DecideOptions & opt = {})
{
    const PreparedQuery q = prepare_query(net, spec);
    return decide(q.problem, net, spec, opt);
}

} // namespace

TEST_CASE("decide examples")
{
    const Network net = testing::abs_net();
    {
        const Verdict v = run(net, abs_spec(Relation::GreaterEq, 0.5));
        REQUIRE(v.kind == VerdictKind::Reachable);
        REQUIRE(v.witness);
        CHECK(std::abs((*v.witness)[0]) >= 0.5 - 1e-5);
        CHECK(v.eps_sum <= kDefaultEpsBudget);
    }
    CHECK(run(net, abs_spec(Relation::GreaterEq, 1.5)).kind == VerdictKind::Unreachable);
    CHECK(run(net, abs_spec(Relation::LessEq, -0.5)).kind == VerdictKind::Unreachable);
    {
        // The maximum 1 is attained at the box corners.
        const Verdict v = run(net, abs_spec(Relation::GreaterEq, 1.0));
        REQUIRE(v.kind == VerdictKind::Reachable);
        CHECK(std::abs((*v.witness)[0]) == 1.0);
    }
}

TEST_CASE("decide: empty input set is unreachable")
{
    const Network net = testing::abs_net();
    PropertySpec spec = abs_spec(Relation::GreaterEq, 0.0);
    spec.input_constraints.emplace_back(Side::Input, std::vector<Term>{{0, 1.0}}, Relation::GreaterEq, 2.0);
    CHECK(run(net, spec).kind == VerdictKind::Unreachable);
}

TEST_CASE("decide: limits give inconclusive verdicts")
{
    const Network net = testing::identity_relu_net(6);
    std::vector<LinConstraint> out;
    for (std::size_t i = 0; i < 6; ++i) out.emplace_back(Side::Output, std::vector<Term>{{i, 1.0}}, Relation::GreaterEq, 2.0);
    const PropertySpec spec = testing::make_spec(std::vector<Interval>(6, Interval{-1, 1}), out);
    DecideOptions opt;
    opt.limits.node_cap = 0;
    const Verdict v = run(net, spec, opt);
    CHECK(v.kind == VerdictKind::Inconclusive);
    CHECK_FALSE(v.reason.empty());
    CHECK_FALSE(v.witness);
    opt.limits = {};
    CHECK(run(net, spec, opt).kind == VerdictKind::Unreachable);
}

TEST_CASE("branch_select examples")
{
    const VarRef a{2, VarKind::PhaseBinary, 0}, b{2, VarKind::PhaseBinary, 1}, c{3, VarKind::PhaseBinary, 0};
    {
        const std::vector<BinaryValue> v{{a, 0.5}, {b, 0.9}};
        CHECK(branch_select(v, 1e-6) == 0);
    }
    {
        const std::vector<BinaryValue> v{{c, 0.5}, {a, 0.5}};
        CHECK(branch_select(v, 1e-6) == 1);
    }
    {
        const std::vector<BinaryValue> v{{a, 1.0}, {b, 1e-7}, {c, 1.0 - 1e-7}};
        CHECK_FALSE(branch_select(v, 1e-6));
    }
    CHECK_FALSE(branch_select({}, 1e-6));
}

TEST_CASE("validate_witness examples")
{
    const Network net = testing::abs_net();
    const PropertySpec spec = abs_spec(Relation::GreaterEq, 0.5);
    {
        const WitnessReport r = validate_witness(net, spec, Vec{0.7}, 1e-5);
        CHECK(r.valid);
        CHECK((*r.output)[0] == doctest::Approx(0.7));
    }
    {
        const WitnessReport r = validate_witness(net, spec, Vec{0.3}, 1e-5);
        CHECK_FALSE(r.valid);
        CHECK(r.input_ok);
        CHECK_FALSE(r.output_ok);
        REQUIRE(r.slacks.size() == 3);
        CHECK(r.slacks[2].side == Side::Output);
        CHECK(r.slacks[2].slack == doctest::Approx(-0.2));
    }
    {
        const WitnessReport r = validate_witness(net, spec, Vec{2.0}, 1e-5);
        CHECK_FALSE(r.valid);
        CHECK_FALSE(r.input_ok);
        CHECK(r.slacks[1].side == Side::Input);
        CHECK(r.slacks[1].slack == doctest::Approx(-1.0));
    }
    CHECK_THROWS_AS(validate_witness(net, spec, Vec{1.0, 2.0}, 1e-5), DimensionError);
}

TEST_CASE("property: ReLU outputs never go below zero")
{
    std::mt19937_64 rng(50);
    for (int trial = 0; trial < 50; ++trial) {
        testing::RandomNetConfig cfg;
        cfg.input_dim = 1 + rng() % 3;
        cfg.hidden = {2 + rng() % 4};
        cfg.output_dim = 1 + rng() % 3;
        cfg.output_activation = Activation::ReLU;
        const Network net = testing::random_network(rng, cfg);
        const auto box = testing::random_box(rng, cfg.input_dim);
        const PropertySpec spec = testing::make_spec(box, {LinConstraint(Side::Output, {{0, 1.0}}, Relation::LessEq, -0.1)});
        CHECK(run(net, spec).kind == VerdictKind::Unreachable);
    }
}

TEST_CASE("property: depth bound, pruning soundness and order independence")
{
    std::mt19937_64 rng(8);
    std::size_t pruned_checked = 0;
    for (int trial = 0; trial < 120; ++trial) {
        testing::RandomNetConfig cfg;
        cfg.input_dim = 1 + rng() % 3;
        cfg.hidden = {2 + rng() % 4, 2 + rng() % 4};
        cfg.output_dim = 1 + rng() % 2;
        const Network net = testing::random_network(rng, cfg);
        const auto box = testing::random_box(rng, cfg.input_dim);
        const PropertySpec spec = testing::make_spec(box, {testing::random_output_halfspace(rng, net, box)});
        const PreparedQuery q = prepare_query(net, spec);

        DecideOptions opt;
        opt.replay_heuristic = trial % 2 == 0;
        opt.on_prune = [&](const BnbNode & node, const LpProblem & lp) {
            CHECK(node.depth() <= q.problem.binary_count());
            ++pruned_checked;
            CHECK(solve(lp).status == LpStatus::Infeasible);
        };
        const Verdict near = decide(q.problem, net, spec, opt);
        CHECK(near.stats.max_depth <= q.problem.binary_count());

        DecideOptions far;
        far.child_order = ChildOrder::FarthestFirst;
        far.replay_heuristic = false;
        const Verdict other = decide(q.problem, net, spec, far);
        CHECK(near.kind == other.kind);
        for (const Verdict * v : {&near, &other}) {
            if (v->kind != VerdictKind::Reachable) continue;
            CHECK(validate_witness(net, spec, *v->witness, 0.0, 1e-5).valid);
            CHECK(v->eps_sum <= kDefaultEpsBudget);
        }
    }
    CHECK(pruned_checked > 20);
}

TEST_CASE("property: disabling node tightening keeps the verdict")
{
    std::mt19937_64 rng(19);
    for (int trial = 0; trial < 80; ++trial) {
        testing::RandomNetConfig cfg;
        cfg.input_dim = 2;
        cfg.hidden = {3 + rng() % 3, 3 + rng() % 3};
        const Network net = testing::random_network(rng, cfg);
        const auto box = testing::random_box(rng, 2);
        const PropertySpec spec = testing::make_spec(box, {testing::random_output_halfspace(rng, net, box)});
        const PreparedQuery q = prepare_query(net, spec);
        DecideOptions plain;
        plain.node_tightening = false;
        CHECK(decide(q.problem, net, spec).kind == decide(q.problem, net, spec, plain).kind);
    }
}

TEST_CASE("decide is deterministic")
{
    std::mt19937_64 rng(2);
    testing::RandomNetConfig cfg;
    cfg.input_dim = 3;
    cfg.hidden = {6, 6};
    const Network net = testing::random_network(rng, cfg);
    const auto box = testing::random_box(rng, 3);
    const PropertySpec spec = testing::make_spec(box, {testing::random_output_halfspace(rng, net, box)});
    const Verdict a = run(net, spec);
    const Verdict b = run(net, spec);
    CHECK(a.kind == b.kind);
    CHECK(a.witness == b.witness);
    CHECK(a.stats.nodes == b.stats.nodes);
}
