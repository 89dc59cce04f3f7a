/* SPDX-License-Identifier: Apache-2.0
 *
 * Copyright 2026 The relureach Authors
 */

#include <cmath>
#include <random>

#include "doctest.h"
#include "relureach/lpsolve.hpp"

using namespace relureach;

TEST_CASE("solve examples")
{
    SUBCASE("contradictory bounds via rows")
    {
        LpProblem lp;
        lp.add_column(-kInf, kInf);
        lp.add_row({{{0, 1.0}}, Relation::GreaterEq, 1.0});
        lp.add_row({{{0, 1.0}}, Relation::LessEq, 0.0});
        CHECK(solve(lp).status == LpStatus::Infeasible);
    }
    SUBCASE("minimize x over [-3, 5]")
    {
        LpProblem lp;
        lp.add_column(-3.0, 5.0, 1.0);
        const LpSolution s = solve(lp);
        REQUIRE(s.status == LpStatus::Optimal);
        CHECK(s.point[0] == doctest::Approx(-3.0));
        CHECK(s.objective == doctest::Approx(-3.0));
    }
    SUBCASE("two variables, equality")
    {
        // min -x - y  s.t.  x + y = 1, x, y in [0, 1]
        LpProblem lp;
        lp.add_column(0, 1, -1);
        lp.add_column(0, 1, -1);
        lp.add_row({{{0, 1.0}, {1, 1.0}}, Relation::Equal, 1.0});
        const LpSolution s = solve(lp);
        REQUIRE(s.status == LpStatus::Optimal);
        CHECK(s.objective == doctest::Approx(-1.0));
        CHECK(s.point[0] + s.point[1] == doctest::Approx(1.0));
    }
    SUBCASE("unbounded")
    {
        LpProblem lp;
        lp.add_column(0, kInf, -1);
        lp.add_row({{{0, 1.0}}, Relation::GreaterEq, 2.0});
        CHECK(solve(lp).status == LpStatus::Unbounded);
    }
    SUBCASE("lower above upper")
    {
        LpProblem lp;
        lp.add_column(1, 0);
        CHECK(solve(lp).status == LpStatus::Infeasible);
    }
    SUBCASE("empty contradictory row")
    {
        LpProblem lp;
        lp.add_column(0, 1);
        lp.add_row({{}, Relation::GreaterEq, 1.0});
        CHECK(solve(lp).status == LpStatus::Infeasible);
    }
}

TEST_CASE("iteration limit yields a numerical failure")
{
    LpProblem lp;
    for (int j = 0; j < 6; ++j) lp.add_column(0, kInf, -1.0 - j);
    for (int i = 0; i < 6; ++i) {
        LpRow r;
        for (int j = 0; j < 6; ++j) r.terms.emplace_back(j, 1.0 + ((i + j) % 3));
        r.rhs = 10.0 + i;
        lp.add_row(r);
    }
    SimplexOptions opt;
    opt.max_iterations = 1;
    CHECK(solve(lp, {}, opt).status == LpStatus::NumericalFailure);
    CHECK(solve(lp).status == LpStatus::Optimal);
}

namespace {

LpProblem random_lp(std::mt19937_64 & rng, std::size_t n, std::size_t m)
{
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    LpProblem lp;
    std::vector<double> x0(n);
    for (std::size_t j = 0; j < n; ++j) {
        const double lo = -1.0 - std::abs(u(rng));
        const double hi = 1.0 + std::abs(u(rng));
        lp.add_column(lo, hi, u(rng));
        x0[j] = 0.5 * u(rng);
    }
    // Rows through a known interior-ish point so most problems are feasible.
    for (std::size_t i = 0; i < m; ++i) {
        LpRow r;
        double lhs = 0;
        for (std::size_t j = 0; j < n; ++j) {
            if (rng() % 3 == 0) continue;
            const double c = u(rng);
            r.terms.emplace_back(j, c);
            lhs += c * x0[j];
        }
        const int kind = static_cast<int>(rng() % 3);
        r.relation = kind == 0 ? Relation::LessEq : kind == 1 ? Relation::GreaterEq : Relation::Equal;
        const double gap = kind == 2 ? 0.0 : std::abs(u(rng)) * 0.3;
        r.rhs = kind == 0 ? lhs + gap : kind == 1 ? lhs - gap : lhs;
        if (rng() % 10 == 0) r.rhs += kind == 1 ? 50.0 : -50.0; // occasionally infeasible
        lp.add_row(r);
    }
    return lp;
}

} // namespace

TEST_CASE("property: optimal points are feasible and no sampled feasible point beats them")
{
    std::mt19937_64 rng(7);
    const Tolerances tol;
    std::size_t optimal = 0, infeasible = 0;
    for (int trial = 0; trial < 300; ++trial) {
        const std::size_t n = 2 + rng() % 6;
        const LpProblem lp = random_lp(rng, n, 1 + rng() % 6);
        const LpSolution s = solve(lp, tol);
        REQUIRE(s.status != LpStatus::NumericalFailure);
        if (s.status == LpStatus::Infeasible) {
            ++infeasible;
            continue;
        }
        REQUIRE(s.status == LpStatus::Optimal);
        ++optimal;
        CHECK(max_violation(lp, s.point) <= tol.feas_tol);
        CHECK(s.max_violation <= tol.feas_tol);

        std::uniform_real_distribution<double> u(0.0, 1.0);
        for (int k = 0; k < 200; ++k) {
            std::vector<double> y(n);
            for (std::size_t j = 0; j < n; ++j) y[j] = lp.lower[j] + u(rng) * (lp.upper[j] - lp.lower[j]);
            if (max_violation(lp, y) > 0) continue;
            double obj = 0;
            for (std::size_t j = 0; j < n; ++j) obj += lp.objective[j] * y[j];
            CHECK(obj >= s.objective - 1e-7);
        }
    }
    CHECK(optimal > 100);
    CHECK(infeasible > 0);
}

TEST_CASE("property: infeasibility agrees with a dense feasibility search")
{
    // A 1-D system of random bounds is infeasible exactly when the
    // tightest lower bound exceeds the tightest upper bound.
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(-5, 5);
    for (int trial = 0; trial < 500; ++trial) {
        LpProblem lp;
        lp.add_column(-kInf, kInf);
        double lo = -kInf, hi = kInf;
        for (int i = 0; i < 4; ++i) {
            const double c = (rng() % 2 ? 1.0 : -1.0) * (0.5 + std::abs(u(rng)));
            const double rhs = u(rng);
            lp.add_row({{{0, c}}, Relation::LessEq, rhs});
            if (c > 0) hi = std::min(hi, rhs / c);
            else lo = std::max(lo, rhs / c);
        }
        const LpStatus st = solve(lp).status;
        if (lo > hi + 1e-6) CHECK(st == LpStatus::Infeasible);
        else if (lo < hi - 1e-6) CHECK(st == LpStatus::Optimal);
    }
}

TEST_CASE("property: solve is deterministic")
{
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 50; ++trial) {
        const LpProblem lp = random_lp(rng, 5, 5);
        const LpSolution a = solve(lp);
        const LpSolution b = solve(lp);
        CHECK(a.status == b.status);
        CHECK(a.point == b.point);
        CHECK(a.iterations == b.iterations);
    }
}
