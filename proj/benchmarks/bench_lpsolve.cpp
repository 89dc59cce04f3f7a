/* SPDX-License-Identifier: Apache-2.0
 *
 * Copyright 2026 The relureach Authors
 */

#include <random>

#include <benchmark/benchmark.h>

#include "relureach/lpsolve.hpp"

using namespace relureach;

namespace {

/// Random bounded LP with `n` columns in [-1, 1] and `m` <= rows whose
/// right-hand sides keep the origin feasible.
LpProblem random_lp(std::size_t n, std::size_t m, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    LpProblem p;
    for (std::size_t j = 0; j < n; ++j) p.add_column(-1.0, 1.0, unit(rng));
    for (std::size_t i = 0; i < m; ++i) {
        LpRow row;
        for (std::size_t j = 0; j < n; ++j) row.terms.emplace_back(j, unit(rng));
        row.relation = Relation::LessEq;
        row.rhs = 0.1 + 0.9 * (unit(rng) + 1.0) / 2.0;
        p.add_row(std::move(row));
    }
    return p;
}

void BM_SolveDense(benchmark::State & state)
{
    const auto n = static_cast<std::size_t>(state.range(0));
    const LpProblem p = random_lp(n, n, 42);
    for (auto _ : state) benchmark::DoNotOptimize(solve(p));
    state.SetComplexityN(state.range(0));
}

} // namespace

BENCHMARK(BM_SolveDense)->RangeMultiplier(2)->Range(8, 128)->Complexity();

BENCHMARK_MAIN();
