/* SPDX-License-Identifier: Apache-2.0
 *
 * Copyright 2026 The relureach Authors
 */

#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "relureach/numerics.hpp"
#include "relureach/propspec.hpp"

namespace relureach {

/// Sparse row: sum(coeff * x[col]) <relation> rhs.
struct LpRow
{
    std::vector<std::pair<std::size_t, double>> terms;
    Relation relation = Relation::LessEq;
    double rhs = 0.0;
};

/// minimize objective . x  subject to rows and lower <= x <= upper.
/// Bounds may be infinite.
struct LpProblem
{
    std::vector<double> objective;
    std::vector<double> lower;
    std::vector<double> upper;
    std::vector<LpRow> rows;

    std::size_t num_cols() const noexcept { return objective.size(); }

    /// Appends a column and returns its index.
    std::size_t add_column(double lo, double hi, double cost = 0.0);
    void add_row(LpRow row) { rows.push_back(std::move(row)); }

    /// Throws Error on inconsistent sizes or non-finite data.
    void validate() const;
};

enum class LpStatus { Optimal, Infeasible, Unbounded, NumericalFailure };

std::string_view to_string(LpStatus s);

struct LpSolution
{
    LpStatus status = LpStatus::NumericalFailure;
    /// Primal point, one entry per column (Optimal only).
    std::vector<double> point;
    double objective = 0.0;
    std::size_t iterations = 0;
    /// Largest row or bound violation of point, measured outside the solver.
    double max_violation = 0.0;
};

struct SimplexOptions
{
    /// 0 selects a limit proportional to the problem size.
    std::size_t max_iterations = 0;
    /// Pivots per phase before switching from Dantzig pricing to Bland's
    /// rule; 0 selects a size-based threshold.
    std::size_t bland_after = 0;
};

/// Bounded-variable primal simplex on a dense tableau. Deterministic: the
/// same problem always yields the same pivots and the same point.
LpSolution solve(const LpProblem & problem, const Tolerances & tol = {},
                 const SimplexOptions & options = {});

/// Largest violation of any row or column bound at point.
double max_violation(const LpProblem & problem, std::span<const double> point);

} // namespace relureach
