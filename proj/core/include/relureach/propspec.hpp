/* SPDX-License-Identifier: Apache-2.0
 *
 * Copyright 2026 The relureach Authors
 */

#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "relureach/numerics.hpp"

namespace relureach {

enum class Relation { LessEq, GreaterEq, Equal };

std::string_view to_string(Relation r);

/// Which variable space a constraint lives in: in[i] or out[j].
enum class Side { Input, Output };

struct Term
{
    std::size_t index;
    double coeff;

    friend bool operator==(const Term &, const Term &) = default;
};

/// sum(coeff * var) <relation> rhs over one side's variables. Terms keep the
/// order in which they were written; repeated variables are merged.
class LinConstraint
{
  public:
    LinConstraint(Side side, std::vector<Term> terms, Relation relation, double rhs);

    Side side() const noexcept { return side_; }
    const std::vector<Term> & terms() const noexcept { return terms_; }
    Relation relation() const noexcept { return relation_; }
    double rhs() const noexcept { return rhs_; }

    /// Largest variable index referenced.
    std::size_t max_index() const noexcept;

    /// Left-hand side value at point.
    double lhs(std::span<const double> point) const;

    /// Signed slack at point: >= 0 when satisfied, negative by the amount of
    /// violation otherwise. Equalities report -|lhs - rhs|.
    double slack(std::span<const double> point) const;

    friend bool operator==(const LinConstraint &, const LinConstraint &) = default;

  private:
    Side side_;
    std::vector<Term> terms_;
    Relation relation_;
    double rhs_;
};

/// Input set and searched-for output set of a reachability query. An empty
/// list stands for the whole space.
struct PropertySpec
{
    std::vector<LinConstraint> input_constraints;
    std::vector<LinConstraint> output_constraints;

    friend bool operator==(const PropertySpec &, const PropertySpec &) = default;
};

/// Optional dimensions used to reject out-of-range indices while parsing.
struct VariableRanges
{
    std::optional<std::size_t> input_dim;
    std::optional<std::size_t> output_dim;
};

/// One constraint per line: `<expr> (<=|>=|=) <number>` where expr is a sum
/// of `[coef*]in[i]` / `[coef*]out[j]` terms. `#` starts a comment.
PropertySpec parse_property(std::string_view text, const VariableRanges & ranges = {});
PropertySpec load_property(const std::string & path, const VariableRanges & ranges = {});

std::string format_constraint(const LinConstraint & c);
std::string format_property(const PropertySpec & spec);

/// Throws DimensionError if any constraint refers past dim.
void check_indices(std::span<const LinConstraint> constraints, std::size_t dim);

/// True iff every constraint holds within additive tolerance tol.
bool check_membership(std::span<const LinConstraint> constraints, std::span<const double> point,
                      double tol);
bool check_membership(std::span<const LinConstraint> constraints, const Vec & point, double tol);

/// Per-variable bounds implied by single-variable constraints.
struct InputBox
{
    std::vector<Interval> intervals;
    /// Set when some variable has lower > upper.
    bool infeasible = false;
    std::optional<std::size_t> conflicting_index;

    bool is_finite() const noexcept;
};

/// Tightest box implied by the single-variable constraints in C_in; other
/// constraints are ignored, so the box over-approximates the input set.
InputBox extract_box(std::span<const LinConstraint> constraints, std::size_t dim);

} // namespace relureach
