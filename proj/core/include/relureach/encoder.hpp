/* SPDX-License-Identifier: Apache-2.0
 *
 * Copyright 2026 The relureach Authors
 */

#pragma once

#include <compare>
#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "relureach/bounds.hpp"
#include "relureach/lpsolve.hpp"
#include "relureach/network.hpp"
#include "relureach/propspec.hpp"

namespace relureach {

/// Kinds of encoding variables. The enumerator order is the column order
/// inside one layer.
enum class VarKind { LayerOut, PhaseBinary, EpsSlack };

/// Names one MILP variable: x^(layer)_neuron, delta^(layer)_neuron or
/// eps^(layer)_neuron. Layer 1 is the input layer.
struct VarRef
{
    std::size_t layer = 1;
    VarKind kind = VarKind::LayerOut;
    std::size_t neuron = 0;

    /// LP-file column name: x<layer>_<neuron>, d<layer>_<neuron>, e<layer>_<neuron>.
    std::string name() const;
    static std::optional<VarRef> from_name(std::string_view name);

    friend auto operator<=>(const VarRef &, const VarRef &) = default;
};

enum class EncodeMode {
    /// Exact layer links; objective 0.
    Exact,
    /// Each affine link gets a slack eps >= 0 on both sides, the objective
    /// minimizes the eps sum and a budget row caps it.
    Epsilon,
};

std::string_view to_string(EncodeMode m);

/// A column of the encoded MILP.
struct Column
{
    VarRef ref;
    double lower = -kInf;
    double upper = kInf;
    bool integer = false;
    double objective = 0.0;

    friend bool operator==(const Column &, const Column &) = default;
};

/// Row of a layer fragment, expressed over variable references.
struct FragmentRow
{
    std::string name;
    std::vector<std::pair<VarRef, double>> terms;
    Relation relation = Relation::LessEq;
    double rhs = 0.0;
};

/// Constraints and new variables encoding a single layer.
struct LayerFragment
{
    std::vector<Column> columns;
    std::vector<FragmentRow> rows;

    std::size_t binary_count() const noexcept;
    std::size_t eps_count() const noexcept;
};

/// Encodes layer `layer_index` (2-based, as in VarRef) reading the outputs
/// of layer_index - 1. Unstable ReLU neurons get the four big-M rows
///   lb:  x >= Wx + b (- eps)          ub:  x <= Wx + b + M_lo d (+ eps)
///   nn:  x >= 0                        off: x <= M_hi (1 - d)
/// with d = 1 selecting the inactive branch. Phase-fixed active neurons and
/// Linear-layer neurons get x = Wx + b (two eps rows in Epsilon mode);
/// phase-fixed inactive neurons get x = 0. When big_m is set it replaces the
/// per-neuron constants and must be at least as large as them.
LayerFragment encode_layer(const Layer & layer, std::size_t layer_index, const LayerBounds & bounds,
                           EncodeMode mode, std::optional<double> big_m = std::nullopt);

struct ProblemRow
{
    std::string name;
    std::vector<std::pair<std::size_t, double>> terms;
    Relation relation = Relation::LessEq;
    double rhs = 0.0;

    friend bool operator==(const ProblemRow &, const ProblemRow &) = default;
};

struct EncodeOptions
{
    EncodeMode mode = EncodeMode::Epsilon;
    double eps_budget = kDefaultEpsBudget;
    /// Global big-M; unset derives per-neuron constants from the bounds.
    std::optional<double> big_m;
};

/// The reachability MILP: C_in over the input columns, every layer's
/// fragment, C_out over the last layer's columns and (Epsilon mode) the
/// budget row sum(eps) <= eps_budget.
struct EncodedProblem
{
    EncodeMode mode = EncodeMode::Epsilon;
    double eps_budget = kDefaultEpsBudget;
    std::vector<Column> columns;
    std::vector<ProblemRow> rows;
    std::map<VarRef, std::size_t> var_index;

    std::optional<std::size_t> column_of(const VarRef & ref) const;

    /// Columns of x^(layer) in neuron order.
    std::vector<std::size_t> layer_columns(std::size_t layer) const;
    std::vector<std::size_t> binary_columns() const;
    std::vector<std::size_t> eps_columns() const;

    std::size_t binary_count() const noexcept;
    std::size_t continuous_count() const noexcept;
    std::size_t last_layer() const noexcept;

    /// LP relaxation: binaries become [0, 1] continuous columns.
    LpProblem relaxation() const;

    /// Sum of eps columns at point.
    double eps_sum(std::span<const double> point) const;

    /// Rebuilds var_index from the columns.
    void reindex();

    /// Structural equality: mode, budget, columns and rows.
    friend bool operator==(const EncodedProblem & a, const EncodedProblem & b)
    {
        return a.mode == b.mode && a.eps_budget == b.eps_budget && a.columns == b.columns
               && a.rows == b.rows;
    }
};

/// Assembles the full problem. `input_box` bounds the input columns and
/// `bounds` must come from propagate() over the same box.
EncodedProblem encode_problem(const Network & net, const PropertySpec & spec,
                              std::span<const Interval> input_box,
                              std::span<const LayerBounds> bounds, const EncodeOptions & options = {});

/// Column values of the exact assignment induced by input x: every layer
/// output from forward evaluation, binaries from the activation signs and
/// zero eps. Feasible for the encoding whenever x lies in the input set and
/// its image in the output set.
std::vector<double> induced_assignment(const EncodedProblem & problem, const Network & net,
                                       const Vec & x);

/// Writes the problem in CPLEX LP text format.
std::string export_lp_file(const EncodedProblem & problem);

/// Reads LP text produced by export_lp_file (and the common subset of the
/// format: Minimize, Subject To, Bounds, Binaries/Generals, End).
EncodedProblem parse_lp_file(std::string_view text);

} // namespace relureach
