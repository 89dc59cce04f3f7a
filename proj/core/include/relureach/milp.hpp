/* SPDX-License-Identifier: Apache-2.0
 *
 * Copyright 2026 The relureach Authors
 */

#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "relureach/encoder.hpp"
#include "relureach/lpsolve.hpp"
#include "relureach/network.hpp"
#include "relureach/propspec.hpp"

namespace relureach {

enum class VerdictKind { Reachable, Unreachable, Inconclusive };

std::string_view to_string(VerdictKind k);

struct SearchStats
{
    std::size_t nodes = 0;
    std::size_t lp_solves = 0;
    std::size_t pruned = 0;
    std::size_t max_depth = 0;
    std::size_t numerical_failures = 0;
    double wall_seconds = 0.0;
};

struct Verdict
{
    VerdictKind kind = VerdictKind::Inconclusive;
    /// Input-layer values (Reachable only).
    std::optional<Vec> witness;
    /// Epsilon sum of the MILP solution backing the witness (Reachable only).
    double eps_sum = 0.0;
    SearchStats stats;
    /// Why the search was inconclusive, or how the witness was found.
    std::string reason;
};

/// A branch-and-bound node: binary columns fixed to 0 or 1, in fixing order.
struct BnbNode
{
    std::vector<std::pair<std::size_t, double>> fixed;
    std::size_t depth() const noexcept { return fixed.size(); }
};

struct SearchLimits
{
    std::size_t node_cap = 1'000'000;
    double time_cap_seconds = 600.0;
};

enum class ChildOrder {
    /// Dive into the child nearest to the relaxation value first.
    NearestFirst,
    /// Reverse order; used to check that verdicts do not depend on it.
    FarthestFirst,
};

struct DecideOptions
{
    SearchLimits limits;
    Tolerances tol;
    /// C_out slack allowed when replaying a witness through the network.
    double report_tol = 1e-5;
    ChildOrder child_order = ChildOrder::NearestFirst;
    /// Replay every relaxation's input point through the network and stop
    /// as soon as one lands in the output set.
    bool replay_heuristic = true;
    /// Re-propagate interval bounds under each node's fixed phases to fix
    /// implied binaries and tighten big-M constants.
    bool node_tightening = true;
    /// Called for every node pruned because its relaxation is infeasible.
    std::function<void(const BnbNode &, const LpProblem &)> on_prune;
};

/// Depth-first branch and bound over the phase binaries. Reachable verdicts
/// always carry a witness that passed validate_witness; Unreachable is only
/// returned after every leaf was proven infeasible.
Verdict decide(const EncodedProblem & problem, const Network & net, const PropertySpec & spec,
               const DecideOptions & options = {});

/// Relaxation value of one still-free binary.
struct BinaryValue
{
    VarRef ref;
    double value;
};

/// Most fractional binary (ties: lowest layer, then lowest neuron), or
/// nullopt when all are within int_tol of an integer.
std::optional<std::size_t> branch_select(std::span<const BinaryValue> free_binaries, double int_tol);

struct ConstraintSlack
{
    Side side;
    std::size_t index;
    double slack;
};

struct WitnessReport
{
    bool valid = false;
    bool input_ok = false;
    bool output_ok = false;
    /// Per-constraint slack, inputs first; negative means violated.
    std::vector<ConstraintSlack> slacks;
    std::optional<Vec> output;
};

/// Checks candidate against C_in (input_tol) and forward(candidate) against
/// C_out (output_tol).
WitnessReport validate_witness(const Network & net, const PropertySpec & spec, const Vec & candidate,
                               double input_tol, double output_tol);

inline WitnessReport validate_witness(const Network & net, const PropertySpec & spec,
                                      const Vec & candidate, double tol)
{
    return validate_witness(net, spec, candidate, tol, tol);
}

} // namespace relureach
