/* SPDX-License-Identifier: Apache-2.0
 *
 * Copyright 2026 The relureach Authors
 */

#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "relureach/network.hpp"
#include "relureach/numerics.hpp"

namespace relureach {

enum class Phase { AlwaysActive, AlwaysInactive, Unstable };

std::string_view to_string(Phase p);

/// Phase implied by a pre-activation interval.
Phase classify(const Interval & pre_act) noexcept;

/// Interval bounds for one computing layer.
struct LayerBounds
{
    std::vector<Interval> pre_act;
    std::vector<Interval> post_act;
    std::vector<Phase> phase;
    Activation activation = Activation::ReLU;

    std::size_t size() const noexcept { return pre_act.size(); }
    bool is_finite() const noexcept;
    std::size_t unstable_count() const noexcept;
};

/// Sound interval bounds of every neuron over the input box. Each interval
/// also contains the value computed by forward() in double precision, not
/// just the exact real value. Infinite input bounds give infinite intervals;
/// check with is_finite() before deriving big-M constants.
std::vector<LayerBounds> propagate(const Network & net, std::span<const Interval> input_box);

/// One step of propagate(): bounds of `layer` given intervals of its inputs.
LayerBounds propagate_layer(const Layer & layer, std::span<const Interval> in);

/// Phase restriction on one ReLU neuron, as imposed by a branch-and-bound node.
enum class PhaseFix : signed char { Free, Active, Inactive };

/// Bounds from back-substituting linear relaxations of earlier layers down to
/// the input box, intersected with propagate(). Only inputs whose ReLU
/// phases agree with `fixes` (Active: pre-activation >= 0, Inactive: <= 0)
/// are covered; `fixes` is indexed [layer][neuron] and may be empty. An
/// interval with lo > hi means no such input exists.
std::vector<LayerBounds> propagate_linear(const Network & net, std::span<const Interval> input_box,
                                          std::span<const std::vector<PhaseFix>> fixes = {});

/// Number of ReLU neurons whose phase is not fixed by the bounds.
std::size_t unstable_relu_count(std::span<const LayerBounds> bounds);

/// Big-M constants for one neuron. `lower` multiplies delta in
/// x <= Wx + b + lower * delta (must cover -pre_act.lo); `upper` multiplies
/// (1 - delta) in x <= upper * (1 - delta) (must cover pre_act.hi).
struct BigM
{
    double lower;
    double upper;
};

/// Throws UnboundedInputError when the neuron's pre-activation is unbounded.
BigM big_m_for(const LayerBounds & bounds, std::size_t neuron);

} // namespace relureach
