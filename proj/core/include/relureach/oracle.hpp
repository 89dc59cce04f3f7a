/* SPDX-License-Identifier: Apache-2.0
 *
 * Copyright 2026 The relureach Authors
 */

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "relureach/bounds.hpp"
#include "relureach/milp.hpp"
#include "relureach/network.hpp"
#include "relureach/propspec.hpp"

namespace relureach {

/// Raised when enumeration would exceed the unstable-neuron cap.
class OracleCapError : public Error
{
  public:
    using Error::Error;
};

inline constexpr std::size_t kOracleMaxUnstable = 24;

/// One activation choice per unstable ReLU neuron, ordered by (layer, neuron).
struct PhasePattern
{
    std::vector<bool> active;
};

struct EnumerateOptions
{
    double feas_tol = kOracleFeasTol;
    double report_tol = 1e-5;
    std::size_t max_unstable = kOracleMaxUnstable;
};

/// Decides reachability by solving one pure LP per phase pattern of the
/// unstable neurons: active neurons satisfy x = Wx + b >= 0, inactive ones
/// x = 0 with Wx + b <= 0. Uses neither big-M constants nor eps slacks.
/// `bounds` must come from propagate() over extract_box(C_in).
Verdict enumerate_decide(const Network & net, const PropertySpec & spec,
                         std::span<const LayerBounds> bounds, const EnumerateOptions & options = {});

/// The LP of a single phase pattern (columns: inputs, then every layer's
/// outputs in order). Exposed for tests.
LpProblem pattern_lp(const Network & net, const PropertySpec & spec,
                     std::span<const LayerBounds> bounds, std::span<const Interval> input_box,
                     const PhasePattern & pattern);

struct SampleResult
{
    bool found = false;
    std::optional<Vec> witness;
    std::size_t drawn = 0;
    std::size_t in_input_set = 0;
};

/// Uniform samples from the input box; returns the first sample inside C_in
/// whose image satisfies C_out exactly. Deterministic for a given seed.
SampleResult sample_decide(const Network & net, const PropertySpec & spec, std::size_t n_samples,
                           std::uint64_t seed);

} // namespace relureach
