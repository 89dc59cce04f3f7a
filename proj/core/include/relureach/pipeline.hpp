/* SPDX-License-Identifier: Apache-2.0
 *
 * Copyright 2026 The relureach Authors
 */

#pragma once

#include <vector>

#include "relureach/bounds.hpp"
#include "relureach/encoder.hpp"
#include "relureach/milp.hpp"
#include "relureach/network.hpp"
#include "relureach/propspec.hpp"

namespace relureach {

/// Everything derived from (network, property) before the search starts.
struct PreparedQuery
{
    InputBox box;
    std::vector<LayerBounds> bounds;
    EncodedProblem problem;
};

/// extract_box -> propagate -> encode_problem. An empty input box still
/// yields a problem; its contradictory column bounds make the root
/// relaxation infeasible.
PreparedQuery prepare_query(const Network & net, const PropertySpec & spec,
                            const EncodeOptions & options = {});

/// The first two stages of prepare_query: box and bounds, no problem yet.
PreparedQuery prepare_bounds(const Network & net, const PropertySpec & spec);

/// The last stage of prepare_query: fills query.problem.
void encode_query(PreparedQuery & query, const Network & net, const PropertySpec & spec,
                  const EncodeOptions & options = {});

/// Bounds over the box of C_in, as used by prepare_query and the oracle.
std::vector<LayerBounds> input_bounds(const Network & net, const PropertySpec & spec);

} // namespace relureach
