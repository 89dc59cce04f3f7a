/* SPDX-License-Identifier: Apache-2.0
 *
 * Copyright 2026 The relureach Authors
 */

#include "relureach/pipeline.hpp"

#include <cmath>

namespace relureach {

namespace {

// Propagation needs lo <= hi. For an empty box any finite stand-in will do:
// the encoded column bounds stay contradictory, so nothing downstream can be
// feasible.
std::vector<Interval> propagation_box(const InputBox & box)
{
    if (!box.infeasible) return box.intervals;
    std::vector<Interval> out = box.intervals;
    for (auto & iv : out) {
        const double anchor = std::isfinite(iv.lo) ? iv.lo : std::isfinite(iv.hi) ? iv.hi : 0.0;
        iv = {anchor, anchor};
    }
    return out;
}

} // namespace

std::vector<LayerBounds> input_bounds(const Network & net, const PropertySpec & spec)
{
    check_indices(spec.input_constraints, net.input_dim());
    const InputBox box = extract_box(spec.input_constraints, net.input_dim());
    return propagate(net, propagation_box(box));
}

PreparedQuery prepare_bounds(const Network & net, const PropertySpec & spec)
{
    check_indices(spec.input_constraints, net.input_dim());
    check_indices(spec.output_constraints, net.output_dim());
    PreparedQuery q;
    q.box = extract_box(spec.input_constraints, net.input_dim());
    q.bounds = propagate(net, propagation_box(q.box));
    return q;
}

void encode_query(PreparedQuery & query, const Network & net, const PropertySpec & spec,
                  const EncodeOptions & options)
{
    query.problem = encode_problem(net, spec, query.box.intervals, query.bounds, options);
}

PreparedQuery prepare_query(const Network & net, const PropertySpec & spec,
                            const EncodeOptions & options)
{
    PreparedQuery q = prepare_bounds(net, spec);
    encode_query(q, net, spec, options);
    return q;
}

} // namespace relureach
