/* SPDX-License-Identifier: Apache-2.0
 *
 * Copyright 2026 The relureach Authors
 */

#include "relureach/oracle.hpp"

#include <algorithm>
#include <chrono>
#include <random>

namespace relureach {

LpProblem pattern_lp(const Network & net, const PropertySpec & spec,
                     std::span<const LayerBounds> bounds, std::span<const Interval> input_box,
                     const PhasePattern & pattern)
{
    LpProblem lp;
    std::vector<std::size_t> prev;
    for (std::size_t j = 0; j < net.input_dim(); ++j) {
        prev.push_back(lp.add_column(input_box[j].lo, input_box[j].hi));
    }
    for (const auto & c : spec.input_constraints) {
        LpRow row{{}, c.relation(), c.rhs()};
        for (const auto & t : c.terms()) row.terms.emplace_back(prev[t.index], t.coeff);
        lp.add_row(std::move(row));
    }

    std::size_t bit = 0;
    for (std::size_t l = 0; l < net.layers().size(); ++l) {
        const Layer & layer = net.layers()[l];
        std::vector<std::size_t> cur;
        for (std::size_t j = 0; j < layer.output_dim(); ++j) {
            const std::size_t out = lp.add_column(-kInf, kInf);
            cur.push_back(out);

            // W x_prev terms, and the same with x_out for the equality.
            std::vector<std::pair<std::size_t, double>> pre;
            for (std::size_t c = 0; c < layer.input_dim(); ++c) {
                const double w = layer.weights(j, c);
                if (w != 0.0) pre.emplace_back(prev[c], w);
            }
            bool active = true;
            if (layer.activation == Activation::ReLU) {
                switch (bounds[l].phase[j]) {
                case Phase::AlwaysActive: active = true; break;
                case Phase::AlwaysInactive: active = false; break;
                case Phase::Unstable: active = pattern.active.at(bit++); break;
                }
            }
            if (active) {
                auto link = pre;
                for (auto & t : link) t.second = -t.second;
                link.emplace_back(out, 1.0);
                lp.add_row({link, Relation::Equal, layer.bias[j]});
                if (layer.activation == Activation::ReLU && !pre.empty()) {
                    lp.add_row({pre, Relation::GreaterEq, -layer.bias[j]});
                }
            } else {
                lp.add_row({{{out, 1.0}}, Relation::Equal, 0.0});
                if (!pre.empty()) lp.add_row({pre, Relation::LessEq, -layer.bias[j]});
            }
            if (pre.empty()) {
                // Constant neuron; its sign must agree with the chosen phase.
                const bool sign_ok = active ? layer.bias[j] >= 0.0 : layer.bias[j] <= 0.0;
                if (layer.activation == Activation::ReLU && !sign_ok) {
                    lp.add_row({{}, Relation::LessEq, -1.0});
                }
            }
        }
        prev = std::move(cur);
    }
    if (bit != pattern.active.size()) {
        throw DimensionError("phase pattern", bit, pattern.active.size());
    }
    for (const auto & c : spec.output_constraints) {
        LpRow row{{}, c.relation(), c.rhs()};
        for (const auto & t : c.terms()) row.terms.emplace_back(prev[t.index], t.coeff);
        lp.add_row(std::move(row));
    }
    return lp;
}

Verdict enumerate_decide(const Network & net, const PropertySpec & spec,
                         std::span<const LayerBounds> bounds, const EnumerateOptions & options)
{
    const auto start = std::chrono::steady_clock::now();
    const std::size_t unstable = unstable_relu_count(bounds);
    if (unstable > options.max_unstable) {
        throw OracleCapError("phase enumeration refused: " + std::to_string(unstable)
                             + " unstable neurons exceed the cap of "
                             + std::to_string(options.max_unstable));
    }
    const InputBox box = extract_box(spec.input_constraints, net.input_dim());

    Verdict v;
    Tolerances tol;
    tol.feas_tol = options.feas_tol;

    auto finish = [&](VerdictKind kind, std::string reason) {
        v.kind = kind;
        v.reason = std::move(reason);
        v.stats.wall_seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        return v;
    };
    if (box.infeasible) return finish(VerdictKind::Unreachable, "input box is empty");

    std::size_t failures = 0;
    std::size_t replay_failures = 0;
    const std::uint64_t count = std::uint64_t{1} << unstable;
    for (std::uint64_t code = 0; code < count; ++code) {
        PhasePattern pattern;
        for (std::size_t b = 0; b < unstable; ++b) pattern.active.push_back(((code >> b) & 1U) != 0);
        const LpProblem lp = pattern_lp(net, spec, bounds, box.intervals, pattern);
        ++v.stats.lp_solves;
        ++v.stats.nodes;
        const LpSolution sol = solve(lp, tol);
        if (sol.status == LpStatus::Infeasible) {
            ++v.stats.pruned;
            continue;
        }
        if (sol.status != LpStatus::Optimal) {
            ++failures;
            continue;
        }
        std::vector<double> x(net.input_dim());
        for (std::size_t j = 0; j < x.size(); ++j) {
            x[j] = std::clamp(sol.point[j], box.intervals[j].lo, box.intervals[j].hi);
        }
        Vec witness(std::move(x));
        if (validate_witness(net, spec, witness, options.feas_tol, options.report_tol).valid) {
            v.witness = witness;
            return finish(VerdictKind::Reachable, "phase pattern " + std::to_string(code) + " is feasible");
        }
        ++replay_failures;
    }
    v.stats.numerical_failures = failures;
    if (failures > 0) {
        return finish(VerdictKind::Inconclusive,
                      std::to_string(failures) + " pattern LP(s) failed numerically");
    }
    std::string reason = "all " + std::to_string(count) + " phase patterns are infeasible";
    if (replay_failures > 0) {
        reason = std::to_string(replay_failures)
                 + " feasible pattern(s) did not replay within tolerance; the rest are infeasible";
    }
    return finish(VerdictKind::Unreachable, std::move(reason));
}

SampleResult sample_decide(const Network & net, const PropertySpec & spec, std::size_t n_samples,
                           std::uint64_t seed)
{
    const InputBox box = extract_box(spec.input_constraints, net.input_dim());
    SampleResult res;
    if (box.infeasible) return res;
    if (!box.is_finite()) {
        throw UnboundedInputError("sampling needs finite bounds on every input variable");
    }
    std::mt19937_64 rng(seed);
    std::vector<std::uniform_real_distribution<double>> dists;
    for (const auto & iv : box.intervals) dists.emplace_back(iv.lo, iv.hi);

    std::vector<double> x(net.input_dim());
    for (std::size_t s = 0; s < n_samples; ++s) {
        ++res.drawn;
        for (std::size_t j = 0; j < x.size(); ++j) {
            x[j] = box.intervals[j].lo == box.intervals[j].hi ? box.intervals[j].lo : dists[j](rng);
        }
        if (!check_membership(spec.input_constraints, x, 0.0)) continue;
        ++res.in_input_set;
        Vec point(x);
        const Vec y = forward(net, point);
        if (check_membership(spec.output_constraints, y, 0.0)) {
            res.found = true;
            res.witness = std::move(point);
            return res;
        }
    }
    return res;
}

} // namespace relureach
