/* SPDX-License-Identifier: Apache-2.0
 *
 * Copyright 2026 The relureach Authors
 */

#include "relureach/encoder.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>

namespace relureach {

std::string VarRef::name() const
{
    const char prefix = kind == VarKind::LayerOut ? 'x' : kind == VarKind::PhaseBinary ? 'd' : 'e';
    return prefix + std::to_string(layer) + "_" + std::to_string(neuron);
}

std::optional<VarRef> VarRef::from_name(std::string_view name)
{
    if (name.size() < 4) return std::nullopt;
    VarRef ref;
    switch (name[0]) {
    case 'x': ref.kind = VarKind::LayerOut; break;
    case 'd': ref.kind = VarKind::PhaseBinary; break;
    case 'e': ref.kind = VarKind::EpsSlack; break;
    default: return std::nullopt;
    }
    const char * p = name.data() + 1;
    const char * end = name.data() + name.size();
    auto r1 = std::from_chars(p, end, ref.layer);
    if (r1.ec != std::errc() || r1.ptr == end || *r1.ptr != '_') return std::nullopt;
    auto r2 = std::from_chars(r1.ptr + 1, end, ref.neuron);
    if (r2.ec != std::errc() || r2.ptr != end || r1.ptr + 1 == end) return std::nullopt;
    if (ref.layer == 0 || (ref.layer == 1 && ref.kind != VarKind::LayerOut)) return std::nullopt;
    return ref;
}

std::string_view to_string(EncodeMode m)
{
    return m == EncodeMode::Exact ? "exact" : "epsilon";
}

std::size_t LayerFragment::binary_count() const noexcept
{
    return static_cast<std::size_t>(std::count_if(columns.begin(), columns.end(),
                                                  [](const Column & c) { return c.integer; }));
}

std::size_t LayerFragment::eps_count() const noexcept
{
    return static_cast<std::size_t>(
        std::count_if(columns.begin(), columns.end(),
                      [](const Column & c) { return c.ref.kind == VarKind::EpsSlack; }));
}

namespace {

std::string row_name(std::size_t layer, std::size_t neuron, const char * tag)
{
    return "L" + std::to_string(layer) + "_n" + std::to_string(neuron) + "_" + tag;
}

} // namespace

LayerFragment encode_layer(const Layer & layer, std::size_t layer_index, const LayerBounds & bounds,
                           EncodeMode mode, std::optional<double> big_m)
{
    if (layer_index < 2) throw Error("computing layers are numbered from 2");
    if (bounds.size() != layer.output_dim()) {
        throw DimensionError("bounds for layer " + std::to_string(layer_index), layer.output_dim(),
                             bounds.size());
    }
    if (big_m && !(std::isfinite(*big_m) && *big_m > 0.0)) {
        throw Error("big-M must be a positive finite number");
    }

    const bool relu = layer.activation == Activation::ReLU;
    const bool eps = mode == EncodeMode::Epsilon;
    const std::size_t n = layer.output_dim();

    auto phase_of = [&](std::size_t j) { return relu ? bounds.phase[j] : Phase::AlwaysActive; };

    LayerFragment frag;
    std::vector<Column> binaries;
    std::vector<Column> slacks;
    for (std::size_t j = 0; j < n; ++j) {
        frag.columns.push_back({VarRef{layer_index, VarKind::LayerOut, j}, -kInf, kInf, false, 0.0});
        const Phase ph = phase_of(j);
        if (ph == Phase::Unstable) {
            binaries.push_back({VarRef{layer_index, VarKind::PhaseBinary, j}, 0.0, 1.0, true, 0.0});
        }
        if (eps && ph != Phase::AlwaysInactive) {
            slacks.push_back({VarRef{layer_index, VarKind::EpsSlack, j}, 0.0, kInf, false, 1.0});
        }
    }
    frag.columns.insert(frag.columns.end(), binaries.begin(), binaries.end());
    frag.columns.insert(frag.columns.end(), slacks.begin(), slacks.end());

    for (std::size_t j = 0; j < n; ++j) {
        const VarRef out{layer_index, VarKind::LayerOut, j};
        const VarRef delta{layer_index, VarKind::PhaseBinary, j};
        const VarRef slack{layer_index, VarKind::EpsSlack, j};
        const double bias = layer.bias[j];

        // x - W x_prev, shared by the affine rows.
        std::vector<std::pair<VarRef, double>> affine{{out, 1.0}};
        for (std::size_t c = 0; c < layer.input_dim(); ++c) {
            const double w = layer.weights(j, c);
            if (w != 0.0) affine.emplace_back(VarRef{layer_index - 1, VarKind::LayerOut, c}, -w);
        }

        const Phase ph = phase_of(j);
        if (ph == Phase::AlwaysInactive) {
            frag.rows.push_back({row_name(layer_index, j, "off"), {{out, 1.0}}, Relation::Equal, 0.0});
            continue;
        }
        if (ph == Phase::AlwaysActive) {
            if (eps) {
                auto lb = affine;
                lb.emplace_back(slack, 1.0);
                auto ub = affine;
                ub.emplace_back(slack, -1.0);
                frag.rows.push_back({row_name(layer_index, j, "lb"), lb, Relation::GreaterEq, bias});
                frag.rows.push_back({row_name(layer_index, j, "ub"), ub, Relation::LessEq, bias});
            } else {
                frag.rows.push_back({row_name(layer_index, j, "eq"), affine, Relation::Equal, bias});
            }
            continue;
        }

        BigM m = big_m_for(bounds, j);
        if (big_m) {
            if (*big_m < m.lower || *big_m < m.upper) {
                throw Error("big-M " + format_double(*big_m) + " is too small for neuron "
                            + std::to_string(j) + " of layer " + std::to_string(layer_index)
                            + " (needs at least " + format_double(std::max(m.lower, m.upper)) + ")");
            }
            m = {*big_m, *big_m};
        }

        auto lb = affine;
        auto ub = affine;
        ub.emplace_back(delta, -m.lower);
        if (eps) {
            lb.emplace_back(slack, 1.0);
            ub.emplace_back(slack, -1.0);
        }
        frag.rows.push_back({row_name(layer_index, j, "lb"), lb, Relation::GreaterEq, bias});
        frag.rows.push_back({row_name(layer_index, j, "ub"), ub, Relation::LessEq, bias});
        frag.rows.push_back({row_name(layer_index, j, "nn"), {{out, 1.0}}, Relation::GreaterEq, 0.0});
        frag.rows.push_back(
            {row_name(layer_index, j, "off"), {{out, 1.0}, {delta, m.upper}}, Relation::LessEq, m.upper});
    }
    return frag;
}

std::optional<std::size_t> EncodedProblem::column_of(const VarRef & ref) const
{
    auto it = var_index.find(ref);
    if (it == var_index.end()) return std::nullopt;
    return it->second;
}

std::vector<std::size_t> EncodedProblem::layer_columns(std::size_t layer) const
{
    std::vector<std::size_t> out;
    for (std::size_t c = 0; c < columns.size(); ++c) {
        if (columns[c].ref.layer == layer && columns[c].ref.kind == VarKind::LayerOut) out.push_back(c);
    }
    return out;
}

std::vector<std::size_t> EncodedProblem::binary_columns() const
{
    std::vector<std::size_t> out;
    for (std::size_t c = 0; c < columns.size(); ++c)
        if (columns[c].integer) out.push_back(c);
    return out;
}

std::vector<std::size_t> EncodedProblem::eps_columns() const
{
    std::vector<std::size_t> out;
    for (std::size_t c = 0; c < columns.size(); ++c)
        if (columns[c].ref.kind == VarKind::EpsSlack) out.push_back(c);
    return out;
}

std::size_t EncodedProblem::binary_count() const noexcept
{
    return static_cast<std::size_t>(std::count_if(columns.begin(), columns.end(),
                                                  [](const Column & c) { return c.integer; }));
}

std::size_t EncodedProblem::continuous_count() const noexcept
{
    return columns.size() - binary_count();
}

std::size_t EncodedProblem::last_layer() const noexcept
{
    std::size_t k = 1;
    for (const auto & c : columns) k = std::max(k, c.ref.layer);
    return k;
}

LpProblem EncodedProblem::relaxation() const
{
    LpProblem lp;
    for (const auto & c : columns) lp.add_column(c.lower, c.upper, c.objective);
    for (const auto & r : rows) lp.add_row({r.terms, r.relation, r.rhs});
    return lp;
}

double EncodedProblem::eps_sum(std::span<const double> point) const
{
    double s = 0.0;
    for (std::size_t c = 0; c < columns.size(); ++c)
        if (columns[c].ref.kind == VarKind::EpsSlack) s += point[c];
    return s;
}

void EncodedProblem::reindex()
{
    var_index.clear();
    for (std::size_t c = 0; c < columns.size(); ++c) var_index.emplace(columns[c].ref, c);
}

EncodedProblem encode_problem(const Network & net, const PropertySpec & spec,
                              std::span<const Interval> input_box,
                              std::span<const LayerBounds> bounds, const EncodeOptions & options)
{
    if (input_box.size() != net.input_dim()) {
        throw DimensionError("input box", net.input_dim(), input_box.size());
    }
    if (bounds.size() != net.layers().size()) {
        throw DimensionError("layer bounds", net.layers().size(), bounds.size());
    }
    check_indices(spec.input_constraints, net.input_dim());
    check_indices(spec.output_constraints, net.output_dim());
    if (options.mode == EncodeMode::Epsilon && !(options.eps_budget > 0.0)) {
        throw Error("epsilon budget must be positive");
    }

    EncodedProblem p;
    p.mode = options.mode;
    p.eps_budget = options.eps_budget;

    for (std::size_t j = 0; j < net.input_dim(); ++j) {
        p.columns.push_back(
            {VarRef{1, VarKind::LayerOut, j}, input_box[j].lo, input_box[j].hi, false, 0.0});
    }

    std::vector<FragmentRow> layer_rows;
    for (std::size_t l = 0; l < net.layers().size(); ++l) {
        LayerFragment frag = encode_layer(net.layers()[l], l + 2, bounds[l], options.mode, options.big_m);
        p.columns.insert(p.columns.end(), frag.columns.begin(), frag.columns.end());
        std::move(frag.rows.begin(), frag.rows.end(), std::back_inserter(layer_rows));
    }
    p.reindex();

    auto side_rows = [&](const std::vector<LinConstraint> & cs, std::size_t layer, const char * tag) {
        const auto cols = p.layer_columns(layer);
        for (std::size_t r = 0; r < cs.size(); ++r) {
            ProblemRow row{std::string(tag) + "_" + std::to_string(r), {}, cs[r].relation(), cs[r].rhs()};
            for (const auto & t : cs[r].terms()) row.terms.emplace_back(cols[t.index], t.coeff);
            p.rows.push_back(std::move(row));
        }
    };

    side_rows(spec.input_constraints, 1, "in");
    for (const auto & fr : layer_rows) {
        ProblemRow row{fr.name, {}, fr.relation, fr.rhs};
        for (const auto & [ref, coeff] : fr.terms) row.terms.emplace_back(p.var_index.at(ref), coeff);
        p.rows.push_back(std::move(row));
    }
    side_rows(spec.output_constraints, net.layer_count(), "out");

    const auto eps = p.eps_columns();
    if (!eps.empty()) {
        ProblemRow budget{"epsbudget", {}, Relation::LessEq, p.eps_budget};
        for (std::size_t c : eps) budget.terms.emplace_back(c, 1.0);
        p.rows.push_back(std::move(budget));
    }
    return p;
}

std::vector<double> induced_assignment(const EncodedProblem & problem, const Network & net,
                                       const Vec & x)
{
    const std::vector<Vec> trace = forward_trace(net, x);
    std::vector<double> values(problem.columns.size(), 0.0);
    for (std::size_t c = 0; c < problem.columns.size(); ++c) {
        const VarRef & ref = problem.columns[c].ref;
        if (ref.layer > trace.size()) throw Error("encoding does not match the network depth");
        switch (ref.kind) {
        case VarKind::LayerOut: values[c] = trace[ref.layer - 1][ref.neuron]; break;
        case VarKind::PhaseBinary: {
            // Sign of the pre-activation; d = 1 is the inactive branch.
            const Layer & layer = net.layers()[ref.layer - 2];
            const Vec pre = mat_vec(layer.weights, trace[ref.layer - 2]);
            values[c] = pre[ref.neuron] + layer.bias[ref.neuron] > 0.0 ? 0.0 : 1.0;
            break;
        }
        case VarKind::EpsSlack: values[c] = 0.0; break;
        }
    }
    return values;
}

} // namespace relureach
