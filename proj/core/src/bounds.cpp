/* SPDX-License-Identifier: Apache-2.0
 *
 * Copyright 2026 The relureach Authors
 */

#include "relureach/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace relureach {

std::string_view to_string(Phase p)
{
    switch (p) {
    case Phase::AlwaysActive: return "active";
    case Phase::AlwaysInactive: return "inactive";
    case Phase::Unstable: return "unstable";
    }
    return "?";
}

Phase classify(const Interval & pre_act) noexcept
{
    if (pre_act.lo >= 0.0) return Phase::AlwaysActive;
    if (pre_act.hi <= 0.0) return Phase::AlwaysInactive;
    return Phase::Unstable;
}

bool LayerBounds::is_finite() const noexcept
{
    return std::all_of(pre_act.begin(), pre_act.end(),
                       [](const Interval & iv) { return iv.is_finite(); });
}

std::size_t LayerBounds::unstable_count() const noexcept
{
    if (activation != Activation::ReLU) return 0;
    return static_cast<std::size_t>(std::count(phase.begin(), phase.end(), Phase::Unstable));
}

LayerBounds propagate_layer(const Layer & layer, std::span<const Interval> in)
{
    if (in.size() != layer.input_dim()) {
        throw DimensionError("layer input intervals", layer.input_dim(), in.size());
    }
    constexpr double unit_roundoff = std::numeric_limits<double>::epsilon() / 2;
    LayerBounds lb;
    lb.activation = layer.activation;
    const std::size_t n = layer.input_dim();
    // Both the bound sums here and the forward pass round; gamma covers
    // either accumulation of n products plus the bias.
    const double gamma = 1.01 * static_cast<double>(n + 2) * unit_roundoff;

    for (std::size_t i = 0; i < layer.output_dim(); ++i) {
        double lo = 0.0, hi = 0.0, mag = std::abs(layer.bias[i]);
        for (std::size_t j = 0; j < n; ++j) {
            const double w = layer.weights(i, j);
            if (w > 0.0) {
                lo += w * in[j].lo;
                hi += w * in[j].hi;
            } else if (w < 0.0) {
                lo += w * in[j].hi;
                hi += w * in[j].lo;
            } else {
                continue;
            }
            mag += std::abs(w) * std::max(std::abs(in[j].lo), std::abs(in[j].hi));
        }
        lo += layer.bias[i];
        hi += layer.bias[i];
        if (std::isfinite(mag)) {
            const double pad = 2.0 * gamma * mag;
            lo -= pad;
            hi += pad;
        }
        const Interval pre{lo, hi};
        lb.pre_act.push_back(pre);
        lb.phase.push_back(classify(pre));
        if (layer.activation == Activation::ReLU) {
            lb.post_act.push_back({std::max(lo, 0.0), std::max(hi, 0.0)});
        } else {
            lb.post_act.push_back(pre);
        }
    }
    return lb;
}

std::vector<LayerBounds> propagate(const Network & net, std::span<const Interval> input_box)
{
    if (input_box.size() != net.input_dim()) {
        throw DimensionError("input box", net.input_dim(), input_box.size());
    }
    std::vector<LayerBounds> out;
    out.reserve(net.layers().size());
    std::span<const Interval> cur = input_box;
    for (const Layer & layer : net.layers()) {
        out.push_back(propagate_layer(layer, cur));
        cur = out.back().post_act;
    }
    return out;
}

namespace {

// y <= up_slope * z + up_shift and y >= lo_slope * z for one neuron.
struct Relaxation
{
    double up_slope = 1.0;
    double up_shift = 0.0;
    double lo_slope = 1.0;
};

Relaxation relax(const Interval & pre, bool relu)
{
    if (!relu || pre.lo >= 0.0) return {};
    if (pre.hi <= 0.0) return {0.0, 0.0, 0.0};
    const double s = pre.hi / (pre.hi - pre.lo);
    return {s, -s * pre.lo, pre.hi > -pre.lo ? 1.0 : 0.0};
}

// Coefficients of a bound on one pre-activation, expressed over the outputs
// of the layer being substituted.
struct Affine
{
    std::vector<double> coeff;
    double constant = 0.0;
    double magnitude = 0.0;
};

// Bound (upper when `upper`, else lower) of sum_i a_i y_i + c, where y are
// the outputs of computing layer l - 1, substituted down to the input box.
double substitute(const Network & net, std::size_t l, Affine a, bool upper,
                  const std::vector<std::vector<Relaxation>> & rel, std::span<const Interval> box)
{
    for (std::size_t k = l; k-- > 0;) {
        const Layer & layer = net.layers()[k];
        // Through the activation of layer k.
        for (std::size_t i = 0; i < a.coeff.size(); ++i) {
            const double c = a.coeff[i];
            if (c == 0.0) continue;
            const Relaxation & r = rel[k][i];
            if ((c > 0.0) == upper) {
                a.constant += c * r.up_shift;
                a.magnitude += std::abs(c * r.up_shift);
                a.coeff[i] = c * r.up_slope;
            } else {
                a.coeff[i] = c * r.lo_slope;
            }
        }
        // Through the affine map of layer k.
        std::vector<double> next(layer.input_dim(), 0.0);
        for (std::size_t i = 0; i < a.coeff.size(); ++i) {
            const double c = a.coeff[i];
            if (c == 0.0) continue;
            a.constant += c * layer.bias[i];
            a.magnitude += std::abs(c * layer.bias[i]);
            for (std::size_t j = 0; j < layer.input_dim(); ++j) next[j] += c * layer.weights(i, j);
        }
        a.coeff = std::move(next);
    }
    double v = a.constant;
    for (std::size_t j = 0; j < a.coeff.size(); ++j) {
        const double c = a.coeff[j];
        if (c == 0.0) continue;
        const double x = (c > 0.0) == upper ? box[j].hi : box[j].lo;
        v += c * x;
        a.magnitude += std::abs(c) * std::max(std::abs(box[j].lo), std::abs(box[j].hi));
    }
    // Generous allowance for the rounding of the substitution itself.
    const double pad = 1e-9 * a.magnitude + 1e-12;
    return upper ? v + pad : v - pad;
}

} // namespace

std::vector<LayerBounds> propagate_linear(const Network & net, std::span<const Interval> input_box,
                                          std::span<const std::vector<PhaseFix>> fixes)
{
    if (input_box.size() != net.input_dim()) {
        throw DimensionError("input box", net.input_dim(), input_box.size());
    }
    if (!fixes.empty() && fixes.size() != net.layers().size()) {
        throw DimensionError("phase fixes", net.layers().size(), fixes.size());
    }
    const bool finite = std::all_of(input_box.begin(), input_box.end(),
                                    [](const Interval & iv) { return iv.is_finite(); });

    std::vector<LayerBounds> out;
    std::vector<std::vector<Relaxation>> rel;
    std::span<const Interval> cur = input_box;
    for (std::size_t l = 0; l < net.layers().size(); ++l) {
        const Layer & layer = net.layers()[l];
        const bool relu = layer.activation == Activation::ReLU;
        LayerBounds lb = propagate_layer(layer, cur);
        std::vector<Relaxation> layer_rel(layer.output_dim());
        for (std::size_t i = 0; i < layer.output_dim(); ++i) {
            Interval & pre = lb.pre_act[i];
            if (finite && l > 0) {
                Affine a;
                a.coeff.resize(layer.input_dim());
                for (std::size_t j = 0; j < layer.input_dim(); ++j) a.coeff[j] = layer.weights(i, j);
                a.constant = layer.bias[i];
                a.magnitude = std::abs(layer.bias[i]);
                pre.lo = std::max(pre.lo, substitute(net, l, a, false, rel, input_box));
                pre.hi = std::min(pre.hi, substitute(net, l, a, true, rel, input_box));
            }
            const PhaseFix fix = fixes.empty() || !relu ? PhaseFix::Free : fixes[l].at(i);
            if (fix == PhaseFix::Active) pre.lo = std::max(pre.lo, 0.0);
            if (fix == PhaseFix::Inactive) pre.hi = std::min(pre.hi, 0.0);

            lb.phase[i] = classify(pre);
            if (relu) {
                lb.post_act[i] = {std::max(pre.lo, 0.0), std::max(pre.hi, 0.0)};
            } else {
                lb.post_act[i] = pre;
            }
            layer_rel[i] = pre.lo > pre.hi ? Relaxation{0.0, 0.0, 0.0} : relax(pre, relu);
        }
        rel.push_back(std::move(layer_rel));
        out.push_back(std::move(lb));
        cur = out.back().post_act;
    }
    return out;
}

std::size_t unstable_relu_count(std::span<const LayerBounds> bounds)
{
    std::size_t n = 0;
    for (const auto & lb : bounds) n += lb.unstable_count();
    return n;
}

BigM big_m_for(const LayerBounds & bounds, std::size_t neuron)
{
    if (neuron >= bounds.size()) throw DimensionError("big_m_for neuron", bounds.size(), neuron);
    const Interval & pre = bounds.pre_act[neuron];
    if (!pre.is_finite()) {
        throw UnboundedInputError("pre-activation of neuron " + std::to_string(neuron)
                                  + " is unbounded; bound every input variable with <= and >= "
                                    "constraints so a finite big-M exists");
    }
    return {std::max(kBigMFloor, std::max(0.0, -pre.lo)),
            std::max(kBigMFloor, std::max(0.0, pre.hi))};
}

} // namespace relureach
