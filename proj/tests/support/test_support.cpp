/* SPDX-License-Identifier: Apache-2.0
 *
 * Copyright 2026 The relureach Authors
 */

#include "test_support.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>

namespace relureach::testing {

Network abs_net()
{
    std::vector<Layer> layers;
    layers.emplace_back(Mat::from_rows({{1.0}, {-1.0}}), Vec{0.0, 0.0}, Activation::ReLU);
    layers.emplace_back(Mat::from_rows({{1.0, 1.0}}), Vec{0.0}, Activation::Linear);
    return Network(1, std::move(layers));
}

Network identity_relu_net(std::size_t n)
{
    std::vector<Layer> layers;
    layers.emplace_back(Mat::identity(n), Vec::filled(n, 0.0), Activation::ReLU);
    return Network(n, std::move(layers));
}

Network random_network(std::mt19937_64 & rng, const RandomNetConfig & cfg)
{
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    std::vector<Layer> layers;
    std::size_t fan_in = cfg.input_dim;
    auto make_layer = [&](std::size_t width, Activation act) {
        const double s = cfg.weight_scale / std::sqrt(static_cast<double>(fan_in));
        std::vector<double> w(width * fan_in);
        for (double & v : w) v = s * unit(rng);
        std::vector<double> b(width);
        for (double & v : b) v = cfg.bias_scale * unit(rng);
        layers.emplace_back(Mat(width, fan_in, std::move(w)), Vec(std::move(b)), act);
        fan_in = width;
    };
    for (std::size_t width : cfg.hidden) make_layer(width, Activation::ReLU);
    make_layer(cfg.output_dim, cfg.output_activation);
    return Network(cfg.input_dim, std::move(layers));
}

std::vector<LinConstraint> box_constraints(const std::vector<Interval> & box)
{
    std::vector<LinConstraint> out;
    for (std::size_t i = 0; i < box.size(); ++i) {
        out.emplace_back(Side::Input, std::vector<Term>{{i, 1.0}}, Relation::GreaterEq, box[i].lo);
        out.emplace_back(Side::Input, std::vector<Term>{{i, 1.0}}, Relation::LessEq, box[i].hi);
    }
    return out;
}

std::vector<Interval> random_box(std::mt19937_64 & rng, std::size_t dim)
{
    std::uniform_real_distribution<double> lo(-1.0, -0.05), hi(0.05, 1.0);
    std::vector<Interval> box(dim);
    for (auto & iv : box) iv = {lo(rng), hi(rng)};
    return box;
}

Vec sample_box(std::mt19937_64 & rng, const std::vector<Interval> & box)
{
    std::vector<double> x(box.size());
    for (std::size_t i = 0; i < box.size(); ++i) {
        x[i] = std::uniform_real_distribution<double>(box[i].lo, box[i].hi)(rng);
    }
    return Vec(std::move(x));
}

LinConstraint random_output_halfspace(std::mt19937_64 & rng, const Network & net,
                                      const std::vector<Interval> & box)
{
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    std::vector<Term> terms;
    for (std::size_t j = 0; j < net.output_dim(); ++j) {
        double a = unit(rng);
        if (std::abs(a) < 0.1) a = a < 0 ? -0.5 : 0.5;
        terms.push_back({j, a});
    }
    double lo = kInf, hi = -kInf;
    for (int s = 0; s < 200; ++s) {
        const Vec y = forward(net, sample_box(rng, box));
        double v = 0.0;
        for (const auto & t : terms) v += t.coeff * y[t.index];
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    const double span = std::max(hi - lo, 1e-3);
    // Mostly around the top of the sampled range, sometimes well above it.
    const double c = hi + span * std::uniform_real_distribution<double>(-0.6, 0.4)(rng);
    return LinConstraint(Side::Output, std::move(terms), Relation::GreaterEq, c);
}

PropertySpec make_spec(const std::vector<Interval> & box, std::vector<LinConstraint> outputs)
{
    PropertySpec spec;
    spec.input_constraints = box_constraints(box);
    spec.output_constraints = std::move(outputs);
    return spec;
}

std::string scratch_path(const std::string & name)
{
    const auto dir = std::filesystem::temp_directory_path() / "relureach-tests";
    std::filesystem::create_directories(dir);
    return (dir / name).string();
}

} // namespace relureach::testing
