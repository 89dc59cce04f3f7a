/* SPDX-License-Identifier: Apache-2.0
 *
 * Copyright 2026 The relureach Authors
 */

#include "relureach/network.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace relureach {

using json = nlohmann::json;

std::string_view to_string(Activation a)
{
    return a == Activation::ReLU ? "relu" : "linear";
}

Layer::Layer(Mat w, Vec b, Activation act)
    : weights(std::move(w)), bias(std::move(b)), activation(act)
{
    if (weights.rows() != bias.dim()) {
        throw DimensionError("layer bias must match weight rows", weights.rows(), bias.dim());
    }
}

Network::Network(std::size_t input_dim, std::vector<Layer> layers)
    : input_dim_(input_dim), layers_(std::move(layers))
{
    if (input_dim_ == 0) throw Error("network input dimension must be positive");
    if (layers_.empty()) throw Error("network needs at least one computing layer");
    if (layers_.front().input_dim() != input_dim_) {
        throw ShapeError("layer 2 has " + std::to_string(layers_.front().input_dim())
                             + " weight columns but the input layer has "
                             + std::to_string(input_dim_) + " neurons",
                         1, 2);
    }
    for (std::size_t i = 1; i < layers_.size(); ++i) {
        if (layers_[i].input_dim() != layers_[i - 1].output_dim()) {
            throw ShapeError("layer " + std::to_string(i + 2) + " has "
                                 + std::to_string(layers_[i].input_dim())
                                 + " weight columns but layer " + std::to_string(i + 1)
                                 + " has " + std::to_string(layers_[i - 1].output_dim())
                                 + " neurons",
                             i + 1, i + 2);
        }
    }
}

std::size_t Network::relu_count() const noexcept
{
    std::size_t n = 0;
    for (const auto & l : layers_)
        if (l.activation == Activation::ReLU) n += l.output_dim();
    return n;
}

Vec layer_forward(const Layer & layer, const Vec & x)
{
    const Vec wx = mat_vec(layer.weights, x);
    std::vector<double> out(wx.begin(), wx.end());
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] += layer.bias[i];
        if (layer.activation == Activation::ReLU && !(out[i] > 0.0)) out[i] = 0.0;
    }
    return Vec(std::move(out));
}

Vec forward(const Network & net, const Vec & x)
{
    if (x.dim() != net.input_dim()) {
        throw DimensionError("network input", net.input_dim(), x.dim());
    }
    Vec cur = x;
    for (const auto & layer : net.layers()) cur = layer_forward(layer, cur);
    return cur;
}

std::vector<Vec> forward_trace(const Network & net, const Vec & x)
{
    if (x.dim() != net.input_dim()) {
        throw DimensionError("network input", net.input_dim(), x.dim());
    }
    std::vector<Vec> trace{x};
    trace.reserve(net.layers().size() + 1);
    for (const auto & layer : net.layers()) trace.push_back(layer_forward(layer, trace.back()));
    return trace;
}

namespace {

// Byte offset -> (line, column), both 1-based.
std::pair<std::size_t, std::size_t> locate(std::string_view text, std::size_t offset)
{
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i < offset && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return {line, col};
}

double read_number(const json & j, const std::string & field)
{
    if (!j.is_number()) throw ParseError("expected a number", 0, 0, field);
    const double v = j.get<double>();
    if (!std::isfinite(v)) throw ParseError("weight is not finite", 0, 0, field);
    return v;
}

const json & require(const json & obj, const char * key, const std::string & field)
{
    auto it = obj.find(key);
    if (it == obj.end()) throw ParseError(std::string("missing key '") + key + "'", 0, 0, field);
    return *it;
}

Layer read_layer(const json & jl, const std::string & field)
{
    if (!jl.is_object()) throw ParseError("layer must be an object", 0, 0, field);

    const json & jw = require(jl, "weights", field);
    if (!jw.is_array() || jw.empty()) {
        throw ParseError("weights must be a non-empty array of rows", 0, 0, field + ".weights");
    }
    std::vector<std::vector<double>> rows;
    for (std::size_t i = 0; i < jw.size(); ++i) {
        const std::string rf = field + ".weights[" + std::to_string(i) + "]";
        if (!jw[i].is_array() || jw[i].empty()) {
            throw ParseError("weight row must be a non-empty array", 0, 0, rf);
        }
        std::vector<double> row;
        for (std::size_t j = 0; j < jw[i].size(); ++j) {
            row.push_back(read_number(jw[i][j], rf + "[" + std::to_string(j) + "]"));
        }
        if (!rows.empty() && row.size() != rows.front().size()) {
            throw ParseError("ragged weight matrix: row has " + std::to_string(row.size())
                                 + " entries, expected " + std::to_string(rows.front().size()),
                             0, 0, rf);
        }
        rows.push_back(std::move(row));
    }

    const json & jb = require(jl, "bias", field);
    if (!jb.is_array()) throw ParseError("bias must be an array", 0, 0, field + ".bias");
    std::vector<double> bias;
    for (std::size_t i = 0; i < jb.size(); ++i) {
        bias.push_back(read_number(jb[i], field + ".bias[" + std::to_string(i) + "]"));
    }
    if (bias.size() != rows.size()) {
        throw ParseError("bias has " + std::to_string(bias.size()) + " entries but weights have "
                             + std::to_string(rows.size()) + " rows",
                         0, 0, field + ".bias");
    }

    const json & ja = require(jl, "activation", field);
    Activation act;
    if (ja == "relu") {
        act = Activation::ReLU;
    } else if (ja == "linear") {
        act = Activation::Linear;
    } else {
        throw ParseError("activation must be \"relu\" or \"linear\"", 0, 0, field + ".activation");
    }
    return Layer(Mat::from_rows(rows), Vec(std::move(bias)), act);
}

} // namespace

Network parse_network(std::string_view text)
{
    json doc;
    try {
        doc = json::parse(text.begin(), text.end());
    } catch (const json::parse_error & e) {
        auto [line, col] = locate(text, e.byte > 0 ? e.byte - 1 : 0);
        throw ParseError(std::string("malformed JSON (") + e.what() + ")", line, col);
    } catch (const json::out_of_range & e) {
        throw NonFiniteError(std::string("number out of range (") + e.what() + ")");
    }
    if (!doc.is_object()) throw ParseError("network document must be a JSON object", 1, 1);

    const json & jdim = require(doc, "input_dim", "");
    if (!jdim.is_number_integer() || jdim.get<long long>() <= 0) {
        throw ParseError("input_dim must be a positive integer", 0, 0, "input_dim");
    }
    const auto input_dim = static_cast<std::size_t>(jdim.get<long long>());

    const json & jlayers = require(doc, "layers", "");
    if (!jlayers.is_array() || jlayers.empty()) {
        throw ParseError("layers must be a non-empty array", 0, 0, "layers");
    }
    std::vector<Layer> layers;
    for (std::size_t i = 0; i < jlayers.size(); ++i) {
        layers.push_back(read_layer(jlayers[i], "layers[" + std::to_string(i) + "]"));
    }
    return Network(input_dim, std::move(layers));
}

Network load_network(const std::filesystem::path & path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open network file '" + path.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_network(ss.str());
}

std::string network_to_json(const Network & net)
{
    // Hand-written so that every weight keeps its shortest round-trip form.
    std::ostringstream out;
    out << "{\n  \"input_dim\": " << net.input_dim() << ",\n  \"layers\": [\n";
    for (std::size_t l = 0; l < net.layers().size(); ++l) {
        const Layer & layer = net.layers()[l];
        out << "    {\n      \"weights\": [";
        for (std::size_t i = 0; i < layer.weights.rows(); ++i) {
            out << (i ? ",\n                  [" : "[");
            for (std::size_t j = 0; j < layer.weights.cols(); ++j) {
                out << (j ? ", " : "") << format_double(layer.weights(i, j));
            }
            out << "]";
        }
        out << "],\n      \"bias\": [";
        for (std::size_t i = 0; i < layer.bias.dim(); ++i) {
            out << (i ? ", " : "") << format_double(layer.bias[i]);
        }
        out << "],\n      \"activation\": \"" << to_string(layer.activation) << "\"\n    }"
            << (l + 1 < net.layers().size() ? ",\n" : "\n");
    }
    out << "  ]\n}\n";
    return out.str();
}

void save_network(const Network & net, const std::filesystem::path & path)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write network file '" + path.string() + "'");
    out << network_to_json(net);
}

} // namespace relureach
