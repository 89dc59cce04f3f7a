/* SPDX-License-Identifier: Apache-2.0
 *
 * Copyright 2026 The relureach Authors
 */

#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "relureach/numerics.hpp"

namespace relureach {

enum class Activation { ReLU, Linear };

std::string_view to_string(Activation a);

/// One affine map followed by an activation. weights(i, j) multiplies input j
/// into neuron i.
struct Layer
{
    Layer(Mat weights, Vec bias, Activation activation);

    std::size_t input_dim() const noexcept { return weights.cols(); }
    std::size_t output_dim() const noexcept { return weights.rows(); }

    Mat weights;
    Vec bias;
    Activation activation;
};

/// Feed-forward network: an input layer of input_dim() neurons followed by
/// the computing layers. Layers are numbered as in the LP encoding, so the
/// input layer is layer 1 and layers()[i] is layer i + 2.
class Network
{
  public:
    Network(std::size_t input_dim, std::vector<Layer> layers);

    std::size_t input_dim() const noexcept { return input_dim_; }
    std::size_t output_dim() const noexcept { return layers_.back().output_dim(); }

    /// Number of layers including the input layer (always >= 2).
    std::size_t layer_count() const noexcept { return layers_.size() + 1; }

    const std::vector<Layer> & layers() const noexcept { return layers_; }

    /// Number of ReLU neurons over all layers.
    std::size_t relu_count() const noexcept;

  private:
    std::size_t input_dim_;
    std::vector<Layer> layers_;
};

/// sigma(W x + b) for one layer.
Vec layer_forward(const Layer & layer, const Vec & x);

/// The network's computed function: layer_forward folded over every layer.
Vec forward(const Network & net, const Vec & x);

/// Every layer's output; element 0 is x itself.
std::vector<Vec> forward_trace(const Network & net, const Vec & x);

/// Parses the JSON network format
///   {"input_dim": m, "layers": [{"weights": [[...]], "bias": [...],
///                               "activation": "relu" | "linear"}]}
Network parse_network(std::string_view json_text);
Network load_network(const std::filesystem::path & path);

/// Inverse of parse_network; doubles are written in shortest round-trip form.
std::string network_to_json(const Network & net);
void save_network(const Network & net, const std::filesystem::path & path);

} // namespace relureach
