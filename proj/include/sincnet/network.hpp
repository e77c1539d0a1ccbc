// sincnet/network.hpp

// Copyright 2026  SincNet C++ Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <memory>
#include <string>
#include <vector>

#include "sincnet/common.hpp"
#include "sincnet/filterbank.hpp"
#include "sincnet/layers.hpp"
#include "sincnet/tensor.hpp"

// Sequential waveform classifier. The first layer is either the sinc
// filterbank or a standard convolution of the same geometry, so the two
// variants differ only in how the first-layer taps come about. The network
// outputs logits; the softmax is fused into the loss.

namespace sincnet {

struct ArchConfig {
  std::string first_kind = "sinc_conv";  // "sinc_conv" or "conv1d"
  std::size_t input_samples = 1600;
  std::size_t sample_rate = 8000;
  std::size_t n_filters = 8;
  std::size_t filter_length = 65;
  double mel_fmin_hz = 30.0;
  double mel_fmax_hz = 0.0;  // 0 selects the Nyquist frequency
  std::vector<std::size_t> conv_channels;  // conv blocks after the first
  std::vector<std::size_t> conv_kernels;
  std::size_t pool_width = 3;
  std::vector<std::size_t> fc_sizes;
  std::size_t n_classes = 2;
  double leaky_slope = 0.2;
  double dropout_rate = 0.0;
};

class Network {
 public:
  /// Wires the layer stack and initializes every parameter from `rng`.
  /// Layout: [first conv, pool, layer norm, leaky] xN conv blocks, then
  /// [dense, batch norm, leaky, dropout?] per fc size, then the class dense.
  static Network build(const ArchConfig& arch, Rng& rng) {
    require_param(arch.first_kind == "sinc_conv" || arch.first_kind == "conv1d",
                  "network: first_kind must be sinc_conv or conv1d");
    require_param(arch.conv_channels.size() == arch.conv_kernels.size(),
                  "network: conv_channels and conv_kernels must pair up");
    require_param(arch.n_classes >= 2, "network: need at least two classes");

    Network net;
    net.arch_ = arch;
    std::size_t time = arch.input_samples;
    std::size_t channels = arch.n_filters;

    if (arch.first_kind == "sinc_conv") {
      double fmax = arch.mel_fmax_hz > 0.0
                        ? arch.mel_fmax_hz
                        : static_cast<double>(arch.sample_rate) / 2.0;
      CutoffParams init = mel_initialize(arch.n_filters, arch.sample_rate,
                                         arch.mel_fmin_hz, fmax);
      net.add(std::make_unique<SincConvLayer>(arch.n_filters, arch.filter_length, init));
    } else {
      net.add(std::make_unique<Conv1dLayer>(arch.n_filters, 1, arch.filter_length, rng));
    }
    // The waveform itself is not a parameter; skip its gradient.
    net.layers_.front()->set_needs_input_grad(false);
    require_param(time >= arch.filter_length, "network: input shorter than first filter");
    time = time - arch.filter_length + 1;
    net.finish_conv_block(time, channels, arch);

    for (std::size_t i = 0; i < arch.conv_channels.size(); ++i) {
      require_param(time >= arch.conv_kernels[i], "network: time axis exhausted by conv");
      net.add(std::make_unique<Conv1dLayer>(arch.conv_channels[i], channels,
                                            arch.conv_kernels[i], rng));
      channels = arch.conv_channels[i];
      time = time - arch.conv_kernels[i] + 1;
      net.finish_conv_block(time, channels, arch);
    }

    std::size_t features = channels * net.pooled_time_;
    for (std::size_t width : arch.fc_sizes) {
      net.add(std::make_unique<DenseLayer>(features, width, rng));
      net.add(std::make_unique<BatchNormLayer>(width));
      net.add(std::make_unique<LeakyReluLayer>(arch.leaky_slope));
      if (arch.dropout_rate > 0.0)
        net.add(std::make_unique<DropoutLayer>(arch.dropout_rate, rng.next_u64()));
      features = width;
    }

    net.final_dense_index_ = net.layers_.size();
    net.hidden_size_ = features;
    net.add(std::make_unique<DenseLayer>(features, arch.n_classes, rng));
    return net;
  }

  /// Logits [batch, n_classes]. Also captures the d-vector source: the
  /// activation entering the final dense layer, flattened per sample.
  Tensor forward(const Tensor& input, bool training) {
    require_shape(input.rank() == 3 && input.dim(1) == 1 &&
                      input.dim(2) == arch_.input_samples,
                  "network: expected input [batch, 1, input_samples]");
    Tensor x = input;
    for (std::size_t i = 0; i < layers_.size(); ++i) {
      if (i == final_dense_index_)
        hidden_ = x.reshaped({x.dim(0), hidden_size_});
      x = layers_[i]->forward(x, training);
    }
    return x;
  }

  /// Backpropagates dLoss/dLogits through the stack, accumulating parameter
  /// gradients. Requires a preceding training-mode forward.
  void backward(const Tensor& grad_logits) {
    Tensor g = grad_logits;
    for (std::size_t i = layers_.size(); i-- > 0;) {
      g = layers_[i]->backward(g);
      require_contract(i == 0 || g.size() > 0,
                       "network: interior layer returned no input gradient");
    }
  }

  void zero_grad() {
    for (auto& l : layers_) l->zero_grad();
  }

  /// Parameter views in a fixed order, names prefixed by layer position.
  std::vector<ParamRef> params() {
    std::vector<ParamRef> out;
    for (std::size_t i = 0; i < layers_.size(); ++i)
      for (auto& p : layers_[i]->params())
        out.push_back({layer_key(i) + "." + p.name, p.value, p.grad});
    return out;
  }

  /// Non-learnable checkpoint tensors (batch norm running statistics).
  std::vector<ParamRef> state() {
    std::vector<ParamRef> out;
    for (std::size_t i = 0; i < layers_.size(); ++i)
      for (auto& p : layers_[i]->state())
        out.push_back({layer_key(i) + "." + p.name, p.value, p.grad});
    return out;
  }

  std::size_t param_count() {
    std::size_t n = 0;
    for (auto& p : params()) n += p.value->size();
    return n;
  }

  std::size_t first_layer_param_count() {
    std::size_t n = 0;
    for (auto& p : layers_.front()->params()) n += p.value->size();
    return n;
  }

  void set_threads(std::size_t t) {
    for (auto& l : layers_) l->set_threads(t);
  }

  const Tensor& hidden() const { return hidden_; }
  std::size_t hidden_size() const { return hidden_size_; }
  const ArchConfig& arch() const { return arch_; }
  std::size_t layer_count() const { return layers_.size(); }
  Layer& layer(std::size_t i) { return *layers_.at(i); }

  /// The sinc first layer, or nullptr for the standard-conv variant.
  SincConvLayer* sinc_layer() {
    return dynamic_cast<SincConvLayer*>(layers_.front().get());
  }

 private:
  static std::string layer_key(std::size_t i) { return "l" + std::to_string(i); }

  void add(std::unique_ptr<Layer> layer) { layers_.push_back(std::move(layer)); }

  void finish_conv_block(std::size_t& time, std::size_t channels,
                         const ArchConfig& arch) {
    require_param(time >= arch.pool_width, "network: time axis exhausted by pooling");
    add(std::make_unique<MaxPoolLayer>(arch.pool_width));
    time = (time - arch.pool_width) / arch.pool_width + 1;
    add(std::make_unique<LayerNormLayer>(channels * time));
    add(std::make_unique<LeakyReluLayer>(arch.leaky_slope));
    pooled_time_ = time;
  }

  ArchConfig arch_;
  std::vector<std::unique_ptr<Layer>> layers_;
  std::size_t final_dense_index_ = 0;
  std::size_t hidden_size_ = 0;
  std::size_t pooled_time_ = 0;
  Tensor hidden_;
};

}  // namespace sincnet
