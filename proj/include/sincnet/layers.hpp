// sincnet/layers.hpp

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

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "sincnet/common.hpp"
#include "sincnet/filterbank.hpp"
#include "sincnet/tensor.hpp"

// Layer zoo for the waveform classifier. Backprop is hand-wired per layer:
// forward caches what backward needs, backward accumulates into the layer's
// gradient tensors and returns the input gradient. A backward call never
// mutates parameter values.
//
// Shape conventions: convolutional tensors are [batch, channels, time];
// dense tensors are [batch, features]. Gradient reductions over the batch
// always run in batch order regardless of the worker thread count, so
// results are bit-identical for any --threads setting.

namespace sincnet {

struct ParamRef {
  std::string name;
  Tensor* value;
  Tensor* grad;
};

class Layer {
 public:
  virtual ~Layer() = default;

  virtual std::string kind() const = 0;

  /// `training` selects batch statistics / dropout masks; inference uses
  /// running statistics and identity dropout.
  virtual Tensor forward(const Tensor& input, bool training) = 0;

  /// Accumulates parameter gradients; returns dLoss/dInput (empty tensor when
  /// input gradients were disabled for this layer).
  virtual Tensor backward(const Tensor& grad_output) = 0;

  virtual std::vector<ParamRef> params() { return {}; }

  /// Non-learnable tensors that still belong in a checkpoint (running stats).
  virtual std::vector<ParamRef> state() { return {}; }

  virtual void set_threads(std::size_t) {}

  void set_needs_input_grad(bool v) { needs_input_grad_ = v; }

  void zero_grad() {
    for (auto& p : params()) p.grad->fill(0.0);
  }

 protected:
  bool needs_input_grad_ = true;
};

inline Tensor glorot_init(std::vector<std::size_t> shape, std::size_t fan_in,
                          std::size_t fan_out, Rng& rng) {
  Tensor t(std::move(shape));
  double bound = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
  for (std::size_t i = 0; i < t.size(); ++i) t[i] = rng.uniform(-bound, bound);
  return t;
}

namespace detail {

// y[b,co,t] = sum_ci sum_l x[b,ci,t+l] * w[co,ci,l]   (valid correlation)
inline void correlate_batch(const Tensor& x, const Tensor& w, Tensor& y,
                            std::size_t threads) {
  std::size_t batch = x.dim(0), c_in = x.dim(1), time = x.dim(2);
  std::size_t c_out = w.dim(0), taps = w.dim(2);
  std::size_t t_out = time - taps + 1;
  parallel_for(batch, threads, [&](std::size_t b) {
    for (std::size_t co = 0; co < c_out; ++co) {
      double* out = y.row(b, co);
      std::fill(out, out + t_out, 0.0);
      for (std::size_t ci = 0; ci < c_in; ++ci) {
        const double* in = x.row(b, ci);
        const double* wf = w.row(co, ci);
        for (std::size_t l = 0; l < taps; ++l) {
          double wl = wf[l];
          const double* xs = in + l;
          for (std::size_t t = 0; t < t_out; ++t) out[t] += wl * xs[t];
        }
      }
    }
  });
}

// dW[co,ci,l] = sum_b sum_t g[b,co,t] * x[b,ci,t+l], reduced in batch order.
inline void correlate_weight_grad(const Tensor& x, const Tensor& g, Tensor& dw,
                                  std::size_t threads) {
  std::size_t batch = x.dim(0), c_in = x.dim(1);
  std::size_t c_out = g.dim(1), t_out = g.dim(2);
  std::size_t taps = dw.dim(2);
  std::vector<std::vector<double>> partial(batch);
  parallel_for(batch, threads, [&](std::size_t b) {
    std::vector<double>& acc = partial[b];
    acc.assign(dw.size(), 0.0);
    for (std::size_t co = 0; co < c_out; ++co) {
      const double* gr = g.row(b, co);
      for (std::size_t ci = 0; ci < c_in; ++ci) {
        const double* in = x.row(b, ci);
        double* accw = acc.data() + (co * c_in + ci) * taps;
        for (std::size_t l = 0; l < taps; ++l) {
          double s = 0.0;
          const double* xs = in + l;
          for (std::size_t t = 0; t < t_out; ++t) s += gr[t] * xs[t];
          accw[l] += s;
        }
      }
    }
  });
  for (std::size_t b = 0; b < batch; ++b)
    for (std::size_t i = 0; i < dw.size(); ++i) dw[i] += partial[b][i];
}

// dx[b,ci,t+l] += g[b,co,t] * w[co,ci,l]
inline void correlate_input_grad(const Tensor& g, const Tensor& w, Tensor& dx,
                                 std::size_t threads) {
  std::size_t batch = g.dim(0), c_out = g.dim(1), t_out = g.dim(2);
  std::size_t c_in = dx.dim(1), taps = w.dim(2);
  parallel_for(batch, threads, [&](std::size_t b) {
    for (std::size_t ci = 0; ci < c_in; ++ci) {
      double* out = dx.row(b, ci);
      for (std::size_t co = 0; co < c_out; ++co) {
        const double* gr = g.row(b, co);
        const double* wf = w.row(co, ci);
        for (std::size_t l = 0; l < taps; ++l) {
          double wl = wf[l];
          double* xs = out + l;
          for (std::size_t t = 0; t < t_out; ++t) xs[t] += wl * gr[t];
        }
      }
    }
  });
}

}  // namespace detail

/// Standard 1-D convolutional layer (valid-mode correlation, as deep
/// learning toolkits compute it; the flip is immaterial). No bias: every
/// tap of every filter is a learnable parameter and nothing else.
class Conv1dLayer : public Layer {
 public:
  Conv1dLayer(std::size_t c_out, std::size_t c_in, std::size_t taps, Rng& rng)
      : weights_(glorot_init({c_out, c_in, taps}, c_in * taps, c_out * taps, rng)),
        grad_weights_(Tensor::zeros({c_out, c_in, taps})) {}

  std::string kind() const override { return "conv1d"; }

  Tensor forward(const Tensor& input, bool) override {
    require_shape(input.rank() == 3 && input.dim(1) == weights_.dim(1),
                  "conv1d: expected input [batch, c_in, time]");
    require_shape(input.dim(2) >= weights_.dim(2),
                  "conv1d: time axis shorter than the filter");
    cached_input_ = input;
    std::size_t t_out = input.dim(2) - weights_.dim(2) + 1;
    Tensor y({input.dim(0), weights_.dim(0), t_out});
    detail::correlate_batch(input, weights_, y, threads_);
    return y;
  }

  Tensor backward(const Tensor& grad_output) override {
    require_contract(cached_input_.size() > 0, "conv1d: backward before forward");
    detail::correlate_weight_grad(cached_input_, grad_output, grad_weights_, threads_);
    if (!needs_input_grad_) return Tensor();
    Tensor dx(cached_input_.shape());
    detail::correlate_input_grad(grad_output, weights_, dx, threads_);
    return dx;
  }

  std::vector<ParamRef> params() override {
    return {{"weights", &weights_, &grad_weights_}};
  }

  void set_threads(std::size_t t) override { threads_ = t; }

  const Tensor& weights() const { return weights_; }

 private:
  Tensor weights_, grad_weights_;
  Tensor cached_input_;
  std::size_t threads_ = 1;
};

/// The sinc-parametrized convolution. The only learnable parameters are the
/// raw cutoff pair per filter (2F scalars regardless of filter length); the
/// taps are materialized from them on every forward pass through the
/// symmetric half construction. Gain is deliberately not learned here.
class SincConvLayer : public Layer {
 public:
  SincConvLayer(std::size_t n_filters, std::size_t taps, const CutoffParams& init)
      : f1_raw_(Tensor::from({n_filters}, init.f1_raw)),
        f2_raw_(Tensor::from({n_filters}, init.f2_raw)),
        grad_f1_(Tensor::zeros({n_filters})),
        grad_f2_(Tensor::zeros({n_filters})),
        taps_len_(taps),
        window_(hamming_window(taps)) {
    require_param(init.count() == n_filters, "sinc_conv: init size mismatch");
  }

  std::string kind() const override { return "sinc_conv"; }

  Tensor forward(const Tensor& input, bool) override {
    require_shape(input.rank() == 3 && input.dim(1) == 1,
                  "sinc_conv: expected input [batch, 1, time]");
    require_shape(input.dim(2) >= taps_len_, "sinc_conv: time axis shorter than the filter");
    cached_input_ = input;
    materialize();
    std::size_t t_out = input.dim(2) - taps_len_ + 1;
    Tensor y({input.dim(0), filter_count(), t_out});
    detail::correlate_batch(input, bank_taps_, y, threads_);
    return y;
  }

  Tensor backward(const Tensor& grad_output) override {
    require_contract(cached_input_.size() > 0, "sinc_conv: backward before forward");
    require_contract(grad_output.rank() == 3 && grad_output.dim(1) == filter_count() &&
                         grad_output.dim(0) == cached_input_.dim(0),
                     "sinc_conv: upstream gradient does not match the cached forward");
    // dLoss/dtap, then contract with the analytic tap derivatives and the
    // reparametrization Jacobian down to the raw cutoffs.
    Tensor dtaps({filter_count(), 1, taps_len_});
    detail::correlate_weight_grad(cached_input_, grad_output, dtaps, threads_);
    for (std::size_t f = 0; f < filter_count(); ++f) {
      auto [d_f1, d_f2] = filter_gradients(abs_f1_[f], abs_f2_[f], taps_len_, window_);
      const double* dt = dtaps.row(f, 0);
      double g1 = 0.0, g2 = 0.0;
      for (std::size_t l = 0; l < taps_len_; ++l) {
        g1 += dt[l] * d_f1[l];
        g2 += dt[l] * d_f2[l];
      }
      double s1 = sign(f1_raw_[f]);
      double s2 = sign(f2_raw_[f] - f1_raw_[f]);
      grad_f1_[f] += g1 * s1 + g2 * (s1 - s2);
      grad_f2_[f] += g2 * s2;
    }
    if (!needs_input_grad_) return Tensor();
    Tensor dx(cached_input_.shape());
    detail::correlate_input_grad(grad_output, bank_taps_, dx, threads_);
    return dx;
  }

  std::vector<ParamRef> params() override {
    return {{"f1_raw", &f1_raw_, &grad_f1_}, {"f2_raw", &f2_raw_, &grad_f2_}};
  }

  void set_threads(std::size_t t) override { threads_ = t; }

  std::size_t filter_count() const { return f1_raw_.size(); }
  std::size_t filter_length() const { return taps_len_; }
  const WindowVector& window() const { return window_; }

  /// Current admissible cutoffs, normalized units.
  CutoffParams raw_params() const {
    return CutoffParams{f1_raw_.vec(), f2_raw_.vec()};
  }

  /// Taps as used by the last forward (or built fresh when none ran yet).
  SincFilterBank bank() {
    materialize();
    SincFilterBank bank;
    bank.length = taps_len_;
    for (std::size_t f = 0; f < filter_count(); ++f) {
      const double* w = bank_taps_.row(f, 0);
      bank.taps.emplace_back(w, w + taps_len_);
      bank.half_taps.push_back(
          build_half_filter(abs_f1_[f], abs_f2_[f], taps_len_, window_));
    }
    return bank;
  }

 private:
  static double sign(double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); }

  void materialize() {
    abs_f1_.resize(filter_count());
    abs_f2_.resize(filter_count());
    bank_taps_ = Tensor({filter_count(), 1, taps_len_});
    for (std::size_t f = 0; f < filter_count(); ++f) {
      auto [a1, a2] = reparametrize(f1_raw_[f], f2_raw_[f]);
      abs_f1_[f] = a1;
      abs_f2_[f] = a2;
      auto full = mirror_half(build_half_filter(a1, a2, taps_len_, window_));
      std::copy(full.begin(), full.end(), bank_taps_.row(f, 0));
    }
  }

  Tensor f1_raw_, f2_raw_, grad_f1_, grad_f2_;
  std::size_t taps_len_;
  WindowVector window_;
  Tensor bank_taps_;
  std::vector<double> abs_f1_, abs_f2_;
  Tensor cached_input_;
  std::size_t threads_ = 1;
};

class DenseLayer : public Layer {
 public:
  DenseLayer(std::size_t in, std::size_t out, Rng& rng)
      : weights_(glorot_init({out, in}, in, out, rng)),
        bias_(Tensor::zeros({out})),
        grad_weights_(Tensor::zeros({out, in})),
        grad_bias_(Tensor::zeros({out})) {}

  std::string kind() const override { return "dense"; }

  // Accepts any [batch, ...] tensor and flattens the trailing axes.
  Tensor forward(const Tensor& input, bool) override {
    std::size_t batch = input.dim(0);
    std::size_t in = input.size() / batch;
    require_shape(in == weights_.dim(1), "dense: input feature count mismatch");
    cached_shape_ = input.shape();
    cached_input_ = input.reshaped({batch, in});
    std::size_t out = weights_.dim(0);
    Tensor y({batch, out});
    for (std::size_t b = 0; b < batch; ++b) {
      const double* x = cached_input_.data() + b * in;
      for (std::size_t o = 0; o < out; ++o) {
        const double* w = weights_.data() + o * in;
        double s = bias_[o];
        for (std::size_t i = 0; i < in; ++i) s += w[i] * x[i];
        y.at(b, o) = s;
      }
    }
    return y;
  }

  Tensor backward(const Tensor& grad_output) override {
    require_contract(cached_input_.size() > 0, "dense: backward before forward");
    std::size_t batch = cached_input_.dim(0);
    std::size_t in = weights_.dim(1), out = weights_.dim(0);
    for (std::size_t b = 0; b < batch; ++b) {
      const double* x = cached_input_.data() + b * in;
      const double* g = grad_output.data() + b * out;
      for (std::size_t o = 0; o < out; ++o) {
        double* dw = grad_weights_.data() + o * in;
        double go = g[o];
        for (std::size_t i = 0; i < in; ++i) dw[i] += go * x[i];
        grad_bias_[o] += go;
      }
    }
    if (!needs_input_grad_) return Tensor();
    Tensor dx({batch, in});
    for (std::size_t b = 0; b < batch; ++b) {
      const double* g = grad_output.data() + b * out;
      double* d = dx.data() + b * in;
      for (std::size_t o = 0; o < out; ++o) {
        const double* w = weights_.data() + o * in;
        double go = g[o];
        for (std::size_t i = 0; i < in; ++i) d[i] += go * w[i];
      }
    }
    return dx.reshaped(cached_shape_);
  }

  std::vector<ParamRef> params() override {
    return {{"weights", &weights_, &grad_weights_}, {"bias", &bias_, &grad_bias_}};
  }

 private:
  Tensor weights_, bias_, grad_weights_, grad_bias_;
  Tensor cached_input_;
  std::vector<std::size_t> cached_shape_;
};

class LeakyReluLayer : public Layer {
 public:
  explicit LeakyReluLayer(double slope) : slope_(slope) {}

  std::string kind() const override { return "leaky_relu"; }

  Tensor forward(const Tensor& input, bool) override {
    cached_input_ = input;
    Tensor y(input.shape());
    for (std::size_t i = 0; i < input.size(); ++i)
      y[i] = input[i] >= 0.0 ? input[i] : slope_ * input[i];
    return y;
  }

  Tensor backward(const Tensor& grad_output) override {
    require_contract(cached_input_.size() > 0, "leaky_relu: backward before forward");
    Tensor dx(cached_input_.shape());
    for (std::size_t i = 0; i < dx.size(); ++i)
      dx[i] = grad_output[i] * (cached_input_[i] >= 0.0 ? 1.0 : slope_);
    return dx;
  }

  double slope() const { return slope_; }

 private:
  double slope_;
  Tensor cached_input_;
};

/// Per-sample normalization over every non-batch element, with a learnable
/// elementwise affine of the normalized shape. A constant input maps to the
/// all-zero normalized tensor before the affine.
class LayerNormLayer : public Layer {
 public:
  explicit LayerNormLayer(std::size_t normalized_size, double eps = 1e-5)
      : gamma_(Tensor::from({normalized_size},
                            std::vector<double>(normalized_size, 1.0))),
        beta_(Tensor::zeros({normalized_size})),
        grad_gamma_(Tensor::zeros({normalized_size})),
        grad_beta_(Tensor::zeros({normalized_size})),
        eps_(eps) {}

  std::string kind() const override { return "layer_norm"; }

  Tensor forward(const Tensor& input, bool) override {
    std::size_t batch = input.dim(0);
    std::size_t n = input.size() / batch;
    require_shape(n == gamma_.size(), "layer_norm: normalized size mismatch");
    xhat_ = Tensor({batch, n});
    inv_std_.assign(batch, 0.0);
    Tensor y(input.shape());
    for (std::size_t b = 0; b < batch; ++b) {
      const double* x = input.data() + b * n;
      double mean = 0.0;
      for (std::size_t i = 0; i < n; ++i) mean += x[i];
      mean /= static_cast<double>(n);
      double var = 0.0;
      for (std::size_t i = 0; i < n; ++i) var += (x[i] - mean) * (x[i] - mean);
      var /= static_cast<double>(n);
      double inv = 1.0 / std::sqrt(var + eps_);
      inv_std_[b] = inv;
      double* xh = xhat_.data() + b * n;
      double* out = y.data() + b * n;
      for (std::size_t i = 0; i < n; ++i) {
        xh[i] = (x[i] - mean) * inv;
        out[i] = gamma_[i] * xh[i] + beta_[i];
      }
    }
    return y;
  }

  Tensor backward(const Tensor& grad_output) override {
    require_contract(xhat_.size() > 0, "layer_norm: backward before forward");
    std::size_t batch = xhat_.dim(0), n = gamma_.size();
    Tensor dx(grad_output.shape());
    for (std::size_t b = 0; b < batch; ++b) {
      const double* g = grad_output.data() + b * n;
      const double* xh = xhat_.data() + b * n;
      double mean_dxhat = 0.0, mean_dxhat_xhat = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        double dxh = g[i] * gamma_[i];
        mean_dxhat += dxh;
        mean_dxhat_xhat += dxh * xh[i];
        grad_gamma_[i] += g[i] * xh[i];
        grad_beta_[i] += g[i];
      }
      mean_dxhat /= static_cast<double>(n);
      mean_dxhat_xhat /= static_cast<double>(n);
      double* d = dx.data() + b * n;
      for (std::size_t i = 0; i < n; ++i) {
        double dxh = g[i] * gamma_[i];
        d[i] = inv_std_[b] * (dxh - mean_dxhat - xh[i] * mean_dxhat_xhat);
      }
    }
    return dx;
  }

  std::vector<ParamRef> params() override {
    return {{"gamma", &gamma_, &grad_gamma_}, {"beta", &beta_, &grad_beta_}};
  }

 private:
  Tensor gamma_, beta_, grad_gamma_, grad_beta_;
  Tensor xhat_;
  std::vector<double> inv_std_;
  double eps_;
};

/// Per-feature normalization over the batch axis of a [batch, features]
/// tensor. Training uses batch statistics and updates running statistics;
/// inference normalizes with the running statistics.
class BatchNormLayer : public Layer {
 public:
  explicit BatchNormLayer(std::size_t features, double momentum = 0.1, double eps = 1e-5)
      : gamma_(Tensor::from({features}, std::vector<double>(features, 1.0))),
        beta_(Tensor::zeros({features})),
        grad_gamma_(Tensor::zeros({features})),
        grad_beta_(Tensor::zeros({features})),
        running_mean_(Tensor::zeros({features})),
        running_var_(Tensor::from({features}, std::vector<double>(features, 1.0))),
        momentum_(momentum),
        eps_(eps) {}

  std::string kind() const override { return "batch_norm"; }

  Tensor forward(const Tensor& input, bool training) override {
    require_shape(input.rank() == 2 && input.dim(1) == gamma_.size(),
                  "batch_norm: expected [batch, features]");
    std::size_t batch = input.dim(0), n = gamma_.size();
    Tensor y(input.shape());
    trained_forward_ = training;
    if (training) {
      xhat_ = Tensor({batch, n});
      inv_std_.assign(n, 0.0);
      for (std::size_t j = 0; j < n; ++j) {
        double mean = 0.0;
        for (std::size_t b = 0; b < batch; ++b) mean += input.at(b, j);
        mean /= static_cast<double>(batch);
        double var = 0.0;
        for (std::size_t b = 0; b < batch; ++b) {
          double d = input.at(b, j) - mean;
          var += d * d;
        }
        var /= static_cast<double>(batch);
        double inv = 1.0 / std::sqrt(var + eps_);
        inv_std_[j] = inv;
        for (std::size_t b = 0; b < batch; ++b) {
          double xh = (input.at(b, j) - mean) * inv;
          xhat_.at(b, j) = xh;
          y.at(b, j) = gamma_[j] * xh + beta_[j];
        }
        running_mean_[j] = (1.0 - momentum_) * running_mean_[j] + momentum_ * mean;
        running_var_[j] = (1.0 - momentum_) * running_var_[j] + momentum_ * var;
      }
    } else {
      for (std::size_t j = 0; j < n; ++j) {
        double inv = 1.0 / std::sqrt(running_var_[j] + eps_);
        for (std::size_t b = 0; b < batch; ++b)
          y.at(b, j) = gamma_[j] * (input.at(b, j) - running_mean_[j]) * inv + beta_[j];
      }
    }
    return y;
  }

  Tensor backward(const Tensor& grad_output) override {
    require_contract(trained_forward_ && xhat_.size() > 0,
                     "batch_norm: backward requires a training-mode forward");
    std::size_t batch = xhat_.dim(0), n = gamma_.size();
    Tensor dx(grad_output.shape());
    for (std::size_t j = 0; j < n; ++j) {
      double mean_dxhat = 0.0, mean_dxhat_xhat = 0.0;
      for (std::size_t b = 0; b < batch; ++b) {
        double dxh = grad_output.at(b, j) * gamma_[j];
        mean_dxhat += dxh;
        mean_dxhat_xhat += dxh * xhat_.at(b, j);
        grad_gamma_[j] += grad_output.at(b, j) * xhat_.at(b, j);
        grad_beta_[j] += grad_output.at(b, j);
      }
      mean_dxhat /= static_cast<double>(batch);
      mean_dxhat_xhat /= static_cast<double>(batch);
      for (std::size_t b = 0; b < batch; ++b) {
        double dxh = grad_output.at(b, j) * gamma_[j];
        dx.at(b, j) = inv_std_[j] * (dxh - mean_dxhat - xhat_.at(b, j) * mean_dxhat_xhat);
      }
    }
    return dx;
  }

  std::vector<ParamRef> params() override {
    return {{"gamma", &gamma_, &grad_gamma_}, {"beta", &beta_, &grad_beta_}};
  }

  std::vector<ParamRef> state() override {
    return {{"running_mean", &running_mean_, nullptr},
            {"running_var", &running_var_, nullptr}};
  }

 private:
  Tensor gamma_, beta_, grad_gamma_, grad_beta_;
  Tensor running_mean_, running_var_;
  Tensor xhat_;
  std::vector<double> inv_std_;
  double momentum_, eps_;
  bool trained_forward_ = false;
};

/// Max pooling along time; backward routes each gradient to the first
/// maximal element of its pool (fixed tie-break).
class MaxPoolLayer : public Layer {
 public:
  explicit MaxPoolLayer(std::size_t width, std::size_t stride = 0)
      : width_(width), stride_(stride == 0 ? width : stride) {
    require_param(width_ >= 1, "max_pool: width must be >= 1");
  }

  std::string kind() const override { return "max_pool"; }

  Tensor forward(const Tensor& input, bool) override {
    require_shape(input.rank() == 3, "max_pool: expected [batch, channels, time]");
    require_shape(input.dim(2) >= width_, "max_pool: time axis shorter than pool width");
    std::size_t batch = input.dim(0), channels = input.dim(1), time = input.dim(2);
    std::size_t t_out = (time - width_) / stride_ + 1;
    input_shape_ = input.shape();
    argmax_.assign(batch * channels * t_out, 0);
    Tensor y({batch, channels, t_out});
    for (std::size_t b = 0; b < batch; ++b) {
      for (std::size_t c = 0; c < channels; ++c) {
        const double* in = input.row(b, c);
        double* out = y.row(b, c);
        std::size_t* am = argmax_.data() + (b * channels + c) * t_out;
        for (std::size_t t = 0; t < t_out; ++t) {
          std::size_t start = t * stride_;
          std::size_t best = start;
          double v = in[start];
          for (std::size_t k = 1; k < width_; ++k) {
            if (in[start + k] > v) {
              v = in[start + k];
              best = start + k;
            }
          }
          out[t] = v;
          am[t] = best;
        }
      }
    }
    return y;
  }

  Tensor backward(const Tensor& grad_output) override {
    require_contract(!argmax_.empty(), "max_pool: backward before forward");
    Tensor dx(input_shape_);
    std::size_t batch = grad_output.dim(0), channels = grad_output.dim(1);
    std::size_t t_out = grad_output.dim(2);
    for (std::size_t b = 0; b < batch; ++b) {
      for (std::size_t c = 0; c < channels; ++c) {
        const double* g = grad_output.row(b, c);
        double* d = dx.row(b, c);
        const std::size_t* am = argmax_.data() + (b * channels + c) * t_out;
        for (std::size_t t = 0; t < t_out; ++t) d[am[t]] += g[t];
      }
    }
    return dx;
  }

 private:
  std::size_t width_, stride_;
  std::vector<std::size_t> argmax_;
  std::vector<std::size_t> input_shape_;
};

/// Row-wise softmax of a [batch, classes] tensor; each output row sums to 1.
inline Tensor softmax_rows(const Tensor& logits) {
  require_shape(logits.rank() == 2, "softmax: expected [batch, classes]");
  std::size_t batch = logits.dim(0), classes = logits.dim(1);
  Tensor y(logits.shape());
  for (std::size_t b = 0; b < batch; ++b) {
    const double* x = logits.data() + b * classes;
    double* out = y.data() + b * classes;
    double mx = x[0];
    for (std::size_t k = 1; k < classes; ++k) mx = std::max(mx, x[k]);
    double sum = 0.0;
    for (std::size_t k = 0; k < classes; ++k) {
      out[k] = std::exp(x[k] - mx);
      sum += out[k];
    }
    for (std::size_t k = 0; k < classes; ++k) out[k] /= sum;
  }
  return y;
}

class SoftmaxLayer : public Layer {
 public:
  std::string kind() const override { return "softmax"; }

  Tensor forward(const Tensor& input, bool) override {
    output_ = softmax_rows(input);
    return output_;
  }

  Tensor backward(const Tensor& grad_output) override {
    require_contract(output_.size() > 0, "softmax: backward before forward");
    std::size_t batch = output_.dim(0), classes = output_.dim(1);
    Tensor dx(output_.shape());
    for (std::size_t b = 0; b < batch; ++b) {
      const double* y = output_.data() + b * classes;
      const double* g = grad_output.data() + b * classes;
      double dot = 0.0;
      for (std::size_t k = 0; k < classes; ++k) dot += g[k] * y[k];
      double* d = dx.data() + b * classes;
      for (std::size_t k = 0; k < classes; ++k) d[k] = y[k] * (g[k] - dot);
    }
    return dx;
  }

 private:
  Tensor output_;
};

/// Inverted dropout. Present in the pipeline but default-off (rate 0 is the
/// identity); masks are drawn from the layer's own deterministic stream.
class DropoutLayer : public Layer {
 public:
  DropoutLayer(double rate, std::uint64_t seed) : rate_(rate), rng_(seed) {
    require_param(rate >= 0.0 && rate < 1.0, "dropout: rate must be in [0, 1)");
  }

  std::string kind() const override { return "dropout"; }

  Tensor forward(const Tensor& input, bool training) override {
    if (!training || rate_ == 0.0) {
      mask_.assign(input.size(), 1.0);
      return input;
    }
    double keep = 1.0 - rate_;
    mask_.resize(input.size());
    Tensor y(input.shape());
    for (std::size_t i = 0; i < input.size(); ++i) {
      mask_[i] = rng_.uniform() < keep ? 1.0 / keep : 0.0;
      y[i] = input[i] * mask_[i];
    }
    return y;
  }

  Tensor backward(const Tensor& grad_output) override {
    require_contract(mask_.size() == grad_output.size(), "dropout: backward before forward");
    Tensor dx(grad_output.shape());
    for (std::size_t i = 0; i < dx.size(); ++i) dx[i] = grad_output[i] * mask_[i];
    return dx;
  }

 private:
  double rate_;
  Rng rng_;
  std::vector<double> mask_;
};

/// Single-sample valid correlation, x [c_in, time] with filters
/// [c_out, c_in, taps].
inline Tensor conv1d_forward(const Tensor& x, const Tensor& filters) {
  require_shape(x.rank() == 2 && filters.rank() == 3 && x.dim(0) == filters.dim(1),
                "conv1d_forward: expected x [c_in, time], filters [c_out, c_in, taps]");
  require_shape(x.dim(1) >= filters.dim(2), "conv1d_forward: time axis shorter than filter");
  Tensor xb = x.reshaped({1, x.dim(0), x.dim(1)});
  std::size_t t_out = x.dim(1) - filters.dim(2) + 1;
  Tensor y({1, filters.dim(0), t_out});
  detail::correlate_batch(xb, filters, y, 1);
  return y.reshaped({filters.dim(0), t_out});
}

/// Single-sample sinc convolution: materializes the bank via the half
/// construction and correlates. Numerically identical to materializing the
/// full filters directly.
inline Tensor sinc_conv_forward(const Tensor& x, const CutoffParams& params,
                                std::size_t taps_len, const WindowVector& window) {
  require_shape(x.rank() == 2 && x.dim(0) == 1, "sinc_conv_forward: expected x [1, time]");
  Tensor filters({params.count(), 1, taps_len});
  for (std::size_t f = 0; f < params.count(); ++f) {
    auto [a1, a2] = reparametrize(params.f1_raw[f], params.f2_raw[f]);
    auto full = mirror_half(build_half_filter(a1, a2, taps_len, window));
    std::copy(full.begin(), full.end(), filters.row(f, 0));
  }
  return conv1d_forward(x, filters);
}

}  // namespace sincnet
