// sincnet/gradcheck.hpp

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
#include <string>
#include <vector>

#include "sincnet/common.hpp"
#include "sincnet/network.hpp"
#include "sincnet/trainer.hpp"

// Whole-network gradient check: every parameter element of a small seeded
// network, raw cutoffs included, is compared against a central finite
// difference of the cross-entropy loss.

namespace sincnet {

/// The reference tiny network: 4 sinc filters of length 17, one 2x5 conv
/// block, one dense layer of 8, 3 classes.
inline ArchConfig gradcheck_arch() {
  ArchConfig arch;
  arch.first_kind = "sinc_conv";
  arch.input_samples = 80;
  arch.sample_rate = 8000;
  arch.n_filters = 4;
  arch.filter_length = 17;
  arch.conv_channels = {2};
  arch.conv_kernels = {5};
  arch.pool_width = 3;
  arch.fc_sizes = {8};
  arch.n_classes = 3;
  return arch;
}

struct GradCheckReport {
  double max_rel_err = 0.0;
  std::string worst_param;
  std::size_t n_checked = 0;
};

/// Relative error with an absolute floor: deviations are measured against
/// max(|analytic|, |numeric|, floor) so near-zero gradients are compared
/// absolutely at the floor scale instead of amplifying finite-difference
/// noise.
inline double gradcheck_rel_err(double analytic, double numeric, double floor_scale) {
  return std::abs(analytic - numeric) /
         std::max({std::abs(analytic), std::abs(numeric), floor_scale});
}

/// Builds the seeded network, draws a fixed 3-sample batch, and compares the
/// analytic gradient of every parameter element with (L(p+h) - L(p-h))/2h.
inline GradCheckReport gradcheck_network(std::uint64_t seed, double fd_step = 1e-6,
                                         double rel_floor = 1e-2,
                                         const ArchConfig& arch = gradcheck_arch()) {
  Rng rng(Rng::derive(seed, 0x67636b));
  Network net = Network::build(arch, rng);
  const std::size_t batch = 3;
  Tensor x({batch, 1, arch.input_samples});
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = rng.uniform(-0.95, 0.95);
  std::vector<std::size_t> labels(batch);
  for (auto& l : labels) l = rng.index(arch.n_classes);

  auto loss_of = [&]() {
    return cross_entropy_from_logits(net.forward(x, true), labels).first;
  };

  net.zero_grad();
  auto [loss, grad] = cross_entropy_from_logits(net.forward(x, true), labels);
  require_contract(std::isfinite(loss), "gradcheck: non-finite loss");
  net.backward(grad);
  std::vector<std::vector<double>> analytic;
  for (const auto& p : net.params()) analytic.push_back(p.grad->vec());

  GradCheckReport report;
  auto params = net.params();
  for (std::size_t pi = 0; pi < params.size(); ++pi) {
    Tensor& value = *params[pi].value;
    for (std::size_t k = 0; k < value.size(); ++k) {
      double saved = value[k];
      double h = fd_step * std::max(1.0, std::abs(saved));
      value[k] = saved + h;
      double lp = loss_of();
      value[k] = saved - h;
      double lm = loss_of();
      value[k] = saved;
      double fd = (lp - lm) / (2.0 * h);
      double rel = gradcheck_rel_err(analytic[pi][k], fd, rel_floor);
      ++report.n_checked;
      if (rel > report.max_rel_err) {
        report.max_rel_err = rel;
        report.worst_param = params[pi].name + "[" + std::to_string(k) + "]";
      }
    }
  }
  return report;
}

/// Worst case over `trials` independently seeded networks.
inline GradCheckReport gradcheck_many(std::uint64_t base_seed, std::size_t trials,
                                      double fd_step = 1e-6, double rel_floor = 1e-2) {
  GradCheckReport worst;
  for (std::size_t t = 0; t < trials; ++t) {
    GradCheckReport r = gradcheck_network(Rng::derive(base_seed, t), fd_step, rel_floor);
    worst.n_checked += r.n_checked;
    if (r.max_rel_err > worst.max_rel_err) {
      worst.max_rel_err = r.max_rel_err;
      worst.worst_param = r.worst_param;
    }
  }
  return worst;
}

}  // namespace sincnet
