// sincnet/trainer.hpp

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
#include <fstream>
#include <functional>
#include <map>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "sincnet/common.hpp"
#include "sincnet/dataio.hpp"
#include "sincnet/network.hpp"

// RMSprop training loop over waveform chunks, plus frame- and
// sentence-level evaluation. Everything is deterministic given the seed:
// shuffles come from one owned stream and gradient reductions are ordered.

namespace sincnet {

struct RmspropConfig {
  double lr = 0.001;
  double alpha = 0.95;
  double epsilon = 1e-7;
};

/// v <- alpha*v + (1-alpha)*g^2;  p <- p - lr*g/(sqrt(v) + epsilon).
/// The epsilon sits outside the square root.
class RmspropOptimizer {
 public:
  RmspropOptimizer(std::vector<ParamRef> params, const RmspropConfig& cfg)
      : params_(std::move(params)), cfg_(cfg) {
    require_param(cfg.lr > 0.0 && cfg.alpha >= 0.0 && cfg.alpha < 1.0 && cfg.epsilon > 0.0,
                  "rmsprop: invalid hyperparameters");
    for (const auto& p : params_) {
      require_contract(p.grad != nullptr && p.value->same_shape(*p.grad),
                       "rmsprop: gradient shape must mirror the parameter");
      v_.push_back(Tensor::zeros(p.value->shape()));
    }
  }

  void step() {
    for (std::size_t i = 0; i < params_.size(); ++i) {
      Tensor& p = *params_[i].value;
      const Tensor& g = *params_[i].grad;
      Tensor& v = v_[i];
      for (std::size_t k = 0; k < p.size(); ++k) {
        v[k] = cfg_.alpha * v[k] + (1.0 - cfg_.alpha) * g[k] * g[k];
        p[k] -= cfg_.lr * g[k] / (std::sqrt(v[k]) + cfg_.epsilon);
      }
    }
  }

  const Tensor& accumulator(std::size_t i) const { return v_.at(i); }
  std::size_t size() const { return params_.size(); }

 private:
  std::vector<ParamRef> params_;
  RmspropConfig cfg_;
  std::vector<Tensor> v_;
};

/// Mean negative log posterior of the true class. The returned gradient is
/// taken at the pre-softmax logits: (posterior - one_hot) / frames.
inline std::pair<double, Tensor> cross_entropy(const Tensor& posteriors,
                                               const std::vector<std::size_t>& labels) {
  require_shape(posteriors.rank() == 2 && posteriors.dim(0) == labels.size(),
                "cross_entropy: posteriors must be [frames, classes] matching labels");
  std::size_t frames = posteriors.dim(0), classes = posteriors.dim(1);
  for (std::size_t b = 0; b < frames; ++b) {
    double row = 0.0;
    for (std::size_t k = 0; k < classes; ++k) row += posteriors.at(b, k);
    require_param(std::abs(row - 1.0) <= 1e-6, "cross_entropy: rows must sum to 1");
    require_param(labels[b] < classes, "cross_entropy: label out of range");
  }
  double loss = 0.0;
  Tensor grad(posteriors.shape());
  for (std::size_t b = 0; b < frames; ++b) {
    loss -= std::log(posteriors.at(b, labels[b]));
    for (std::size_t k = 0; k < classes; ++k)
      grad.at(b, k) = (posteriors.at(b, k) - (k == labels[b] ? 1.0 : 0.0)) /
                      static_cast<double>(frames);
  }
  return {loss / static_cast<double>(frames), grad};
}

inline std::pair<double, Tensor> cross_entropy_from_logits(
    const Tensor& logits, const std::vector<std::size_t>& labels) {
  return cross_entropy(softmax_rows(logits), labels);
}

/// Labeled fixed-length chunks, the unit of training and frame scoring.
struct FrameDataset {
  std::vector<std::vector<double>> frames;
  std::vector<std::size_t> labels;
  std::size_t window = 0;

  std::size_t size() const { return frames.size(); }
};

inline FrameDataset build_frame_dataset(const std::vector<Utterance>& utterances,
                                        const std::map<std::string, std::size_t>& label_of,
                                        std::size_t chunk_ms, std::size_t overlap_ms) {
  require_param(!utterances.empty(), "frame dataset: no utterances");
  FrameDataset ds;
  ds.window = chunk_window_samples(utterances.front().sample_rate, chunk_ms);
  for (const auto& utt : utterances) {
    auto it = label_of.find(utt.speaker_id);
    require_param(it != label_of.end(),
                  "frame dataset: speaker '" + utt.speaker_id + "' has no class label");
    for (auto& c : chunk_signal(utt.samples, utt.sample_rate, chunk_ms, overlap_ms,
                                ChunkMode::kStrict)) {
      ds.frames.push_back(std::move(c));
      ds.labels.push_back(it->second);
    }
  }
  return ds;
}

inline Tensor make_batch(const FrameDataset& ds, const std::vector<std::size_t>& order,
                         std::size_t begin, std::size_t end) {
  Tensor batch({end - begin, 1, ds.window});
  for (std::size_t i = begin; i < end; ++i)
    std::copy(ds.frames[order[i]].begin(), ds.frames[order[i]].end(),
              batch.row(i - begin, 0));
  return batch;
}

inline std::size_t argmax_row(const Tensor& t, std::size_t row) {
  std::size_t classes = t.dim(1);
  const double* p = t.data() + row * classes;
  return static_cast<std::size_t>(std::max_element(p, p + classes) - p);
}

/// Frame error rate (%) of argmax classification in inference mode.
inline double evaluate_fer(Network& net, const FrameDataset& ds, std::size_t minibatch) {
  require_param(ds.size() > 0, "evaluate_fer: empty dataset");
  std::vector<std::size_t> order(ds.size());
  std::iota(order.begin(), order.end(), 0);
  std::size_t wrong = 0;
  for (std::size_t begin = 0; begin < ds.size(); begin += minibatch) {
    std::size_t end = std::min(ds.size(), begin + minibatch);
    Tensor logits = net.forward(make_batch(ds, order, begin, end), false);
    for (std::size_t i = begin; i < end; ++i)
      if (argmax_row(logits, i - begin) != ds.labels[order[i]]) ++wrong;
  }
  return 100.0 * static_cast<double>(wrong) / static_cast<double>(ds.size());
}

struct EpochLog {
  std::size_t epoch = 0;  // 1-based
  double loss = 0.0;
  double train_fer = 0.0;  // percent
  double eval_fer = 0.0;   // percent, valid when has_eval
  bool has_eval = false;
};

inline void write_train_log(const std::string& path, const std::vector<EpochLog>& logs) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw FormatError("cannot write training log: " + path);
  out << "epoch,loss,train_fer,eval_fer\n";
  for (const auto& log : logs) {
    out << log.epoch << "," << format_double(log.loss) << "," << format_double(log.train_fer)
        << ",";
    if (log.has_eval) out << format_double(log.eval_fer);
    out << "\n";
  }
}

inline std::vector<EpochLog> read_train_log(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open training log: " + path);
  std::string line;
  if (!std::getline(in, line) || line != "epoch,loss,train_fer,eval_fer")
    throw FormatError(path + ": expected header 'epoch,loss,train_fer,eval_fer'");
  std::vector<EpochLog> logs;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::size_t c1 = line.find(',');
    std::size_t c2 = line.find(',', c1 + 1);
    std::size_t c3 = line.find(',', c2 + 1);
    if (c1 == std::string::npos || c2 == std::string::npos || c3 == std::string::npos)
      throw FormatError(path + ":" + std::to_string(lineno) + ": expected 4 fields");
    EpochLog log;
    try {
      log.epoch = std::stoul(line.substr(0, c1));
      log.loss = std::stod(line.substr(c1 + 1, c2 - c1 - 1));
      log.train_fer = std::stod(line.substr(c2 + 1, c3 - c2 - 1));
      std::string eval = line.substr(c3 + 1);
      if (!eval.empty()) {
        log.eval_fer = std::stod(eval);
        log.has_eval = true;
      }
    } catch (const std::exception&) {
      throw FormatError(path + ":" + std::to_string(lineno) + ": malformed number");
    }
    logs.push_back(log);
  }
  return logs;
}

struct TrainConfig {
  std::size_t minibatch = 128;
  std::size_t epochs = 12;
  std::uint64_t seed = 7;
  std::size_t chunk_ms = 200;
  std::size_t overlap_ms = 10;
  std::size_t threads = 1;
  std::size_t checkpoint_interval = 0;  // epochs; 0 disables interval checkpoints
  bool shuffle = true;
};

/// One pass over all training chunks per epoch. Aborts on a non-finite loss
/// with the epoch, batch, and parameter norm in the diagnostic rather than
/// clipping, so gradient defects surface instead of being masked.
inline std::vector<EpochLog> train(
    Network& net, const FrameDataset& train_set, const FrameDataset* eval_set,
    const TrainConfig& cfg, const RmspropConfig& opt_cfg,
    const std::function<void(std::size_t, Network&)>& on_checkpoint = {}) {
  require_param(train_set.size() > 0, "train: empty dataset");
  require_param(cfg.minibatch > 0 && cfg.epochs > 0, "train: minibatch and epochs must be positive");
  require_param(cfg.chunk_ms > cfg.overlap_ms, "train: chunk_ms must exceed overlap_ms");
  require_param(train_set.window == net.arch().input_samples,
                "train: dataset window does not match network input");
  for (std::size_t label : train_set.labels)
    require_param(label < net.arch().n_classes, "train: label outside class count");

  net.set_threads(cfg.threads);
  RmspropOptimizer opt(net.params(), opt_cfg);
  Rng rng(Rng::derive(cfg.seed, 0x7261696e));
  std::vector<std::size_t> order(train_set.size());
  std::iota(order.begin(), order.end(), 0);

  std::vector<EpochLog> logs;
  for (std::size_t epoch = 1; epoch <= cfg.epochs; ++epoch) {
    if (cfg.shuffle) rng.shuffle(order);
    double loss_sum = 0.0;
    std::size_t wrong = 0, batch_index = 0;
    for (std::size_t begin = 0; begin < train_set.size(); begin += cfg.minibatch, ++batch_index) {
      std::size_t end = std::min(train_set.size(), begin + cfg.minibatch);
      Tensor batch = make_batch(train_set, order, begin, end);
      std::vector<std::size_t> labels(end - begin);
      for (std::size_t i = begin; i < end; ++i) labels[i - begin] = train_set.labels[order[i]];

      Tensor logits = net.forward(batch, true);
      auto [loss, grad] = cross_entropy_from_logits(logits, labels);
      if (!std::isfinite(loss)) {
        double pnorm = 0.0;
        for (const auto& p : net.params()) pnorm += p.value->norm() * p.value->norm();
        throw ContractError("training diverged: non-finite loss at epoch " +
                            std::to_string(epoch) + ", batch " + std::to_string(batch_index) +
                            ", parameter norm " + format_double(std::sqrt(pnorm)));
      }
      loss_sum += loss * static_cast<double>(end - begin);
      for (std::size_t i = begin; i < end; ++i)
        if (argmax_row(logits, i - begin) != labels[i - begin]) ++wrong;

      net.zero_grad();
      net.backward(grad);
      opt.step();
    }

    EpochLog log;
    log.epoch = epoch;
    log.loss = loss_sum / static_cast<double>(train_set.size());
    log.train_fer = 100.0 * static_cast<double>(wrong) / static_cast<double>(train_set.size());
    if (eval_set) {
      log.eval_fer = evaluate_fer(net, *eval_set, cfg.minibatch);
      log.has_eval = true;
    }
    logs.push_back(log);
    if (on_checkpoint && cfg.checkpoint_interval > 0 && epoch % cfg.checkpoint_interval == 0)
      on_checkpoint(epoch, net);
  }
  return logs;
}

/// Mean of the frame posteriors over the given chunks (inference mode).
inline std::vector<double> mean_posterior(Network& net,
                                          const std::vector<std::vector<double>>& chunks,
                                          std::size_t minibatch = 64) {
  require_param(!chunks.empty(), "mean_posterior: need at least one chunk");
  std::size_t classes = net.arch().n_classes;
  std::vector<double> mean(classes, 0.0);
  for (std::size_t begin = 0; begin < chunks.size(); begin += minibatch) {
    std::size_t end = std::min(chunks.size(), begin + minibatch);
    Tensor batch({end - begin, 1, chunks[0].size()});
    for (std::size_t i = begin; i < end; ++i)
      std::copy(chunks[i].begin(), chunks[i].end(), batch.row(i - begin, 0));
    Tensor post = softmax_rows(net.forward(batch, false));
    for (std::size_t i = 0; i < end - begin; ++i)
      for (std::size_t k = 0; k < classes; ++k) mean[k] += post.at(i, k);
  }
  for (double& v : mean) v /= static_cast<double>(chunks.size());
  return mean;
}

/// Sentence decision by posterior averaging over chunks; ties break to the
/// lowest class index.
inline std::pair<std::size_t, std::vector<double>> sentence_classify(
    Network& net, const std::vector<std::vector<double>>& chunks) {
  std::vector<double> mean = mean_posterior(net, chunks);
  std::size_t best = static_cast<std::size_t>(
      std::max_element(mean.begin(), mean.end()) - mean.begin());
  return {best, std::move(mean)};
}

inline double classification_error_rate(const std::vector<std::size_t>& predictions,
                                        const std::vector<std::size_t>& labels) {
  require_param(!predictions.empty() && predictions.size() == labels.size(),
                "classification_error_rate: prediction/label lengths must match and be nonzero");
  std::size_t wrong = 0;
  for (std::size_t i = 0; i < predictions.size(); ++i)
    if (predictions[i] != labels[i]) ++wrong;
  return 100.0 * static_cast<double>(wrong) / static_cast<double>(predictions.size());
}

/// Sentence-level CER (%) over whole utterances.
inline double evaluate_cer(Network& net, const std::vector<Utterance>& utterances,
                           const std::map<std::string, std::size_t>& label_of,
                           std::size_t chunk_ms, std::size_t overlap_ms) {
  require_param(!utterances.empty(), "evaluate_cer: no utterances");
  std::vector<std::size_t> predictions, labels;
  for (const auto& utt : utterances) {
    auto it = label_of.find(utt.speaker_id);
    require_param(it != label_of.end(),
                  "evaluate_cer: speaker '" + utt.speaker_id + "' has no class label");
    auto chunks = chunk_signal(utt.samples, utt.sample_rate, chunk_ms, overlap_ms,
                               ChunkMode::kPadded);
    predictions.push_back(sentence_classify(net, chunks).first);
    labels.push_back(it->second);
  }
  return classification_error_rate(predictions, labels);
}

}  // namespace sincnet
