// sincnet/verification.hpp

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
#include <fstream>
#include <limits>
#include <map>
#include <numeric>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "sincnet/common.hpp"
#include "sincnet/dataio.hpp"
#include "sincnet/trainer.hpp"

// Speaker verification: d-vector cosine scoring, DNN-class posterior
// scoring, trial generation, and the equal error rate. Scores are
// similarities throughout (higher = more genuine); the threshold sweep
// accepts at score >= threshold.

namespace sincnet {

struct DVector {
  std::vector<double> values;
  std::string speaker_id;
  std::string utterance_id;
};

/// Mean of the last hidden layer over chunks (inference mode). The mean is
/// not length-normalized here; enrollment aggregation normalizes after
/// averaging.
inline std::vector<double> dvector_from_chunks(Network& net,
                                               const std::vector<std::vector<double>>& chunks,
                                               std::size_t minibatch = 64) {
  require_param(!chunks.empty(), "dvector: need at least one chunk");
  std::vector<double> mean(net.hidden_size(), 0.0);
  for (std::size_t begin = 0; begin < chunks.size(); begin += minibatch) {
    std::size_t end = std::min(chunks.size(), begin + minibatch);
    Tensor batch({end - begin, 1, chunks[0].size()});
    for (std::size_t i = begin; i < end; ++i)
      std::copy(chunks[i].begin(), chunks[i].end(), batch.row(i - begin, 0));
    net.forward(batch, false);
    const Tensor& hidden = net.hidden();
    for (std::size_t i = 0; i < end - begin; ++i)
      for (std::size_t k = 0; k < mean.size(); ++k) mean[k] += hidden.at(i, k);
  }
  double norm = 0.0;
  for (double& v : mean) {
    v /= static_cast<double>(chunks.size());
    norm += v * v;
  }
  if (!(norm > 0.0)) throw Error("dvector: degenerate embedding with zero norm");
  return mean;
}

inline DVector extract_dvector(Network& net, const Utterance& utt, std::size_t chunk_ms,
                               std::size_t overlap_ms) {
  auto chunks = chunk_signal(utt.samples, utt.sample_rate, chunk_ms, overlap_ms,
                             ChunkMode::kPadded);
  return DVector{dvector_from_chunks(net, chunks), utt.speaker_id, utt.utterance_id};
}

inline double cosine_score(const std::vector<double>& a, const std::vector<double>& b) {
  require_shape(a.size() == b.size() && !a.empty(), "cosine_score: dimension mismatch");
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  require_param(na > 0.0 && nb > 0.0, "cosine_score: zero-norm vector");
  return dot / (std::sqrt(na) * std::sqrt(nb));
}

/// Sentence-averaged posterior at the claimed class.
inline double posterior_score(Network& net, const std::vector<std::vector<double>>& chunks,
                              std::size_t claimed_index) {
  require_param(claimed_index < net.arch().n_classes,
                "posterior_score: claimed class out of range");
  return mean_posterior(net, chunks)[claimed_index];
}

struct Trial {
  std::string claimed_speaker;
  std::string utterance_id;
  bool genuine = false;
  double score = std::numeric_limits<double>::quiet_NaN();
};

/// One genuine trial per test sentence plus `impostors_per_genuine` trials
/// against the same claimed identity, drawn from the impostor split
/// (without replacement when the pool allows). Deterministic under seed.
inline std::vector<Trial> make_trials(const Manifest& manifest,
                                      std::size_t impostors_per_genuine, std::uint64_t seed) {
  validate_manifest(manifest);
  auto genuine_entries = manifest.split_entries("test");
  auto impostor_entries = manifest.split_entries("impostor");
  require_param(!genuine_entries.empty(), "make_trials: no test utterances");
  if (impostor_entries.empty()) throw ConfigError("make_trials: empty impostor pool");
  require_param(impostors_per_genuine >= 1, "make_trials: impostors_per_genuine must be >= 1");

  Rng rng(Rng::derive(seed, 0x74726961));
  std::vector<Trial> trials;
  for (const auto& g : genuine_entries) {
    trials.push_back({g.speaker_id, utterance_id_of(g), true,
                      std::numeric_limits<double>::quiet_NaN()});
    std::vector<std::size_t> picks;
    if (impostor_entries.size() >= impostors_per_genuine) {
      std::vector<std::size_t> pool(impostor_entries.size());
      std::iota(pool.begin(), pool.end(), 0);
      rng.shuffle(pool);
      picks.assign(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(impostors_per_genuine));
    } else {
      for (std::size_t k = 0; k < impostors_per_genuine; ++k)
        picks.push_back(rng.index(impostor_entries.size()));
    }
    for (std::size_t idx : picks)
      trials.push_back({g.speaker_id, utterance_id_of(impostor_entries[idx]), false,
                        std::numeric_limits<double>::quiet_NaN()});
  }
  return trials;
}

/// Enrollment model per speaker: mean of the speaker's utterance d-vectors,
/// renormalized to unit length after averaging.
inline std::map<std::string, std::vector<double>> enrollment_dvectors(
    Network& net, const std::vector<Utterance>& enroll_utts, std::size_t chunk_ms,
    std::size_t overlap_ms) {
  require_param(!enroll_utts.empty(), "enrollment: no utterances");
  std::map<std::string, std::vector<double>> sums;
  std::map<std::string, std::size_t> counts;
  for (const auto& utt : enroll_utts) {
    DVector d = extract_dvector(net, utt, chunk_ms, overlap_ms);
    auto& sum = sums[utt.speaker_id];
    if (sum.empty()) sum.assign(d.values.size(), 0.0);
    for (std::size_t k = 0; k < d.values.size(); ++k) sum[k] += d.values[k];
    counts[utt.speaker_id] += 1;
  }
  for (auto& [speaker, sum] : sums) {
    double norm = 0.0;
    for (double& v : sum) {
      v /= static_cast<double>(counts[speaker]);
      norm += v * v;
    }
    if (!(norm > 0.0))
      throw Error("enrollment: degenerate d-vector for speaker '" + speaker + "'");
    norm = std::sqrt(norm);
    for (double& v : sum) v /= norm;
  }
  return sums;
}

/// Fills trial scores with cosine(enrollment[claimed], test d-vector).
inline void score_trials_dvector(Network& net, std::vector<Trial>& trials,
                                 const std::map<std::string, std::vector<double>>& enrollment,
                                 const std::map<std::string, Utterance>& test_audio,
                                 std::size_t chunk_ms, std::size_t overlap_ms) {
  std::map<std::string, std::vector<double>> cache;
  for (auto& t : trials) {
    auto e = enrollment.find(t.claimed_speaker);
    require_param(e != enrollment.end(),
                  "score_trials: no enrollment for claimed speaker '" + t.claimed_speaker + "'");
    auto c = cache.find(t.utterance_id);
    if (c == cache.end()) {
      auto a = test_audio.find(t.utterance_id);
      require_param(a != test_audio.end(),
                    "score_trials: missing audio for utterance '" + t.utterance_id + "'");
      c = cache.emplace(t.utterance_id,
                        extract_dvector(net, a->second, chunk_ms, overlap_ms).values)
              .first;
    }
    t.score = cosine_score(e->second, c->second);
  }
}

/// Fills trial scores with the sentence-averaged posterior of the claimed
/// training class.
inline void score_trials_posterior(Network& net, std::vector<Trial>& trials,
                                   const std::map<std::string, std::size_t>& class_of,
                                   const std::map<std::string, Utterance>& test_audio,
                                   std::size_t chunk_ms, std::size_t overlap_ms) {
  std::map<std::string, std::vector<double>> cache;
  for (auto& t : trials) {
    auto cls = class_of.find(t.claimed_speaker);
    require_param(cls != class_of.end(),
                  "score_trials: claimed speaker '" + t.claimed_speaker +
                      "' is not a training class");
    auto c = cache.find(t.utterance_id);
    if (c == cache.end()) {
      auto a = test_audio.find(t.utterance_id);
      require_param(a != test_audio.end(),
                    "score_trials: missing audio for utterance '" + t.utterance_id + "'");
      auto chunks = chunk_signal(a->second.samples, a->second.sample_rate, chunk_ms,
                                 overlap_ms, ChunkMode::kPadded);
      c = cache.emplace(t.utterance_id, mean_posterior(net, chunks)).first;
    }
    t.score = c->second[cls->second];
  }
}

struct EerResult {
  double eer_percent = 0.0;
  double threshold = 0.0;
  std::size_t n_genuine = 0;
  std::size_t n_impostor = 0;
};

/// Threshold sweep over the sorted unique scores plus a sentinel above the
/// maximum. FAR(t) is the impostor fraction with score >= t and FRR(t) the
/// genuine fraction below t, so FAR - FRR falls from 1 to -1; the EER is
/// read at the sign change, linearly interpolated between the bracketing
/// thresholds. Invariant under strictly increasing score transforms.
inline EerResult equal_error_rate(const std::vector<double>& scores,
                                  const std::vector<bool>& genuine) {
  require_param(scores.size() == genuine.size(), "equal_error_rate: length mismatch");
  std::vector<double> g, im;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    require_param(std::isfinite(scores[i]), "equal_error_rate: non-finite score");
    (genuine[i] ? g : im).push_back(scores[i]);
  }
  if (g.empty() || im.empty())
    throw InvalidParameterError("equal_error_rate: need both genuine and impostor scores");
  std::sort(g.begin(), g.end());
  std::sort(im.begin(), im.end());

  std::vector<double> thresholds(scores);
  std::sort(thresholds.begin(), thresholds.end());
  thresholds.erase(std::unique(thresholds.begin(), thresholds.end()), thresholds.end());
  thresholds.push_back(thresholds.back() + 1.0);  // sentinel: rejects everything

  auto far_at = [&](double t) {
    auto it = std::lower_bound(im.begin(), im.end(), t);
    return static_cast<double>(im.end() - it) / static_cast<double>(im.size());
  };
  auto frr_at = [&](double t) {
    auto it = std::lower_bound(g.begin(), g.end(), t);
    return static_cast<double>(it - g.begin()) / static_cast<double>(g.size());
  };

  // At the minimum threshold FAR=1 and FRR=0, at the sentinel FAR=0 and
  // FRR=1, so the sign change always exists inside the sweep.
  EerResult result;
  result.n_genuine = g.size();
  result.n_impostor = im.size();
  double prev_far = 1.0, prev_d = 1.0, prev_t = thresholds[0];
  for (double t : thresholds) {
    double far = far_at(t);
    double d = far - frr_at(t);
    if (d <= 0.0) {
      if (d == 0.0) {
        result.eer_percent = 100.0 * far;
        result.threshold = t;
      } else {
        double alpha = prev_d / (prev_d - d);
        result.eer_percent = 100.0 * (prev_far + alpha * (far - prev_far));
        result.threshold = prev_t + alpha * (t - prev_t);
      }
      return result;
    }
    prev_far = far;
    prev_d = d;
    prev_t = t;
  }
  require_contract(false, "equal_error_rate: threshold sweep found no crossing");
  return result;
}

inline EerResult equal_error_rate(const std::vector<Trial>& trials) {
  std::vector<double> scores;
  std::vector<bool> genuine;
  for (const auto& t : trials) {
    scores.push_back(t.score);
    genuine.push_back(t.genuine);
  }
  return equal_error_rate(scores, genuine);
}

inline void write_trials_csv(const std::string& path, const std::vector<Trial>& trials) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw FormatError("cannot write trials: " + path);
  out << "claimed_speaker,utterance,label,score\n";
  for (const auto& t : trials)
    out << t.claimed_speaker << "," << t.utterance_id << ","
        << (t.genuine ? "genuine" : "impostor") << "," << format_double_exact(t.score) << "\n";
}

inline void write_eer_json(const std::string& path, const EerResult& result) {
  nlohmann::ordered_json j;
  j["eer_percent"] = result.eer_percent;
  j["threshold"] = result.threshold;
  j["n_genuine"] = result.n_genuine;
  j["n_impostor"] = result.n_impostor;
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw FormatError("cannot write EER report: " + path);
  out << j.dump(2) << "\n";
}

}  // namespace sincnet
