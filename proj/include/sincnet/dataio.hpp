// sincnet/dataio.hpp

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
#include <array>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "sincnet/common.hpp"

// WAV ingestion, fixed-grid chunking, dataset manifests, and the synthetic
// source-filter corpus used for desk-scale experiments. Audio is PCM 16-bit
// mono only; sample-rate mismatches are errors, never resampled.

namespace sincnet {

struct Utterance {
  std::vector<double> samples;  // [-1, 1)
  std::size_t sample_rate = 0;
  std::string speaker_id;
  std::string utterance_id;
};

namespace detail {

inline std::uint32_t read_u32le(const unsigned char* p) {
  return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

inline std::uint16_t read_u16le(const unsigned char* p) {
  return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}

inline void put_u32le(std::vector<unsigned char>& out, std::uint32_t v) {
  out.push_back(static_cast<unsigned char>(v & 0xff));
  out.push_back(static_cast<unsigned char>((v >> 8) & 0xff));
  out.push_back(static_cast<unsigned char>((v >> 16) & 0xff));
  out.push_back(static_cast<unsigned char>((v >> 24) & 0xff));
}

inline void put_u16le(std::vector<unsigned char>& out, std::uint16_t v) {
  out.push_back(static_cast<unsigned char>(v & 0xff));
  out.push_back(static_cast<unsigned char>((v >> 8) & 0xff));
}

inline std::vector<unsigned char> read_file_bytes(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open file: " + path);
  return std::vector<unsigned char>(std::istreambuf_iterator<char>(in),
                                    std::istreambuf_iterator<char>());
}

inline void write_file_bytes(const std::string& path, const std::vector<unsigned char>& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw FormatError("cannot write file: " + path);
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw FormatError("short write: " + path);
}

}  // namespace detail

/// Writes PCM 16-bit mono RIFF/WAVE. Samples are clamped to [-1, 1) and
/// scaled by 32768; values already on the 1/32768 grid round-trip exactly.
inline void write_wav(const std::string& path, const std::vector<double>& samples,
                      std::size_t sample_rate) {
  require_param(sample_rate > 0, "write_wav: sample_rate must be positive");
  std::vector<unsigned char> out;
  out.reserve(44 + samples.size() * 2);
  std::uint32_t data_bytes = static_cast<std::uint32_t>(samples.size() * 2);
  out.insert(out.end(), {'R', 'I', 'F', 'F'});
  detail::put_u32le(out, 36 + data_bytes);
  out.insert(out.end(), {'W', 'A', 'V', 'E'});
  out.insert(out.end(), {'f', 'm', 't', ' '});
  detail::put_u32le(out, 16);
  detail::put_u16le(out, 1);  // PCM
  detail::put_u16le(out, 1);  // mono
  detail::put_u32le(out, static_cast<std::uint32_t>(sample_rate));
  detail::put_u32le(out, static_cast<std::uint32_t>(sample_rate * 2));
  detail::put_u16le(out, 2);   // block align
  detail::put_u16le(out, 16);  // bits per sample
  out.insert(out.end(), {'d', 'a', 't', 'a'});
  detail::put_u32le(out, data_bytes);
  for (double s : samples) {
    double scaled = std::lround(s * 32768.0);
    scaled = std::min(32767.0, std::max(-32768.0, scaled));
    auto v = static_cast<std::int16_t>(scaled);
    detail::put_u16le(out, static_cast<std::uint16_t>(v));
  }
  detail::write_file_bytes(path, out);
}

/// Reads PCM 16-bit mono RIFF/WAVE; integer samples scaled by 1/32768.
/// Unknown chunks are skipped; unsupported format fields are named in the
/// error.
inline Utterance read_wav(const std::string& path) {
  std::vector<unsigned char> bytes = detail::read_file_bytes(path);
  if (bytes.size() < 12 || !std::equal(bytes.begin(), bytes.begin() + 4, "RIFF") ||
      !std::equal(bytes.begin() + 8, bytes.begin() + 12, "WAVE"))
    throw FormatError(path + ": not a RIFF/WAVE file");
  bool have_fmt = false;
  std::size_t sample_rate = 0;
  std::size_t data_off = 0, data_len = 0;
  std::size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    std::string id(bytes.begin() + pos, bytes.begin() + pos + 4);
    std::uint32_t size = detail::read_u32le(&bytes[pos + 4]);
    std::size_t body = pos + 8;
    if (body + size > bytes.size()) throw FormatError(path + ": truncated chunk '" + id + "'");
    if (id == "fmt ") {
      if (size < 16) throw FormatError(path + ": fmt chunk too small");
      std::uint16_t audio_format = detail::read_u16le(&bytes[body]);
      std::uint16_t channels = detail::read_u16le(&bytes[body + 2]);
      std::uint32_t rate = detail::read_u32le(&bytes[body + 4]);
      std::uint16_t bits = detail::read_u16le(&bytes[body + 14]);
      if (audio_format != 1)
        throw FormatError(path + ": unsupported audio_format " + std::to_string(audio_format) +
                          " (PCM=1 required)");
      if (channels != 1)
        throw FormatError(path + ": unsupported channel count " + std::to_string(channels) +
                          " (mono required)");
      if (bits != 16)
        throw FormatError(path + ": unsupported bits_per_sample " + std::to_string(bits) +
                          " (16 required)");
      sample_rate = rate;
      have_fmt = true;
    } else if (id == "data") {
      data_off = body;
      data_len = size;
    }
    pos = body + size + (size % 2);  // chunks are word-aligned
  }
  if (!have_fmt) throw FormatError(path + ": missing fmt chunk");
  if (data_off == 0) throw FormatError(path + ": missing data chunk");
  Utterance utt;
  utt.sample_rate = sample_rate;
  utt.samples.resize(data_len / 2);
  for (std::size_t i = 0; i < utt.samples.size(); ++i) {
    auto v = static_cast<std::int16_t>(detail::read_u16le(&bytes[data_off + 2 * i]));
    utt.samples[i] = static_cast<double>(v) / 32768.0;
  }
  return utt;
}

enum class ChunkMode {
  kStrict,  // too-short input is an error (training)
  kPadded   // too-short input yields one zero-padded chunk (inference)
};

inline std::size_t chunk_window_samples(std::size_t fs, std::size_t chunk_ms) {
  std::size_t w = chunk_ms * fs / 1000;
  require_param(w >= 1, "chunk: window shorter than one sample");
  return w;
}

inline std::size_t chunk_stride_samples(std::size_t fs, std::size_t chunk_ms,
                                        std::size_t overlap_ms) {
  require_param(chunk_ms > overlap_ms, "chunk: chunk_ms must exceed overlap_ms");
  std::size_t s = (chunk_ms - overlap_ms) * fs / 1000;
  require_param(s >= 1, "chunk: stride shorter than one sample");
  return s;
}

/// Fixed-grid windows of chunk_ms at stride chunk_ms - overlap_ms; the
/// trailing partial window is dropped. Count is floor((len - window)/stride)
/// + 1 for len >= window.
inline std::vector<std::vector<double>> chunk_signal(const std::vector<double>& samples,
                                                     std::size_t fs, std::size_t chunk_ms,
                                                     std::size_t overlap_ms, ChunkMode mode) {
  std::size_t window = chunk_window_samples(fs, chunk_ms);
  std::size_t stride = chunk_stride_samples(fs, chunk_ms, overlap_ms);
  std::vector<std::vector<double>> chunks;
  if (samples.size() < window) {
    if (mode == ChunkMode::kStrict)
      throw InvalidParameterError("chunk: signal shorter than one window (" +
                                  std::to_string(samples.size()) + " < " +
                                  std::to_string(window) + " samples)");
    std::vector<double> padded(window, 0.0);
    std::copy(samples.begin(), samples.end(), padded.begin());
    chunks.push_back(std::move(padded));
    return chunks;
  }
  for (std::size_t start = 0; start + window <= samples.size(); start += stride)
    chunks.emplace_back(samples.begin() + start, samples.begin() + start + window);
  return chunks;
}

struct ManifestEntry {
  std::string path;
  std::string speaker_id;
  std::string split;  // train | test | enroll | impostor
};

inline bool is_valid_split(const std::string& s) {
  return s == "train" || s == "test" || s == "enroll" || s == "impostor";
}

/// Utterance identifier: file name without directory or extension. Corpus
/// layouts must keep these unique (the generator encodes the speaker in the
/// stem).
inline std::string utterance_id_of(const ManifestEntry& entry) {
  return std::filesystem::path(entry.path).stem().string();
}

struct Manifest {
  std::vector<ManifestEntry> entries;
  std::string base_dir;  // directory of the manifest file; "" before save/load

  static Manifest load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw FormatError("cannot open manifest: " + path);
    Manifest m;
    m.base_dir = std::filesystem::path(path).parent_path().string();
    std::string line;
    if (!std::getline(in, line)) throw FormatError(path + ": empty manifest");
    if (line != "path,speaker_id,split")
      throw FormatError(path + ": expected header 'path,speaker_id,split'");
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
      ++lineno;
      if (line.empty()) continue;
      std::size_t c1 = line.find(',');
      std::size_t c2 = line.find(',', c1 == std::string::npos ? c1 : c1 + 1);
      if (c1 == std::string::npos || c2 == std::string::npos)
        throw FormatError(path + ":" + std::to_string(lineno) + ": expected 3 fields");
      ManifestEntry e{line.substr(0, c1), line.substr(c1 + 1, c2 - c1 - 1),
                      line.substr(c2 + 1)};
      if (!is_valid_split(e.split))
        throw FormatError(path + ":" + std::to_string(lineno) + ": unknown split '" +
                          e.split + "'");
      m.entries.push_back(std::move(e));
    }
    return m;
  }

  void save(const std::string& path) const {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw FormatError("cannot write manifest: " + path);
    out << "path,speaker_id,split\n";
    for (const auto& e : entries) {
      require_param(is_valid_split(e.split), "manifest: unknown split '" + e.split + "'");
      out << e.path << "," << e.speaker_id << "," << e.split << "\n";
    }
  }

  /// Paths in the manifest are relative to the manifest's directory.
  std::string resolve(const ManifestEntry& e) const {
    std::filesystem::path p(e.path);
    if (p.is_absolute() || base_dir.empty()) return e.path;
    return (std::filesystem::path(base_dir) / p).string();
  }

  std::vector<ManifestEntry> split_entries(const std::string& split) const {
    std::vector<ManifestEntry> out;
    for (const auto& e : entries)
      if (e.split == split) out.push_back(e);
    return out;
  }

  /// Sorted unique speaker ids of one split.
  std::vector<std::string> speakers(const std::string& split) const {
    std::set<std::string> s;
    for (const auto& e : entries)
      if (e.split == split) s.insert(e.speaker_id);
    return std::vector<std::string>(s.begin(), s.end());
  }
};

/// Split sanity: test speakers must be trainable classes, and the impostor
/// pool must be disjoint from the training speakers.
inline void validate_manifest(const Manifest& m) {
  auto train = m.speakers("train");
  for (const auto& s : m.speakers("test"))
    if (!std::binary_search(train.begin(), train.end(), s))
      throw ConfigError("manifest: test speaker '" + s + "' missing from train split");
  for (const auto& s : m.speakers("impostor"))
    if (std::binary_search(train.begin(), train.end(), s))
      throw ConfigError("manifest: impostor speaker '" + s + "' overlaps train split");
}

/// Training class indices: sorted train speakers mapped to 0..K-1.
inline std::map<std::string, std::size_t> speaker_label_map(const Manifest& m) {
  std::map<std::string, std::size_t> label_of;
  for (const auto& s : m.speakers("train")) label_of.emplace(s, label_of.size());
  return label_of;
}

/// Reads one split; enforces the expected sample rate and applies the
/// per-utterance 0.95 peak normalization used throughout training and
/// scoring.
inline std::vector<Utterance> load_utterances(const Manifest& m, const std::string& split,
                                              std::size_t expected_fs) {
  std::vector<Utterance> out;
  for (const auto& e : m.split_entries(split)) {
    Utterance utt = read_wav(m.resolve(e));
    if (utt.sample_rate != expected_fs)
      throw FormatError(m.resolve(e) + ": sample_rate " + std::to_string(utt.sample_rate) +
                        " does not match dataset rate " + std::to_string(expected_fs));
    if (utt.samples.empty()) throw FormatError(m.resolve(e) + ": empty utterance");
    double peak = 0.0;
    for (double s : utt.samples) peak = std::max(peak, std::abs(s));
    if (peak > 0.0)
      for (double& s : utt.samples) s *= 0.95 / peak;
    utt.speaker_id = e.speaker_id;
    utt.utterance_id = utterance_id_of(e);
    out.push_back(std::move(utt));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Synthetic corpus: impulse-train source at a jittered pitch, glottal
// low-pass shaping, a cascade of three unit-peak-gain formant resonators,
// and low-level noise. Distinct per-speaker seeds give distinct spectra.

struct SynthSpeakerSpec {
  double pitch_hz = 0.0;  // in [80, 300]
  std::array<double, 3> formants_hz{};
  std::array<double, 3> bandwidths_hz{};
  double tilt_hz = 100.0;  // glottal low-pass knee
  double jitter = 0.0;     // relative period perturbation
  std::uint64_t seed = 0;
};

/// Speaker spec drawn from the stream derived per speaker index. Formant
/// bands are scaled down for sample rates below 8 kHz so resonances stay
/// under Nyquist. Formant draws overlap heavily across speakers, so the
/// fundamental and its low harmonics carry most of the speaker identity.
inline SynthSpeakerSpec make_speaker_spec(std::uint64_t corpus_seed, std::size_t speaker_index,
                                          std::size_t fs) {
  Rng rng(Rng::derive(corpus_seed, speaker_index));
  double scale = std::min(1.0, static_cast<double>(fs) / 8000.0);
  SynthSpeakerSpec spec;
  spec.pitch_hz = rng.uniform(100.0, 250.0);
  spec.formants_hz = {rng.uniform(520.0, 640.0) * scale, rng.uniform(1380.0, 1560.0) * scale,
                      rng.uniform(2620.0, 2860.0) * scale};
  spec.bandwidths_hz = {rng.uniform(200.0, 260.0), rng.uniform(250.0, 320.0),
                        rng.uniform(300.0, 370.0)};
  spec.jitter = rng.uniform(0.01, 0.03);
  spec.seed = Rng::derive(corpus_seed, 0x5350u + speaker_index);
  return spec;
}

namespace detail {

// Two-pole resonator with unit gain at the resonance frequency.
struct Resonator {
  double a1, a2, g;
  double y1 = 0.0, y2 = 0.0;

  Resonator(double freq_hz, double bw_hz, double fs) {
    double r = std::exp(-M_PI * bw_hz / fs);
    double theta = 2.0 * M_PI * freq_hz / fs;
    a1 = 2.0 * r * std::cos(theta);
    a2 = -r * r;
    g = (1.0 - r) * std::sqrt(1.0 - 2.0 * r * std::cos(2.0 * theta) + r * r);
  }

  double step(double x) {
    double y = g * x + a1 * y1 + a2 * y2;
    y2 = y1;
    y1 = y;
    return y;
  }
};

// One-pole low-pass, unity DC gain.
struct OnePoleLp {
  double a;
  double y1 = 0.0;
  OnePoleLp(double fc_hz, double fs) : a(std::exp(-2.0 * M_PI * fc_hz / fs)) {}
  double step(double x) {
    y1 = (1.0 - a) * x + a * y1;
    return y1;
  }
};

}  // namespace detail

/// One utterance of the given speaker. Deterministic in (spec.seed,
/// utt_index); the per-utterance stream drives jitter, noise, and a small
/// pitch drift.
inline std::vector<double> synth_utterance(const SynthSpeakerSpec& spec, std::size_t utt_index,
                                           double seconds, std::size_t fs) {
  require_param(seconds > 0.0 && fs > 0, "synth: seconds and fs must be positive");
  require_param(spec.pitch_hz >= 80.0 && spec.pitch_hz <= 300.0,
                "synth: pitch outside [80, 300] Hz");
  require_param(spec.tilt_hz > 0.0, "synth: tilt must be positive");
  for (double f : spec.formants_hz)
    require_param(f < static_cast<double>(fs) / 2.0, "synth: formant above Nyquist");
  Rng rng(Rng::derive(spec.seed, utt_index));
  std::size_t n = static_cast<std::size_t>(std::llround(seconds * static_cast<double>(fs)));
  double pitch = spec.pitch_hz * (1.0 + 0.03 * (2.0 * rng.uniform() - 1.0));

  std::vector<double> x(n, 0.0);
  double t = 0.0;
  while (t < static_cast<double>(n)) {
    auto idx = static_cast<std::size_t>(t);
    if (idx < n) x[idx] += 1.0 + 0.1 * (2.0 * rng.uniform() - 1.0);
    double period = static_cast<double>(fs) / pitch * (1.0 + spec.jitter * rng.normal());
    t += std::max(period, 8.0);
  }

  // Two cascaded poles at the tilt frequency: the steep source tilt keeps
  // the fundamental the strongest spectral line even when a formant lands on
  // a harmonic.
  detail::OnePoleLp glottal1(spec.tilt_hz, static_cast<double>(fs));
  detail::OnePoleLp glottal2(spec.tilt_hz, static_cast<double>(fs));
  std::vector<detail::Resonator> tract;
  for (std::size_t k = 0; k < 3; ++k)
    tract.emplace_back(spec.formants_hz[k], spec.bandwidths_hz[k], static_cast<double>(fs));
  for (std::size_t i = 0; i < n; ++i) {
    double v = glottal2.step(glottal1.step(x[i]));
    for (auto& r : tract) v = r.step(v);
    x[i] = v;
  }

  double peak = 0.0;
  for (double v : x) peak = std::max(peak, std::abs(v));
  if (peak > 0.0)
    for (double& v : x) v += 0.02 * peak * rng.normal();

  double mean = 0.0;
  for (double v : x) mean += v;
  mean /= static_cast<double>(n);
  peak = 0.0;
  for (double& v : x) {
    v -= mean;
    peak = std::max(peak, std::abs(v));
  }
  if (peak > 0.0)
    for (double& v : x) v *= 0.95 / peak;
  return x;
}

struct SynthConfig {
  std::size_t n_speakers = 10;        // training/identification speakers
  std::size_t train_utts = 8;         // per training speaker
  std::size_t test_utts = 4;          // per training speaker
  std::size_t impostor_speakers = 5;  // held-out verification pool
  std::size_t impostor_utts = 4;      // per impostor speaker
  double seconds = 2.0;
  std::size_t fs = 8000;
  std::uint64_t seed = 7;
};

/// Writes WAV files under out_dir/spkNNN/ plus out_dir/manifest.csv with
/// relative paths, and returns the manifest. Deterministic in cfg.seed.
inline Manifest synth_corpus(const SynthConfig& cfg, const std::string& out_dir) {
  require_param(cfg.n_speakers >= 2, "synth_corpus: need at least two speakers");
  require_param(cfg.train_utts >= 1, "synth_corpus: need at least one training utterance");
  Manifest manifest;
  manifest.base_dir = out_dir;
  std::filesystem::create_directories(out_dir);

  auto emit_speaker = [&](std::size_t speaker_index, std::size_t utts, bool impostor) {
    SynthSpeakerSpec spec = make_speaker_spec(cfg.seed, speaker_index, cfg.fs);
    char spk[16];
    std::snprintf(spk, sizeof(spk), "spk%03zu", speaker_index);
    std::filesystem::create_directories(std::filesystem::path(out_dir) / spk);
    for (std::size_t u = 0; u < utts; ++u) {
      std::vector<double> samples = synth_utterance(spec, u, cfg.seconds, cfg.fs);
      char name[32];
      std::snprintf(name, sizeof(name), "%s_utt%03zu.wav", spk, u);
      std::string rel = std::string(spk) + "/" + name;
      write_wav((std::filesystem::path(out_dir) / rel).string(), samples, cfg.fs);
      std::string split = impostor ? "impostor"
                          : u < cfg.train_utts ? "train"
                                               : "test";
      manifest.entries.push_back({rel, spk, split});
    }
  };

  for (std::size_t s = 0; s < cfg.n_speakers; ++s)
    emit_speaker(s, cfg.train_utts + cfg.test_utts, false);
  for (std::size_t s = 0; s < cfg.impostor_speakers; ++s)
    emit_speaker(cfg.n_speakers + s, cfg.impostor_utts, true);

  manifest.save((std::filesystem::path(out_dir) / "manifest.csv").string());
  return manifest;
}

}  // namespace sincnet
