// tests/test_dataio.cpp

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

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <set>
#include <vector>

#include "sincnet/dataio.hpp"
#include "sincnet/filterbank.hpp"
#include "testing_support.hpp"

using namespace sincnet;
using testing_support::TempDir;

TEST_CASE("wav: round trip is bit exact on grid values") {
  TempDir tmp;
  Rng rng(17);
  std::vector<double> samples(500);
  for (double& s : samples)
    s = static_cast<double>(static_cast<int>(rng.index(65536)) - 32768) / 32768.0;
  write_wav(tmp.str("a.wav"), samples, 8000);
  Utterance utt = read_wav(tmp.str("a.wav"));
  REQUIRE(utt.sample_rate == 8000);
  REQUIRE(utt.samples == samples);
}

TEST_CASE("wav: sample 16384 reads back as one half") {
  TempDir tmp;
  write_wav(tmp.str("h.wav"), {16384.0 / 32768.0, 0.0, -1.0}, 16000);
  Utterance utt = read_wav(tmp.str("h.wav"));
  REQUIRE(utt.samples[0] == 0.5);
  REQUIRE(utt.samples[1] == 0.0);
  REQUIRE(utt.samples[2] == -1.0);
}

TEST_CASE("wav: all-zero file reads as all-zero utterance") {
  TempDir tmp;
  write_wav(tmp.str("z.wav"), std::vector<double>(256, 0.0), 8000);
  Utterance utt = read_wav(tmp.str("z.wav"));
  REQUIRE(utt.samples.size() == 256);
  for (double s : utt.samples) REQUIRE(s == 0.0);
}

TEST_CASE("wav: out-of-range samples clamp at the rails") {
  TempDir tmp;
  write_wav(tmp.str("c.wav"), {2.0, -2.0}, 8000);
  Utterance utt = read_wav(tmp.str("c.wav"));
  REQUIRE(utt.samples[0] == 32767.0 / 32768.0);
  REQUIRE(utt.samples[1] == -1.0);
}

TEST_CASE("wav: rejects non-wav bytes and names bad format fields") {
  TempDir tmp;
  detail::write_file_bytes(tmp.str("bad.wav"), {'n', 'o', 't', 'a', 'w', 'a', 'v', '!'});
  REQUIRE_THROWS_AS(read_wav(tmp.str("bad.wav")), FormatError);

  // Stereo header: same layout with channels = 2.
  std::vector<unsigned char> bytes;
  auto text = [&](const char* s) { bytes.insert(bytes.end(), s, s + 4); };
  text("RIFF");
  detail::put_u32le(bytes, 36);
  text("WAVE");
  text("fmt ");
  detail::put_u32le(bytes, 16);
  detail::put_u16le(bytes, 1);
  detail::put_u16le(bytes, 2);  // stereo
  detail::put_u32le(bytes, 8000);
  detail::put_u32le(bytes, 32000);
  detail::put_u16le(bytes, 4);
  detail::put_u16le(bytes, 16);
  text("data");
  detail::put_u32le(bytes, 0);
  detail::write_file_bytes(tmp.str("st.wav"), bytes);
  REQUIRE_THROWS_WITH(read_wav(tmp.str("st.wav")),
                      Catch::Matchers::ContainsSubstring("channel count"));
}

TEST_CASE("chunking: frozen window, stride, and count examples") {
  REQUIRE(chunk_window_samples(8000, 200) == 1600);
  REQUIRE(chunk_stride_samples(8000, 200, 10) == 1520);

  // Exactly one window.
  std::vector<double> one(1600, 0.5);
  auto chunks = chunk_signal(one, 8000, 200, 10, ChunkMode::kStrict);
  REQUIRE(chunks.size() == 1);
  REQUIRE(chunks[0] == one);

  // 390 ms at 16 kHz: window 3200, stride 3040, two windows.
  std::vector<double> long_sig(6240, 0.25);
  REQUIRE(chunk_signal(long_sig, 16000, 200, 10, ChunkMode::kStrict).size() == 2);
}

TEST_CASE("chunking: short input errors strictly, pads for inference") {
  std::vector<double> short_sig(1592, 1.0);  // 199 ms at 8 kHz
  REQUIRE_THROWS_AS(chunk_signal(short_sig, 8000, 200, 10, ChunkMode::kStrict),
                    InvalidParameterError);
  auto padded = chunk_signal(short_sig, 8000, 200, 10, ChunkMode::kPadded);
  REQUIRE(padded.size() == 1);
  REQUIRE(padded[0].size() == 1600);
  for (std::size_t i = 0; i < 1592; ++i) REQUIRE(padded[0][i] == 1.0);
  for (std::size_t i = 1592; i < 1600; ++i) REQUIRE(padded[0][i] == 0.0);
}

TEST_CASE("chunking: count formula against a brute-force slider") {
  Rng rng(23);
  for (int trial = 0; trial < 200; ++trial) {
    std::size_t len = 1600 + rng.index(20000);
    std::vector<double> sig(len);
    for (std::size_t i = 0; i < len; ++i) sig[i] = static_cast<double>(i);
    auto chunks = chunk_signal(sig, 8000, 200, 10, ChunkMode::kStrict);

    std::size_t window = 1600, stride = 1520, count = 0;
    for (std::size_t start = 0; start + window <= len; start += stride) ++count;
    REQUIRE(chunks.size() == count);
    REQUIRE(chunks.size() == (len - window) / stride + 1);

    // No chunk crosses the end, and every value comes from its window.
    for (std::size_t c = 0; c < chunks.size(); ++c)
      for (std::size_t j = 0; j < window; ++j)
        REQUIRE(chunks[c][j] == static_cast<double>(c * stride + j));
  }
}

TEST_CASE("manifest: save/load round trip, header and split validation") {
  TempDir tmp;
  Manifest m;
  m.entries = {{"spk000/spk000_utt000.wav", "spk000", "train"},
               {"spk000/spk000_utt001.wav", "spk000", "test"},
               {"spk001/spk001_utt000.wav", "spk001", "train"},
               {"imp000/imp000_utt000.wav", "imp000", "impostor"}};
  m.save(tmp.str("manifest.csv"));
  Manifest back = Manifest::load(tmp.str("manifest.csv"));
  REQUIRE(back.entries.size() == 4);
  REQUIRE(back.entries[1].speaker_id == "spk000");
  REQUIRE(back.entries[1].split == "test");
  REQUIRE(back.base_dir == tmp.str());
  REQUIRE(back.resolve(back.entries[0]) == tmp.str("spk000/spk000_utt000.wav"));
  REQUIRE(utterance_id_of(back.entries[1]) == "spk000_utt001");

  detail::write_file_bytes(tmp.str("bad_header.csv"),
                           {'a', ',', 'b', ',', 'c', '\n'});
  REQUIRE_THROWS_AS(Manifest::load(tmp.str("bad_header.csv")), FormatError);

  std::string bad = "path,speaker_id,split\nx.wav,spk,holdout\n";
  detail::write_file_bytes(tmp.str("bad_split.csv"),
                           std::vector<unsigned char>(bad.begin(), bad.end()));
  REQUIRE_THROWS_AS(Manifest::load(tmp.str("bad_split.csv")), FormatError);
}

TEST_CASE("manifest validation: test within train, impostors disjoint") {
  Manifest ok;
  ok.entries = {{"a.wav", "s1", "train"}, {"b.wav", "s1", "test"}, {"c.wav", "x1", "impostor"}};
  REQUIRE_NOTHROW(validate_manifest(ok));

  Manifest bad_test = ok;
  bad_test.entries[1].speaker_id = "ghost";
  REQUIRE_THROWS_AS(validate_manifest(bad_test), ConfigError);

  Manifest bad_imp = ok;
  bad_imp.entries[2].speaker_id = "s1";
  REQUIRE_THROWS_AS(validate_manifest(bad_imp), ConfigError);
}

TEST_CASE("speaker labels: sorted train speakers get indices 0..K-1") {
  Manifest m;
  m.entries = {{"a.wav", "zeta", "train"}, {"b.wav", "alpha", "train"},
               {"c.wav", "mid", "train"},  {"d.wav", "zeta", "train"}};
  auto labels = speaker_label_map(m);
  REQUIRE(labels.size() == 3);
  REQUIRE(labels.at("alpha") == 0);
  REQUIRE(labels.at("mid") == 1);
  REQUIRE(labels.at("zeta") == 2);
}

TEST_CASE("synthesis: deterministic per seed, distinct per speaker") {
  SynthSpeakerSpec spec = make_speaker_spec(7, 0, 8000);
  REQUIRE(spec.pitch_hz >= 100.0);
  REQUIRE(spec.pitch_hz <= 250.0);
  for (double f : spec.formants_hz) REQUIRE(f < 4000.0);

  auto a = synth_utterance(spec, 0, 0.5, 8000);
  auto b = synth_utterance(spec, 0, 0.5, 8000);
  REQUIRE(a == b);
  auto c = synth_utterance(spec, 1, 0.5, 8000);
  REQUIRE_FALSE(a == c);

  SynthSpeakerSpec other = make_speaker_spec(7, 1, 8000);
  REQUIRE(spec.pitch_hz != other.pitch_hz);

  REQUIRE(a.size() == 4000);
  double peak = 0.0;
  for (double v : a) peak = std::max(peak, std::fabs(v));
  REQUIRE_THAT(peak, Catch::Matchers::WithinAbs(0.95, 1e-12));
}

TEST_CASE("synthesis: pitches 100 and 220 dominate their spectra") {
  for (double pitch : {100.0, 220.0}) {
    SynthSpeakerSpec spec;
    spec.pitch_hz = pitch;
    spec.formants_hz = {450.0, 1400.0, 2700.0};
    spec.bandwidths_hz = {230.0, 280.0, 330.0};
    spec.jitter = 0.02;
    spec.seed = 99;
    const std::size_t fs = 8000, n_fft = 8192;
    auto x = synth_utterance(spec, 0, 1.0, fs);
    auto mag = frequency_response(std::span<const double>(x.data(), x.size()), n_fft);

    double bin_hz = static_cast<double>(fs) / static_cast<double>(n_fft);
    std::size_t lo = static_cast<std::size_t>(50.0 / bin_hz);
    std::size_t peak_bin = lo;
    for (std::size_t k = lo; k < mag.size(); ++k)
      if (mag[k] > mag[peak_bin]) peak_bin = k;
    double peak_hz = static_cast<double>(peak_bin) * bin_hz;
    INFO("pitch " << pitch << " peak " << peak_hz);
    REQUIRE(std::fabs(peak_hz - pitch) <= 0.04 * pitch + bin_hz);
  }
}

TEST_CASE("synth corpus: manifest counts, file layout, determinism") {
  TempDir tmp;
  SynthConfig cfg;
  cfg.n_speakers = 3;
  cfg.train_utts = 2;
  cfg.test_utts = 1;
  cfg.impostor_speakers = 2;
  cfg.impostor_utts = 1;
  cfg.seconds = 0.3;
  cfg.fs = 8000;
  cfg.seed = 7;

  Manifest m = synth_corpus(cfg, tmp.str("corpus"));
  REQUIRE(m.entries.size() == 3 * 3 + 2 * 1);
  REQUIRE(m.speakers("train").size() == 3);
  REQUIRE(m.speakers("test").size() == 3);
  REQUIRE(m.speakers("impostor").size() == 2);
  REQUIRE_NOTHROW(validate_manifest(m));
  for (const auto& e : m.entries) REQUIRE(std::filesystem::exists(m.resolve(e)));

  Manifest loaded = Manifest::load(tmp.str("corpus/manifest.csv"));
  REQUIRE(loaded.entries.size() == m.entries.size());
  auto utts = load_utterances(loaded, "train", 8000);
  REQUIRE(utts.size() == 6);
  REQUIRE(utts[0].samples.size() == 2400);

  synth_corpus(cfg, tmp.str("again"));
  auto first = detail::read_file_bytes(m.resolve(m.entries[0]));
  auto second = detail::read_file_bytes(tmp.str("again/" + m.entries[0].path));
  REQUIRE(first == second);

  SynthConfig other = cfg;
  other.seed = 8;
  synth_corpus(other, tmp.str("other"));
  auto third = detail::read_file_bytes(tmp.str("other/" + m.entries[0].path));
  REQUIRE_FALSE(first == third);
}

TEST_CASE("load_utterances: enforces the dataset sample rate") {
  TempDir tmp;
  write_wav(tmp.str("u.wav"), std::vector<double>(100, 0.1), 16000);
  Manifest m;
  m.base_dir = tmp.str();
  m.entries = {{"u.wav", "s", "train"}};
  REQUIRE_THROWS_AS(load_utterances(m, "train", 8000), FormatError);
  auto ok = load_utterances(m, "train", 16000);
  REQUIRE(ok.size() == 1);
  REQUIRE_THAT(ok[0].samples[0], Catch::Matchers::WithinAbs(0.95, 1e-12));
}
