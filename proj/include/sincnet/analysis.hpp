// sincnet/analysis.hpp

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
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "sincnet/common.hpp"
#include "sincnet/filterbank.hpp"
#include "sincnet/trainer.hpp"

// Filter inspection exports: per-filter taps and magnitude responses, the
// cumulative response of the whole bank, learned-band summaries, and the
// SincNet-vs-CNN convergence table. All numeric CSV values use the exact
// %.17g form so files round-trip and rerun byte-identically.

namespace sincnet {

struct BandSummary {
  std::size_t filter_index = 0;
  double f1_hz = 0.0;
  double f2_hz = 0.0;
  double center_hz = 0.0;
  double bandwidth_hz = 0.0;
};

/// Reparametrized band edges in Hz (normalized cutoffs times fs, exact),
/// sorted by center frequency.
inline std::vector<BandSummary> band_summary(const CutoffParams& params, double fs) {
  require_param(fs > 0.0, "band_summary: fs must be positive");
  std::vector<BandSummary> out;
  for (std::size_t f = 0; f < params.count(); ++f) {
    auto [f1, f2] = reparametrize(params.f1_raw[f], params.f2_raw[f]);
    BandSummary b;
    b.filter_index = f;
    b.f1_hz = f1 * fs;
    b.f2_hz = f2 * fs;
    b.center_hz = 0.5 * (b.f1_hz + b.f2_hz);
    b.bandwidth_hz = b.f2_hz - b.f1_hz;
    out.push_back(b);
  }
  std::sort(out.begin(), out.end(),
            [](const BandSummary& a, const BandSummary& b) { return a.center_hz < b.center_hz; });
  return out;
}

/// Filters whose upper cutoff strays above Nyquist; reported as warnings,
/// never clamped (training keeps them in range on its own).
inline std::vector<std::size_t> filters_above_nyquist(const CutoffParams& params) {
  std::vector<std::size_t> out;
  for (std::size_t f = 0; f < params.count(); ++f)
    if (reparametrize(params.f1_raw[f], params.f2_raw[f]).second > 0.5) out.push_back(f);
  return out;
}

inline constexpr double kDbFloor = -120.0;

inline double magnitude_db(double magnitude) {
  double db = 20.0 * std::log10(std::max(magnitude, 0.0));
  return std::max(db, kDbFloor);
}

namespace detail {

inline std::ofstream open_csv(const std::string& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw FormatError("cannot write CSV: " + path);
  return out;
}

}  // namespace detail

inline void write_taps_csv(const std::string& path, const std::vector<double>& taps) {
  auto out = detail::open_csv(path);
  out << "tap_index,value\n";
  for (std::size_t i = 0; i < taps.size(); ++i)
    out << i << "," << format_double_exact(taps[i]) << "\n";
}

inline void write_response_csv(const std::string& path, const std::vector<double>& magnitudes,
                               double fs, std::size_t n_fft) {
  auto out = detail::open_csv(path);
  out << "freq_hz,magnitude_db\n";
  for (std::size_t k = 0; k < magnitudes.size(); ++k)
    out << format_double_exact(static_cast<double>(k) * fs / static_cast<double>(n_fft)) << ","
        << format_double_exact(magnitude_db(magnitudes[k])) << "\n";
}

inline void write_band_summary_csv(const std::string& path,
                                   const std::vector<BandSummary>& bands) {
  auto out = detail::open_csv(path);
  out << "filter,f1_hz,f2_hz,center_hz,bandwidth_hz\n";
  for (const auto& b : bands)
    out << b.filter_index << "," << format_double_exact(b.f1_hz) << ","
        << format_double_exact(b.f2_hz) << "," << format_double_exact(b.center_hz) << ","
        << format_double_exact(b.bandwidth_hz) << "\n";
}

/// Cumulative bank response with an extra max-normalized column (the
/// normalization of the published curve is unstated, so both are exported).
inline void write_cumulative_csv(const std::string& path, const std::vector<double>& cumulative,
                                 double fs, std::size_t n_fft) {
  auto out = detail::open_csv(path);
  out << "freq_hz,magnitude,magnitude_norm\n";
  double peak = 0.0;
  for (double v : cumulative) peak = std::max(peak, v);
  for (std::size_t k = 0; k < cumulative.size(); ++k)
    out << format_double_exact(static_cast<double>(k) * fs / static_cast<double>(n_fft)) << ","
        << format_double_exact(cumulative[k]) << ","
        << format_double_exact(peak > 0.0 ? cumulative[k] / peak : 0.0) << "\n";
}

/// Writes filter_NNN_taps.csv and filter_NNN_response.csv per filter plus
/// cumulative.csv and bands.csv under out_dir. Returns the cumulative
/// response for further analysis.
inline std::vector<double> export_filters(const CutoffParams& params, std::size_t length,
                                          double fs, const std::string& out_dir,
                                          std::size_t n_fft = 4096) {
  require_param(params.count() > 0, "export_filters: empty bank");
  std::filesystem::create_directories(out_dir);
  WindowVector window = hamming_window(length);
  SincFilterBank bank = materialize_bank(params, length, window, fs);
  for (std::size_t f = 0; f < bank.taps.size(); ++f) {
    char name[64];
    std::snprintf(name, sizeof(name), "filter_%03zu_taps.csv", f);
    write_taps_csv((std::filesystem::path(out_dir) / name).string(), bank.taps[f]);
    std::snprintf(name, sizeof(name), "filter_%03zu_response.csv", f);
    write_response_csv((std::filesystem::path(out_dir) / name).string(),
                       frequency_response(bank.taps[f], n_fft), fs, n_fft);
  }
  std::vector<double> cumulative = cumulative_response(bank, n_fft);
  write_cumulative_csv((std::filesystem::path(out_dir) / "cumulative.csv").string(), cumulative,
                       fs, n_fft);
  write_band_summary_csv((std::filesystem::path(out_dir) / "bands.csv").string(),
                         band_summary(params, fs));
  return cumulative;
}

/// Sum of cumulative-response bins with frequency in [lo_hz, hi_hz).
inline double band_mass(const std::vector<double>& cumulative, double fs, std::size_t n_fft,
                        double lo_hz, double hi_hz) {
  require_param(lo_hz >= 0.0 && hi_hz > lo_hz, "band_mass: need 0 <= lo < hi");
  double mass = 0.0;
  for (std::size_t k = 0; k < cumulative.size(); ++k) {
    double freq = static_cast<double>(k) * fs / static_cast<double>(n_fft);
    if (freq >= lo_hz && freq < hi_hz) mass += cumulative[k];
  }
  return mass;
}

struct ConvergenceRow {
  std::size_t epoch = 0;
  double fer_sinc = 0.0;
  double fer_cnn = 0.0;
};

/// Aligns two training logs per epoch on held-out FER (training FER when no
/// held-out set was evaluated; both logs must agree on which).
inline std::vector<ConvergenceRow> compare_convergence(const std::vector<EpochLog>& log_sinc,
                                                       const std::vector<EpochLog>& log_cnn) {
  require_param(!log_sinc.empty() && !log_cnn.empty(), "compare_convergence: empty log");
  require_param(log_sinc.front().has_eval == log_cnn.front().has_eval,
                "compare_convergence: logs mix held-out and training FER");
  std::size_t n = std::min(log_sinc.size(), log_cnn.size());
  std::vector<ConvergenceRow> rows;
  for (std::size_t i = 0; i < n; ++i) {
    require_param(log_sinc[i].epoch == log_cnn[i].epoch,
                  "compare_convergence: epoch indices do not line up");
    ConvergenceRow r;
    r.epoch = log_sinc[i].epoch;
    r.fer_sinc = log_sinc[i].has_eval ? log_sinc[i].eval_fer : log_sinc[i].train_fer;
    r.fer_cnn = log_cnn[i].has_eval ? log_cnn[i].eval_fer : log_cnn[i].train_fer;
    rows.push_back(r);
  }
  return rows;
}

inline void write_convergence_csv(const std::string& path,
                                  const std::vector<ConvergenceRow>& rows) {
  auto out = detail::open_csv(path);
  out << "epoch,fer_sinc,fer_cnn\n";
  for (const auto& r : rows)
    out << r.epoch << "," << format_double_exact(r.fer_sinc) << ","
        << format_double_exact(r.fer_cnn) << "\n";
}

}  // namespace sincnet
