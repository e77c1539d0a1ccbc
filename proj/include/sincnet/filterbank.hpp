// sincnet/filterbank.hpp

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

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "sincnet/common.hpp"

// Windowed-sinc band-pass filters parametrized only by their low and high
// cutoff frequencies. A band-pass whose frequency response is the difference
// of two rects has the time-domain form
//
//   g[m] = 2*f2*sinc(2*pi*f2*m) - 2*f1*sinc(2*pi*f1*m)
//
// on centered integer taps m in [-(L-1)/2, (L-1)/2], smoothed by a Hamming
// window whose peak sits on the center tap. Cutoffs are kept in normalized
// frequency (cycles per sample, Nyquist = 0.5) everywhere; Hz appears only at
// I/O boundaries. All functions here are pure and safe to call concurrently.

namespace sincnet {

/// Raw learnable cutoff pairs, one (f1, f2) per filter, normalized units.
/// Raw values are unconstrained finite reals; admissible cutoffs are obtained
/// through reparametrize().
struct CutoffParams {
  std::vector<double> f1_raw;
  std::vector<double> f2_raw;

  std::size_t count() const { return f1_raw.size(); }
};

struct WindowVector {
  std::vector<double> values;
  std::string kind;

  std::size_t length() const { return values.size(); }
};

/// Materialized filter bank: full taps plus the center+side half buffers the
/// symmetric construction actually computes. Immutable after construction.
struct SincFilterBank {
  std::vector<std::vector<double>> taps;       // F x L
  std::vector<std::vector<double>> half_taps;  // F x (L+1)/2, [m=0 .. (L-1)/2]
  std::size_t length = 0;
  double sample_rate = 0.0;

  std::size_t count() const { return taps.size(); }
};

/// Instrumentation for the symmetric-construction saving: one evaluation is
/// one computation of the sinc pair g[m] at a single tap.
struct BuildCounters {
  std::size_t sinc_pair_evals = 0;
};

/// sinc(x) = sin(x)/x with the removable singularity filled in: sinc(0) = 1.
inline double sinc(double x) {
  require_param(std::isfinite(x), "sinc: argument must be finite");
  if (x == 0.0) return 1.0;
  return std::sin(x) / x;
}

/// Maps a raw cutoff pair onto admissible band edges:
///   f1_abs = |f1_raw|,  f2_abs = |f1_raw| + |f2_raw - f1_raw|
/// which guarantees 0 <= f1_abs <= f2_abs for any finite raw values. No upper
/// bound is imposed on f2_abs.
inline std::pair<double, double> reparametrize(double f1_raw, double f2_raw) {
  require_param(std::isfinite(f1_raw) && std::isfinite(f2_raw),
                "reparametrize: raw cutoffs must be finite");
  double f1_abs = std::fabs(f1_raw);
  double f2_abs = f1_abs + std::fabs(f2_raw - f1_raw);
  return {f1_abs, f2_abs};
}

/// Length-L Hamming window, peak 1.0 on the center tap. The left half is
/// evaluated as 0.54 - 0.46*cos(2*pi*n/(L-1)) and mirrored so the vector is
/// bitwise symmetric; the center value cos(pi) = -1 is exact.
inline WindowVector hamming_window(std::size_t length) {
  require_param(length >= 3, "hamming_window: length must be >= 3");
  require_param(length % 2 == 1, "hamming_window: length must be odd");
  std::size_t center = (length - 1) / 2;
  WindowVector w;
  w.kind = "hamming";
  w.values.assign(length, 0.0);
  for (std::size_t n = 0; n < center; ++n) {
    double v = 0.54 - 0.46 * std::cos(2.0 * M_PI * static_cast<double>(n) /
                                      static_cast<double>(length - 1));
    w.values[n] = v;
    w.values[length - 1 - n] = v;
  }
  w.values[center] = 1.0;
  return w;
}

namespace detail {

// Sinc pair at centered tap m. Evaluated on |m|; g is even, so this makes
// the full construction bitwise symmetric without trusting libm's sign
// handling.
inline double sinc_pair(double f1_abs, double f2_abs, std::ptrdiff_t m,
                        BuildCounters* counters) {
  if (counters) ++counters->sinc_pair_evals;
  double a = static_cast<double>(m < 0 ? -m : m);
  return 2.0 * f2_abs * sinc(2.0 * M_PI * f2_abs * a) -
         2.0 * f1_abs * sinc(2.0 * M_PI * f1_abs * a);
}

inline void check_band(double f1_abs, double f2_abs, std::size_t length,
                       const WindowVector& window, const char* who) {
  require_param(std::isfinite(f1_abs) && std::isfinite(f2_abs),
                std::string(who) + ": cutoffs must be finite");
  require_param(f1_abs >= 0.0, std::string(who) + ": f1_abs must be >= 0");
  require_param(f1_abs <= f2_abs, std::string(who) + ": requires f1_abs <= f2_abs");
  require_param(length >= 3 && length % 2 == 1,
                std::string(who) + ": filter length must be odd and >= 3");
  require_param(window.length() == length,
                std::string(who) + ": window length does not match filter length");
}

}  // namespace detail

/// Full windowed band-pass impulse response, length L, even-symmetric about
/// the center tap (bit-exact). Evaluates the sinc pair once per tap (L
/// evaluations).
inline std::vector<double> build_filter(double f1_abs, double f2_abs,
                                        std::size_t length, const WindowVector& window,
                                        BuildCounters* counters = nullptr) {
  detail::check_band(f1_abs, f2_abs, length, window, "build_filter");
  std::ptrdiff_t center = static_cast<std::ptrdiff_t>((length - 1) / 2);
  std::vector<double> taps(length);
  for (std::size_t n = 0; n < length; ++n) {
    std::ptrdiff_t m = static_cast<std::ptrdiff_t>(n) - center;
    taps[n] = detail::sinc_pair(f1_abs, f2_abs, m, counters) * window.values[n];
  }
  return taps;
}

/// Center-plus-one-side construction: exactly (L+1)/2 sinc-pair evaluations,
/// index i holds the tap at offset m = i from the center. Mirroring yields
/// the full filter bit for bit, halving first-layer tap construction cost.
inline std::vector<double> build_half_filter(double f1_abs, double f2_abs,
                                             std::size_t length, const WindowVector& window,
                                             BuildCounters* counters = nullptr) {
  detail::check_band(f1_abs, f2_abs, length, window, "build_half_filter");
  std::size_t center = (length - 1) / 2;
  std::size_t half_len = (length + 1) / 2;
  std::vector<double> half(half_len);
  for (std::size_t i = 0; i < half_len; ++i) {
    half[i] = detail::sinc_pair(f1_abs, f2_abs, static_cast<std::ptrdiff_t>(i), counters) *
              window.values[center + i];
  }
  return half;
}

/// Expands a center-first half buffer into the full symmetric filter.
inline std::vector<double> mirror_half(const std::vector<double>& half) {
  require_param(!half.empty(), "mirror_half: empty half filter");
  std::size_t length = 2 * half.size() - 1;
  std::size_t center = half.size() - 1;
  std::vector<double> taps(length);
  for (std::size_t i = 0; i < half.size(); ++i) {
    taps[center + i] = half[i];
    taps[center - i] = half[i];
  }
  return taps;
}

/// Analytic partials of every windowed tap with respect to the absolute
/// cutoffs. d/df [2f*sinc(2*pi*f*m)] = 2*cos(2*pi*f*m) for every m (the m=0
/// limit is the same expression), so
///   d taps[m]/d f2 =  2*cos(2*pi*f2*m) * w[m]
///   d taps[m]/d f1 = -2*cos(2*pi*f1*m) * w[m]
inline std::pair<std::vector<double>, std::vector<double>> filter_gradients(
    double f1_abs, double f2_abs, std::size_t length, const WindowVector& window) {
  detail::check_band(f1_abs, f2_abs, length, window, "filter_gradients");
  std::ptrdiff_t center = static_cast<std::ptrdiff_t>((length - 1) / 2);
  std::vector<double> d_f1(length), d_f2(length);
  for (std::size_t n = 0; n < length; ++n) {
    std::ptrdiff_t m = static_cast<std::ptrdiff_t>(n) - center;
    double a = static_cast<double>(m < 0 ? -m : m);
    d_f1[n] = -2.0 * std::cos(2.0 * M_PI * f1_abs * a) * window.values[n];
    d_f2[n] = 2.0 * std::cos(2.0 * M_PI * f2_abs * a) * window.values[n];
  }
  return {std::move(d_f1), std::move(d_f2)};
}

/// HTK-style mel scale.
inline double hz_to_mel(double hz) { return 2595.0 * std::log10(1.0 + hz / 700.0); }
inline double mel_to_hz(double mel) { return 700.0 * (std::pow(10.0, mel / 2595.0) - 1.0); }

/// Cutoff pairs at the band edges of a triangular mel bank: F+2 points
/// equally spaced on the mel scale over [f_min, f_max]; filter k gets
/// (point_k, point_{k+2}), converted to Hz and normalized by the sample
/// rate. Lower bands come out denser in Hz, as intended.
inline CutoffParams mel_initialize(std::size_t n_filters, double sample_rate,
                                   double f_min, double f_max) {
  require_param(n_filters >= 1, "mel_initialize: need at least one filter");
  require_param(sample_rate > 0.0, "mel_initialize: sample rate must be positive");
  require_param(f_min >= 0.0 && f_min < f_max && f_max <= sample_rate / 2.0,
                "mel_initialize: requires 0 <= f_min < f_max <= sample_rate/2");
  double mel_lo = hz_to_mel(f_min);
  double mel_hi = hz_to_mel(f_max);
  std::vector<double> points_hz(n_filters + 2);
  for (std::size_t i = 0; i < points_hz.size(); ++i) {
    double t = static_cast<double>(i) / static_cast<double>(n_filters + 1);
    points_hz[i] = mel_to_hz(mel_lo + t * (mel_hi - mel_lo));
  }
  CutoffParams params;
  params.f1_raw.resize(n_filters);
  params.f2_raw.resize(n_filters);
  for (std::size_t k = 0; k < n_filters; ++k) {
    params.f1_raw[k] = points_hz[k] / sample_rate;
    params.f2_raw[k] = points_hz[k + 2] / sample_rate;
  }
  return params;
}

/// Builds the whole bank through the half construction; taps and half_taps
/// stay consistent by definition.
inline SincFilterBank materialize_bank(const CutoffParams& params, std::size_t length,
                                       const WindowVector& window, double sample_rate,
                                       BuildCounters* counters = nullptr) {
  SincFilterBank bank;
  bank.length = length;
  bank.sample_rate = sample_rate;
  bank.taps.reserve(params.count());
  bank.half_taps.reserve(params.count());
  for (std::size_t k = 0; k < params.count(); ++k) {
    auto [f1_abs, f2_abs] = reparametrize(params.f1_raw[k], params.f2_raw[k]);
    auto half = build_half_filter(f1_abs, f2_abs, length, window, counters);
    bank.taps.push_back(mirror_half(half));
    bank.half_taps.push_back(std::move(half));
  }
  return bank;
}

/// Magnitude of the DFT of the zero-padded taps at bins 0 .. n_fft/2, by
/// direct summation. Slow on purpose: this doubles as the independent
/// frequency-domain oracle, so no fast transform is involved.
inline std::vector<double> frequency_response(std::span<const double> taps,
                                              std::size_t n_fft) {
  require_param(n_fft >= taps.size(),
                "frequency_response: n_fft must be >= filter length");
  require_param(is_power_of_two(n_fft), "frequency_response: n_fft must be a power of two");
  std::vector<double> magnitude(n_fft / 2 + 1);
  for (std::size_t k = 0; k < magnitude.size(); ++k) {
    double re = 0.0, im = 0.0;
    double w = -2.0 * M_PI * static_cast<double>(k) / static_cast<double>(n_fft);
    for (std::size_t n = 0; n < taps.size(); ++n) {
      double angle = w * static_cast<double>(n);
      re += taps[n] * std::cos(angle);
      im += taps[n] * std::sin(angle);
    }
    magnitude[k] = std::hypot(re, im);
  }
  return magnitude;
}

/// Element-wise sum of the individual magnitude responses over the bank.
inline std::vector<double> cumulative_response(const SincFilterBank& bank,
                                               std::size_t n_fft) {
  require_param(bank.count() > 0, "cumulative_response: bank is empty");
  std::vector<double> sum(n_fft / 2 + 1, 0.0);
  for (const auto& taps : bank.taps) {
    auto mag = frequency_response(taps, n_fft);
    for (std::size_t k = 0; k < sum.size(); ++k) sum[k] += mag[k];
  }
  return sum;
}

}  // namespace sincnet
