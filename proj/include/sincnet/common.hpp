// sincnet/common.hpp

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
#include <cstdint>
#include <cstdio>
#include <random>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace sincnet {

class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Mathematically inadmissible argument (non-finite cutoff, even filter
// length, bad frequency range, ...).
class InvalidParameterError : public Error {
 public:
  using Error::Error;
};

// Tensor dimensions do not line up.
class ShapeError : public Error {
 public:
  using Error::Error;
};

// An API was used out of order (backward without forward, mismatched
// cache, posterior rows that do not sum to one).
class ContractError : public Error {
 public:
  using Error::Error;
};

// A file on disk is not what it claims to be.
class FormatError : public Error {
 public:
  using Error::Error;
};

// Bad run configuration (unknown key, empty impostor pool, ...).
class ConfigError : public Error {
 public:
  using Error::Error;
};

inline void require_param(bool ok, const std::string& msg) {
  if (!ok) throw InvalidParameterError(msg);
}

inline void require_shape(bool ok, const std::string& msg) {
  if (!ok) throw ShapeError(msg);
}

inline void require_contract(bool ok, const std::string& msg) {
  if (!ok) throw ContractError(msg);
}

inline bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

/// Deterministic random source. All randomness in the library flows through
/// this class so that a run is reproducible bit for bit from its seed; the
/// std::mt19937_64 output sequence is pinned by the standard and the value
/// mappings below are our own (no implementation-defined distributions).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// splitmix64 mix of (seed, stream), used to hand independent seeds to
  /// subsystems (per-layer init, per-epoch shuffles, per-speaker synthesis).
  static std::uint64_t derive(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform in [0, 1), 53 bits.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Box-Muller; one spare value is cached.
  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = uniform();
    double u2 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    double r = std::sqrt(-2.0 * std::log(u1));
    double a = 2.0 * M_PI * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

  /// Uniform index in [0, n). Lemire multiply-shift; deterministic.
  std::size_t index(std::size_t n) {
    require_param(n > 0, "Rng::index: n must be positive");
    return static_cast<std::size_t>(
        (static_cast<unsigned __int128>(next_u64()) * n) >> 64);
  }

  /// Fisher-Yates.
  template <class T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::size_t j = index(i);
      std::swap(v[i - 1], v[j]);
    }
  }

 private:
  std::mt19937_64 engine_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

/// Fixed CSV float formatting; keeps repeated runs byte-identical.
inline std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

/// Round-trip-exact formatting, for values tests reparse and compare exactly.
inline std::string format_double_exact(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

/// Runs fn(i) for i in [0, n) on `threads` threads over contiguous ranges.
/// Caller is responsible for making writes disjoint per index; reductions
/// that must be deterministic are performed sequentially by the caller.
template <class Fn>
void parallel_for(std::size_t n, std::size_t threads, Fn&& fn) {
  if (threads <= 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::size_t n_workers = threads < n ? threads : n;
  std::vector<std::thread> pool;
  pool.reserve(n_workers);
  std::size_t chunk = (n + n_workers - 1) / n_workers;
  for (std::size_t w = 0; w < n_workers; ++w) {
    std::size_t lo = w * chunk;
    std::size_t hi = lo + chunk < n ? lo + chunk : n;
    if (lo >= hi) break;
    pool.emplace_back([lo, hi, &fn] {
      for (std::size_t i = lo; i < hi; ++i) fn(i);
    });
  }
  for (auto& t : pool) t.join();
}

}  // namespace sincnet
