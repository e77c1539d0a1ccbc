// tests/test_common.cpp

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

#include <cstdlib>
#include <set>
#include <vector>

#include "sincnet/common.hpp"

using namespace sincnet;

TEST_CASE("rng: identical seeds give identical streams") {
  Rng a(123), b(123);
  for (int i = 0; i < 1000; ++i) REQUIRE(a.next_u64() == b.next_u64());
}

TEST_CASE("rng: derive separates streams") {
  REQUIRE(Rng::derive(7, 0) != Rng::derive(7, 1));
  REQUIRE(Rng::derive(7, 0) != Rng::derive(8, 0));
  Rng a(Rng::derive(7, 0)), b(Rng::derive(7, 1));
  int same = 0;
  for (int i = 0; i < 64; ++i) same += a.next_u64() == b.next_u64();
  REQUIRE(same == 0);
}

TEST_CASE("rng: uniform stays in [0, 1)") {
  Rng rng(9);
  for (int i = 0; i < 100000; ++i) {
    double u = rng.uniform();
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
  }
}

TEST_CASE("rng: ranged uniform stays in range") {
  Rng rng(10);
  for (int i = 0; i < 10000; ++i) {
    double u = rng.uniform(-3.5, 2.25);
    REQUIRE(u >= -3.5);
    REQUIRE(u < 2.25);
  }
}

TEST_CASE("rng: normal sample mean within three standard errors") {
  Rng rng(11);
  const int n = 100000;
  double sum = 0.0, sumsq = 0.0;
  for (int i = 0; i < n; ++i) {
    double v = rng.normal();
    sum += v;
    sumsq += v * v;
  }
  double mean = sum / n;
  double var = sumsq / n - mean * mean;
  REQUIRE(std::fabs(mean) < 3.0 / std::sqrt(static_cast<double>(n)));
  REQUIRE(var > 0.9);
  REQUIRE(var < 1.1);
}

TEST_CASE("rng: index is bounded and exercises the whole range") {
  Rng rng(12);
  std::set<std::size_t> seen;
  for (int i = 0; i < 1000; ++i) {
    std::size_t k = rng.index(7);
    REQUIRE(k < 7);
    seen.insert(k);
  }
  REQUIRE(seen.size() == 7);
  REQUIRE_THROWS_AS(rng.index(0), InvalidParameterError);
}

TEST_CASE("rng: shuffle preserves the multiset of elements") {
  Rng rng(13);
  std::vector<int> v{1, 2, 2, 3, 5, 8, 13, 21};
  std::vector<int> orig = v;
  rng.shuffle(v);
  std::vector<int> sorted_v = v, sorted_o = orig;
  std::sort(sorted_v.begin(), sorted_v.end());
  std::sort(sorted_o.begin(), sorted_o.end());
  REQUIRE(sorted_v == sorted_o);
}

TEST_CASE("format_double_exact round-trips bitwise") {
  std::vector<double> values{0.1,           1.0 / 3.0, 999.9855371396244, -2.5e-300,
                             1.7976931348e308, 0.0,     -0.08};
  for (double v : values) {
    std::string s = format_double_exact(v);
    double back = std::strtod(s.c_str(), nullptr);
    REQUIRE(back == v);
  }
}

TEST_CASE("format_double is stable and compact") {
  REQUIRE(format_double(1.0) == "1");
  REQUIRE(format_double(0.5) == "0.5");
  REQUIRE(format_double(1e-07) == "1e-07");
}

TEST_CASE("parallel_for visits every index exactly once for any thread count") {
  for (std::size_t threads : {1u, 2u, 4u, 7u}) {
    std::vector<int> hits(1000, 0);
    parallel_for(hits.size(), threads, [&](std::size_t i) { hits[i] += 1; });
    for (int h : hits) REQUIRE(h == 1);
  }
}

TEST_CASE("require helpers throw their own exception types") {
  REQUIRE_THROWS_AS(require_param(false, "p"), InvalidParameterError);
  REQUIRE_THROWS_AS(require_shape(false, "s"), ShapeError);
  REQUIRE_THROWS_AS(require_contract(false, "c"), ContractError);
  REQUIRE_NOTHROW(require_param(true, "p"));
}

TEST_CASE("is_power_of_two") {
  REQUIRE(is_power_of_two(1));
  REQUIRE(is_power_of_two(4096));
  REQUIRE_FALSE(is_power_of_two(0));
  REQUIRE_FALSE(is_power_of_two(12));
}
