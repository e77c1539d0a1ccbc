// tests/test_config.cpp

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

#include <fstream>

#include "sincnet/config.hpp"
#include "testing_support.hpp"

using namespace sincnet;
using testing_support::TempDir;

TEST_CASE("config: parses key = value with comments and blank lines") {
  ConfigMap cfg = parse_config_text(
      "# a comment\n"
      "seed = 7\n"
      "\n"
      "lr=0.001\n"
      "  cnn_mode =  sinc  \n");
  REQUIRE(cfg.size() == 3);
  REQUIRE(cfg.at("seed") == "7");
  REQUIRE(cfg.at("lr") == "0.001");
  REQUIRE(cfg.at("cnn_mode") == "sinc");
}

TEST_CASE("config: later keys win, malformed lines carry their origin") {
  ConfigMap cfg = parse_config_text("a = 1\na = 2\n");
  REQUIRE(cfg.at("a") == "2");
  REQUIRE_THROWS_WITH(parse_config_text("novalue\n", "train.cfg"),
                      Catch::Matchers::ContainsSubstring("train.cfg:1"));
  REQUIRE_THROWS_AS(parse_config_text("= 3\n"), ConfigError);
}

TEST_CASE("config: file parsing and merge precedence") {
  TempDir tmp;
  {
    std::ofstream f(tmp.str("t.cfg"));
    f << "epochs = 12\nseed = 7\n";
  }
  ConfigMap file = parse_config_file(tmp.str("t.cfg"));
  ConfigMap merged = merge_config(file, {{"seed", "9"}, {"lr", "0.01"}});
  REQUIRE(merged.at("epochs") == "12");
  REQUIRE(merged.at("seed") == "9");
  REQUIRE(merged.at("lr") == "0.01");
  REQUIRE_THROWS_AS(parse_config_file(tmp.str("missing.cfg")), ConfigError);
}

TEST_CASE("config: unknown keys are rejected by name") {
  ConfigMap cfg{{"seed", "7"}, {"sneaky", "1"}};
  REQUIRE_THROWS_WITH(validate_config_keys(cfg, {"seed", "lr"}),
                      Catch::Matchers::ContainsSubstring("sneaky"));
  REQUIRE_NOTHROW(validate_config_keys({{"seed", "1"}}, {"seed"}));
}

TEST_CASE("config: render is sorted and reparses to the same map") {
  ConfigMap cfg{{"zeta", "1"}, {"alpha", "two"}, {"mid", "3.5"}};
  std::string text = render_config(cfg);
  REQUIRE(text == "alpha = two\nmid = 3.5\nzeta = 1\n");
  REQUIRE(parse_config_text(text) == cfg);
}

TEST_CASE("config: typed getters parse and validate") {
  ConfigMap cfg{{"lr", "0.001"},  {"seed", "42"},    {"on", "true"},
                {"off", "false"}, {"fc", "128,64"},  {"one", "32"},
                {"junk", "12ab"}, {"negative", "-3"}};
  REQUIRE(get_double(cfg, "lr", 0.0) == 0.001);
  REQUIRE(get_double(cfg, "absent", 2.5) == 2.5);
  REQUIRE(get_u64(cfg, "seed", 0) == 42);
  REQUIRE(get_bool(cfg, "on", false));
  REQUIRE_FALSE(get_bool(cfg, "off", true));
  REQUIRE(get_size_list(cfg, "fc", {}) == std::vector<std::size_t>{128, 64});
  REQUIRE(get_size_list(cfg, "one", {}) == std::vector<std::size_t>{32});
  REQUIRE(get_string(cfg, "absent", "dflt") == "dflt");
  REQUIRE_THROWS_AS(get_required(cfg, "missing"), ConfigError);
  REQUIRE_THROWS_AS(get_double(cfg, "junk", 0.0), ConfigError);
  REQUIRE_THROWS_AS(get_u64(cfg, "negative", 0), ConfigError);
  REQUIRE_THROWS_AS(get_bool(cfg, "junk", false), ConfigError);
}

TEST_CASE("config: size list round trip") {
  std::vector<std::size_t> v{8, 16, 32};
  REQUIRE(join_size_list(v) == "8,16,32");
  ConfigMap cfg{{"dims", join_size_list(v)}};
  REQUIRE(get_size_list(cfg, "dims", {}) == v);
  REQUIRE(join_size_list({}) == "");
}
