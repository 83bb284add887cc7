/* Copyright 2026 the seqrep authors
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *     http://www.apache.org/licenses/LICENSE-2.0
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 */
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "seqrep/errors.hpp"
#include "seqrep/params.hpp"

using namespace seqrep;

namespace {

std::filesystem::path temp_file(const char* tag) {
  static int counter = 0;
  return std::filesystem::temp_directory_path() /
         (std::string("seqrep_test_") + tag + "_" +
          std::to_string(counter++) + ".conf");
}

}  // namespace

TEST_SUITE("params") {

TEST_CASE("expected defaults carry the stated values") {
  const ExperimentParams p = default_expected_params();
  CHECK(p.a0 == 1.0 / 2000.0);
  CHECK(p.a1 == 1.0 / 3.0);
  CHECK(p.b0 == 1.0 / 5000.0);
  CHECK(p.b1 == 1.0 / 3.0);
  CHECK(p.t_prep == 6e-6);
  CHECK(p.F_gm == 0.9);
  CHECK(p.F_prep == 0.99);
  CHECK(p.p_em == 0.49);
  CHECK(p.conversion_eff == 1.0);
  CHECK(p.p_ps == 0.46);
  CHECK(p.p_det == 0.8);
  CHECK(p.p_bsm == 1.0);
  CHECK(p.dark_rate == 10.0);
  CHECK(p.t_int == 30e-9);
  CHECK(p.L0 == 0.542);
  CHECK(p.n_ri == 1.44);
  CHECK(p.L_total == 5.42);
  CHECK(p.L_A == 2.71);
}

TEST_CASE("derived helpers") {
  const ExperimentParams p = default_expected_params();
  CHECK(p.p_app() == 0.49 * 1.0 * 0.8);
  CHECK(p.L_B() == doctest::Approx(2.71).epsilon(1e-15));
  CHECK(p.n_bar() == doctest::Approx(3e-7).epsilon(1e-15));
}

TEST_CASE("validate accepts the defaults") {
  const ValidationReport r = validate(default_expected_params());
  CHECK(r.ok());
  CHECK(!r.has_warnings());
}

TEST_CASE("validate flags out-of-range fields") {
  ExperimentParams p = default_expected_params();
  p.p_em = 2.0;
  const ValidationReport r = validate(p);
  CHECK(!r.ok());
  CHECK(r.to_string().find("p_em") != std::string::npos);
}

TEST_CASE("validate flags a repeater beyond Bob") {
  ExperimentParams p = default_expected_params();
  p.L_A = p.L_total + 1.0;
  CHECK(!validate(p).ok());
}

TEST_CASE("repeater closer to Alice is a warning, not an error") {
  ExperimentParams p = default_expected_params();
  p.L_A = 1.0;  // < L_total / 2
  const ValidationReport r = validate(p);
  CHECK(r.ok());
  CHECK(r.has_warnings());
}

TEST_CASE("cutoff parsing and printing") {
  CHECK(parse_cutoff("inf") == Cutoff::none());
  CHECK(parse_cutoff("none") == Cutoff::none());
  CHECK(parse_cutoff("100") == Cutoff(100));
  CHECK(to_string(Cutoff(275)) == "275");
  CHECK(to_string(Cutoff::none()) == "inf");
  CHECK(Cutoff::none().as_double() ==
        std::numeric_limits<double>::infinity());
  CHECK(Cutoff(7).as_double() == 7.0);
  CHECK_THROWS_AS(parse_cutoff("0"), ConfigError);
  CHECK_THROWS_AS(parse_cutoff("-3"), ConfigError);
  CHECK_THROWS_AS(parse_cutoff("abc"), ConfigError);
  CHECK_THROWS_AS(parse_cutoff(""), ConfigError);
}

TEST_CASE("parameter registry round-trips every field") {
  ExperimentParams p = default_expected_params();
  double probe = 0.015625;  // exactly representable
  for (const ParamField& f : param_fields()) {
    probe += 0.0625;
    CHECK(set_param(p, f.name, probe));
    REQUIRE(get_param(p, f.name).has_value());
    CHECK(*get_param(p, f.name) == probe);
  }
  CHECK(!set_param(p, "no_such_field", 1.0));
  CHECK(!get_param(p, "no_such_field").has_value());
}

TEST_CASE("config save/load round-trip is exact") {
  ExperimentParams p = default_expected_params();
  p.L0 = 0.3141592653589793;
  p.t_int = 2.718281828459045e-8;
  const auto file = temp_file("roundtrip");
  save_config(p, file);
  const ExperimentParams q = load_config(file);
  for (const ParamField& f : param_fields())
    CHECK(*get_param(q, f.name) == *get_param(p, f.name));
  std::filesystem::remove(file);
}

TEST_CASE("config syntax errors carry line numbers") {
  const auto file = temp_file("syntax");
  {
    std::ofstream out(file);
    out << "# fine\nL0 = 10\nbogus line\n";
  }
  try {
    load_config(file);
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find(":3") != std::string::npos);
  }
  std::filesystem::remove(file);
}

TEST_CASE("unknown config keys are rejected") {
  const auto file = temp_file("unknown");
  {
    std::ofstream out(file);
    out << "L_zero = 10\n";
  }
  CHECK_THROWS_AS(load_config(file), ConfigError);
  std::filesystem::remove(file);
}

TEST_CASE("L_A follows L_total/2 until assigned explicitly") {
  const std::pair<std::string, double> just_total[] = {{"L_total", 8.0}};
  const ExperimentParams a = resolve_params({}, just_total);
  CHECK(a.L_A == 4.0);

  const std::pair<std::string, double> explicit_la[] = {{"L_A", 3.0},
                                                        {"L_total", 8.0}};
  const ExperimentParams b = resolve_params({}, explicit_la);
  CHECK(b.L_A == 3.0);
  CHECK(b.L_total == 8.0);
}

TEST_CASE("config file feeds resolve_params before overrides") {
  const auto file = temp_file("resolve");
  {
    std::ofstream out(file);
    out << "L_total = 10\np_ps = 0.5\n";
  }
  const std::pair<std::string, double> overrides[] = {{"p_ps", 0.6}};
  const std::optional<std::filesystem::path> cfg = file;
  const ExperimentParams p = resolve_params(cfg, overrides);
  CHECK(p.L_total == 10.0);
  CHECK(p.L_A == 5.0);  // midpoint default tracks the configured distance
  CHECK(p.p_ps == 0.6);  // override wins
  std::filesystem::remove(file);
}

TEST_CASE("config hash separates configs and is stable") {
  const ExperimentParams p = default_expected_params();
  ExperimentParams q = p;
  CHECK(config_hash(p) == config_hash(q));
  q.L0 = 22.0;
  CHECK(config_hash(p) != config_hash(q));
}

TEST_CASE("full-precision formatting round-trips") {
  for (double v : {0.1, 1.0 / 3.0, 5.42, 3e-7, 1e300, -0.0}) {
    const std::string s = format_full(v);
    CHECK(std::strtod(s.c_str(), nullptr) == v);
  }
}

TEST_CASE("protocol bookkeeping") {
  CHECK(detector_count(ProtocolKind::bb84) == 2);
  CHECK(detector_count(ProtocolKind::six_state) == 6);
  CHECK(std::string(protocol_name(ProtocolKind::bb84)) == "bb84");
  CHECK(std::string(protocol_name(ProtocolKind::six_state)) == "six_state");
}

}  // TEST_SUITE
