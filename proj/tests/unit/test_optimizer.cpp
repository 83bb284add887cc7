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

#include <cmath>
#include <vector>

#include "seqrep/errors.hpp"
#include "seqrep/optimizer.hpp"
#include "seqrep/simulator.hpp"

using namespace seqrep;

namespace {

ExperimentParams ideal_params() {
  ExperimentParams p = default_expected_params();
  p.a0 = p.a1 = p.b0 = p.b1 = 0.0;
  p.t_prep = 0.0;
  p.F_gm = p.F_prep = 1.0;
  p.p_em = p.p_ps = p.p_det = p.p_bsm = 1.0;
  p.dark_rate = 0.0;
  p.L_total = 0.0;
  p.L_A = 0.0;
  return p;
}

ExperimentParams at_distance(double l0_units) {
  ExperimentParams p = default_expected_params();
  p.L_total = l0_units * p.L0;
  p.L_A = p.L_total / 2.0;
  return p;
}

}  // namespace

TEST_SUITE("optimizer") {

TEST_CASE("lossless hardware converts every second use into key") {
  const RateResult r = rate_at(ideal_params(), ProtocolKind::bb84, Cutoff(1));
  CHECK(r.R_upper == 0.5);
  CHECK(r.R_lower == 0.5);
  CHECK(r.skf == 1.0);
  CHECK(r.e_X == 0.0);
  CHECK(r.e_Z == 0.0);
  CHECK(r.uses_lower == 1.0);
}

TEST_CASE("fully dephasing swap gate wipes out the key") {
  ExperimentParams p = at_distance(10.0);
  p.F_gm = 0.0;
  const RateResult r = best_rate_at(p, Cutoff(100));
  CHECK(r.R_upper == 0.0);
  CHECK(r.e_X == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(r.e_Z == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("protocol choice: six-state rescues the no-cut-off regime") {
  // at 10 L0, repeater a little toward Bob, no cut-off: the accumulated
  // memory noise kills one-way BB84 but not the distillation branch
  ExperimentParams p = default_expected_params();
  p.L_A = 3.0;
  p.L_total = 5.42;
  const RateResult bb = rate_at(p, ProtocolKind::bb84, Cutoff::none());
  const RateResult six = rate_at(p, ProtocolKind::six_state, Cutoff::none());
  CHECK(bb.skf == 0.0);
  CHECK(six.skf > 0.0);
  const RateResult best = best_rate_at(p, Cutoff::none());
  CHECK(best.protocol == ProtocolKind::six_state);
  CHECK(best.R_upper == six.R_upper);
}

TEST_CASE("search matches an exhaustive scan at 15 attenuation lengths") {
  const ExperimentParams p = at_distance(15.0);
  const RateResult found = optimize_cutoff(p);
  CHECK(found.R_upper > 0.0);

  double exhaustive = best_rate_at(p, Cutoff::none()).R_upper;
  std::uint64_t arg = 0;
  const LinkClickModel lb = make_link(p, Side::bob, ProtocolKind::bb84);
  const auto budget = static_cast<std::uint64_t>(10.0 / lb.p_click) + 2;
  for (std::uint64_t n = 1; n <= budget; ++n) {
    double r = 0.0;
    try {
      r = best_rate_at(p, Cutoff(n)).R_upper;
    } catch (const ValidityError&) {
      continue;
    }
    if (r > exhaustive) {
      exhaustive = r;
      arg = n;
    }
  }
  INFO("exhaustive argmax n_star = ", arg);
  CHECK(found.R_upper >= exhaustive * (1.0 - 1e-9));
  CHECK(found.R_upper <= exhaustive * (1.0 + 1e-9));
}

TEST_CASE("an optimized cut-off never loses to running without one") {
  for (double l0s : {5.0, 10.0, 15.0, 20.0}) {
    const ExperimentParams p = at_distance(l0s);
    const RateResult opt = optimize_cutoff(p);
    const RateResult open = best_rate_at(p, Cutoff::none());
    CHECK(opt.R_upper >= open.R_upper);
  }
}

TEST_CASE("without memory decay the search keeps the cut-off open") {
  ExperimentParams p = at_distance(12.0);
  p.a0 = p.a1 = p.b0 = p.b1 = 0.0;
  p.t_prep = 0.0;
  const RateResult r = optimize_cutoff(p);
  CHECK(r.n_star == Cutoff::none());
}

TEST_CASE("pinning the protocol restricts the search") {
  const ExperimentParams p = at_distance(10.0);
  const RateResult bb = optimize_cutoff(p, ProtocolKind::bb84);
  const RateResult six = optimize_cutoff(p, ProtocolKind::six_state);
  const RateResult both = optimize_cutoff(p);
  CHECK(bb.protocol == ProtocolKind::bb84);
  CHECK(six.protocol == ProtocolKind::six_state);
  CHECK(both.R_upper == std::max(bb.R_upper, six.R_upper));
}

TEST_CASE("verdicts compare the optimistic rate against each baseline") {
  const ExperimentParams p = at_distance(10.0);
  const RateResult r = optimize_cutoff(p);
  const BenchmarkReport rep = benchmark_verdicts(p, r);
  for (int i = 0; i < 6; ++i)
    CHECK(rep.surpassed[i] == (r.R_upper > rep.values[i].value));
}

TEST_CASE("position sweep: both curves, analytic on the Bob side only") {
  const ExperimentParams p = default_expected_params();
  const std::vector<double> spots = {2.0, 2.71, 4.0};
  const auto pts = position_sweep(p, spots);
  REQUIRE(pts.size() == 3);
  // left of the midpoint: no closed-form bracket, no Monte Carlo requested
  CHECK(!pts[0].optimized.has_value());
  CHECK(!pts[0].error.empty());
  CHECK(pts[0].no_cutoff.has_value());  // exact either way
  // midpoint and right of it: closed forms apply
  for (std::size_t i = 1; i < 3; ++i) {
    REQUIRE(pts[i].optimized.has_value());
    REQUIRE(pts[i].no_cutoff.has_value());
    CHECK(pts[i].error.empty());
    CHECK(pts[i].optimized->R_upper >= pts[i].no_cutoff->R_upper);
  }
}

TEST_CASE("position sweep falls back to sampling when asked") {
  const ExperimentParams p = default_expected_params();
  const std::vector<double> spots = {2.0};
  SweepOptions opt;
  opt.mc_samples = 20000;
  opt.seed = 5;
  const auto pts = position_sweep(p, spots, opt);
  REQUIRE(pts[0].optimized.has_value());
  CHECK(pts[0].optimized->simulated);
  CHECK(pts[0].error.empty());
  CHECK(pts[0].optimized->R_upper > 0.0);
  // repeatability under the same seed
  const auto again = position_sweep(p, spots, opt);
  CHECK(again[0].optimized->R_upper == pts[0].optimized->R_upper);
}

TEST_CASE("distance sweep keeps the placement ratio and flags failures") {
  ExperimentParams p = default_expected_params();
  const std::vector<double> ls = {2.71, 5.42, 10.84};
  const auto pts = distance_sweep(p, ls);
  REQUIRE(pts.size() == 3);
  for (const auto& pt : pts) {
    REQUIRE(pt.result.has_value());
    CHECK(pt.error.empty());
  }
  // rates fall with distance
  CHECK(pts[0].result->R_upper > pts[1].result->R_upper);
  CHECK(pts[1].result->R_upper > pts[2].result->R_upper);
}

TEST_CASE("distance sweep can disable dark counts") {
  const ExperimentParams p = default_expected_params();
  const std::vector<double> ls = {25.0 * p.L0};
  const auto noisy = distance_sweep(p, ls, true);
  const auto clean = distance_sweep(p, ls, false);
  REQUIRE(noisy[0].result.has_value());
  REQUIRE(clean[0].result.has_value());
  // dark counts only ever hurt at long range
  CHECK(clean[0].result->R_upper > noisy[0].result->R_upper);
}

TEST_CASE("contour sweep covers the grid row-major and flags bad points") {
  const ExperimentParams p = default_expected_params();
  const AxisSpec ax{"p_ps", {0.4, 0.6}};
  const AxisSpec ay{"F_gm", {0.9, 0.95, 0.97}};
  const auto pts = contour_sweep(p, ax, ay, p.L_total);
  REQUIRE(pts.size() == 6);
  CHECK(pts[0].x == 0.4);
  CHECK(pts[0].y == 0.9);
  CHECK(pts[1].x == 0.6);
  CHECK(pts[1].y == 0.9);
  CHECK(pts[5].y == 0.97);
  for (const auto& pt : pts) {
    REQUIRE(pt.result.has_value());
    CHECK(pt.error.empty());
  }
  // better hardware can only help
  CHECK(pts[5].result->R_upper > pts[0].result->R_upper);

  // a dead point is still a valid point: the rate simply collapses to zero
  const AxisSpec dead{"p_ps", {0.0, 0.4}};
  const auto dark = contour_sweep(p, dead, ay, p.L_total);
  REQUIRE(dark[0].result.has_value());
  CHECK(dark[0].error.empty());
  CHECK(dark[0].result->R_upper == 0.0);

  const AxisSpec bad{"p_ps", {1.5, 0.4}};
  const auto flagged = contour_sweep(p, bad, ay, p.L_total);
  CHECK(!flagged[0].error.empty());
  CHECK(!flagged[0].result.has_value());
  CHECK(flagged[1].error.empty());
}

TEST_CASE("grid builders hit their endpoints exactly") {
  const auto lin = linspace(1.0, 3.0, 5);
  REQUIRE(lin.size() == 5);
  CHECK(lin.front() == 1.0);
  CHECK(lin.back() == 3.0);
  CHECK(lin[2] == doctest::Approx(2.0).epsilon(1e-15));
  const auto lg = logspace(1.0, 100.0, 3);
  REQUIRE(lg.size() == 3);
  CHECK(lg.front() == 1.0);
  CHECK(lg.back() == 100.0);
  CHECK(lg[1] == doctest::Approx(10.0).epsilon(1e-12));
  CHECK(linspace(2.0, 2.0, 1).size() == 1);
}

TEST_CASE("rate bounds inherit the yield bracket ordering") {
  const ExperimentParams p = at_distance(12.0);
  const RateResult r = rate_at(p, ProtocolKind::bb84, Cutoff(300));
  CHECK(r.R_lower <= r.R_upper);
  CHECK(r.uses_lower <= r.uses_upper);
  CHECK(r.R_upper ==
        doctest::Approx(0.5 * p.p_bsm / r.uses_lower * r.skf).epsilon(1e-12));
}

TEST_CASE("placement validity propagates out of rate_at") {
  ExperimentParams p = default_expected_params();
  p.L_A = 1.0;  // repeater close to Alice: p_B < p_A
  CHECK_THROWS_AS(rate_at(p, ProtocolKind::bb84, Cutoff(100)), ValidityError);
  CHECK_THROWS_AS(best_rate_at(p, Cutoff(100)), ValidityError);
}

}  // TEST_SUITE
