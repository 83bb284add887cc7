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

#include "seqrep/skf.hpp"

using namespace seqrep;

namespace {

double h2(double p) {
  if (p <= 0.0 || p >= 1.0) return 0.0;
  return -p * std::log2(p) - (1.0 - p) * std::log2(1.0 - p);
}

// Re-derivation of the advantage-distillation fraction through the
// (e_Z, e_XY, balance) parametrization instead of the four raw weights.
// The two routes share only the problem statement, not code.
double ad_by_marginals(const BellCoefficients& b) {
  const double e_Z = b.p10 + b.p11;
  const double s0 = 1.0 - e_Z, s1 = e_Z;
  const double shannon = [&] {
    double s = 0.0;
    for (double v : {b.p00, b.p01, b.p10, b.p11})
      if (v > 0.0) s -= v * std::log2(v);
    return s;
  }();
  double first = 1.0 - shannon;
  const double cross = b.p00 * b.p10 + b.p01 * b.p11;
  if (s0 > 0.0 && s1 > 0.0) first += s0 * s1 * h2(cross / (s0 * s1));

  // survivors of the two-round postselection, renormalized
  const double keep = s0 * s0 + s1 * s1;  // = 1 - 2 e_Z + 2 e_Z^2
  double second = 0.0;
  if (keep > 0.0) {
    const double q00 = (b.p00 * b.p00 + b.p01 * b.p01) / keep;
    const double q01 = 2.0 * b.p00 * b.p01 / keep;
    const double q10 = (b.p10 * b.p10 + b.p11 * b.p11) / keep;
    const double q11 = 2.0 * b.p10 * b.p11 / keep;
    double hq = 0.0;
    for (double v : {q00, q01, q10, q11})
      if (v > 0.0) hq -= v * std::log2(v);
    second = 0.5 * keep * (1.0 - hq);
  }
  return std::max(0.0, std::max(first, second) / 3.0);
}

}  // namespace

TEST_SUITE("skf") {

TEST_CASE("binary entropy landmarks") {
  CHECK(binary_entropy(0.0) == 0.0);
  CHECK(binary_entropy(1.0) == 0.0);
  CHECK(binary_entropy(0.5) == 1.0);
  CHECK(binary_entropy(0.25) ==
        doctest::Approx(0.811278124459133).epsilon(1e-14));
  CHECK(binary_entropy(0.11) == doctest::Approx(h2(0.11)).epsilon(1e-15));
}

TEST_CASE("one-way fraction basics") {
  CHECK(skf_bb84(0.0, 0.0).value == 1.0);
  CHECK(skf_bb84(0.5, 0.5).value == 0.0);
  const SecretKeyFraction f = skf_bb84(0.03, 0.05);
  CHECK(f.value == doctest::Approx(1.0 - h2(0.03) - h2(0.05)).epsilon(1e-14));
  CHECK(f.protocol == ProtocolKind::bb84);
  CHECK(f.branch == SkfBranch::one_way);
}

TEST_CASE("one-way threshold sits at the known symmetric error rate") {
  // root of 1 - 2 h(e) located by bisection, independent of the library
  double lo = 0.05, hi = 0.2;
  for (int i = 0; i < 200; ++i) {
    const double mid = (lo + hi) / 2.0;
    (1.0 - 2.0 * h2(mid) > 0.0 ? lo : hi) = mid;
  }
  CHECK(lo == doctest::Approx(0.1100278644).epsilon(1e-9));
  CHECK(skf_bb84(lo - 1e-4, lo - 1e-4).value > 0.0);
  CHECK(skf_bb84(lo + 1e-4, lo + 1e-4).value == 0.0);
}

TEST_CASE("distillation fraction of the perfect state") {
  const SecretKeyFraction f = skf_six_state_ad({1.0, 0.0, 0.0, 0.0});
  CHECK(f.value == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  CHECK(f.protocol == ProtocolKind::six_state);
}

TEST_CASE("distillation fraction of useless states") {
  CHECK(skf_six_state_ad({0.25, 0.25, 0.25, 0.25}).value == 0.0);
  CHECK(skf_six_state_ad({0.5, 0.0, 0.5, 0.0}).value == 0.0);
}

TEST_CASE("distillation agrees with the marginal-form re-derivation") {
  const BellCoefficients cases[] = {
      {1.0, 0.0, 0.0, 0.0},     {0.97, 0.01, 0.01, 0.01},
      {0.9, 0.04, 0.03, 0.03},  {0.8125, 0.0625, 0.0625, 0.0625},
      {0.7, 0.2, 0.05, 0.05},   {0.6, 0.15, 0.125, 0.125},
      {0.5, 0.3, 0.1, 0.1},     {0.85, 0.05, 0.08, 0.02},
      {0.25, 0.25, 0.25, 0.25},
  };
  for (const BellCoefficients& b : cases) {
    CHECK(skf_six_state_ad(b).value ==
          doctest::Approx(ad_by_marginals(b)).epsilon(1e-12));
  }
}

TEST_CASE("two-way postprocessing survives past the one-way threshold") {
  // Werner state at 12.5% marginal error: one-way BB84 gives nothing,
  // distillation still extracts key.
  const BellCoefficients werner{0.8125, 0.0625, 0.0625, 0.0625};
  const double e = werner.p10 + werner.p11;
  CHECK(skf_bb84(e, e).value == 0.0);
  CHECK(skf_six_state_ad(werner).value > 0.0);
}

TEST_CASE("fraction comparison keeps the better protocol, ties to one-way") {
  const ErrorRates clean{0.01, 0.01, 0.01};
  const SecretKeyFraction f = best_skf(clean, clean);
  // low error: one-way BB84 beats the 1/3-capped distillation rate
  CHECK(f.protocol == ProtocolKind::bb84);
  CHECK(f.value == doctest::Approx(skf_bb84(0.01, 0.01).value));

  const ErrorRates noisy{0.125, 0.125, 0.125};
  const SecretKeyFraction g = best_skf(noisy, noisy);
  CHECK(g.protocol == ProtocolKind::six_state);
  CHECK(g.value > 0.0);

  const ErrorRates dead{0.5, 0.5, 0.5};
  const SecretKeyFraction t = best_skf(dead, dead);
  CHECK(t.value == 0.0);
  CHECK(t.protocol == ProtocolKind::bb84);  // tie goes to BB84
}

TEST_CASE("fractions always land in [0, 1/3] for distillation") {
  for (double p00 : {0.3, 0.5, 0.7, 0.9, 1.0}) {
    const double rest = (1.0 - p00) / 3.0;
    const double v = skf_six_state_ad({p00, rest, rest, rest}).value;
    CHECK(v >= 0.0);
    CHECK(v <= 1.0 / 3.0 + 1e-15);
  }
}

TEST_CASE("invalid weight vectors are rejected") {
  CHECK_THROWS_AS(skf_six_state_ad({0.9, 0.2, 0.0, -0.1}), std::domain_error);
  CHECK_THROWS_AS(skf_six_state_ad({0.7, 0.1, 0.1, 0.0}), std::domain_error);
}

}  // TEST_SUITE
