/* Copyright 2026 the seqrep authors
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *     http://www.apache.org/licenses/LICENSE-2.0
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 */
#include "seqrep/skf.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace seqrep {

const char* branch_name(SkfBranch b) {
  switch (b) {
    case SkfBranch::one_way: return "one_way";
    case SkfBranch::ad_branch_1: return "ad_branch_1";
    default: return "ad_branch_2";
  }
}

double binary_entropy(double p) {
  if (!(p >= 0 && p <= 1))
    throw std::domain_error("binary entropy argument must be in [0,1]");
  if (p == 0 || p == 1) return 0.0;
  return -p * std::log2(p) - (1 - p) * std::log2(1 - p);
}

namespace {

double plogp(double p) { return p > 0 ? p * std::log2(p) : 0.0; }

double shannon4(double a, double b, double c, double d) {
  return -(plogp(a) + plogp(b) + plogp(c) + plogp(d));
}

}  // namespace

SecretKeyFraction skf_bb84(double e_Z, double e_X) {
  const double r = 1.0 - binary_entropy(e_Z) - binary_entropy(e_X);
  return {std::max(0.0, r), ProtocolKind::bb84, SkfBranch::one_way};
}

SecretKeyFraction skf_six_state_ad(const BellCoefficients& bell) {
  double p[4] = {bell.p00, bell.p01, bell.p10, bell.p11};
  double sum = 0;
  for (double& v : p) {
    if (v < -1e-12)
      throw std::domain_error("Bell coefficients must be non-negative");
    v = std::max(v, 0.0);
    sum += v;
  }
  if (std::abs(sum - 1.0) > 1e-9)
    throw std::domain_error("Bell coefficients must sum to 1");

  const double s0 = p[0] + p[1];  // weight without an X flip
  const double s1 = p[2] + p[3];  // weight with an X flip

  // Two-way distillation on blocks of two, keeping blocks whose X parities
  // agree.  Branch 1 is the one-way rate after the parity announcement,
  // branch 2 keeps only the agreeing half and distils it directly.
  double branch1 = 1.0 - shannon4(p[0], p[1], p[2], p[3]);
  if (s0 > 0 && s1 > 0)
    branch1 += s0 * s1 * binary_entropy((p[0] * p[2] + p[1] * p[3]) / (s0 * s1));

  double branch2 = 0.0;
  const double keep = s0 * s0 + s1 * s1;  // P(parities agree)
  if (keep > 0) {
    const double q00 = (p[0] * p[0] + p[1] * p[1]) / keep;
    const double q01 = 2 * p[0] * p[1] / keep;
    const double q10 = (p[2] * p[2] + p[3] * p[3]) / keep;
    const double q11 = 2 * p[2] * p[3] / keep;
    branch2 = 0.5 * keep * (1.0 - shannon4(q00, q01, q10, q11));
  }

  const SkfBranch branch =
      branch1 >= branch2 ? SkfBranch::ad_branch_1 : SkfBranch::ad_branch_2;
  const double r = std::max(0.0, std::max(branch1, branch2)) / 3.0;
  return {r, ProtocolKind::six_state, branch};
}

SecretKeyFraction best_skf(const ErrorRates& rates_bb84,
                           const ErrorRates& rates_six_state) {
  const SecretKeyFraction bb = skf_bb84(rates_bb84.e_Z, rates_bb84.e_X);
  const SecretKeyFraction six = skf_six_state_ad(
      bell_coefficients(rates_six_state.e_X, rates_six_state.e_Z));
  return bb.value >= six.value ? bb : six;
}

}  // namespace seqrep
