/* Copyright 2026 the seqrep authors
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *     http://www.apache.org/licenses/LICENSE-2.0
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 */
#include "seqrep/noise.hpp"

#include <cmath>
#include <stdexcept>

namespace seqrep {

DecayRates decay_rates(const ExperimentParams& p) {
  // One attempt = photon round trip to Bob's station + fresh preparation.
  const double dt = 2.0 * p.n_ri * p.L_B() / kSpeedOfLightKmPerS + p.t_prep;
  return {p.a0 + p.a1 * dt, p.b0 + p.b1 * dt};
}

double truncated_geometric_mean_exp(double c, double p_B, Cutoff n_star) {
  if (!(c >= 0)) throw std::domain_error("decay exponent must be >= 0");
  if (!(p_B > 0 && p_B <= 1))
    throw std::domain_error("success probability must be in (0,1]");
  if (n_star.is_finite() && n_star.attempts() < 1)
    throw std::domain_error("cut-off must be >= 1");
  if (c == 0) return 1.0;
  if (p_B == 1) return std::exp(-c);

  // With t = log(1-p_B):  E[e^{-cN}] =
  //   p_B e^{-c} (1 - e^{n*(t-c)}) / [(1 - e^{n* t})(1 - e^{t-c})].
  // expm1 keeps every factor accurate when p_B, c ~ 1e-9 and n* ~ 1e9.
  const double t = std::log1p(-p_B);
  const double den2 = -std::expm1(t - c);
  if (!n_star.is_finite()) return p_B * std::exp(-c) / den2;
  const double n = static_cast<double>(n_star.attempts());
  const double num = -std::expm1(n * (t - c));
  const double den1 = -std::expm1(n * t);
  return p_B * std::exp(-c) * num / (den1 * den2);
}

ErrorRates averaged_error_rates(const ExperimentParams& p,
                                const LinkClickModel& link_A,
                                const LinkClickModel& link_B, Cutoff n_star) {
  const auto [a, b] = decay_rates(p);
  const double K = p.F_gm * link_A.alpha * link_B.alpha;
  const double d = 2.0 * p.F_prep - 1.0;
  const double mean_ab =
      truncated_geometric_mean_exp(a + b, link_B.p_click, n_star);
  const double mean_b = truncated_geometric_mean_exp(b, link_B.p_click, n_star);
  const double e_XY = 0.5 - 0.5 * K * d * d * mean_ab;
  const double e_Z = 0.5 - 0.5 * K * mean_b;
  return {e_XY, e_XY, e_Z};
}

BellCoefficients bell_coefficients(double e_XY, double e_Z) {
  if (!(e_XY >= 0 && e_XY <= 1) || !(e_Z >= 0 && e_Z <= 1))
    throw std::domain_error("error rates must lie in [0,1]");
  double p01 = e_XY - e_Z / 2;
  if (p01 < 0) {
    // A Bell-diagonal state needs e_XY >= e_Z/2; tolerate rounding only.
    if (p01 < -1e-12)
      throw std::domain_error(
          "inconsistent error rates: e_XY < e_Z/2 admits no Bell-diagonal "
          "state");
    p01 = 0;
  }
  const double p00 = 1.0 - e_Z / 2 - e_XY;
  if (p00 < 0)
    throw std::domain_error("inconsistent error rates: weights exceed 1");
  return {p00, p01, e_Z / 2, e_Z / 2};
}

BellCoefficients FinalStateModel::coefficients(std::uint64_t n) const {
  const double nd = static_cast<double>(n);
  const double W = prefactor * std::exp(-b * nd);
  const double q = 0.5 * (1.0 + dephase * std::exp(-a * nd));
  const double rest = 0.25 * (1.0 - W);
  return {W * q + rest, W * (1.0 - q) + rest, rest, rest};
}

FinalStateModel make_final_state_model(const ExperimentParams& p,
                                       const LinkClickModel& link_A,
                                       const LinkClickModel& link_B) {
  const auto [a, b] = decay_rates(p);
  const double d = 2.0 * p.F_prep - 1.0;
  return {p.F_gm * link_A.alpha * link_B.alpha, a, b, d * d};
}

BellCoefficients final_state_coefficients(const ExperimentParams& p,
                                          const LinkClickModel& link_A,
                                          const LinkClickModel& link_B,
                                          std::uint64_t n) {
  if (n < 1) throw std::domain_error("attempt count must be >= 1");
  return make_final_state_model(p, link_A, link_B).coefficients(n);
}

}  // namespace seqrep
