/* Copyright 2026 the seqrep authors
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *     http://www.apache.org/licenses/LICENSE-2.0
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 */
#include "seqrep/yield.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "seqrep/errors.hpp"

namespace seqrep {

const char* regime_name(YieldRegime r) {
  return r == YieldRegime::high_loss ? "high_loss" : "low_loss";
}

namespace {

void check_probs(double p_A, double p_B, double p_bsm) {
  if (!(p_A > 0 && p_A <= 1) || !(p_B > 0 && p_B <= 1))
    throw std::domain_error("link probabilities must lie in (0,1]");
  if (!(p_bsm > 0 && p_bsm <= 1))
    throw std::domain_error("p_bsm must lie in (0,1]");
}

}  // namespace

double expected_uses_no_cutoff(double p_A, double p_B) {
  check_probs(p_A, p_B, 1.0);
  return 1.0 / p_A + 1.0 / p_B - 1.0 / (p_A + p_B - p_A * p_B);
}

YieldBounds yield_bounds(double p_A, double p_B, Cutoff n_star, double p_bsm) {
  check_probs(p_A, p_B, p_bsm);
  if (p_B < p_A)
    throw ValidityError(
        "analytic yield bounds need p_B >= p_A (repeater at the midpoint or "
        "displaced toward Bob)");

  const double n_nc = expected_uses_no_cutoff(p_A, p_B);
  auto finish = [p_bsm](double lower, double err, YieldRegime regime) {
    const double upper = (1.0 + err) * lower;
    return YieldBounds{lower,          upper, err,
                       regime,         p_bsm / upper, p_bsm / lower};
  };

  if (!n_star.is_finite()) return finish(n_nc, 0.0, YieldRegime::low_loss);

  const double n = static_cast<double>(n_star.attempts());
  const double log_qn = n * std::log1p(-p_B);
  const double qn = std::exp(log_qn);      // P(Bob's round times out)
  const double p_r = -std::expm1(log_qn);  // P(round succeeds)

  if (p_A * n < 1.0) {
    // High loss: Alice dominates the wait; bracket around E[N_A].
    if (n_star.attempts() < 2)
      throw ValidityError(
          "high-loss yield bound needs a cut-off of at least 2 attempts");
    const double lower = 1.0 / (p_A * p_r);
    // Chernoff term f(t0) = p_A n ((n(1-p_A))/(n-1))^(n-1), in log space
    // so n ~ 1e9 does not overflow the power.
    const double log_f =
        std::log(p_A * n) +
        (n - 1.0) * (std::log1p(1.0 / (n - 1.0)) + std::log1p(-p_A));
    const double f = std::exp(log_f);
    const double denom = 1.0 - qn * f;
    if (!(denom > 0))
      throw ValidityError("high-loss error bound degenerate (f(t0) too large)");
    const double err = p_r * p_r * p_A * n * f / (denom * denom);
    return finish(lower, err, YieldRegime::high_loss);
  }

  // Low loss: restarts are rare; bracket around the no-cut-off value.
  const double mu = 1.0 / p_A;
  double err = qn * (((n + mu) / n_nc) * ((2.0 - qn) / p_r) - 1.0);
  err = std::max(err, 0.0);
  return finish(n_nc, err, YieldRegime::low_loss);
}

double approx_expected_uses(double p_A, double p_B, Cutoff n_star) {
  return yield_bounds(p_A, p_B, n_star, 1.0).lower;
}

}  // namespace seqrep
