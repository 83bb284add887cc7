/* Copyright 2026 the seqrep authors
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *     http://www.apache.org/licenses/LICENSE-2.0
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 */
#pragma once

#include "seqrep/params.hpp"

namespace seqrep {

// Expected channel uses per delivered raw bit, max(N_A, N_B), where N_A is
// Alice's total attempt count and N_B Bob's across all restart rounds.
// Closed-form bounds exist when p_B >= p_A; the regimes split on whether
// Alice is expected to outlast one of Bob's rounds.
enum class YieldRegime { high_loss, low_loss };

const char* regime_name(YieldRegime r);

struct YieldBounds {
  double lower;          // <= E[max(N_A, N_B)]
  double upper;          // >= E[max(N_A, N_B)]; upper = (1 + err_term) * lower
  double err_term;       // relative gap between the bounds
  YieldRegime regime;
  double yield_lower;    // p_bsm / upper
  double yield_upper;    // p_bsm / lower
};

// No-cut-off expectation, exact:
//   E[max(N_A, N_B)] = 1/p_A + 1/p_B - 1/(p_A + p_B - p_A p_B).
// Valid for any p_A, p_B in (0, 1] (symmetric in its arguments).
double expected_uses_no_cutoff(double p_A, double p_B);

// Two-sided bounds on E[max(N_A, N_B)] with restart cap n_star.
//
// Regime split: high loss when p_A * n_star < 1, low loss otherwise
// (n_star = none() is always low loss and collapses to the exact
// no-cut-off expectation with err_term = 0).
//
// Throws ValidityError when p_B < p_A (bounds only derived for the
// repeater at the midpoint or displaced toward Bob) and when the
// high-loss branch is requested with n_star < 2 (its error term needs
// n_star >= 2).  Throws std::domain_error for probabilities outside
// (0, 1] or p_bsm outside (0, 1].
YieldBounds yield_bounds(double p_A, double p_B, Cutoff n_star, double p_bsm);

// The lower bound alone, i.e. the tight approximation used for quick
// scans: the high-loss E[N_A] when 1/p_A > n_star, else the no-cut-off
// expectation.  Same preconditions and errors as yield_bounds.
double approx_expected_uses(double p_A, double p_B, Cutoff n_star);

}  // namespace seqrep
