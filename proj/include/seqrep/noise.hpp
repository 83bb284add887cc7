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

#include <cstdint>

#include "seqrep/channel_loss.hpp"
#include "seqrep/params.hpp"

namespace seqrep {

// Memory decay exponents per Bob attempt.  One attempt lasts
// dt = 2 n_ri L_B / c + t_prep (photon round trip on Bob's fibre plus
// re-preparation), so a = a0 + a1 dt (dephasing), b = b0 + b1 dt
// (depolarisation).
struct DecayRates {
  double a;
  double b;
};
DecayRates decay_rates(const ExperimentParams& p);

// E[e^{-c N}] for N truncated-geometric(p_B) with restart cap n_star:
//
//   p_B e^{-c} (1 - (1-p_B)^{n*} e^{-c n*})
//   ----------------------------------------------
//   (1 - (1-p_B)^{n*}) (1 - (1-p_B) e^{-c})
//
// n_star = none() gives the untruncated limit p_B e^{-c} / (1-(1-p_B)e^{-c}).
// Pre: c >= 0, p_B in (0,1], finite n_star >= 1.  Stable for tiny c, tiny
// p_B, huge n_star (expm1/log1p forms throughout).
double truncated_geometric_mean_exp(double c, double p_B, Cutoff n_star);

// Average single-qubit error rates of the delivered pair, after squashing
// and averaging the memory decay over Bob's (truncated) waiting time.
struct ErrorRates {
  double e_X;
  double e_Y;  // equals e_X in this model
  double e_Z;
};
ErrorRates averaged_error_rates(const ExperimentParams& p,
                                const LinkClickModel& link_A,
                                const LinkClickModel& link_B, Cutoff n_star);

// Bell-diagonal coefficients of the two-qubit state, indexed p_{xz} with
// p00 the target weight.
struct BellCoefficients {
  double p00;
  double p01;
  double p10;
  double p11;
};

// Invert (e_X, e_Z) into Bell-diagonal weights:
//   p00 = 1 - e_Z/2 - e_XY,  p01 = e_XY - e_Z/2,  p10 = p11 = e_Z/2
// with e_XY := e_X = e_Y.  Throws std::domain_error when e_XY < e_Z/2
// (no Bell-diagonal state has those marginals).
BellCoefficients bell_coefficients(double e_XY, double e_Z);

// Everything needed to write the delivered state conditioned on Bob's
// final success taking exactly n attempts:
//   W(n) = F_gm * alpha_A * alpha_B * e^{-b n}
//   q(n) = (1 + (2 F_prep - 1)^2 e^{-a n}) / 2
//   p00 = W q + (1-W)/4,  p01 = W (1-q) + (1-W)/4,  p10 = p11 = (1-W)/4
struct FinalStateModel {
  double prefactor;  // F_gm * alpha_A * alpha_B
  double a;
  double b;
  double dephase;    // (2 F_prep - 1)^2

  BellCoefficients coefficients(std::uint64_t n) const;
};

FinalStateModel make_final_state_model(const ExperimentParams& p,
                                       const LinkClickModel& link_A,
                                       const LinkClickModel& link_B);

// coefficients(n) of the model above; the per-n counterpart of
// bell_coefficients(averaged_error_rates(...)).  Averaging these over the
// truncated geometric law of n reproduces the averaged coefficients
// exactly (the map is linear in the two decay exponentials).
BellCoefficients final_state_coefficients(const ExperimentParams& p,
                                          const LinkClickModel& link_A,
                                          const LinkClickModel& link_B,
                                          std::uint64_t n);

}  // namespace seqrep
