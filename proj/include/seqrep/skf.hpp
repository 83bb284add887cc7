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

#include "seqrep/noise.hpp"
#include "seqrep/params.hpp"

namespace seqrep {

// Which formula produced the key fraction.  The six-state advantage-
// distillation rate is an inner max of two branches.
enum class SkfBranch { one_way, ad_branch_1, ad_branch_2 };

const char* branch_name(SkfBranch b);

struct SecretKeyFraction {
  double value;  // in [0, 1]
  ProtocolKind protocol;
  SkfBranch branch;
};

// -p log2 p - (1-p) log2 (1-p), with h(0) = h(1) = 0.
double binary_entropy(double p);

// One-way BB84: max(0, 1 - h(e_Z) - h(e_X)).
SecretKeyFraction skf_bb84(double e_Z, double e_X);

// Six-state with two-way advantage distillation on blocks of two.
// Inputs are the Bell-diagonal weights of the delivered pair.
SecretKeyFraction skf_six_state_ad(const BellCoefficients& bell);

// Evaluates both protocols, each on its own error rates (the detector
// counts differ, so the rates do too), and keeps the larger fraction
// (BB84 wins ties).
SecretKeyFraction best_skf(const ErrorRates& rates_bb84,
                           const ErrorRates& rates_six_state);

}  // namespace seqrep
