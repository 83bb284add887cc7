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

#include <array>
#include <optional>

#include "seqrep/params.hpp"

namespace seqrep {

// Repeaterless baselines the repeater rate is compared against.  The
// digit picks which part of the apparatus is treated as the lossy
// channel, the letter the kind of bound:
//   1: bare fibre            (eta = eta_f)
//   2: fibre + filter        (eta = eta_f * p_ps)
//   3: fibre + filter + apparatus (eta = eta_f * p_ps * p_app)
//   a: unconstrained capacity   b: energy-constrained bound
//   c: thermal-loss bound (dark counts as thermal noise)
//   d: direct-transmission rate of this hardware without the repeater
enum class BenchmarkLabel { b1a, b1b, b2a, b2b, b3c, b3d };

const char* label_name(BenchmarkLabel l);  // "1a" ... "3d"

struct BenchmarkValue {
  BenchmarkLabel label;
  double eta;    // transmissivity the bound was evaluated at
  double value;  // bits per channel use (may be +inf for eta = 1)
};

// g(x) = (x+1) log2(x+1) - x log2 x, g(0) = 0 (entropy of a thermal
// state with mean photon number x).
double bosonic_g(double x);

// Two-way assisted secret-key capacity of the pure-loss channel,
// -log2(1 - eta); +inf at eta = 1.
double pure_loss_capacity(double eta);

// Energy-constrained pure-loss bound for mean input energy P:
// g((1+eta) P / 2) - g((1-eta) P / 2).
double finite_energy_bound(double eta, double P);

// Thermal-loss upper bound with environment mean photon number n_bar:
// -log2((1-eta) eta^n_bar) - g(n_bar) when n_bar < eta/(1-eta), else 0.
double thermal_loss_bound(double eta, double n_bar);

// Transmissivity / source-energy bookkeeping for channel cases 1..3.
double benchmark_eta(const ExperimentParams& p, int channel_case);
double mean_photon_for_case(const ExperimentParams& p, int channel_case);

// Source energy P above which the energy-constrained bound exceeds
// 1/ln 2 bits per photon in the small-eta limit, i.e. the root of
// P log2((P+2)/P) = 1/ln 2.  Bisection on [0.5, 0.9].
double finite_energy_crossover();

// Secret-key rate of the same hardware used point-to-point: source at
// Alice, one fibre pass, no memory, rate = p_click/2 * skf(protocol).
double direct_transmission_rate(const ExperimentParams& p,
                                ProtocolKind protocol);

// All six baselines at the configured distance; 3d takes the better of
// the two protocols.
std::array<BenchmarkValue, 6> all_benchmarks(const ExperimentParams& p);

}  // namespace seqrep
