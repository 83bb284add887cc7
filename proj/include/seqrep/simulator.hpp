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
#include <optional>

#include "seqrep/noise.hpp"
#include "seqrep/params.hpp"

namespace seqrep {

// Counter-seeded SplitMix64.  Chosen over std::mt19937 because sampled
// results must be bit-identical across platforms and thread counts:
// every Monte Carlo sample gets its own substream derived from
// (seed, sample index), so the partition of samples over threads cannot
// change the stream any sample sees.
class SplitMix64 {
 public:
  explicit constexpr SplitMix64(std::uint64_t seed) : state_(seed) {}

  constexpr std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  // Uniform double strictly inside (0, 1).
  double next_unit() {
    return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53;
  }

 private:
  std::uint64_t state_;
};

// Decorrelated per-sample stream seed.
std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t index);

// Geometric(p) on {1, 2, ...} by inverse transform; p = 1 returns 1.
// Pre: p in (0, 1].
std::uint64_t sample_geometric(double p, SplitMix64& rng);

// One run of the repeater protocol: Alice's side retries until her link
// heralds; Bob restarts whenever a round exceeds the cut-off.  On joint
// success the channel-use cost is max of the two attempt totals.
struct SimOutcome {
  std::uint64_t uses;       // max(N_A, N_B)
  std::uint64_t rounds;     // restart rounds until Bob's herald
  std::uint64_t n_B_final;  // Bob's attempt count inside the last round
  bool x_error;             // outcome anticorrelated in the X basis
  bool z_error;             // outcome anticorrelated in the Z basis
};

// `state` may be null when only attempt counts are wanted.
SimOutcome simulate_raw_bit(double p_A, double p_B, Cutoff n_star,
                            const FinalStateModel* state, SplitMix64& rng);

struct SimSummary {
  std::uint64_t samples;
  std::uint64_t seed;
  double mean_uses;
  double se_uses;      // standard error of mean_uses
  double mean_rounds;
  double e_X;          // empirical X-basis error rate (NaN if not tracked)
  double se_e_X;
  double e_Z;
  double se_e_Z;
};

// Attempt-count statistics only, for arbitrary link probabilities
// (p_B < p_A allowed here; the simulator has no regime restriction).
// Throws std::domain_error on p outside (0,1], samples == 0, or samples
// beyond the resource cap (1e8).
SimSummary estimate_uses(double p_A, double p_B, Cutoff n_star,
                         std::uint64_t samples, std::uint64_t seed);

// Full run at the configured parameters: attempt counts plus empirical
// X/Z error rates sampled from the delivered state per run.
SimSummary estimate(const ExperimentParams& p, ProtocolKind protocol,
                    Cutoff n_star, std::uint64_t samples, std::uint64_t seed);

}  // namespace seqrep
