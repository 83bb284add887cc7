/* Copyright 2026 the seqrep authors
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *     http://www.apache.org/licenses/LICENSE-2.0
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 */
#include "seqrep/simulator.hpp"

#include <atomic>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <thread>
#include <vector>

namespace seqrep {

std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t index) {
  // One avalanche pass over (seed, index) so neighbouring sample indices
  // land on unrelated stream states.
  SplitMix64 mixer(seed ^ (0xd1b54a32d192ed03ull * (index + 1)));
  return mixer.next();
}

std::uint64_t sample_geometric(double p, SplitMix64& rng) {
  if (!(p > 0 && p <= 1))
    throw std::domain_error("geometric parameter must be in (0,1]");
  const double u = rng.next_unit();  // always consume one variate
  if (p == 1) return 1;
  const double g = std::ceil(std::log(u) / std::log1p(-p));
  return g < 1.0 ? 1 : static_cast<std::uint64_t>(g);
}

SimOutcome simulate_raw_bit(double p_A, double p_B, Cutoff n_star,
                            const FinalStateModel* state, SplitMix64& rng) {
  std::uint64_t n_A = 0, n_B = 0, rounds = 0, n_B_final = 0;
  for (;;) {
    ++rounds;
    n_A += sample_geometric(p_A, rng);
    const std::uint64_t g = sample_geometric(p_B, rng);
    if (n_star.is_finite() && g > n_star.attempts()) {
      n_B += n_star.attempts();  // round timed out; restart Bob's source
      continue;
    }
    n_B += g;
    n_B_final = g;
    break;
  }
  SimOutcome out{std::max(n_A, n_B), rounds, n_B_final, false, false};
  if (state) {
    const BellCoefficients c = state->coefficients(n_B_final);
    const double u = rng.next_unit();
    // Sample the Bell index (x, z): x != 0 flips the standard-basis
    // parity (Z error), z != 0 flips the X-basis parity (X error).
    if (u < c.p00) {
    } else if (u < c.p00 + c.p01) {
      out.x_error = true;
    } else if (u < c.p00 + c.p01 + c.p10) {
      out.z_error = true;
    } else {
      out.x_error = out.z_error = true;
    }
  }
  return out;
}

namespace {

constexpr std::uint64_t kShards = 256;
constexpr std::uint64_t kMaxSamples = 100'000'000;

struct ShardAccum {
  unsigned __int128 uses = 0;
  unsigned __int128 uses_sq = 0;
  std::uint64_t rounds = 0;
  std::uint64_t x_err = 0;
  std::uint64_t z_err = 0;
};

SimSummary run_mc(double p_A, double p_B, Cutoff n_star,
                  const FinalStateModel* state, std::uint64_t samples,
                  std::uint64_t seed) {
  if (!(p_A > 0 && p_A <= 1) || !(p_B > 0 && p_B <= 1))
    throw std::domain_error("link probabilities must lie in (0,1]");
  if (samples == 0) throw std::domain_error("need at least one sample");
  if (samples > kMaxSamples)
    throw std::domain_error("sample budget exceeds the 1e8 resource cap");

  // Fixed shard layout + per-sample substreams: every sample i draws from
  // SplitMix64(substream_seed(seed, i)) no matter which thread runs it,
  // and shards merge in index order with integer accumulators, so the
  // result is bit-identical for any thread count.
  std::vector<ShardAccum> acc(kShards);
  std::atomic<std::uint64_t> next_shard{0};
  auto worker = [&] {
    for (;;) {
      const std::uint64_t s = next_shard.fetch_add(1);
      if (s >= kShards) return;
      const std::uint64_t begin = samples * s / kShards;
      const std::uint64_t end = samples * (s + 1) / kShards;
      ShardAccum a;
      for (std::uint64_t i = begin; i < end; ++i) {
        SplitMix64 rng(substream_seed(seed, i));
        const SimOutcome o = simulate_raw_bit(p_A, p_B, n_star, state, rng);
        a.uses += o.uses;
        a.uses_sq += static_cast<unsigned __int128>(o.uses) * o.uses;
        a.rounds += o.rounds;
        a.x_err += o.x_error;
        a.z_err += o.z_error;
      }
      acc[s] = a;
    }
  };

  const unsigned hw = std::thread::hardware_concurrency();
  const unsigned n_threads = std::max(1u, std::min(hw, 16u));
  if (n_threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(n_threads);
    for (unsigned t = 0; t < n_threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  ShardAccum total;
  for (const auto& a : acc) {
    total.uses += a.uses;
    total.uses_sq += a.uses_sq;
    total.rounds += a.rounds;
    total.x_err += a.x_err;
    total.z_err += a.z_err;
  }

  const double n = static_cast<double>(samples);
  const double mean = static_cast<double>(total.uses) / n;
  double se = 0.0;
  if (samples > 1) {
    const double var =
        (static_cast<double>(total.uses_sq) - n * mean * mean) / (n - 1.0);
    se = std::sqrt(std::max(var, 0.0) / n);
  }
  const double nan = std::numeric_limits<double>::quiet_NaN();
  SimSummary sum{samples,
                 seed,
                 mean,
                 se,
                 static_cast<double>(total.rounds) / n,
                 nan,
                 nan,
                 nan,
                 nan};
  if (state) {
    auto rate = [n](std::uint64_t k) { return static_cast<double>(k) / n; };
    auto binom_se = [n](double p) { return std::sqrt(p * (1 - p) / n); };
    sum.e_X = rate(total.x_err);
    sum.se_e_X = binom_se(sum.e_X);
    sum.e_Z = rate(total.z_err);
    sum.se_e_Z = binom_se(sum.e_Z);
  }
  return sum;
}

}  // namespace

SimSummary estimate_uses(double p_A, double p_B, Cutoff n_star,
                         std::uint64_t samples, std::uint64_t seed) {
  return run_mc(p_A, p_B, n_star, nullptr, samples, seed);
}

SimSummary estimate(const ExperimentParams& p, ProtocolKind protocol,
                    Cutoff n_star, std::uint64_t samples, std::uint64_t seed) {
  const LinkClickModel link_A = make_link(p, Side::alice, protocol);
  const LinkClickModel link_B = make_link(p, Side::bob, protocol);
  const FinalStateModel state = make_final_state_model(p, link_A, link_B);
  return run_mc(link_A.p_click, link_B.p_click, n_star, &state, samples, seed);
}

}  // namespace seqrep
