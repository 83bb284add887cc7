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
#include <span>
#include <string>
#include <vector>

#include "seqrep/benchmarks.hpp"
#include "seqrep/skf.hpp"
#include "seqrep/yield.hpp"

namespace seqrep {

// Secret-key rate R = yield/2 * key fraction, bracketed by the yield
// bounds: R_lower uses the pessimistic yield, R_upper the optimistic one.
struct RateResult {
  double R_lower;
  double R_upper;
  Cutoff n_star;
  ProtocolKind protocol;
  SkfBranch branch;
  double skf;          // key fraction of the winning protocol
  double e_X;
  double e_Z;
  double uses_lower;   // bracket on E[max(N_A, N_B)]
  double uses_upper;
  bool simulated = false;  // true when the yield came from Monte Carlo
};

// Rate of one protocol at a fixed cut-off.  Throws ValidityError when the
// analytic yield bounds do not apply (p_B < p_A, or n_star too small for
// the high-loss error term).
RateResult rate_at(const ExperimentParams& p, ProtocolKind protocol,
                   Cutoff n_star);

// Better of the two protocols at this cut-off (compared on R_upper;
// BB84 kept on ties).
RateResult best_rate_at(const ExperimentParams& p, Cutoff n_star);

// Deterministic cut-off search: the no-cut-off candidate, a ~60-point
// log grid up to 10/p_B, then log-bracket refinement around the grid
// argmax finished by an exhaustive scan of the final bracket.
// Candidates the analytic model refuses are skipped.  Searches over both
// protocols unless one is pinned.
RateResult optimize_cutoff(const ExperimentParams& p,
                           std::optional<ProtocolKind> protocol = {});

// R_upper > benchmark value, per benchmark, at these parameters.
struct BenchmarkReport {
  std::array<BenchmarkValue, 6> values;
  std::array<bool, 6> surpassed;
};
BenchmarkReport benchmark_verdicts(const ExperimentParams& p,
                                   const RateResult& rate);

// ---- sweeps (point-parallel, deterministic output order) ----

struct SweepOptions {
  // When > 0, placements outside the analytic regime (p_B < p_A) fall
  // back to Monte Carlo yield estimates with this many samples; when 0
  // such points carry an error string instead.
  std::uint64_t mc_samples = 0;
  std::uint64_t seed = 1;
};

struct PositionPoint {
  double L_A;
  std::optional<RateResult> optimized;  // cut-off optimized
  std::optional<RateResult> no_cutoff;
  std::string error;  // nonempty when a result is missing
};
std::vector<PositionPoint> position_sweep(const ExperimentParams& p,
                                          std::span<const double> L_A_values,
                                          const SweepOptions& opt = {});

struct DistancePoint {
  double L_total;
  std::optional<RateResult> result;
  std::string error;
};
// Cut-off-optimized rate per total distance; the repeater keeps the base
// configuration's L_A : L_total ratio.  dark_counts_on = false zeroes the
// dark count rate for the whole evaluation (benchmarks included).
std::vector<DistancePoint> distance_sweep(const ExperimentParams& p,
                                          std::span<const double> L_totals,
                                          bool dark_counts_on = true);

struct AxisSpec {
  std::string field;           // parameter name from param_fields()
  std::vector<double> values;
};

struct ContourPoint {
  double x;
  double y;
  std::optional<RateResult> result;
  std::array<bool, 6> surpassed{};
  std::string error;
};
// Cut-off-optimized rate and benchmark verdicts over a parameter grid
// (row-major: y outer, x inner) at a fixed total distance, repeater at
// the midpoint.
std::vector<ContourPoint> contour_sweep(const ExperimentParams& p,
                                        const AxisSpec& x_axis,
                                        const AxisSpec& y_axis,
                                        double L_total);

// Inclusive grids for sweep construction.
std::vector<double> linspace(double lo, double hi, std::size_t n);
std::vector<double> logspace(double lo, double hi, std::size_t n);

}  // namespace seqrep
