/* Copyright 2026 the seqrep authors
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *     http://www.apache.org/licenses/LICENSE-2.0
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 */
#include "seqrep/optimizer.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <set>
#include <stdexcept>
#include <thread>

#include "seqrep/errors.hpp"
#include "seqrep/simulator.hpp"

namespace seqrep {

namespace {

struct ProtocolInputs {
  LinkClickModel link_A;
  LinkClickModel link_B;
  ErrorRates rates;
  SecretKeyFraction skf;
};

ProtocolInputs protocol_inputs(const ExperimentParams& p,
                               ProtocolKind protocol, Cutoff n_star) {
  ProtocolInputs in{make_link(p, Side::alice, protocol),
                    make_link(p, Side::bob, protocol),
                    {},
                    {}};
  in.rates = averaged_error_rates(p, in.link_A, in.link_B, n_star);
  if (protocol == ProtocolKind::bb84) {
    in.skf = skf_bb84(in.rates.e_Z, in.rates.e_X);
  } else {
    in.skf = skf_six_state_ad(bell_coefficients(in.rates.e_X, in.rates.e_Z));
  }
  return in;
}

RateResult assemble(const ProtocolInputs& in, Cutoff n_star,
                    const YieldBounds& bounds) {
  return RateResult{
      .R_lower = 0.5 * bounds.yield_lower * in.skf.value,
      .R_upper = 0.5 * bounds.yield_upper * in.skf.value,
      .n_star = n_star,
      .protocol = in.skf.protocol,
      .branch = in.skf.branch,
      .skf = in.skf.value,
      .e_X = in.rates.e_X,
      .e_Z = in.rates.e_Z,
      .uses_lower = bounds.lower,
      .uses_upper = bounds.upper,
  };
}

// No-cut-off rate from the exact expectation, which is symmetric in
// (p_A, p_B); usable on both sides of the midpoint, unlike the bounded
// finite-cut-off path.
RateResult rate_no_cutoff_any_order(const ExperimentParams& p,
                                    ProtocolKind protocol) {
  const ProtocolInputs in = protocol_inputs(p, protocol, Cutoff::none());
  const double uses =
      expected_uses_no_cutoff(in.link_A.p_click, in.link_B.p_click);
  const double y = p.p_bsm / uses;
  YieldBounds bounds{uses, uses, 0.0, YieldRegime::low_loss, y, y};
  return assemble(in, Cutoff::none(), bounds);
}

bool better(const RateResult& a, const RateResult& b) {
  // Strictly better on the optimistic rate, pessimistic as tiebreak.
  if (a.R_upper != b.R_upper) return a.R_upper > b.R_upper;
  return a.R_lower > b.R_lower;
}

}  // namespace

RateResult rate_at(const ExperimentParams& p, ProtocolKind protocol,
                   Cutoff n_star) {
  const ProtocolInputs in = protocol_inputs(p, protocol, n_star);
  const YieldBounds bounds =
      yield_bounds(in.link_A.p_click, in.link_B.p_click, n_star, p.p_bsm);
  return assemble(in, n_star, bounds);
}

RateResult best_rate_at(const ExperimentParams& p, Cutoff n_star) {
  std::optional<RateResult> best;
  std::optional<ValidityError> failure;
  for (ProtocolKind protocol :
       {ProtocolKind::bb84, ProtocolKind::six_state}) {
    try {
      RateResult r = rate_at(p, protocol, n_star);
      if (!best || better(r, *best)) best = r;
    } catch (const ValidityError& e) {
      failure = e;
    }
  }
  if (!best) throw *failure;
  return *best;
}

namespace {

std::vector<std::uint64_t> log_int_grid(std::uint64_t lo, std::uint64_t hi,
                                        std::size_t n) {
  std::vector<std::uint64_t> out;
  for (double v : logspace(static_cast<double>(std::max<std::uint64_t>(lo, 1)),
                           static_cast<double>(std::max(hi, lo)), n)) {
    const auto i = static_cast<std::uint64_t>(std::llround(v));
    if (out.empty() || out.back() != std::max<std::uint64_t>(i, 1))
      out.push_back(std::max<std::uint64_t>(i, 1));
  }
  return out;
}

}  // namespace

namespace {

std::optional<RateResult> optimize_cutoff_one(const ExperimentParams& p,
                                              ProtocolKind protocol) {
  std::optional<RateResult> best;
  std::set<std::uint64_t> tried;
  auto consider = [&](Cutoff c) {
    if (c.is_finite() && !tried.insert(c.attempts()).second) return;
    try {
      RateResult r = rate_at(p, protocol, c);
      if (!best || better(r, *best)) best = r;
    } catch (const ValidityError&) {
      // candidate outside the analytic regime; skip it
    }
  };

  consider(Cutoff::none());

  const double p_B = make_link(p, Side::bob, protocol).p_click;
  const auto hi =
      static_cast<std::uint64_t>(std::ceil(10.0 / std::max(p_B, 1e-15)));
  for (std::uint64_t n : log_int_grid(1, std::max<std::uint64_t>(hi, 10), 60))
    consider(Cutoff(n));

  // Tighten around the grid argmax: log-refine the bracket formed by the
  // neighbours of the incumbent until it is small enough to scan whole.
  for (int iter = 0; iter < 64; ++iter) {
    if (!best || !best->n_star.is_finite()) break;
    const std::uint64_t centre = best->n_star.attempts();
    auto it = tried.find(centre);
    const std::uint64_t lo = it == tried.begin() ? 1 : *std::prev(it);
    const std::uint64_t hi2 =
        std::next(it) == tried.end() ? centre * 2 + 1 : *std::next(it);
    if (hi2 - lo <= 40) {
      for (std::uint64_t n = lo; n <= hi2; ++n) consider(Cutoff(n));
      break;
    }
    for (std::uint64_t n : log_int_grid(lo, hi2, 17)) consider(Cutoff(n));
  }
  return best;
}

}  // namespace

RateResult optimize_cutoff(const ExperimentParams& p,
                           std::optional<ProtocolKind> protocol) {
  std::optional<RateResult> best;
  for (ProtocolKind candidate :
       {ProtocolKind::bb84, ProtocolKind::six_state}) {
    if (protocol && *protocol != candidate) continue;
    std::optional<RateResult> r = optimize_cutoff_one(p, candidate);
    // BB84 runs first, so six-state must win strictly.
    if (r && (!best || better(*r, *best))) best = r;
  }
  if (!best)
    throw ValidityError(
        "no cut-off admits the analytic rate here (repeater closer to "
        "Alice?); use the simulator instead");
  return *best;
}

BenchmarkReport benchmark_verdicts(const ExperimentParams& p,
                                   const RateResult& rate) {
  BenchmarkReport rep{all_benchmarks(p), {}};
  for (std::size_t i = 0; i < rep.values.size(); ++i)
    rep.surpassed[i] = rate.R_upper > rep.values[i].value;
  return rep;
}

// ---- sweeps ----

namespace {

// Runs f(i) for i in [0, n) across threads; f must handle its own errors.
template <typename F>
void parallel_for(std::size_t n, F&& f) {
  const unsigned hw = std::thread::hardware_concurrency();
  const unsigned n_threads =
      std::max(1u, std::min({hw, 16u, static_cast<unsigned>(n)}));
  if (n_threads <= 1) {
    for (std::size_t i = 0; i < n; ++i) f(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= n) return;
      f(i);
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(n_threads);
  for (unsigned t = 0; t < n_threads; ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
}

// Monte Carlo stand-in for optimize_cutoff where the analytic bounds do
// not hold (p_B < p_A): same candidate structure, yield from simulation,
// rate bracket widened by +-3 standard errors.
RateResult optimize_cutoff_mc(const ExperimentParams& p,
                              std::uint64_t samples, std::uint64_t seed) {
  std::optional<RateResult> best;
  std::uint64_t candidate_index = 0;

  auto consider = [&](Cutoff c) {
    for (ProtocolKind protocol :
         {ProtocolKind::bb84, ProtocolKind::six_state}) {
      const ProtocolInputs in = protocol_inputs(p, protocol, c);
      const std::uint64_t sub =
          substream_seed(seed, candidate_index * 2 +
                                   (protocol == ProtocolKind::bb84 ? 0 : 1));
      const SimSummary mc = estimate_uses(in.link_A.p_click,
                                          in.link_B.p_click, c, samples, sub);
      const double lo_uses = std::max(mc.mean_uses - 3 * mc.se_uses, 1.0);
      const double hi_uses = mc.mean_uses + 3 * mc.se_uses;
      YieldBounds bounds{lo_uses,
                         hi_uses,
                         hi_uses / lo_uses - 1.0,
                         YieldRegime::low_loss,
                         p.p_bsm / hi_uses,
                         p.p_bsm / lo_uses};
      RateResult r = assemble(in, c, bounds);
      r.simulated = true;
      if (!best || better(r, *best)) best = r;
    }
    ++candidate_index;
  };

  consider(Cutoff::none());
  const double p_B_min =
      std::min(make_link(p, Side::bob, ProtocolKind::bb84).p_click,
               make_link(p, Side::bob, ProtocolKind::six_state).p_click);
  const auto hi = static_cast<std::uint64_t>(
      std::ceil(10.0 / std::max(p_B_min, 1e-15)));
  for (std::uint64_t n : log_int_grid(1, std::max<std::uint64_t>(hi, 10), 24))
    consider(Cutoff(n));
  return *best;
}

bool analytic_placement_ok(const ExperimentParams& p) {
  // p_B >= p_A holds exactly when Bob's fibre is no longer than Alice's.
  return p.L_B() <= p.L_A;
}

}  // namespace

std::vector<PositionPoint> position_sweep(const ExperimentParams& p,
                                          std::span<const double> L_A_values,
                                          const SweepOptions& opt) {
  std::vector<PositionPoint> out(L_A_values.size());
  parallel_for(L_A_values.size(), [&](std::size_t i) {
    PositionPoint& pt = out[i];
    pt.L_A = L_A_values[i];
    ExperimentParams pc = p;
    pc.L_A = pt.L_A;
    try {
      if (!(pc.L_A >= 0) || pc.L_A > pc.L_total)
        throw std::domain_error("L_A must lie in [0, L_total]");
      pt.no_cutoff =
          [&] {
            RateResult a = rate_no_cutoff_any_order(pc, ProtocolKind::bb84);
            RateResult b =
                rate_no_cutoff_any_order(pc, ProtocolKind::six_state);
            return better(b, a) ? b : a;
          }();
      if (analytic_placement_ok(pc)) {
        pt.optimized = optimize_cutoff(pc);
      } else if (opt.mc_samples > 0) {
        pt.optimized = optimize_cutoff_mc(
            pc, opt.mc_samples, substream_seed(opt.seed, i));
      } else {
        pt.error =
            "p_B < p_A here; cut-off optimum needs the Monte Carlo fallback "
            "(set mc_samples)";
      }
    } catch (const std::exception& e) {
      pt.error = e.what();
    }
  });
  return out;
}

std::vector<DistancePoint> distance_sweep(const ExperimentParams& p,
                                          std::span<const double> L_totals,
                                          bool dark_counts_on) {
  const double ratio = p.L_total > 0 ? p.L_A / p.L_total : 0.5;
  std::vector<DistancePoint> out(L_totals.size());
  parallel_for(L_totals.size(), [&](std::size_t i) {
    DistancePoint& pt = out[i];
    pt.L_total = L_totals[i];
    ExperimentParams pc = p;
    pc.L_total = pt.L_total;
    pc.L_A = ratio * pt.L_total;
    if (!dark_counts_on) pc.dark_rate = 0;
    try {
      if (!(pc.L_total >= 0))
        throw std::domain_error("L_total must be >= 0");
      pt.result = optimize_cutoff(pc);
    } catch (const std::exception& e) {
      pt.error = e.what();
    }
  });
  return out;
}

std::vector<ContourPoint> contour_sweep(const ExperimentParams& p,
                                        const AxisSpec& x_axis,
                                        const AxisSpec& y_axis,
                                        double L_total) {
  for (const auto& axis : {x_axis, y_axis})
    if (!get_param(p, axis.field))
      throw ConfigError("unknown sweep parameter '" + axis.field + "'");
  if (!(L_total >= 0)) throw std::domain_error("L_total must be >= 0");

  ExperimentParams base = p;
  base.L_total = L_total;
  base.L_A = L_total / 2;
  const std::size_t nx = x_axis.values.size();
  std::vector<ContourPoint> out(nx * y_axis.values.size());
  parallel_for(out.size(), [&](std::size_t i) {
    ContourPoint& pt = out[i];
    pt.x = x_axis.values[i % nx];
    pt.y = y_axis.values[i / nx];
    ExperimentParams pc = base;
    set_param(pc, x_axis.field, pt.x);
    set_param(pc, y_axis.field, pt.y);
    if (x_axis.field != "L_A" && y_axis.field != "L_A")
      pc.L_A = pc.L_total / 2;
    try {
      if (ValidationReport rep = validate(pc); !rep.ok())
        throw std::domain_error(rep.to_string());
      pt.result = optimize_cutoff(pc);
      pt.surpassed = benchmark_verdicts(pc, *pt.result).surpassed;
    } catch (const std::exception& e) {
      pt.error = e.what();
    }
  });
  return out;
}

std::vector<double> linspace(double lo, double hi, std::size_t n) {
  std::vector<double> out;
  if (n == 0) return out;
  out.reserve(n);
  if (n == 1) {
    out.push_back(lo);
    return out;
  }
  const double step = (hi - lo) / static_cast<double>(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i)
    out.push_back(lo + step * static_cast<double>(i));
  out.push_back(hi);  // endpoint exact
  return out;
}

std::vector<double> logspace(double lo, double hi, std::size_t n) {
  if (!(lo > 0) || !(hi > 0))
    throw std::domain_error("logspace endpoints must be > 0");
  std::vector<double> out = linspace(std::log(lo), std::log(hi), n);
  for (double& v : out) v = std::exp(v);
  if (!out.empty()) {
    out.front() = lo;
    out.back() = hi;
  }
  return out;
}

}  // namespace seqrep
