/* Copyright 2026 the seqrep authors
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *     http://www.apache.org/licenses/LICENSE-2.0
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 */
#include <doctest.h>

#include <cmath>
#include <complex>
#include <vector>

#include "seqrep/noise.hpp"
#include "seqrep/simulator.hpp"

using namespace seqrep;

namespace {

// ---- dense complex matrices, just enough for a 16x16 state oracle ----

using cx = std::complex<double>;

struct Mat {
  int n;
  std::vector<cx> a;
  explicit Mat(int dim) : n(dim), a(dim * dim) {}
  cx& at(int r, int c) { return a[r * n + c]; }
  const cx& at(int r, int c) const { return a[r * n + c]; }
};

Mat eye(int n) {
  Mat m(n);
  for (int i = 0; i < n; ++i) m.at(i, i) = 1.0;
  return m;
}

Mat mul(const Mat& x, const Mat& y) {
  Mat r(x.n);
  for (int i = 0; i < x.n; ++i)
    for (int k = 0; k < x.n; ++k) {
      const cx v = x.at(i, k);
      if (v == cx{}) continue;
      for (int j = 0; j < x.n; ++j) r.at(i, j) += v * y.at(k, j);
    }
  return r;
}

Mat dagger(const Mat& x) {
  Mat r(x.n);
  for (int i = 0; i < x.n; ++i)
    for (int j = 0; j < x.n; ++j) r.at(i, j) = std::conj(x.at(j, i));
  return r;
}

Mat kron(const Mat& x, const Mat& y) {
  Mat r(x.n * y.n);
  for (int i = 0; i < x.n; ++i)
    for (int j = 0; j < x.n; ++j)
      for (int k = 0; k < y.n; ++k)
        for (int l = 0; l < y.n; ++l)
          r.at(i * y.n + k, j * y.n + l) = x.at(i, j) * y.at(k, l);
  return r;
}

Mat add_scaled(const Mat& x, const Mat& y, double wx, double wy) {
  Mat r(x.n);
  for (std::size_t i = 0; i < x.a.size(); ++i)
    r.a[i] = wx * x.a[i] + wy * y.a[i];
  return r;
}

Mat pauli(char which) {
  Mat m(2);
  switch (which) {
    case 'I': m.at(0, 0) = m.at(1, 1) = 1; break;
    case 'X': m.at(0, 1) = m.at(1, 0) = 1; break;
    case 'Y': m.at(0, 1) = cx(0, -1); m.at(1, 0) = cx(0, 1); break;
    case 'Z': m.at(0, 0) = 1; m.at(1, 1) = -1; break;
  }
  return m;
}

// |beta_xz> = (X^x Z^z (x) I) |Phi+> as a 4-vector.
std::vector<cx> bell_vec(int x, int z) {
  std::vector<cx> v(4);
  // sum_m (-1)^{z m} |m^x, m>
  for (int m = 0; m < 2; ++m)
    v[((m ^ x) << 1) | m] = (z && m ? -1.0 : 1.0) / std::sqrt(2.0);
  return v;
}

Mat projector(const std::vector<cx>& v) {
  Mat m(static_cast<int>(v.size()));
  for (int i = 0; i < m.n; ++i)
    for (int j = 0; j < m.n; ++j) m.at(i, j) = v[i] * std::conj(v[j]);
  return m;
}

// Apply a single-qubit Kraus family on the low (second) qubit of a 4x4
// two-qubit state.
Mat apply_on_low(const Mat& rho, const std::vector<std::pair<double, Mat>>& ks) {
  Mat out(4);
  for (const auto& [w, k] : ks) {
    const Mat op = kron(eye(2), k);
    const Mat t = mul(mul(op, rho), dagger(op));
    out = add_scaled(out, t, 1.0, w);
  }
  return out;
}

// Trace out the two middle qubits of a 4-qubit state (bit order
// qA qR1 qR2 qB, qA most significant), leaving (A, B).
Mat ptrace_mid(const Mat& rho) {
  Mat r(4);
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      for (int a2 = 0; a2 < 2; ++a2)
        for (int b2 = 0; b2 < 2; ++b2) {
          cx sum{};
          for (int r1 = 0; r1 < 2; ++r1)
            for (int r2 = 0; r2 < 2; ++r2)
              sum += rho.at(a * 8 + r1 * 4 + r2 * 2 + b,
                            a2 * 8 + r1 * 4 + r2 * 2 + b2);
          r.at(a * 2 + b, a2 * 2 + b2) = sum;
        }
  return r;
}

// Replace one qubit of a two-qubit state with the maximally mixed state
// with probability 1 - keep (squashing of multi-click events).
Mat mix_qubit(const Mat& rho, bool high_qubit, double keep) {
  // tr over the chosen qubit, then kron back with I/2 in its slot
  Mat reduced(2);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      cx sum{};
      for (int q = 0; q < 2; ++q)
        sum += high_qubit ? rho.at(q * 2 + i, q * 2 + j)
                          : rho.at(i * 2 + q, j * 2 + q);
      reduced.at(i, j) = sum;
    }
  Mat half = eye(2);
  half.at(0, 0) = half.at(1, 1) = 0.5;
  const Mat mixed =
      high_qubit ? kron(half, reduced) : kron(reduced, half);
  return add_scaled(rho, mixed, keep, 1.0 - keep);
}

// Full density-matrix pipeline for the delivered pair conditioned on Bob
// needing exactly n attempts: two dephased source pairs, memory noise on
// the stored half, entanglement swap with gate/measurement depolarizing,
// squashing on both photons.  Everything is built from explicit Kraus
// operators and Bell projectors, sharing no code with the closed forms.
BellCoefficients density_matrix_coefficients(const ExperimentParams& p,
                                             const LinkClickModel& la,
                                             const LinkClickModel& lb,
                                             std::uint64_t n) {
  const DecayRates d = decay_rates(p);
  // source pairs: F_prep on Phi+, remainder on Phi-
  const Mat phi_plus = projector(bell_vec(0, 0));
  const Mat phi_minus = projector(bell_vec(0, 1));
  const Mat fresh = add_scaled(phi_plus, phi_minus, p.F_prep, 1.0 - p.F_prep);

  // memory noise on the stored half (low qubit of the (A, R1) pair):
  // dephasing shrinks X/Y by e^{-an}, depolarizing shrinks X/Y/Z by e^{-bn}
  const double lam_a = std::exp(-d.a * static_cast<double>(n));
  const double eps = 1.0 - std::exp(-d.b * static_cast<double>(n));
  std::vector<std::pair<double, Mat>> dephase = {
      {(1.0 + lam_a) / 2.0, pauli('I')}, {(1.0 - lam_a) / 2.0, pauli('Z')}};
  std::vector<std::pair<double, Mat>> depol = {{1.0 - 3.0 * eps / 4.0,
                                                pauli('I')},
                                               {eps / 4.0, pauli('X')},
                                               {eps / 4.0, pauli('Y')},
                                               {eps / 4.0, pauli('Z')}};
  Mat pair_a = apply_on_low(fresh, dephase);
  pair_a = apply_on_low(pair_a, depol);

  // joint state (A, R1, R2, B) and the Bell measurement on (R1, R2)
  const Mat joint = kron(pair_a, fresh);
  Mat swapped(4);
  for (int x = 0; x < 2; ++x)
    for (int z = 0; z < 2; ++z) {
      const Mat proj16 = kron(kron(eye(2), projector(bell_vec(x, z))), eye(2));
      const Mat post = ptrace_mid(mul(mul(proj16, joint), proj16));
      // outcome beta_xz imprints X^x Z^z; undo it on Bob's qubit
      Mat corr = eye(2);
      if (x) corr = mul(pauli('X'), corr);
      if (z) corr = mul(corr, pauli('Z'));
      const Mat op = kron(eye(2), corr);
      swapped = add_scaled(swapped, mul(mul(op, post), dagger(op)), 1.0, 1.0);
    }

  // gate + measurement errors depolarize the delivered pair
  Mat mixed4(4);
  for (int i = 0; i < 4; ++i) mixed4.at(i, i) = 0.25;
  Mat rho = add_scaled(swapped, mixed4, p.F_gm, 1.0 - p.F_gm);

  // squashing: each photon's outcome is genuine only with weight alpha
  rho = mix_qubit(rho, true, la.alpha);
  rho = mix_qubit(rho, false, lb.alpha);

  BellCoefficients out{};
  const auto expect = [&](int x, int z) {
    const std::vector<cx> v = bell_vec(x, z);
    cx s{};
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) s += std::conj(v[i]) * rho.at(i, j) * v[j];
    return s.real();
  };
  out.p00 = expect(0, 0);
  out.p01 = expect(0, 1);
  out.p10 = expect(1, 0);
  out.p11 = expect(1, 1);
  return out;
}

double direct_truncated_mean(double c, double p_B, std::uint64_t n_star) {
  double num = 0.0, den = 0.0;
  for (std::uint64_t n = 1; n <= n_star; ++n) {
    const double w = p_B * std::pow(1.0 - p_B, static_cast<double>(n - 1));
    num += w * std::exp(-c * static_cast<double>(n));
    den += w;
  }
  return num / den;
}

}  // namespace

TEST_SUITE("noise") {

TEST_CASE("decay exponents from the attempt duration") {
  const ExperimentParams p = default_expected_params();
  const DecayRates d = decay_rates(p);
  const double dt = 2.0 * 1.44 * 2.71 / 299792.458 + 6e-6;
  CHECK(d.a == doctest::Approx(1.0 / 2000.0 + dt / 3.0).epsilon(1e-15));
  CHECK(d.b == doctest::Approx(1.0 / 5000.0 + dt / 3.0).epsilon(1e-15));
  CHECK(d.a > d.b);  // the a0 offset dominates the b0 offset
}

TEST_CASE("truncated mean matches direct summation") {
  SplitMix64 rng(20260815);
  for (int i = 0; i < 60; ++i) {
    const double c = rng.next_unit() * 0.01;
    const double p_B = 1e-4 + rng.next_unit() * 0.4;
    const std::uint64_t n_star = 1 + rng.next() % 5000;
    const double got = truncated_geometric_mean_exp(c, p_B, Cutoff(n_star));
    const double want = direct_truncated_mean(c, p_B, n_star);
    CHECK(got == doctest::Approx(want).epsilon(1e-12));
  }
}

TEST_CASE("truncated mean edge values") {
  CHECK(truncated_geometric_mean_exp(0.0, 0.3, Cutoff(17)) == 1.0);
  CHECK(truncated_geometric_mean_exp(0.5, 1.0, Cutoff(17)) ==
        doctest::Approx(std::exp(-0.5)).epsilon(1e-15));
  CHECK(truncated_geometric_mean_exp(0.5, 0.3, Cutoff(1)) ==
        doctest::Approx(std::exp(-0.5)).epsilon(1e-14));
  // no cut-off: geometric sum to convergence
  const double inf_got =
      truncated_geometric_mean_exp(1e-3, 0.01, Cutoff::none());
  const double inf_want = direct_truncated_mean(1e-3, 0.01, 20000000);
  CHECK(inf_got == doctest::Approx(inf_want).epsilon(1e-12));
  CHECK_THROWS_AS(truncated_geometric_mean_exp(-0.1, 0.3, Cutoff(5)),
                  std::domain_error);
  CHECK_THROWS_AS(truncated_geometric_mean_exp(0.1, 0.0, Cutoff(5)),
                  std::domain_error);
}

TEST_CASE("bell weights from the two error rates") {
  const BellCoefficients b = bell_coefficients(0.1, 0.05);
  CHECK(b.p00 == doctest::Approx(0.875).epsilon(1e-15));
  CHECK(b.p01 == doctest::Approx(0.075).epsilon(1e-15));
  CHECK(b.p10 == doctest::Approx(0.025).epsilon(1e-15));
  CHECK(b.p11 == doctest::Approx(0.025).epsilon(1e-15));
  CHECK(b.p00 + b.p01 + b.p10 + b.p11 == doctest::Approx(1.0).epsilon(1e-15));
  // marginals invert back
  CHECK(b.p10 + b.p11 == doctest::Approx(0.05).epsilon(1e-15));
  CHECK(b.p01 + b.p11 == doctest::Approx(0.1).epsilon(1e-15));
  CHECK_THROWS_AS(bell_coefficients(0.01, 0.2), std::domain_error);
}

TEST_CASE("per-attempt coefficients match the density-matrix pipeline") {
  ExperimentParams p = default_expected_params();
  for (ProtocolKind prot : {ProtocolKind::bb84, ProtocolKind::six_state}) {
    const LinkClickModel la = make_link(p, Side::alice, prot);
    const LinkClickModel lb = make_link(p, Side::bob, prot);
    const FinalStateModel m = make_final_state_model(p, la, lb);
    CHECK(m.prefactor ==
          doctest::Approx(p.F_gm * la.alpha * lb.alpha).epsilon(1e-14));
    for (std::uint64_t n : {1ull, 57ull, 2000ull}) {
      const BellCoefficients got = final_state_coefficients(p, la, lb, n);
      const BellCoefficients want = density_matrix_coefficients(p, la, lb, n);
      CHECK(got.p00 == doctest::Approx(want.p00).epsilon(1e-12));
      CHECK(got.p01 == doctest::Approx(want.p01).epsilon(1e-12));
      CHECK(got.p10 == doctest::Approx(want.p10).epsilon(1e-12));
      CHECK(got.p11 == doctest::Approx(want.p11).epsilon(1e-12));
    }
  }
}

TEST_CASE("perfect hardware delivers the target state") {
  ExperimentParams p = default_expected_params();
  p.a0 = p.a1 = p.b0 = p.b1 = 0.0;
  p.t_prep = 0.0;
  p.F_gm = p.F_prep = 1.0;
  p.dark_rate = 0.0;
  p.L_total = 0.0;
  p.L_A = 0.0;
  const LinkClickModel la = make_link(p, Side::alice, ProtocolKind::bb84);
  const LinkClickModel lb = make_link(p, Side::bob, ProtocolKind::bb84);
  const BellCoefficients b = final_state_coefficients(p, la, lb, 12);
  CHECK(b.p00 == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(b.p01 == doctest::Approx(0.0).epsilon(1e-14));
}

TEST_CASE("averaged rates equal the attempt-weighted per-attempt state") {
  ExperimentParams p = default_expected_params();
  p.L_total = 8.0;
  p.L_A = 4.0;
  for (ProtocolKind prot : {ProtocolKind::bb84, ProtocolKind::six_state}) {
    const LinkClickModel la = make_link(p, Side::alice, prot);
    const LinkClickModel lb = make_link(p, Side::bob, prot);
    const std::uint64_t n_star = 400;
    const ErrorRates rates = averaged_error_rates(p, la, lb, Cutoff(n_star));
    CHECK(rates.e_X == rates.e_Y);

    // weight the per-attempt coefficients by the truncated geometric law
    double p00 = 0, p01 = 0, p10 = 0, p11 = 0, norm = 0;
    for (std::uint64_t n = 1; n <= n_star; ++n) {
      const double w =
          lb.p_click * std::pow(1.0 - lb.p_click, static_cast<double>(n - 1));
      const BellCoefficients b = final_state_coefficients(p, la, lb, n);
      p00 += w * b.p00;
      p01 += w * b.p01;
      p10 += w * b.p10;
      p11 += w * b.p11;
      norm += w;
    }
    const BellCoefficients avg = bell_coefficients(rates.e_X, rates.e_Z);
    CHECK(avg.p00 == doctest::Approx(p00 / norm).epsilon(1e-12));
    CHECK(avg.p01 == doctest::Approx(p01 / norm).epsilon(1e-12));
    CHECK(avg.p10 == doctest::Approx(p10 / norm).epsilon(1e-12));
    CHECK(avg.p11 == doctest::Approx(p11 / norm).epsilon(1e-12));
  }
}

TEST_CASE("waiting longer can only degrade the state") {
  const ExperimentParams p = default_expected_params();
  const LinkClickModel la = make_link(p, Side::alice, ProtocolKind::bb84);
  const LinkClickModel lb = make_link(p, Side::bob, ProtocolKind::bb84);
  double last = 2.0;
  for (std::uint64_t n : {1ull, 10ull, 100ull, 1000ull, 10000ull}) {
    const BellCoefficients b = final_state_coefficients(p, la, lb, n);
    CHECK(b.p00 < last);
    last = b.p00;
  }
  // and the averaged error rates grow with the cut-off
  const ErrorRates tight = averaged_error_rates(p, la, lb, Cutoff(100));
  const ErrorRates loose = averaged_error_rates(p, la, lb, Cutoff(10000));
  CHECK(tight.e_X < loose.e_X);
  CHECK(tight.e_Z < loose.e_Z);
}

TEST_CASE("per-attempt weights need a positive attempt index") {
  const ExperimentParams p = default_expected_params();
  const LinkClickModel la = make_link(p, Side::alice, ProtocolKind::bb84);
  const LinkClickModel lb = make_link(p, Side::bob, ProtocolKind::bb84);
  CHECK_THROWS_AS(final_state_coefficients(p, la, lb, 0), std::domain_error);
}

}  // TEST_SUITE
