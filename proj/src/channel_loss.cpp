/* Copyright 2026 the seqrep authors
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *     http://www.apache.org/licenses/LICENSE-2.0
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 */
#include "seqrep/channel_loss.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace seqrep {

const char* side_name(Side s) { return s == Side::alice ? "alice" : "bob"; }

double fibre_transmissivity(double length_km, double attenuation_km) {
  if (!(attenuation_km > 0))
    throw std::domain_error("attenuation length must be > 0");
  if (!(length_km >= 0)) throw std::domain_error("fibre length must be >= 0");
  return std::exp(-length_km / attenuation_km);
}

DarkClick dark_click_probability(double dark_rate, double t_int) {
  if (!(dark_rate >= 0) || !(t_int >= 0))
    throw std::domain_error("dark rate and window must be >= 0");
  double n_bar = dark_rate * t_int;
  return {n_bar, -std::expm1(-n_bar)};
}

namespace {

void check_click_args(double eta, double p_app, double p_ps, double p_d) {
  if (!(eta >= 0 && eta <= 1)) throw std::domain_error("eta must be in [0,1]");
  if (!(p_app >= 0 && p_app <= 1))
    throw std::domain_error("p_app must be in [0,1]");
  if (!(p_ps >= 0 && p_ps <= 1))
    throw std::domain_error("p_ps must be in [0,1]");
  if (!(p_d >= 0 && p_d < 1)) throw std::domain_error("p_d must be in [0,1)");
}

}  // namespace

double click_probability(double eta, double p_app, double p_ps, double p_d,
                         ProtocolKind protocol) {
  check_click_args(eta, p_app, p_ps, p_d);
  const double s = p_app * p_ps * eta;
  const double k = detector_count(protocol);
  // 1 - (1-s)(1-p_d)^k = -expm1(k log1p(-p_d)) + s exp(k log1p(-p_d)),
  // which stays fully accurate when both s and p_d are ~1e-7.
  const double log_no_dark = k * std::log1p(-p_d);
  return -std::expm1(log_no_dark) + s * std::exp(log_no_dark);
}

double squashing_alpha(double eta, double p_app, double p_ps, double p_d,
                       ProtocolKind protocol) {
  check_click_args(eta, p_app, p_ps, p_d);
  const double s = p_app * p_ps * eta;
  const double p_click = click_probability(eta, p_app, p_ps, p_d, protocol);
  if (p_click <= 0)
    throw std::domain_error(
        "squashing weight undefined: click probability is zero");
  const double k = detector_count(protocol);
  return s * std::exp((k - 1) * std::log1p(-p_d)) / p_click;
}

LinkClickModel make_link(const ExperimentParams& p, Side side,
                         ProtocolKind protocol) {
  const double length = side == Side::alice ? p.L_A : p.L_B();
  if (!(length >= 0))
    throw std::domain_error(std::string("negative fibre length on ") +
                            side_name(side) + " link");
  const double eta = fibre_transmissivity(length, p.L0);
  const DarkClick dark = dark_click_probability(p.dark_rate, p.t_int);
  return LinkClickModel{
      .side = side,
      .protocol = protocol,
      .eta = eta,
      .n_bar = dark.n_bar,
      .p_d = dark.p_d,
      .p_click = click_probability(eta, p.p_app(), p.p_ps, dark.p_d, protocol),
      .alpha = squashing_alpha(eta, p.p_app(), p.p_ps, dark.p_d, protocol),
  };
}

}  // namespace seqrep
