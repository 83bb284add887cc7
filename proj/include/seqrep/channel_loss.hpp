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

enum class Side { alice, bob };

const char* side_name(Side s);

// Heralded-click model for one half-link (source at the repeater, detector
// station at Alice's or Bob's end).
struct LinkClickModel {
  Side side;
  ProtocolKind protocol;
  double eta;      // fibre transmissivity of this half-link
  double n_bar;    // expected dark counts per window, per detector
  double p_d;      // dark click probability per detector per window
  double p_click;  // probability the station registers a click
  double alpha;    // P(click came from the signal photon | click)
};

// exp(-L/L0).  Throws std::domain_error for L < 0 or L0 <= 0.
double fibre_transmissivity(double length_km, double attenuation_km);

struct DarkClick {
  double n_bar;  // dark_rate * t_int
  double p_d;    // 1 - exp(-n_bar)
};
DarkClick dark_click_probability(double dark_rate, double t_int);

// Click probability of a station with k = detector_count(protocol)
// detectors: 1 - (1 - p_app*p_ps*eta) * (1 - p_d)^k.
// Evaluated via expm1/log1p so the tiny-dark-count regime keeps full
// relative precision.
double click_probability(double eta, double p_app, double p_ps, double p_d,
                         ProtocolKind protocol);

// Probability that a click heralds the actual signal photon (squashing
// weight): p_app*p_ps*eta * (1 - p_d)^(k-1) / p_click.  Throws
// std::domain_error when p_click == 0 (the ratio is undefined).
double squashing_alpha(double eta, double p_app, double p_ps, double p_d,
                       ProtocolKind protocol);

LinkClickModel make_link(const ExperimentParams& p, Side side,
                         ProtocolKind protocol);

}  // namespace seqrep
