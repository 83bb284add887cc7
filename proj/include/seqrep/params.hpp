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
#include <filesystem>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace seqrep {

// Speed of light in vacuum, km/s.  Fibre signalling delay uses c / n_ri.
inline constexpr double kSpeedOfLightKmPerS = 299792.458;

// The two measurement schemes Alice and Bob can run.  BB84 is the active
// two-basis scheme (2 detectors per station), the six-state scheme is
// passive with a full three-basis analyser (6 detectors per station).
enum class ProtocolKind { bb84, six_state };

constexpr int detector_count(ProtocolKind p) {
  return p == ProtocolKind::bb84 ? 2 : 6;
}

const char* protocol_name(ProtocolKind p);  // "bb84" / "six_state"

// Memory cut-off: Bob's source is restarted after this many attempts in a
// round.  `none()` means no cut-off (Bob tries until success).
class Cutoff {
 public:
  constexpr explicit Cutoff(std::uint64_t attempts) : value_(attempts) {}
  static constexpr Cutoff none() { return Cutoff(kNone); }

  constexpr bool is_finite() const { return value_ != kNone; }
  // Finite attempt budget; call only when is_finite().
  constexpr std::uint64_t attempts() const { return value_; }
  constexpr double as_double() const {
    return is_finite() ? static_cast<double>(value_)
                       : std::numeric_limits<double>::infinity();
  }

  friend constexpr bool operator==(Cutoff a, Cutoff b) = default;

 private:
  static constexpr std::uint64_t kNone =
      std::numeric_limits<std::uint64_t>::max();
  std::uint64_t value_;
};

std::string to_string(Cutoff c);                 // "inf" or decimal
Cutoff parse_cutoff(std::string_view text);      // accepts "inf"/"none"/uint

// Full device / channel parameter set.  Defaults are the expected
// near-term NV-centre values used throughout the bundled configs.
//
// Units: lengths km, times s, rates 1/s; everything else dimensionless.
struct ExperimentParams {
  // Memory decoherence: effective dephasing/depolarising exponents per Bob
  // attempt are  a = a0 + a1*dt  and  b = b0 + b1*dt  where dt is the
  // duration of one attempt (round trip on Bob's fibre + state prep).
  double a0 = 1.0 / 2000.0;
  double a1 = 1.0 / 3.0;
  double b0 = 1.0 / 5000.0;
  double b1 = 1.0 / 3.0;
  double t_prep = 6e-6;  // state preparation time per attempt, s

  double F_gm = 0.9;    // combined gate + measurement dephasing fidelity
  double F_prep = 0.99;  // fidelity of each freshly prepared entangled pair

  double p_em = 0.49;           // photon emission probability
  double conversion_eff = 1.0;  // frequency-conversion efficiency on p_em
  double p_ps = 0.46;           // post-selection (filter) pass probability
  double p_det = 0.8;           // detector efficiency
  double p_bsm = 1.0;           // Bell-state measurement success probability

  double dark_rate = 10.0;  // detector dark count rate, 1/s
  double t_int = 30e-9;     // detection integration window, s

  double L0 = 0.542;   // fibre attenuation length, km
  double n_ri = 1.44;  // fibre refractive index

  double L_total = 5.42;  // Alice-to-Bob distance, km
  double L_A = 2.71;      // Alice-to-repeater distance, km

  // Overall source->detector efficiency excluding fibre and filter.
  double p_app() const { return p_em * conversion_eff * p_det; }
  double L_B() const { return L_total - L_A; }
  // Dark counts per integration window.
  double n_bar() const { return dark_rate * t_int; }
};

ExperimentParams default_expected_params();

struct ValidationIssue {
  enum class Severity { error, warning };
  Severity severity;
  std::string field;    // offending parameter name ("" for cross-field)
  std::string message;
};

struct ValidationReport {
  std::vector<ValidationIssue> issues;
  bool ok() const;            // no errors (warnings allowed)
  bool has_warnings() const;
  std::string to_string() const;
};

// Range-checks every field and flags repeater placements that the
// analytic yield bounds cannot handle (repeater closer to Alice).
ValidationReport validate(const ExperimentParams& p);

// ---- parameter registry (used by config files, --set and the sweeps) ----

struct ParamField {
  const char* name;
  double ExperimentParams::* member;
  const char* doc;
};

std::span<const ParamField> param_fields();

// Returns false if `key` names no parameter.
bool set_param(ExperimentParams& p, std::string_view key, double value);
std::optional<double> get_param(const ExperimentParams& p,
                                std::string_view key);

// ---- config I/O: "key = value" lines, '#' comments, blank lines ----

// Parsed assignments in file order.  Throws ConfigError with the line
// number on syntax errors or unknown keys.
std::vector<std::pair<std::string, double>> read_config_entries(
    const std::filesystem::path& file);

// Defaults + config file.  L_A is auto-set to L_total/2 unless assigned.
ExperimentParams load_config(const std::filesystem::path& file);

// Defaults, then the config file (optional), then overrides in order.
// Keeps L_A glued to L_total/2 until some entry assigns L_A explicitly.
ExperimentParams resolve_params(
    const std::optional<std::filesystem::path>& config,
    std::span<const std::pair<std::string, double>> overrides);

// Writes every field; load_config(save_config(p)) == p exactly.
void save_config(const ExperimentParams& p,
                 const std::filesystem::path& file);

// FNV-1a over the canonical full-precision dump; stable run-record id.
std::uint64_t config_hash(const ExperimentParams& p);

// Shortest round-trippable decimal ("%.17g"); used for configs and CSV.
std::string format_full(double v);

}  // namespace seqrep
