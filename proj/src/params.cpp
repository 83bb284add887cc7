/* Copyright 2026 the seqrep authors
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *     http://www.apache.org/licenses/LICENSE-2.0
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 */
#include "seqrep/params.hpp"

#include <array>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "seqrep/errors.hpp"

namespace seqrep {

const char* protocol_name(ProtocolKind p) {
  return p == ProtocolKind::bb84 ? "bb84" : "six_state";
}

std::string to_string(Cutoff c) {
  return c.is_finite() ? std::to_string(c.attempts()) : std::string("inf");
}

Cutoff parse_cutoff(std::string_view text) {
  if (text == "inf" || text == "none" || text == "infinite")
    return Cutoff::none();
  std::uint64_t v = 0;
  for (char ch : text) {
    if (!std::isdigit(static_cast<unsigned char>(ch)))
      throw ConfigError("cut-off must be a positive integer or 'inf', got '" +
                        std::string(text) + "'");
    v = v * 10 + static_cast<std::uint64_t>(ch - '0');
  }
  if (text.empty() || v == 0)
    throw ConfigError("cut-off must be >= 1 or 'inf'");
  return Cutoff(v);
}

ExperimentParams default_expected_params() { return ExperimentParams{}; }

bool ValidationReport::ok() const {
  for (const auto& i : issues)
    if (i.severity == ValidationIssue::Severity::error) return false;
  return true;
}

bool ValidationReport::has_warnings() const {
  for (const auto& i : issues)
    if (i.severity == ValidationIssue::Severity::warning) return true;
  return false;
}

std::string ValidationReport::to_string() const {
  std::ostringstream os;
  for (const auto& i : issues) {
    os << (i.severity == ValidationIssue::Severity::error ? "error" : "warning");
    if (!i.field.empty()) os << " [" << i.field << "]";
    os << ": " << i.message << "\n";
  }
  return os.str();
}

namespace {

void check(ValidationReport& r, bool ok, const char* field,
           const std::string& msg) {
  if (!ok)
    r.issues.push_back(
        {ValidationIssue::Severity::error, field, msg});
}

}  // namespace

ValidationReport validate(const ExperimentParams& p) {
  ValidationReport r;
  auto finite = [](double v) { return std::isfinite(v); };

  check(r, finite(p.a0) && p.a0 >= 0, "a0", "must be finite and >= 0");
  check(r, finite(p.a1) && p.a1 >= 0, "a1", "must be finite and >= 0");
  check(r, finite(p.b0) && p.b0 >= 0, "b0", "must be finite and >= 0");
  check(r, finite(p.b1) && p.b1 >= 0, "b1", "must be finite and >= 0");
  check(r, finite(p.t_prep) && p.t_prep >= 0, "t_prep",
        "must be finite and >= 0");
  check(r, finite(p.F_gm) && p.F_gm >= 0 && p.F_gm <= 1, "F_gm",
        "must lie in [0, 1]");
  check(r, finite(p.F_prep) && p.F_prep >= 0 && p.F_prep <= 1, "F_prep",
        "must lie in [0, 1]");
  check(r, finite(p.p_em) && p.p_em >= 0 && p.p_em <= 1, "p_em",
        "must lie in [0, 1]");
  check(r, finite(p.conversion_eff) && p.conversion_eff > 0 &&
           p.conversion_eff <= 1,
        "conversion_eff", "must lie in (0, 1]");
  check(r, finite(p.p_ps) && p.p_ps >= 0 && p.p_ps <= 1, "p_ps",
        "must lie in [0, 1]");
  check(r, finite(p.p_det) && p.p_det >= 0 && p.p_det <= 1, "p_det",
        "must lie in [0, 1]");
  check(r, finite(p.p_bsm) && p.p_bsm > 0 && p.p_bsm <= 1, "p_bsm",
        "must lie in (0, 1]");
  check(r, finite(p.dark_rate) && p.dark_rate >= 0, "dark_rate",
        "must be finite and >= 0");
  check(r, finite(p.t_int) && p.t_int >= 0, "t_int",
        "must be finite and >= 0");
  check(r, finite(p.L0) && p.L0 > 0, "L0", "must be finite and > 0");
  check(r, finite(p.n_ri) && p.n_ri >= 1, "n_ri", "must be >= 1");
  check(r, finite(p.L_total) && p.L_total >= 0, "L_total",
        "must be finite and >= 0");
  check(r, finite(p.L_A) && p.L_A >= 0, "L_A", "must be finite and >= 0");
  if (finite(p.L_A) && finite(p.L_total))
    check(r, p.L_A <= p.L_total, "L_A", "must not exceed L_total");

  // Placement the closed-form yield bounds cannot handle: Bob's link
  // longer (lossier) than Alice's.
  if (r.ok() && p.L_A < p.L_total / 2) {
    r.issues.push_back(
        {ValidationIssue::Severity::warning, "L_A",
         "repeater is closer to Alice (L_A < L_total/2), so p_B < p_A and "
         "the analytic yield bounds do not apply; rate evaluation will "
         "refuse or fall back to simulation"});
  }
  return r;
}

namespace {

constexpr std::array<ParamField, 18> kFields{{
    {"a0", &ExperimentParams::a0, "dephasing exponent offset per attempt"},
    {"a1", &ExperimentParams::a1, "dephasing exponent rate, 1/s"},
    {"b0", &ExperimentParams::b0, "depolarising exponent offset per attempt"},
    {"b1", &ExperimentParams::b1, "depolarising exponent rate, 1/s"},
    {"t_prep", &ExperimentParams::t_prep, "pair preparation time, s"},
    {"F_gm", &ExperimentParams::F_gm, "gate+measurement fidelity"},
    {"F_prep", &ExperimentParams::F_prep, "prepared pair fidelity"},
    {"p_em", &ExperimentParams::p_em, "photon emission probability"},
    {"conversion_eff", &ExperimentParams::conversion_eff,
     "frequency conversion efficiency"},
    {"p_ps", &ExperimentParams::p_ps, "post-selection pass probability"},
    {"p_det", &ExperimentParams::p_det, "detector efficiency"},
    {"p_bsm", &ExperimentParams::p_bsm, "Bell measurement success prob."},
    {"dark_rate", &ExperimentParams::dark_rate, "dark counts per second"},
    {"t_int", &ExperimentParams::t_int, "integration window, s"},
    {"L0", &ExperimentParams::L0, "fibre attenuation length, km"},
    {"n_ri", &ExperimentParams::n_ri, "fibre refractive index"},
    {"L_total", &ExperimentParams::L_total, "Alice-Bob distance, km"},
    {"L_A", &ExperimentParams::L_A, "Alice-repeater distance, km"},
}};

}  // namespace

std::span<const ParamField> param_fields() { return kFields; }

bool set_param(ExperimentParams& p, std::string_view key, double value) {
  for (const auto& f : kFields)
    if (key == f.name) {
      p.*(f.member) = value;
      return true;
    }
  return false;
}

std::optional<double> get_param(const ExperimentParams& p,
                                std::string_view key) {
  for (const auto& f : kFields)
    if (key == f.name) return p.*(f.member);
  return std::nullopt;
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
    s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
    s.remove_suffix(1);
  return s;
}

double parse_value(std::string_view text, const std::string& where) {
  std::string buf(text);
  char* end = nullptr;
  double v = std::strtod(buf.c_str(), &end);
  if (end == buf.c_str() || *end != '\0')
    throw ConfigError(where + ": cannot parse value '" + buf + "'");
  if (!std::isfinite(v))
    throw ConfigError(where + ": value must be finite, got '" + buf + "'");
  return v;
}

}  // namespace

std::vector<std::pair<std::string, double>> read_config_entries(
    const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw ConfigError("cannot open config file: " + file.string());

  std::vector<std::pair<std::string, double>> entries;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string where = file.string() + ":" + std::to_string(lineno);
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::string_view body = trim(line);
    if (body.empty()) continue;
    auto eq = body.find('=');
    if (eq == std::string_view::npos)
      throw ConfigError(where + ": expected 'key = value'");
    std::string key(trim(body.substr(0, eq)));
    if (!get_param(ExperimentParams{}, key))
      throw ConfigError(where + ": unknown parameter '" + key + "'");
    entries.emplace_back(key, parse_value(trim(body.substr(eq + 1)), where));
  }
  return entries;
}

ExperimentParams resolve_params(
    const std::optional<std::filesystem::path>& config,
    std::span<const std::pair<std::string, double>> overrides) {
  ExperimentParams p = default_expected_params();
  bool la_explicit = false;
  auto apply = [&](const std::string& key, double value,
                   const std::string& origin) {
    if (!set_param(p, key, value))
      throw ConfigError(origin + ": unknown parameter '" + key + "'");
    if (key == "L_A") la_explicit = true;
  };
  if (config)
    for (const auto& [k, v] : read_config_entries(*config))
      apply(k, v, config->string());
  for (const auto& [k, v] : overrides) apply(k, v, "--set");
  if (!la_explicit) p.L_A = p.L_total / 2;
  return p;
}

ExperimentParams load_config(const std::filesystem::path& file) {
  return resolve_params(file, {});
}

std::string format_full(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void save_config(const ExperimentParams& p,
                 const std::filesystem::path& file) {
  std::ofstream out(file);
  if (!out) throw ConfigError("cannot write config file: " + file.string());
  out << "# seqrep parameter set\n";
  for (const auto& f : kFields)
    out << f.name << " = " << format_full(p.*(f.member)) << "  # " << f.doc
        << "\n";
  if (!out) throw ConfigError("write failed: " + file.string());
}

std::uint64_t config_hash(const ExperimentParams& p) {
  std::uint64_t h = 1469598103934665603ull;  // FNV-1a offset basis
  auto feed = [&h](std::string_view s) {
    for (char c : s) {
      h ^= static_cast<unsigned char>(c);
      h *= 1099511628211ull;
    }
  };
  for (const auto& f : kFields) {
    feed(f.name);
    feed("=");
    feed(format_full(p.*(f.member)));
    feed("\n");
  }
  return h;
}

}  // namespace seqrep
