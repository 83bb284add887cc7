/* Copyright 2026 the seqrep authors
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *     http://www.apache.org/licenses/LICENSE-2.0
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 */
#include "seqrep/golden.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include "seqrep/benchmarks.hpp"
#include "seqrep/channel_loss.hpp"
#include "seqrep/cli.hpp"
#include "seqrep/errors.hpp"
#include "seqrep/noise.hpp"
#include "seqrep/optimizer.hpp"
#include "seqrep/params.hpp"
#include "seqrep/simulator.hpp"
#include "seqrep/skf.hpp"
#include "seqrep/yield.hpp"

namespace seqrep {
namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

// Comments start at a '#' that begins the line or follows whitespace.
std::string strip_comment(const std::string& line) {
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '#' && (i == 0 || line[i - 1] == ' ' || line[i - 1] == '\t'))
      return line.substr(0, i);
  }
  return line;
}

[[noreturn]] void fail_at(const std::filesystem::path& file, int line,
                          const std::string& what) {
  std::ostringstream os;
  os << file.string() << ":" << line << ": " << what;
  throw std::runtime_error(os.str());
}

double parse_number(const std::string& text, const std::filesystem::path& file,
                    int line) {
  const char* s = text.c_str();
  char* end = nullptr;
  const double v = std::strtod(s, &end);
  while (end != s && (*end == ' ' || *end == '\t')) ++end;
  if (end == s || *end != '\0')
    fail_at(file, line, "not a number: '" + text + "'");
  return v;
}

std::vector<std::string> split_ws(const std::string& s) {
  std::istringstream is(s);
  std::vector<std::string> out;
  std::string tok;
  while (is >> tok) out.push_back(tok);
  return out;
}

void finish_case(GoldenCase& c, std::vector<GoldenCase>& out) {
  if (c.op.empty()) fail_at(c.file, c.line, "case '" + c.id + "' has no op");
  if (c.source != "stated" && c.source != "arithmetic" && c.source != "oracle")
    fail_at(c.file, c.line,
            "case '" + c.id + "': source must be stated|arithmetic|oracle");
  if (c.source == "oracle" && c.oracle.empty())
    fail_at(c.file, c.line,
            "case '" + c.id + "': source=oracle needs an oracle= pointer");
  if (c.argv.empty() && c.expects.empty())
    fail_at(c.file, c.line, "case '" + c.id + "' expects nothing");
  out.push_back(std::move(c));
}

ExperimentParams named_config(const std::string& name) {
  ExperimentParams p = default_expected_params();
  if (name.empty() || name == "expected") return p;
  if (name == "improved") {
    p.p_ps = 0.6;
    p.p_em = 0.6;
    p.F_gm = 0.97;
    return p;
  }
  if (name == "telecom") {
    p.L0 = 22.0;
    p.conversion_eff = 0.3;
    return p;
  }
  if (name == "ideal") {
    p.a0 = p.a1 = p.b0 = p.b1 = 0.0;
    p.t_prep = 0.0;
    p.F_gm = p.F_prep = 1.0;
    p.p_em = p.p_ps = p.p_det = p.p_bsm = p.conversion_eff = 1.0;
    p.dark_rate = 0.0;
    return p;
  }
  throw std::runtime_error("unknown named config '" + name + "'");
}

using Out = std::map<std::string, double>;

const std::string& arg_str(const GoldenCase& c, const std::string& name) {
  const auto it = c.args.find(name);
  if (it == c.args.end())
    throw std::runtime_error("case '" + c.id + "' misses arg '" + name + "'");
  return it->second;
}

double arg_num(const GoldenCase& c, const std::string& name) {
  return parse_number(arg_str(c, name), c.file, c.line);
}

double arg_num_or(const GoldenCase& c, const std::string& name, double dflt) {
  return c.args.count(name) ? arg_num(c, name) : dflt;
}

std::uint64_t arg_u64(const GoldenCase& c, const std::string& name,
                      std::uint64_t dflt) {
  if (!c.args.count(name)) return dflt;
  return static_cast<std::uint64_t>(std::llround(arg_num(c, name)));
}

Cutoff arg_cutoff(const GoldenCase& c, const std::string& name = "n_star") {
  return parse_cutoff(arg_str(c, name));
}

ProtocolKind to_protocol(const std::string& text) {
  if (text == "bb84") return ProtocolKind::bb84;
  if (text == "six_state") return ProtocolKind::six_state;
  throw std::runtime_error("unknown protocol '" + text + "'");
}

ProtocolKind arg_protocol(const GoldenCase& c) {
  return to_protocol(arg_str(c, "protocol"));
}

double branch_code(SkfBranch b) {
  switch (b) {
    case SkfBranch::one_way: return 0;
    case SkfBranch::ad_branch_1: return 1;
    case SkfBranch::ad_branch_2: return 2;
  }
  return -1;
}

void put_rate(Out& o, const RateResult& r) {
  o["R_lower"] = r.R_lower;
  o["R_upper"] = r.R_upper;
  o["n_star"] = r.n_star.as_double();
  o["protocol"] = r.protocol == ProtocolKind::bb84 ? 0 : 1;
  o["branch"] = branch_code(r.branch);
  o["skf"] = r.skf;
  o["e_X"] = r.e_X;
  o["e_Z"] = r.e_Z;
  o["uses_lower"] = r.uses_lower;
  o["uses_upper"] = r.uses_upper;
}

Out evaluate_op(const GoldenCase& c, const ExperimentParams& p) {
  const std::string& op = c.op;
  Out o;

  if (op == "default_expected_params") {
    const ExperimentParams d = default_expected_params();
    for (const auto& f : param_fields()) o[f.name] = *get_param(d, f.name);
    return o;
  }
  if (op == "validate") {
    const ValidationReport r = validate(p);
    std::size_t errors = 0, warnings = 0;
    for (const auto& i : r.issues)
      (i.severity == ValidationIssue::Severity::error ? errors : warnings)++;
    o["ok"] = r.ok() ? 1 : 0;
    o["n_errors"] = static_cast<double>(errors);
    o["n_warnings"] = static_cast<double>(warnings);
    return o;
  }
  if (op == "fibre_transmissivity") {
    o["value"] = fibre_transmissivity(arg_num(c, "length"),
                                      arg_num_or(c, "attenuation", p.L0));
    return o;
  }
  if (op == "dark_click_probability") {
    const DarkClick d = dark_click_probability(
        arg_num_or(c, "dark_rate", p.dark_rate),
        arg_num_or(c, "t_int", p.t_int));
    o["n_bar"] = d.n_bar;
    o["p_d"] = d.p_d;
    return o;
  }
  if (op == "click_probability" || op == "squashing_alpha") {
    const double eta = arg_num(c, "eta");
    const double p_app = arg_num_or(c, "p_app", p.p_app());
    const double p_ps = arg_num_or(c, "p_ps", p.p_ps);
    const double p_d = arg_num_or(c, "p_d", dark_click_probability(
                                                p.dark_rate, p.t_int).p_d);
    const ProtocolKind prot = arg_protocol(c);
    o["value"] = op == "click_probability"
                     ? click_probability(eta, p_app, p_ps, p_d, prot)
                     : squashing_alpha(eta, p_app, p_ps, p_d, prot);
    return o;
  }
  if (op == "decay_rates") {
    const DecayRates d = decay_rates(p);
    o["a"] = d.a;
    o["b"] = d.b;
    return o;
  }
  if (op == "truncated_geometric_mean_exp") {
    o["value"] = truncated_geometric_mean_exp(arg_num(c, "c"),
                                              arg_num(c, "p_B"),
                                              arg_cutoff(c));
    return o;
  }
  if (op == "averaged_error_rates") {
    const ProtocolKind prot = arg_protocol(c);
    const LinkClickModel la = make_link(p, Side::alice, prot);
    const LinkClickModel lb = make_link(p, Side::bob, prot);
    const ErrorRates r = averaged_error_rates(p, la, lb, arg_cutoff(c));
    o["e_X"] = r.e_X;
    o["e_Y"] = r.e_Y;
    o["e_Z"] = r.e_Z;
    return o;
  }
  if (op == "bell_coefficients") {
    const BellCoefficients b =
        bell_coefficients(arg_num(c, "e_XY"), arg_num(c, "e_Z"));
    o["p00"] = b.p00;
    o["p01"] = b.p01;
    o["p10"] = b.p10;
    o["p11"] = b.p11;
    return o;
  }
  if (op == "final_state_coefficients") {
    const ProtocolKind prot = arg_protocol(c);
    const LinkClickModel la = make_link(p, Side::alice, prot);
    const LinkClickModel lb = make_link(p, Side::bob, prot);
    const BellCoefficients b =
        final_state_coefficients(p, la, lb, arg_u64(c, "n", 1));
    o["p00"] = b.p00;
    o["p01"] = b.p01;
    o["p10"] = b.p10;
    o["p11"] = b.p11;
    return o;
  }
  if (op == "skf_bb84") {
    const SecretKeyFraction f = skf_bb84(arg_num(c, "e_Z"), arg_num(c, "e_X"));
    o["value"] = f.value;
    o["branch"] = branch_code(f.branch);
    return o;
  }
  if (op == "skf_six_state_ad") {
    const BellCoefficients b{arg_num(c, "p00"), arg_num(c, "p01"),
                             arg_num(c, "p10"), arg_num(c, "p11")};
    const SecretKeyFraction f = skf_six_state_ad(b);
    o["value"] = f.value;
    o["branch"] = branch_code(f.branch);
    return o;
  }
  if (op == "best_skf") {
    const double bx = arg_num(c, "bb84_e_X"), bz = arg_num(c, "bb84_e_Z");
    const double sx = arg_num(c, "six_e_X"), sz = arg_num(c, "six_e_Z");
    const SecretKeyFraction f =
        best_skf(ErrorRates{bx, bx, bz}, ErrorRates{sx, sx, sz});
    o["value"] = f.value;
    o["protocol"] = f.protocol == ProtocolKind::bb84 ? 0 : 1;
    o["branch"] = branch_code(f.branch);
    return o;
  }
  if (op == "expected_uses_no_cutoff") {
    o["value"] = expected_uses_no_cutoff(arg_num(c, "p_A"), arg_num(c, "p_B"));
    return o;
  }
  if (op == "yield_bounds") {
    const YieldBounds y =
        yield_bounds(arg_num(c, "p_A"), arg_num(c, "p_B"), arg_cutoff(c),
                     arg_num_or(c, "p_bsm", 1.0));
    o["lower"] = y.lower;
    o["upper"] = y.upper;
    o["err_term"] = y.err_term;
    o["regime"] = y.regime == YieldRegime::high_loss ? 0 : 1;
    o["yield_lower"] = y.yield_lower;
    o["yield_upper"] = y.yield_upper;
    return o;
  }
  if (op == "approx_expected_uses") {
    o["value"] = approx_expected_uses(arg_num(c, "p_A"), arg_num(c, "p_B"),
                                      arg_cutoff(c));
    return o;
  }
  if (op == "pure_loss_capacity") {
    o["value"] = pure_loss_capacity(arg_num(c, "eta"));
    return o;
  }
  if (op == "finite_energy_bound") {
    o["value"] = finite_energy_bound(arg_num(c, "eta"), arg_num(c, "P"));
    return o;
  }
  if (op == "thermal_loss_bound") {
    o["value"] = thermal_loss_bound(arg_num(c, "eta"), arg_num(c, "n_bar"));
    return o;
  }
  if (op == "benchmark_eta") {
    o["value"] = benchmark_eta(p, static_cast<int>(arg_num(c, "case")));
    return o;
  }
  if (op == "mean_photon_for_case") {
    o["value"] = mean_photon_for_case(p, static_cast<int>(arg_num(c, "case")));
    return o;
  }
  if (op == "finite_energy_crossover") {
    o["value"] = finite_energy_crossover();
    return o;
  }
  if (op == "direct_transmission_rate") {
    o["value"] = direct_transmission_rate(p, arg_protocol(c));
    return o;
  }
  if (op == "all_benchmarks") {
    for (const BenchmarkValue& b : all_benchmarks(p)) {
      o[std::string("b") + label_name(b.label)] = b.value;
      o[std::string("eta_") + label_name(b.label)] = b.eta;
    }
    return o;
  }
  if (op == "simulate_raw_bit") {
    SplitMix64 rng(substream_seed(arg_u64(c, "seed", 1), 0));
    const double p_A = arg_num(c, "p_A"), p_B = arg_num(c, "p_B");
    FinalStateModel model{};
    const FinalStateModel* mp = nullptr;
    if (c.args.count("protocol")) {
      const ProtocolKind prot = arg_protocol(c);
      model = make_final_state_model(p, make_link(p, Side::alice, prot),
                                     make_link(p, Side::bob, prot));
      mp = &model;
    }
    const SimOutcome s = simulate_raw_bit(p_A, p_B, arg_cutoff(c), mp, rng);
    o["uses"] = static_cast<double>(s.uses);
    o["rounds"] = static_cast<double>(s.rounds);
    o["n_B_final"] = static_cast<double>(s.n_B_final);
    o["x_error"] = s.x_error ? 1 : 0;
    o["z_error"] = s.z_error ? 1 : 0;
    return o;
  }
  if (op == "estimate") {
    const SimSummary s =
        estimate(p, arg_protocol(c), arg_cutoff(c),
                 arg_u64(c, "samples", 10000), arg_u64(c, "seed", 1));
    o["mean_uses"] = s.mean_uses;
    o["se_uses"] = s.se_uses;
    o["mean_rounds"] = s.mean_rounds;
    o["e_X"] = s.e_X;
    o["se_e_X"] = s.se_e_X;
    o["e_Z"] = s.e_Z;
    o["se_e_Z"] = s.se_e_Z;
    return o;
  }
  if (op == "rate_at") {
    put_rate(o, rate_at(p, arg_protocol(c), arg_cutoff(c)));
    return o;
  }
  if (op == "optimize_cutoff") {
    std::optional<ProtocolKind> prot;
    if (c.args.count("protocol")) prot = arg_protocol(c);
    put_rate(o, optimize_cutoff(p, prot));
    return o;
  }
  if (op == "position_sweep") {
    const double la[] = {arg_num(c, "L_A")};
    SweepOptions opt;
    opt.mc_samples = arg_u64(c, "mc_samples", 0);
    opt.seed = arg_u64(c, "seed", 1);
    const auto pts = position_sweep(p, la, opt);
    const PositionPoint& pt = pts.at(0);
    o["has_error"] = pt.error.empty() ? 0 : 1;
    if (pt.no_cutoff) {
      o["no_cutoff_R_lower"] = pt.no_cutoff->R_lower;
      o["no_cutoff_R_upper"] = pt.no_cutoff->R_upper;
    }
    if (pt.optimized) {
      o["optimized_R_lower"] = pt.optimized->R_lower;
      o["optimized_R_upper"] = pt.optimized->R_upper;
      o["optimized_n_star"] = pt.optimized->n_star.as_double();
    }
    return o;
  }
  if (op == "distance_sweep") {
    const double lt[] = {arg_num(c, "L_total")};
    const bool dark = arg_num_or(c, "dark_counts_on", 1) != 0;
    const auto pts = distance_sweep(p, lt, dark);
    const DistancePoint& pt = pts.at(0);
    o["has_error"] = pt.error.empty() ? 0 : 1;
    if (pt.result) put_rate(o, *pt.result);
    return o;
  }
  if (op == "contour_sweep") {
    const AxisSpec ax{arg_str(c, "x_field"), {arg_num(c, "x_value")}};
    const AxisSpec ay{arg_str(c, "y_field"), {arg_num(c, "y_value")}};
    const auto pts =
        contour_sweep(p, ax, ay, arg_num_or(c, "L_total", p.L_total));
    const ContourPoint& pt = pts.at(0);
    o["has_error"] = pt.error.empty() ? 0 : 1;
    if (pt.result) put_rate(o, *pt.result);
    o["n_surpassed"] = static_cast<double>(
        std::count(pt.surpassed.begin(), pt.surpassed.end(), true));
    return o;
  }
  if (op == "run_golden_suite") {
    // Loader self-check: parse (without executing) every case file next to
    // this fixture.  Execution coverage comes from the suite driver itself.
    const std::filesystem::path dir =
        c.file.empty() ? std::filesystem::path(".")
                       : std::filesystem::path(c.file).parent_path();
    std::size_t files = 0, cases = 0;
    for (const auto& e : std::filesystem::directory_iterator(dir)) {
      if (e.path().extension() != ".cases") continue;
      ++files;
      cases += load_golden_cases(e.path()).size();
    }
    o["n_files"] = static_cast<double>(files);
    o["nonempty"] = (files > 0 && cases > 0) ? 1 : 0;
    return o;
  }
  throw std::runtime_error("unknown op '" + op + "'");
}

bool close_enough(double got, double want, double tol_rel, double tol_abs) {
  if (std::isnan(want)) return std::isnan(got);
  if (std::isinf(want)) return got == want;
  return std::abs(got - want) <= tol_abs + tol_rel * std::abs(want);
}

GoldenResult run_cli_case(const GoldenCase& c) {
  std::ostringstream out, err;
  const int rc = run_cli(c.argv, out, err);
  std::ostringstream msg;
  bool pass = true;
  if (rc != c.expect_exit) {
    pass = false;
    msg << "exit " << rc << " != " << c.expect_exit << "; ";
  }
  const std::string text = out.str() + err.str();
  for (const auto& needle : c.expect_contains) {
    if (text.find(needle) == std::string::npos) {
      pass = false;
      msg << "output lacks '" << needle << "'; ";
    }
  }
  return {c.id, pass, msg.str()};
}

}  // namespace

std::vector<GoldenCase> load_golden_cases(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw std::runtime_error("cannot open " + file.string());
  std::vector<GoldenCase> cases;
  GoldenCase cur;
  bool open = false;
  std::string raw;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    const std::string line = trim(strip_comment(raw));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']' || line.rfind("[case ", 0) != 0)
        fail_at(file, lineno, "expected '[case id]', got '" + line + "'");
      if (open) finish_case(cur, cases);
      cur = GoldenCase{};
      cur.id = trim(line.substr(6, line.size() - 7));
      cur.file = file.string();
      cur.line = lineno;
      open = true;
      if (cur.id.empty()) fail_at(file, lineno, "empty case id");
      continue;
    }
    if (!open) fail_at(file, lineno, "content before first [case ...]");
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      fail_at(file, lineno, "expected 'key = value': '" + line + "'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key == "source") cur.source = value;
    else if (key == "op") cur.op = value;
    else if (key == "config") cur.config = value;
    else if (key == "tol_rel") cur.tol_rel = parse_number(value, file, lineno);
    else if (key == "tol_abs") cur.tol_abs = parse_number(value, file, lineno);
    else if (key == "oracle") cur.oracle = value;
    else if (key == "note") cur.note = value;
    else if (key == "argv") cur.argv = split_ws(value);
    else if (key == "expect_exit")
      cur.expect_exit = static_cast<int>(parse_number(value, file, lineno));
    else if (key == "expect_contains") cur.expect_contains.push_back(value);
    else if (key.rfind("set ", 0) == 0)
      cur.sets.emplace_back(trim(key.substr(4)),
                            parse_number(value, file, lineno));
    else if (key.rfind("arg ", 0) == 0) cur.args[trim(key.substr(4))] = value;
    else if (key.rfind("expect ", 0) == 0)
      cur.expects[trim(key.substr(7))] = value;
    else fail_at(file, lineno, "unknown key '" + key + "'");
  }
  if (open) finish_case(cur, cases);
  if (cases.empty())
    throw std::runtime_error("no cases in " + file.string());
  return cases;
}

GoldenResult run_golden_case(const GoldenCase& c) {
  try {
    if (!c.argv.empty()) return run_cli_case(c);

    ExperimentParams p = named_config(c.config);
    for (const auto& [key, value] : c.sets)
      if (!set_param(p, key, value))
        throw std::runtime_error("unknown parameter '" + key + "'");

    bool expect_error = false;
    for (const auto& [key, value] : c.expects)
      if (value == "error") expect_error = true;

    Out out;
    try {
      out = evaluate_op(c, p);
    } catch (const std::exception& e) {
      if (expect_error) return {c.id, true, ""};
      return {c.id, false, std::string("unexpected error: ") + e.what()};
    }
    if (expect_error)
      return {c.id, false, "expected an error but the op returned"};

    std::ostringstream msg;
    bool pass = true;
    for (const auto& [key, text] : c.expects) {
      const auto it = out.find(key);
      if (it == out.end()) {
        pass = false;
        msg << "no output '" << key << "'; ";
        continue;
      }
      const double want =
          parse_number(text, std::filesystem::path(c.file), c.line);
      if (!close_enough(it->second, want, c.tol_rel, c.tol_abs)) {
        pass = false;
        msg << key << ": got " << format_full(it->second) << ", want "
            << format_full(want) << " (tol_rel " << c.tol_rel << ", tol_abs "
            << c.tol_abs << "); ";
      }
    }
    return {c.id, pass, msg.str()};
  } catch (const std::exception& e) {
    return {c.id, false, std::string("case setup failed: ") + e.what()};
  }
}

GoldenStats run_golden_dir(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir))
    throw std::runtime_error("fixture directory missing: " + dir.string());
  std::vector<std::filesystem::path> files;
  for (const auto& e : std::filesystem::directory_iterator(dir))
    if (e.path().extension() == ".cases") files.push_back(e.path());
  std::sort(files.begin(), files.end());
  if (files.empty())
    throw std::runtime_error("no .cases files under " + dir.string());

  GoldenStats stats;
  for (const auto& f : files) {
    for (const GoldenCase& c : load_golden_cases(f)) {
      stats.ops_seen.insert(c.op);
      GoldenResult r = run_golden_case(c);
      if (!r.pass) ++stats.failures;
      stats.results.push_back(std::move(r));
    }
  }
  return stats;
}

const std::set<std::string>& golden_required_ops() {
  static const std::set<std::string> ops = {
      "default_expected_params", "validate", "fibre_transmissivity",
      "dark_click_probability", "click_probability", "squashing_alpha",
      "decay_rates", "truncated_geometric_mean_exp", "averaged_error_rates",
      "bell_coefficients", "final_state_coefficients", "skf_bb84",
      "skf_six_state_ad", "best_skf", "expected_uses_no_cutoff",
      "yield_bounds", "approx_expected_uses", "pure_loss_capacity",
      "finite_energy_bound", "thermal_loss_bound", "benchmark_eta",
      "mean_photon_for_case", "finite_energy_crossover",
      "direct_transmission_rate", "all_benchmarks", "simulate_raw_bit",
      "estimate", "rate_at", "optimize_cutoff", "position_sweep",
      "distance_sweep", "contour_sweep", "cmd_rate", "cmd_sweep",
      "cmd_validate", "run_golden_suite"};
  return ops;
}

}  // namespace seqrep
