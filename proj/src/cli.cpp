/* Copyright 2026 the seqrep authors
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *     http://www.apache.org/licenses/LICENSE-2.0
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 */
#include "seqrep/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>

#include "seqrep/benchmarks.hpp"
#include "seqrep/errors.hpp"
#include "seqrep/optimizer.hpp"
#include "seqrep/simulator.hpp"
#include "seqrep/yield.hpp"

namespace seqrep {
namespace {

constexpr const char* kConfigEnvVar = "SEQREP_CONFIG";

// ---------- table / CSV / record plumbing ----------

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  std::vector<std::string>& add_row() {
    rows.emplace_back(columns.size());
    return rows.back();
  }
};

std::string csv_escape(const std::string& cell) {
  if (cell.find_first_of(",\"\n") == std::string::npos) return cell;
  std::string quoted = "\"";
  for (char c : cell) {
    if (c == '"') quoted += '"';
    quoted += c;
  }
  quoted += '"';
  return quoted;
}

void write_csv(const Table& t, std::ostream& os) {
  for (std::size_t i = 0; i < t.columns.size(); ++i)
    os << (i ? "," : "") << csv_escape(t.columns[i]);
  os << "\n";
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i)
      os << (i ? "," : "") << csv_escape(row[i]);
    os << "\n";
  }
}

std::string iso_timestamp() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string hash_hex(std::uint64_t h) {
  std::ostringstream os;
  os << std::hex << std::setfill('0') << std::setw(16) << h;
  return os.str();
}

void write_record(const std::filesystem::path& path,
                  const std::string& command, const ExperimentParams& p,
                  std::uint64_t seed, std::uint64_t samples, const Table& t) {
  nlohmann::json j;
  j["command"] = command;
  j["config_hash"] = hash_hex(config_hash(p));
  j["seed"] = seed;
  j["samples"] = samples;
  j["timestamp"] = iso_timestamp();
  nlohmann::json params = nlohmann::json::object();
  for (const auto& f : param_fields()) params[f.name] = p.*(f.member);
  j["params"] = params;
  j["columns"] = t.columns;
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : t.rows) {
    nlohmann::json r = nlohmann::json::object();
    for (std::size_t i = 0; i < row.size(); ++i) r[t.columns[i]] = row[i];
    rows.push_back(std::move(r));
  }
  j["rows"] = std::move(rows);
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write record: " + path.string());
  out << j.dump(2) << "\n";
}

// ---------- shared options ----------

struct CommonOpts {
  std::string config;
  std::vector<std::string> sets;
  std::string out;
  std::string record;
};

void add_common(CLI::App* cmd, CommonOpts& o) {
  cmd->add_option("--config", o.config,
                  "parameter file (default: $" + std::string(kConfigEnvVar) +
                      " if set)");
  cmd->add_option("--set", o.sets, "override one parameter, KEY=VALUE")
      ->take_all();
  cmd->add_option("--out", o.out, "write CSV here instead of stdout");
  cmd->add_option("--record", o.record, "write the JSON run record here");
}

std::pair<std::string, double> parse_set(const std::string& text) {
  const auto eq = text.find('=');
  if (eq == std::string::npos || eq == 0)
    throw ConfigError("--set expects KEY=VALUE, got '" + text + "'");
  std::string key = text.substr(0, eq);
  while (!key.empty() && key.back() == ' ') key.pop_back();
  const std::string value = text.substr(eq + 1);
  char* end = nullptr;
  const double v = std::strtod(value.c_str(), &end);
  if (end == value.c_str() || *end != '\0' || !std::isfinite(v))
    throw ConfigError("--set " + key + ": cannot parse value '" + value + "'");
  return {key, v};
}

ExperimentParams resolve_from(const CommonOpts& o, std::ostream& err) {
  std::optional<std::filesystem::path> cfg;
  if (!o.config.empty()) {
    cfg = o.config;
  } else if (const char* env = std::getenv(kConfigEnvVar); env && *env) {
    cfg = env;
  }
  std::vector<std::pair<std::string, double>> overrides;
  overrides.reserve(o.sets.size());
  for (const auto& s : o.sets) overrides.push_back(parse_set(s));
  ExperimentParams p = resolve_params(cfg, overrides);
  const ValidationReport rep = validate(p);
  if (!rep.ok()) throw ConfigError("invalid parameters:\n" + rep.to_string());
  if (rep.has_warnings()) err << rep.to_string();
  return p;
}

std::filesystem::path record_path(const CommonOpts& o,
                                  const char* fallback) {
  if (!o.record.empty()) return o.record;
  if (!o.out.empty())
    return std::filesystem::path(o.out).replace_extension(".json");
  return fallback;
}

// ---------- row building ----------

const std::vector<std::string> kResultColumns = {
    "mode",       "distance_km", "L_A_km",     "n_star",     "R_lower",
    "R_upper",    "protocol",    "branch",     "skf",        "e_X",
    "e_Z",        "uses_lower",  "uses_upper", "simulated",  "bm_1a",
    "bm_1b",      "bm_2a",       "bm_2b",      "bm_3c",      "bm_3d",
    "verdict_1a", "verdict_1b",  "verdict_2a", "verdict_2b", "verdict_3c",
    "verdict_3d", "error"};

const char* fmt_bool(bool b) { return b ? "true" : "false"; }

void fill_result_row(std::vector<std::string>& row, const std::string& mode,
                     const ExperimentParams& p,
                     const std::optional<RateResult>& r,
                     const std::string& error) {
  row[0] = mode;
  row[1] = format_full(p.L_total);
  row[2] = format_full(p.L_A);
  if (r) {
    const BenchmarkReport bm = benchmark_verdicts(p, *r);
    row[3] = to_string(r->n_star);
    row[4] = format_full(r->R_lower);
    row[5] = format_full(r->R_upper);
    row[6] = protocol_name(r->protocol);
    row[7] = branch_name(r->branch);
    row[8] = format_full(r->skf);
    row[9] = format_full(r->e_X);
    row[10] = format_full(r->e_Z);
    row[11] = format_full(r->uses_lower);
    row[12] = format_full(r->uses_upper);
    row[13] = fmt_bool(r->simulated);
    for (int i = 0; i < 6; ++i) {
      row[14 + i] = format_full(bm.values[i].value);
      row[20 + i] = fmt_bool(bm.surpassed[i]);
    }
  }
  row[26] = error;
}

void emit(const Table& t, const CommonOpts& o, std::ostream& out) {
  if (o.out.empty()) {
    write_csv(t, out);
    return;
  }
  std::ofstream file(o.out);
  if (!file) throw std::runtime_error("cannot write CSV: " + o.out);
  write_csv(t, file);
  out << "wrote " << t.rows.size() << " rows to " << o.out << "\n";
}

std::string join_args(const std::vector<std::string>& args) {
  std::string s;
  for (const auto& a : args) {
    if (!s.empty()) s += ' ';
    s += a;
  }
  return s;
}

// ---------- rate ----------

int cmd_rate(const CommonOpts& common, const std::string& cutoff_text,
             const std::string& protocol_text,
             const std::vector<std::string>& argv, std::ostream& out,
             std::ostream& err) {
  const ExperimentParams p = resolve_from(common, err);

  std::optional<ProtocolKind> protocol;
  if (protocol_text == "bb84") protocol = ProtocolKind::bb84;
  else if (protocol_text == "six_state") protocol = ProtocolKind::six_state;
  else if (protocol_text != "best")
    throw ConfigError("--protocol must be bb84, six_state or best");

  const RateResult r = [&] {
    if (cutoff_text == "opt") return optimize_cutoff(p, protocol);
    const Cutoff c = parse_cutoff(cutoff_text);
    return protocol ? rate_at(p, *protocol, c) : best_rate_at(p, c);
  }();
  const BenchmarkReport bm = benchmark_verdicts(p, r);

  out << "distance_km     " << format_full(p.L_total) << "\n"
      << "L_A_km          " << format_full(p.L_A) << "\n"
      << "n_star          " << to_string(r.n_star)
      << (cutoff_text == "opt" ? "  (optimized)" : "") << "\n"
      << "protocol        " << protocol_name(r.protocol) << "\n"
      << "branch          " << branch_name(r.branch) << "\n"
      << "secret_fraction " << format_full(r.skf) << "\n"
      << "e_X             " << format_full(r.e_X) << "\n"
      << "e_Z             " << format_full(r.e_Z) << "\n"
      << "uses            [" << format_full(r.uses_lower) << ", "
      << format_full(r.uses_upper) << "]\n"
      << "R_lower         " << format_full(r.R_lower) << "\n"
      << "R_upper         " << format_full(r.R_upper) << "\n\n"
      << "benchmark  eta            value          surpassed\n";
  for (int i = 0; i < 6; ++i) {
    std::ostringstream eta, value;
    eta << std::setw(14) << std::left << format_full(bm.values[i].eta);
    value << std::setw(14) << std::left << format_full(bm.values[i].value);
    out << label_name(bm.values[i].label) << "         " << eta.str() << " "
        << value.str() << " " << fmt_bool(bm.surpassed[i]) << "\n";
  }

  Table t{kResultColumns, {}};
  fill_result_row(t.add_row(), "rate", p, r, "");
  if (!common.out.empty()) emit(t, common, out);
  const auto rec = record_path(common, "seqrep_record.json");
  write_record(rec, join_args(argv), p, 0, 0, t);
  out << "\nrecord written to " << rec.string() << "\n";
  return 0;
}

// ---------- sweep ----------

struct SweepArgs {
  std::string kind;
  double from = 0, to = 0;
  std::size_t points = 25;
  bool log_spacing = false;
  bool linear = false;
  bool l0_units = false;
  bool from_set = false, to_set = false;
  std::string axis1, axis2;
  bool mc = false;
  bool no_dark_counts = false;
  std::uint64_t samples = 100000;
  std::uint64_t seed = 1;
};

AxisSpec parse_axis(const std::string& text) {
  // FIELD=LO:HI:N
  const auto eq = text.find('=');
  if (eq == std::string::npos)
    throw ConfigError("axis spec must be FIELD=LO:HI:N, got '" + text + "'");
  AxisSpec spec;
  spec.field = text.substr(0, eq);
  const std::string rest = text.substr(eq + 1);
  double lo = 0, hi = 0;
  unsigned long n = 0;
  char c1 = 0, c2 = 0;
  std::istringstream is(rest);
  if (!(is >> lo >> c1 >> hi >> c2 >> n) || c1 != ':' || c2 != ':' || n < 1 ||
      !(is >> std::ws).eof())
    throw ConfigError("axis spec must be FIELD=LO:HI:N, got '" + text + "'");
  spec.values = linspace(lo, hi, n);
  return spec;
}

int cmd_sweep(const CommonOpts& common, const SweepArgs& a,
              const std::vector<std::string>& argv, std::ostream& out,
              std::ostream& err) {
  const ExperimentParams p = resolve_from(common, err);
  Table t{kResultColumns, {}};

  auto scale = [&](double v) { return a.l0_units ? v * p.L0 : v; };

  if (a.kind == "distance") {
    if (!a.from_set || !a.to_set)
      throw ConfigError("sweep distance needs --from and --to");
    const auto grid = a.log_spacing
                          ? logspace(scale(a.from), scale(a.to), a.points)
                          : linspace(scale(a.from), scale(a.to), a.points);
    for (const auto& pt : distance_sweep(p, grid, !a.no_dark_counts)) {
      ExperimentParams pc = p;
      pc.L_total = pt.L_total;
      pc.L_A = p.L_total > 0 ? p.L_A / p.L_total * pt.L_total
                             : pt.L_total / 2;
      if (a.no_dark_counts) pc.dark_rate = 0;
      fill_result_row(t.add_row(), "optimized", pc, pt.result, pt.error);
    }
  } else if (a.kind == "cutoff") {
    if (!a.from_set || !a.to_set)
      throw ConfigError("sweep cutoff needs --from and --to");
    if (!(a.from >= 1 && a.to >= a.from))
      throw ConfigError("cut-off range must satisfy 1 <= from <= to");
    const auto grid = a.linear ? linspace(a.from, a.to, a.points)
                               : logspace(a.from, a.to, a.points);
    std::vector<std::uint64_t> cuts;
    for (double v : grid) {
      const auto n = static_cast<std::uint64_t>(std::llround(v));
      if (cuts.empty() || cuts.back() != n) cuts.push_back(std::max<std::uint64_t>(n, 1));
    }
    for (std::uint64_t n : cuts) {
      std::optional<RateResult> r;
      std::string error;
      try {
        r = best_rate_at(p, Cutoff(n));
      } catch (const std::exception& e) {
        error = e.what();
      }
      fill_result_row(t.add_row(), "fixed", p, r, error);
    }
    std::optional<RateResult> r;
    std::string error;
    try {
      r = best_rate_at(p, Cutoff::none());
    } catch (const std::exception& e) {
      error = e.what();
    }
    fill_result_row(t.add_row(), "no_cutoff", p, r, error);
  } else if (a.kind == "position") {
    double from = a.from_set ? scale(a.from) : p.L_total / 2;
    double to = a.to_set ? scale(a.to) : 0.95 * p.L_total;
    const auto grid = linspace(from, to, a.points);
    SweepOptions opt;
    opt.mc_samples = a.mc ? a.samples : 0;
    opt.seed = a.seed;
    for (const auto& pt : position_sweep(p, grid, opt)) {
      ExperimentParams pc = p;
      pc.L_A = pt.L_A;
      fill_result_row(t.add_row(), "optimized", pc, pt.optimized, pt.error);
      fill_result_row(t.add_row(), "no_cutoff", pc, pt.no_cutoff,
                      pt.no_cutoff ? "" : pt.error);
    }
  } else if (a.kind == "contour") {
    if (a.axis1.empty() || a.axis2.empty())
      throw ConfigError("sweep contour needs --axis1 and --axis2");
    const AxisSpec ax = parse_axis(a.axis1);
    const AxisSpec ay = parse_axis(a.axis2);
    const auto points = contour_sweep(p, ax, ay, p.L_total);
    Table ct;
    ct.columns = {ax.field,     ay.field,     "n_star",     "R_lower",
                  "R_upper",    "protocol",   "verdict_1a", "verdict_1b",
                  "verdict_2a", "verdict_2b", "verdict_3c", "verdict_3d",
                  "error"};
    for (const auto& pt : points) {
      auto& row = ct.add_row();
      row[0] = format_full(pt.x);
      row[1] = format_full(pt.y);
      if (pt.result) {
        row[2] = to_string(pt.result->n_star);
        row[3] = format_full(pt.result->R_lower);
        row[4] = format_full(pt.result->R_upper);
        row[5] = protocol_name(pt.result->protocol);
        for (int i = 0; i < 6; ++i) row[6 + i] = fmt_bool(pt.surpassed[i]);
      }
      row[12] = pt.error;
    }
    t = std::move(ct);
  } else {
    throw ConfigError(
        "sweep kind must be distance, cutoff, position or contour");
  }

  emit(t, common, out);
  if (!common.record.empty() || !common.out.empty())
    write_record(record_path(common, "seqrep_record.json"), join_args(argv),
                 p, a.seed, a.mc ? a.samples : 0, t);
  return 0;
}

// ---------- benchmarks ----------

int cmd_benchmarks(const CommonOpts& common, std::ostream& out,
                   std::ostream& err) {
  const ExperimentParams p = resolve_from(common, err);
  const auto values = all_benchmarks(p);
  out << "distance_km " << format_full(p.L_total) << "\n"
      << "benchmark  eta            bits_per_use\n";
  Table t{{"benchmark", "eta", "bits_per_use"}, {}};
  for (const auto& b : values) {
    std::ostringstream eta;
    eta << std::setw(14) << std::left << format_full(b.eta);
    out << label_name(b.label) << "         " << eta.str() << " "
        << format_full(b.value) << "\n";
    auto& row = t.add_row();
    row[0] = label_name(b.label);
    row[1] = format_full(b.eta);
    row[2] = format_full(b.value);
  }
  out << "finite-energy crossover P = "
      << format_full(finite_energy_crossover()) << "\n";
  if (!common.out.empty()) emit(t, common, out);
  return 0;
}

// ---------- validate ----------

int cmd_validate(const CommonOpts& common, std::uint64_t samples,
                 std::uint64_t seed, std::ostream& out, std::ostream& err) {
  const ExperimentParams p = resolve_from(common, err);
  out << "config ok (hash " << hash_hex(config_hash(p)) << ")\n";
  bool all_pass = true;

  // Closed-form yield bounds vs simulated E[max(N_A, N_B)] on the
  // standard grid spanning both regimes.
  out << "\n# yield bounds vs simulation (" << samples << " samples, seed "
      << seed << ")\n";
  std::uint64_t point = 0;
  for (double p_A : {1e-4, 1e-3, 1e-2}) {
    for (double ratio : {1.0, 5.0}) {
      for (double beta : {0.2, 5.0}) {
        const double p_B = ratio * p_A;
        const auto n_star =
            static_cast<std::uint64_t>(std::llround(beta / p_A));
        const YieldBounds yb = yield_bounds(p_A, p_B, Cutoff(n_star), 1.0);
        const SimSummary mc = estimate_uses(p_A, p_B, Cutoff(n_star), samples,
                                            substream_seed(seed, point++));
        const double lo = yb.lower - 3 * mc.se_uses;
        const double hi = yb.upper + 3 * mc.se_uses;
        const bool pass = mc.mean_uses >= lo && mc.mean_uses <= hi;
        all_pass = all_pass && pass;
        out << "uses p_A=" << p_A << " p_B=" << p_B << " n_star=" << n_star
            << " (" << regime_name(yb.regime) << "): mean=" << mc.mean_uses
            << " bracket=[" << lo << ", " << hi << "]  "
            << (pass ? "PASS" : "FAIL") << "\n";
      }
    }
  }

  // One point with the repeater nearer to Alice: the closed forms refuse,
  // the simulator is the only estimator, so the row is informational.
  {
    const double p_A = 1e-2, p_B = 1e-3;
    const Cutoff n_star(500);
    const SimSummary mc =
        estimate_uses(p_A, p_B, n_star, samples, substream_seed(seed, point++));
    out << "uses p_A=" << p_A << " p_B=" << p_B << " n_star=" << n_star.attempts()
        << ": mean=" << mc.mean_uses << " +- " << mc.se_uses
        << "  (no analytic bound)\n";
  }

  // Analytic error rates vs per-bit simulation at the configured params.
  out << "\n# error rates vs simulation at configured parameters\n";
  for (std::uint64_t n_star : {100ull, 1000ull, 10000ull}) {
    const LinkClickModel la = make_link(p, Side::alice, ProtocolKind::bb84);
    const LinkClickModel lb = make_link(p, Side::bob, ProtocolKind::bb84);
    const ErrorRates rates =
        averaged_error_rates(p, la, lb, Cutoff(n_star));
    const SimSummary mc = estimate(p, ProtocolKind::bb84, Cutoff(n_star),
                                   samples, substream_seed(seed, point++));
    const bool pass_x = std::abs(mc.e_X - rates.e_X) <= 3 * mc.se_e_X;
    const bool pass_z = std::abs(mc.e_Z - rates.e_Z) <= 3 * mc.se_e_Z;
    all_pass = all_pass && pass_x && pass_z;
    out << "qber n_star=" << n_star << ": e_X sim=" << mc.e_X << " vs "
        << rates.e_X << " (" << (pass_x ? "PASS" : "FAIL")
        << "), e_Z sim=" << mc.e_Z << " vs " << rates.e_Z << " ("
        << (pass_z ? "PASS" : "FAIL") << ")\n";
  }

  out << "\n" << (all_pass ? "all checks PASS" : "some checks FAIL") << "\n";
  return all_pass ? 0 : 1;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err) {
  CLI::App app{"single sequential quantum repeater rate calculator"};
  app.require_subcommand(1);

  CommonOpts rate_common;
  std::string cutoff_text = "opt";
  std::string protocol_text = "best";
  CLI::App* rate = app.add_subcommand(
      "rate", "secret-key rate and benchmark verdicts at one configuration");
  add_common(rate, rate_common);
  rate->add_option("--cutoff", cutoff_text,
                   "memory cut-off: positive integer, 'inf' or 'opt'");
  rate->add_option("--protocol", protocol_text, "bb84, six_state or best");

  CommonOpts sweep_common;
  SweepArgs sweep_args;
  CLI::App* sweep = app.add_subcommand(
      "sweep", "rate across distance, cutoff, position or contour grids");
  add_common(sweep, sweep_common);
  sweep->add_option("kind", sweep_args.kind,
                    "distance | cutoff | position | contour")
      ->required();
  auto* from_opt = sweep->add_option("--from", sweep_args.from, "grid start");
  auto* to_opt = sweep->add_option("--to", sweep_args.to, "grid end");
  sweep->add_option("--points", sweep_args.points, "grid size (default 25)");
  sweep->add_flag("--log", sweep_args.log_spacing,
                  "log-spaced distance/position grid");
  sweep->add_flag("--linear", sweep_args.linear,
                  "linear cut-off grid (default is log)");
  sweep->add_flag("--l0-units", sweep_args.l0_units,
                  "interpret --from/--to in units of L0");
  sweep->add_option("--axis1", sweep_args.axis1, "contour: FIELD=LO:HI:N");
  sweep->add_option("--axis2", sweep_args.axis2, "contour: FIELD=LO:HI:N");
  sweep->add_flag("--mc", sweep_args.mc,
                  "Monte Carlo fallback for positions left of the midpoint");
  sweep->add_flag("--no-dark-counts", sweep_args.no_dark_counts,
                  "distance sweep with the dark count rate forced to zero");
  sweep->add_option("--samples", sweep_args.samples,
                    "samples per Monte Carlo fallback point");
  sweep->add_option("--seed", sweep_args.seed, "Monte Carlo seed");

  CommonOpts bench_common;
  CLI::App* bench = app.add_subcommand(
      "benchmarks", "repeaterless baselines at the configured distance");
  add_common(bench, bench_common);

  CommonOpts val_common;
  std::uint64_t val_samples = 1000000;
  std::uint64_t val_seed = 42;
  CLI::App* val = app.add_subcommand(
      "validate", "config check plus simulator-vs-analytic cross checks");
  add_common(val, val_common);
  val->add_option("--samples", val_samples, "Monte Carlo samples per point");
  val->add_option("--seed", val_seed, "Monte Carlo seed");

  std::vector<const char*> argv;
  argv.reserve(args.size() + 1);
  argv.push_back("seqrep");
  for (const auto& a : args) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
    if (rate->parsed())
      return cmd_rate(rate_common, cutoff_text, protocol_text, args, out, err);
    if (sweep->parsed()) {
      sweep_args.from_set = from_opt->count() > 0;
      sweep_args.to_set = to_opt->count() > 0;
      return cmd_sweep(sweep_common, sweep_args, args, out, err);
    }
    if (bench->parsed()) return cmd_benchmarks(bench_common, out, err);
    return cmd_validate(val_common, val_samples, val_seed, out, err);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace seqrep
