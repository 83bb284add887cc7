/* Copyright 2026 the seqrep authors
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *     http://www.apache.org/licenses/LICENSE-2.0
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 */
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <optional>

#include "seqrep/benchmarks.hpp"
#include "seqrep/channel_loss.hpp"
#include "seqrep/errors.hpp"
#include "seqrep/noise.hpp"
#include "seqrep/optimizer.hpp"
#include "seqrep/params.hpp"
#include "seqrep/simulator.hpp"
#include "seqrep/skf.hpp"
#include "seqrep/yield.hpp"

namespace py = pybind11;
using namespace seqrep;

namespace {

// None or a positive int on the python side.
Cutoff to_cutoff(const std::optional<std::uint64_t>& n) {
  return n ? Cutoff(*n) : Cutoff::none();
}

std::optional<std::uint64_t> from_cutoff(Cutoff c) {
  if (c.is_finite()) return c.attempts();
  return std::nullopt;
}

}  // namespace

PYBIND11_MODULE(seqrep, m) {
  m.doc() = "secret-key rates of a single sequential quantum repeater";

  py::register_exception<ValidityError>(m, "ValidityError",
                                        PyExc_ValueError);
  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);

  py::enum_<ProtocolKind>(m, "ProtocolKind")
      .value("bb84", ProtocolKind::bb84)
      .value("six_state", ProtocolKind::six_state);
  py::enum_<SkfBranch>(m, "SkfBranch")
      .value("one_way", SkfBranch::one_way)
      .value("ad_branch_1", SkfBranch::ad_branch_1)
      .value("ad_branch_2", SkfBranch::ad_branch_2);
  py::enum_<YieldRegime>(m, "YieldRegime")
      .value("high_loss", YieldRegime::high_loss)
      .value("low_loss", YieldRegime::low_loss);
  py::enum_<Side>(m, "Side")
      .value("alice", Side::alice)
      .value("bob", Side::bob);

  py::class_<ExperimentParams>(m, "ExperimentParams")
      .def(py::init<>())
      .def_readwrite("a0", &ExperimentParams::a0)
      .def_readwrite("a1", &ExperimentParams::a1)
      .def_readwrite("b0", &ExperimentParams::b0)
      .def_readwrite("b1", &ExperimentParams::b1)
      .def_readwrite("t_prep", &ExperimentParams::t_prep)
      .def_readwrite("F_gm", &ExperimentParams::F_gm)
      .def_readwrite("F_prep", &ExperimentParams::F_prep)
      .def_readwrite("p_em", &ExperimentParams::p_em)
      .def_readwrite("conversion_eff", &ExperimentParams::conversion_eff)
      .def_readwrite("p_ps", &ExperimentParams::p_ps)
      .def_readwrite("p_det", &ExperimentParams::p_det)
      .def_readwrite("p_bsm", &ExperimentParams::p_bsm)
      .def_readwrite("dark_rate", &ExperimentParams::dark_rate)
      .def_readwrite("t_int", &ExperimentParams::t_int)
      .def_readwrite("L0", &ExperimentParams::L0)
      .def_readwrite("n_ri", &ExperimentParams::n_ri)
      .def_readwrite("L_total", &ExperimentParams::L_total)
      .def_readwrite("L_A", &ExperimentParams::L_A)
      .def_property_readonly("p_app", &ExperimentParams::p_app)
      .def_property_readonly("L_B", &ExperimentParams::L_B)
      .def_property_readonly("n_bar", &ExperimentParams::n_bar);

  m.def("default_expected_params", &default_expected_params);
  m.def("load_config", &load_config, py::arg("file"));
  m.def("save_config", &save_config, py::arg("params"), py::arg("file"));
  m.def(
      "validate",
      [](const ExperimentParams& p) {
        const ValidationReport r = validate(p);
        return py::make_tuple(r.ok(), r.to_string());
      },
      py::arg("params"), "returns (ok, report_text)");

  m.def("fibre_transmissivity", &fibre_transmissivity, py::arg("length_km"),
        py::arg("attenuation_km"));
  m.def("expected_uses_no_cutoff", &expected_uses_no_cutoff, py::arg("p_A"),
        py::arg("p_B"));

  py::class_<YieldBounds>(m, "YieldBounds")
      .def_readonly("lower", &YieldBounds::lower)
      .def_readonly("upper", &YieldBounds::upper)
      .def_readonly("err_term", &YieldBounds::err_term)
      .def_readonly("regime", &YieldBounds::regime)
      .def_readonly("yield_lower", &YieldBounds::yield_lower)
      .def_readonly("yield_upper", &YieldBounds::yield_upper);
  m.def(
      "yield_bounds",
      [](double p_A, double p_B, std::optional<std::uint64_t> n_star,
         double p_bsm) {
        return yield_bounds(p_A, p_B, to_cutoff(n_star), p_bsm);
      },
      py::arg("p_A"), py::arg("p_B"), py::arg("n_star") = std::nullopt,
      py::arg("p_bsm") = 1.0);

  py::class_<ErrorRates>(m, "ErrorRates")
      .def(py::init([](double e_X, double e_Y, double e_Z) {
             return ErrorRates{e_X, e_Y, e_Z};
           }),
           py::arg("e_X"), py::arg("e_Y"), py::arg("e_Z"))
      .def_readonly("e_X", &ErrorRates::e_X)
      .def_readonly("e_Y", &ErrorRates::e_Y)
      .def_readonly("e_Z", &ErrorRates::e_Z);
  m.def(
      "averaged_error_rates",
      [](const ExperimentParams& p, ProtocolKind protocol,
         std::optional<std::uint64_t> n_star) {
        const LinkClickModel la = make_link(p, Side::alice, protocol);
        const LinkClickModel lb = make_link(p, Side::bob, protocol);
        return averaged_error_rates(p, la, lb, to_cutoff(n_star));
      },
      py::arg("params"), py::arg("protocol"),
      py::arg("n_star") = std::nullopt);

  py::class_<SecretKeyFraction>(m, "SecretKeyFraction")
      .def_readonly("value", &SecretKeyFraction::value)
      .def_readonly("protocol", &SecretKeyFraction::protocol)
      .def_readonly("branch", &SecretKeyFraction::branch);
  m.def("skf_bb84", &skf_bb84, py::arg("e_Z"), py::arg("e_X"));
  m.def(
      "skf_six_state_ad",
      [](double p00, double p01, double p10, double p11) {
        return skf_six_state_ad(BellCoefficients{p00, p01, p10, p11});
      },
      py::arg("p00"), py::arg("p01"), py::arg("p10"), py::arg("p11"));
  m.def("best_skf", &best_skf, py::arg("rates_bb84"),
        py::arg("rates_six_state"));
  m.def("binary_entropy", &binary_entropy, py::arg("p"));

  py::class_<BenchmarkValue>(m, "BenchmarkValue")
      .def_property_readonly(
          "label", [](const BenchmarkValue& b) { return label_name(b.label); })
      .def_readonly("eta", &BenchmarkValue::eta)
      .def_readonly("value", &BenchmarkValue::value);
  m.def("pure_loss_capacity", &pure_loss_capacity, py::arg("eta"));
  m.def("finite_energy_bound", &finite_energy_bound, py::arg("eta"),
        py::arg("P"));
  m.def("thermal_loss_bound", &thermal_loss_bound, py::arg("eta"),
        py::arg("n_bar"));
  m.def("finite_energy_crossover", &finite_energy_crossover);
  m.def("direct_transmission_rate", &direct_transmission_rate,
        py::arg("params"), py::arg("protocol"));
  m.def(
      "all_benchmarks",
      [](const ExperimentParams& p) {
        const auto a = all_benchmarks(p);
        return std::vector<BenchmarkValue>(a.begin(), a.end());
      },
      py::arg("params"));

  py::class_<RateResult>(m, "RateResult")
      .def_readonly("R_lower", &RateResult::R_lower)
      .def_readonly("R_upper", &RateResult::R_upper)
      .def_property_readonly(
          "n_star", [](const RateResult& r) { return from_cutoff(r.n_star); })
      .def_readonly("protocol", &RateResult::protocol)
      .def_readonly("branch", &RateResult::branch)
      .def_readonly("skf", &RateResult::skf)
      .def_readonly("e_X", &RateResult::e_X)
      .def_readonly("e_Z", &RateResult::e_Z)
      .def_readonly("uses_lower", &RateResult::uses_lower)
      .def_readonly("uses_upper", &RateResult::uses_upper)
      .def_readonly("simulated", &RateResult::simulated);
  m.def(
      "rate_at",
      [](const ExperimentParams& p, ProtocolKind protocol,
         std::optional<std::uint64_t> n_star) {
        return rate_at(p, protocol, to_cutoff(n_star));
      },
      py::arg("params"), py::arg("protocol"),
      py::arg("n_star") = std::nullopt);
  m.def(
      "best_rate_at",
      [](const ExperimentParams& p, std::optional<std::uint64_t> n_star) {
        return best_rate_at(p, to_cutoff(n_star));
      },
      py::arg("params"), py::arg("n_star") = std::nullopt);
  m.def("optimize_cutoff", &optimize_cutoff, py::arg("params"),
        py::arg("protocol") = std::nullopt);

  py::class_<BenchmarkReport>(m, "BenchmarkReport")
      .def_property_readonly(
          "values",
          [](const BenchmarkReport& r) {
            return std::vector<BenchmarkValue>(r.values.begin(),
                                               r.values.end());
          })
      .def_property_readonly("surpassed", [](const BenchmarkReport& r) {
        return std::vector<bool>(r.surpassed.begin(), r.surpassed.end());
      });
  m.def("benchmark_verdicts", &benchmark_verdicts, py::arg("params"),
        py::arg("rate"));

  py::class_<SimSummary>(m, "SimSummary")
      .def_readonly("samples", &SimSummary::samples)
      .def_readonly("seed", &SimSummary::seed)
      .def_readonly("mean_uses", &SimSummary::mean_uses)
      .def_readonly("se_uses", &SimSummary::se_uses)
      .def_readonly("mean_rounds", &SimSummary::mean_rounds)
      .def_readonly("e_X", &SimSummary::e_X)
      .def_readonly("se_e_X", &SimSummary::se_e_X)
      .def_readonly("e_Z", &SimSummary::e_Z)
      .def_readonly("se_e_Z", &SimSummary::se_e_Z);
  m.def(
      "estimate_uses",
      [](double p_A, double p_B, std::optional<std::uint64_t> n_star,
         std::uint64_t samples, std::uint64_t seed) {
        return estimate_uses(p_A, p_B, to_cutoff(n_star), samples, seed);
      },
      py::arg("p_A"), py::arg("p_B"), py::arg("n_star") = std::nullopt,
      py::arg("samples") = 100000, py::arg("seed") = 1);
  m.def(
      "estimate",
      [](const ExperimentParams& p, ProtocolKind protocol,
         std::optional<std::uint64_t> n_star, std::uint64_t samples,
         std::uint64_t seed) {
        return estimate(p, protocol, to_cutoff(n_star), samples, seed);
      },
      py::arg("params"), py::arg("protocol"),
      py::arg("n_star") = std::nullopt, py::arg("samples") = 100000,
      py::arg("seed") = 1);

  py::class_<PositionPoint>(m, "PositionPoint")
      .def_readonly("L_A", &PositionPoint::L_A)
      .def_readonly("optimized", &PositionPoint::optimized)
      .def_readonly("no_cutoff", &PositionPoint::no_cutoff)
      .def_readonly("error", &PositionPoint::error);
  m.def(
      "position_sweep",
      [](const ExperimentParams& p, const std::vector<double>& L_A_values,
         std::uint64_t mc_samples, std::uint64_t seed) {
        SweepOptions opt;
        opt.mc_samples = mc_samples;
        opt.seed = seed;
        return position_sweep(p, L_A_values, opt);
      },
      py::arg("params"), py::arg("L_A_values"), py::arg("mc_samples") = 0,
      py::arg("seed") = 1);

  py::class_<DistancePoint>(m, "DistancePoint")
      .def_readonly("L_total", &DistancePoint::L_total)
      .def_readonly("result", &DistancePoint::result)
      .def_readonly("error", &DistancePoint::error);
  m.def(
      "distance_sweep",
      [](const ExperimentParams& p, const std::vector<double>& L_totals,
         bool dark_counts_on) {
        return distance_sweep(p, L_totals, dark_counts_on);
      },
      py::arg("params"), py::arg("L_totals"),
      py::arg("dark_counts_on") = true);

  py::class_<AxisSpec>(m, "AxisSpec")
      .def(py::init([](std::string field, std::vector<double> values) {
             return AxisSpec{std::move(field), std::move(values)};
           }),
           py::arg("field"), py::arg("values"))
      .def_readonly("field", &AxisSpec::field)
      .def_readonly("values", &AxisSpec::values);
  py::class_<ContourPoint>(m, "ContourPoint")
      .def_readonly("x", &ContourPoint::x)
      .def_readonly("y", &ContourPoint::y)
      .def_readonly("result", &ContourPoint::result)
      .def_property_readonly(
          "surpassed",
          [](const ContourPoint& c) {
            return std::vector<bool>(c.surpassed.begin(), c.surpassed.end());
          })
      .def_readonly("error", &ContourPoint::error);
  m.def("contour_sweep", &contour_sweep, py::arg("params"), py::arg("x_axis"),
        py::arg("y_axis"), py::arg("L_total"));
}
