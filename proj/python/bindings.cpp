// SPDX-License-Identifier: Apache-2.0
//
// trihybrid: tri-hybrid beamforming for reconfigurable-antenna ISAC arrays
// Copyright (C) 2026 The trihybrid authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "trihybrid/channel.hpp"
#include "trihybrid/em_basis.hpp"
#include "trihybrid/harness.hpp"
#include "trihybrid/hybrid_factor.hpp"
#include "trihybrid/metrics.hpp"
#include "trihybrid/mumt_solver.hpp"
#include "trihybrid/sust_solver.hpp"

namespace py = pybind11;
using namespace trihybrid;
namespace hn = trihybrid::harness;

PYBIND11_MODULE(_core, m)
{
    m.doc() = "Tri-hybrid beamforming solvers";

    py::register_exception<hn::ConfigError>(m, "ConfigError", PyExc_ValueError);

    m.def("assoc_legendre", &assoc_legendre, py::arg("u"), py::arg("q"), py::arg("x"));
    m.def("dbm_to_watt", &dbm_to_watt, py::arg("dbm"));

    py::class_<SphericalHarmonicBasis, std::shared_ptr<SphericalHarmonicBasis>>(m, "SphericalHarmonicBasis")
        .def(py::init<int>(), py::arg("truncation_degree"))
        .def_property_readonly("truncation_degree", &SphericalHarmonicBasis::truncation_degree)
        .def_property_readonly("size", &SphericalHarmonicBasis::size)
        .def("normalization", &SphericalHarmonicBasis::normalization, py::arg("u"), py::arg("q"))
        .def("eval", &SphericalHarmonicBasis::eval, py::arg("theta"), py::arg("phi"));

    py::class_<PatternLibrary, std::shared_ptr<PatternLibrary>>(m, "PatternLibrary")
        .def_property_readonly("size", &PatternLibrary::size)
        .def_property_readonly("ntheta", &PatternLibrary::ntheta)
        .def_property_readonly("nphi", &PatternLibrary::nphi)
        .def("gain", &PatternLibrary::gain, py::arg("s"), py::arg("theta"), py::arg("phi"))
        .def("sample", &PatternLibrary::sample, py::arg("s"), py::arg("i"), py::arg("j"));

    m.def(
        "synth_pattern_library",
        [](int S, std::uint64_t seed, const SphericalHarmonicBasis &basis)
        { return std::make_shared<PatternLibrary>(synth_pattern_library(S, seed, basis)); },
        py::arg("size"), py::arg("seed"), py::arg("basis"));
    m.def(
        "load_pattern_library",
        [](const std::filesystem::path &path)
        { return std::make_shared<PatternLibrary>(load_pattern_library(path)); },
        py::arg("path"));
    m.def("save_pattern_library", &save_pattern_library, py::arg("path"), py::arg("library"));

    py::class_<RadiationModel> model(m, "RadiationModel");
    py::enum_<RadiationModel::Kind>(model, "Kind")
        .value("harmonic", RadiationModel::Kind::harmonic)
        .value("library", RadiationModel::Kind::library)
        .value("fixed", RadiationModel::Kind::fixed);
    py::enum_<FixedPattern>(m, "FixedPattern").value("omni", FixedPattern::omni).value("sine", FixedPattern::sine);
    model
        .def_static(
            "harmonic", [](std::shared_ptr<SphericalHarmonicBasis> b) { return RadiationModel::harmonic(b); },
            py::arg("basis"))
        .def_static(
            "library", [](std::shared_ptr<PatternLibrary> l) { return RadiationModel::library(l); },
            py::arg("library"))
        .def_static("fixed", &RadiationModel::fixed, py::arg("pattern"))
        .def_property_readonly("kind", &RadiationModel::kind)
        .def_property_readonly("dim", &RadiationModel::dim)
        .def("eval", &RadiationModel::eval, py::arg("theta"), py::arg("phi"))
        .def("realized_gain", &RadiationModel::realized_gain, py::arg("coeffs"), py::arg("theta"), py::arg("phi"));

    py::class_<Range>(m, "Range")
        .def(py::init([](double lo, double hi) { return Range{lo, hi}; }), py::arg("lo"), py::arg("hi"))
        .def_readwrite("lo", &Range::lo)
        .def_readwrite("hi", &Range::hi);

    py::class_<ScenarioConfig>(m, "ScenarioConfig")
        .def(py::init<>())
        .def_readwrite("carrier_frequency", &ScenarioConfig::carrier_frequency)
        .def_readwrite("n_tx", &ScenarioConfig::n_tx)
        .def_readwrite("n_rx", &ScenarioConfig::n_rx)
        .def_readwrite("element_spacing", &ScenarioConfig::element_spacing)
        .def_readwrite("n_users", &ScenarioConfig::n_users)
        .def_readwrite("n_targets", &ScenarioConfig::n_targets)
        .def_readwrite("n_scatterers", &ScenarioConfig::n_scatterers)
        .def_readwrite("paths_per_user", &ScenarioConfig::paths_per_user)
        .def_readwrite("n_rf", &ScenarioConfig::n_rf)
        .def_readwrite("user_distance", &ScenarioConfig::user_distance)
        .def_readwrite("target_distance", &ScenarioConfig::target_distance)
        .def_readwrite("scatterer_distance", &ScenarioConfig::scatterer_distance)
        .def_readwrite("target_rcs", &ScenarioConfig::target_rcs)
        .def_readwrite("scatterer_rcs", &ScenarioConfig::scatterer_rcs)
        .def_readwrite("path_loss_exponent", &ScenarioConfig::path_loss_exponent)
        .def_readwrite("noise_dbm", &ScenarioConfig::noise_dbm)
        .def_readwrite("power_dbm", &ScenarioConfig::power_dbm)
        .def_readwrite("beta_tilde", &ScenarioConfig::beta_tilde);

    py::class_<Reflector>(m, "Reflector")
        .def_readonly("theta", &Reflector::theta)
        .def_readonly("phi", &Reflector::phi)
        .def_readonly("distance", &Reflector::distance)
        .def_readonly("rcs", &Reflector::rcs);

    py::class_<Scenario>(m, "Scenario")
        .def_readonly("power_budget", &Scenario::power_budget)
        .def_readonly("noise_power", &Scenario::noise_power)
        .def_readonly("beta_tilde", &Scenario::beta_tilde)
        .def_readonly("n_rf", &Scenario::n_rf)
        .def_readonly("seed", &Scenario::seed)
        .def_readonly("targets", &Scenario::targets)
        .def_readonly("scatterers", &Scenario::scatterers)
        .def_property_readonly("n_users", &Scenario::n_users)
        .def_property_readonly("n_targets", &Scenario::n_targets);

    m.def("generate_scenario", &generate_scenario, py::arg("config"), py::arg("seed"));

    py::class_<EmChannelSet>(m, "EmChannelSet")
        .def_readonly("n_tx", &EmChannelSet::n_tx)
        .def_readonly("dim", &EmChannelSet::dim)
        .def_readonly("comm", &EmChannelSet::comm)
        .def_readonly("power_budget", &EmChannelSet::power_budget);

    m.def("build_em_channels", &build_em_channels, py::arg("scenario"), py::arg("model"));

    py::class_<Objectives>(m, "Objectives")
        .def_readonly("sinr", &Objectives::sinr)
        .def_readonly("sum_rate", &Objectives::sum_rate)
        .def_readonly("scnr", &Objectives::scnr)
        .def_readonly("value", &Objectives::value);

    py::class_<TriHybridBeamformer>(m, "TriHybridBeamformer")
        .def_readonly("em", &TriHybridBeamformer::em)
        .def_readonly("F_FD", &TriHybridBeamformer::F_FD)
        .def_readonly("F_RF", &TriHybridBeamformer::F_RF)
        .def_readonly("F_BB", &TriHybridBeamformer::F_BB)
        .def("hybrid", &TriHybridBeamformer::hybrid);

    py::class_<SolverReport>(m, "SolverReport")
        .def_readonly("beamformer", &SolverReport::beamformer)
        .def_readonly("fd", &SolverReport::fd)
        .def_readonly("hybrid", &SolverReport::hybrid)
        .def_readonly("hybrid_residual", &SolverReport::hybrid_residual)
        .def_readonly("trace", &SolverReport::trace)
        .def_readonly("varsigma", &SolverReport::varsigma)
        .def_readonly("outer_iterations", &SolverReport::outer_iterations)
        .def_readonly("converged", &SolverReport::converged)
        .def_readonly("warnings", &SolverReport::warnings);

    m.def(
        "run_sust", [](const EmChannelSet &ch, int n_rf) { return run_sust(ch, n_rf); }, py::arg("channels"),
        py::arg("n_rf"), py::call_guard<py::gil_scoped_release>());
    m.def(
        "run_mumt", [](const EmChannelSet &ch, int n_rf) { return run_mumt(ch, n_rf); }, py::arg("channels"),
        py::arg("n_rf"), py::call_guard<py::gil_scoped_release>());

    py::class_<HybridPair>(m, "HybridPair")
        .def_readonly("F_RF", &HybridPair::F_RF)
        .def_readonly("F_BB", &HybridPair::F_BB)
        .def_readonly("residual", &HybridPair::residual)
        .def_readonly("iterations", &HybridPair::iterations);

    m.def(
        "factor_hybrid", [](const CMat &F, int n_rf, double budget) { return factor_hybrid(F, n_rf, budget); },
        py::arg("F_FD"), py::arg("n_rf"), py::arg("power_budget"));

    m.def("solve_c_closed_form", &solve_c_closed_form, py::arg("A"));
    m.def("solve_c_mumt", &solve_c_mumt, py::arg("A"), py::arg("a"));

    py::class_<hn::ExperimentConfig>(m, "ExperimentConfig")
        .def_readwrite("scenario", &hn::ExperimentConfig::scenario)
        .def_readwrite("trials", &hn::ExperimentConfig::trials)
        .def_readwrite("seed", &hn::ExperimentConfig::seed)
        .def_readwrite("workers", &hn::ExperimentConfig::workers)
        .def_readwrite("output", &hn::ExperimentConfig::output)
        .def("validate", &hn::ExperimentConfig::validate);

    m.def("parse_config", &hn::parse_config, py::arg("json_text"));
    m.def("load_config", &hn::load_config, py::arg("path"));
    m.def("dump_config", &hn::dump_config, py::arg("config"));

    py::class_<hn::RunStatus>(m, "RunStatus")
        .def_readonly("rows", &hn::RunStatus::rows)
        .def_readonly("failures", &hn::RunStatus::failures);

    m.def("run_experiment", &hn::run_experiment, py::arg("config"), py::call_guard<py::gil_scoped_release>());
    m.def("sweep_experiment", &hn::sweep_experiment, py::arg("config"), py::call_guard<py::gil_scoped_release>());
    m.def("tradeoff_experiment", &hn::tradeoff_experiment, py::arg("config"),
          py::call_guard<py::gil_scoped_release>());
    m.def("export_beampattern", &hn::export_beampattern, py::arg("run_dir"), py::arg("trial") = 0,
          py::arg("ntheta") = 37, py::arg("nphi") = 72);
}
