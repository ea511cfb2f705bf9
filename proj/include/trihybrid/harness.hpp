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

#ifndef TRIHYBRID_HARNESS_HPP
#define TRIHYBRID_HARNESS_HPP

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "trihybrid/beamformer.hpp"
#include "trihybrid/channel.hpp"
#include "trihybrid/em_basis.hpp"
#include "trihybrid/mumt_solver.hpp"
#include "trihybrid/sust_solver.hpp"

namespace trihybrid::harness
{
    class ConfigError : public std::runtime_error
    {
    public:
        using std::runtime_error::runtime_error;
    };

    enum class Scheme
    {
        ra_model_i,  // RA-AO-ClosedForm-I
        ra_model_ii, // RA-AO-BruteForce-II
        oa,          // OA-HBF
        cosa         // CosA-HBF
    };

    std::string scheme_name(Scheme s);
    Scheme parse_scheme(const std::string &name);

    enum class Setting
    {
        sust,
        mumt
    };

    std::string setting_name(Setting s);
    Setting parse_setting(const std::string &name);

    enum class SweepAxis
    {
        none,
        power_dbm,
        beta_tilde,
        n_rf,
        n_tx
    };

    std::string axis_name(SweepAxis a);
    SweepAxis parse_axis(const std::string &name);

    struct LibrarySource
    {
        int size = 64;
        std::uint64_t seed = 7;
        std::string path; // loads from file when nonempty
    };

    struct TradeoffGrid
    {
        double beta_min = 1e-4;
        double beta_max = 1.0;
        int points = 9;
    };

    struct ExperimentConfig
    {
        ScenarioConfig scenario;
        Setting setting = Setting::sust;
        std::vector<Scheme> schemes{Scheme::ra_model_i, Scheme::ra_model_ii, Scheme::oa, Scheme::cosa};
        SweepAxis axis = SweepAxis::none;
        std::vector<double> values;
        int trials = 10;
        std::uint64_t seed = 1;
        int truncation_degree = 2;
        LibrarySource library;
        TradeoffGrid tradeoff;
        SustOptions sust;
        MumtOptions mumt;
        int workers = 0; // 0 picks the hardware concurrency
        std::string output = "out";

        void validate() const;
    };

    // Parses the JSON experiment file; throws ConfigError with the offending key.
    ExperimentConfig load_config(const std::filesystem::path &path);
    ExperimentConfig parse_config(const std::string &json_text);
    std::string dump_config(const ExperimentConfig &config);

    // Shared per-experiment radiation models.
    struct ModelSet
    {
        std::shared_ptr<const SphericalHarmonicBasis> basis;
        std::shared_ptr<const PatternLibrary> library;

        RadiationModel model(Scheme s) const;
    };

    ModelSet build_models(const ExperimentConfig &config, std::vector<std::string> *warnings = nullptr);

    ScenarioConfig apply_sweep(ScenarioConfig scenario, SweepAxis axis, double value);

    struct TrialOutcome
    {
        Scheme scheme = Scheme::oa;
        double sweep_value = 0.0;
        int trial = 0;
        std::uint64_t seed = 0;
        bool ok = true;
        std::string error;
        SolverReport report;
        double wall_seconds = 0.0;
    };

    // One scenario draw solved by one scheme.
    TrialOutcome solve_trial(const ExperimentConfig &config, const ModelSet &models, Scheme scheme, SweepAxis axis,
                             double sweep_value, int trial);

    // All (scheme, value, trial) cells, dispatched to a worker pool and sorted.
    std::vector<TrialOutcome> run_cells(const ExperimentConfig &config, const ModelSet &models, SweepAxis axis,
                                        const std::vector<double> &values);

    // Writes results.csv, trace.json, summary.json and config.json into dir.
    void write_outputs(const std::filesystem::path &dir, const ExperimentConfig &config, SweepAxis axis,
                       const std::vector<TrialOutcome> &outcomes);

    std::string results_csv(SweepAxis axis, const std::vector<TrialOutcome> &outcomes);

    struct RunStatus
    {
        std::size_t rows = 0;
        std::size_t failures = 0;
    };

    RunStatus run_experiment(const ExperimentConfig &config);   // single cell
    RunStatus sweep_experiment(const ExperimentConfig &config); // configured sweep axis

    // Log-spaced beta_tilde grid; also writes tradeoff.csv with per-scheme means.
    RunStatus tradeoff_experiment(const ExperimentConfig &config);
    std::vector<double> tradeoff_grid(const TradeoffGrid &grid);

    struct TradeoffPoint
    {
        Scheme scheme;
        double beta_tilde = 0.0;
        double comm = 0.0;    // mean SINR (SUST) or sum rate (MUMT)
        double sensing = 0.0; // mean sum of SCNRs
    };

    std::vector<TradeoffPoint> tradeoff_points(Setting setting, const std::vector<TrialOutcome> &outcomes);

    // Re-solves trial `trial` of every configured scheme from dir/config.json and
    // writes element_patterns.csv, array_pattern.csv and markers.csv there.
    void export_beampattern(const std::filesystem::path &run_dir, int trial = 0, int ntheta = 37, int nphi = 72);

    struct PatternGrid
    {
        RVec theta;
        RVec phi;
        std::vector<RMat> element_gain; // per antenna, |G^(n)|^2 on (theta, phi)
        RMat array_power;               // sum_k |radiated field of beam k|^2
    };

    PatternGrid beampattern_grid(const RadiationModel &model, const Scenario &scenario,
                                 const TriHybridBeamformer &beamformer, int ntheta, int nphi);
}

#endif
