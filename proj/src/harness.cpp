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

#include "trihybrid/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <set>
#include <sstream>
#include <thread>
#include <tuple>

#include <json.hpp>

#include "trihybrid/metrics.hpp"

namespace trihybrid::harness
{
    using nlohmann::json;
    namespace fs = std::filesystem;

    namespace
    {
        const std::vector<std::pair<Scheme, std::string>> scheme_names{{Scheme::ra_model_i, "RA-AO-ClosedForm-I"},
                                                                        {Scheme::ra_model_ii, "RA-AO-BruteForce-II"},
                                                                        {Scheme::oa, "OA-HBF"},
                                                                        {Scheme::cosa, "CosA-HBF"}};

        const std::vector<std::pair<SweepAxis, std::string>> axis_names{{SweepAxis::none, "none"},
                                                                         {SweepAxis::power_dbm, "power_dbm"},
                                                                         {SweepAxis::beta_tilde, "beta_tilde"},
                                                                         {SweepAxis::n_rf, "n_rf"},
                                                                         {SweepAxis::n_tx, "n_tx"}};

        // Reads keys of one JSON object, rejecting anything not consumed.
        class ObjectReader
        {
        public:
            ObjectReader(const json &j, std::string where) : j_(j), where_(std::move(where))
            {
                if (!j_.is_object())
                    throw ConfigError(where_ + ": expected an object");
            }

            ~ObjectReader() noexcept(false)
            {
                if (std::uncaught_exceptions() > 0)
                    return;
                for (auto it = j_.begin(); it != j_.end(); ++it)
                    if (!seen_.count(it.key()))
                        throw ConfigError(path(it.key()) + ": unknown key");
            }

            const json *find(const std::string &key)
            {
                seen_.insert(key);
                auto it = j_.find(key);
                return it == j_.end() ? nullptr : &*it;
            }

            void number(const std::string &key, double &out)
            {
                if (const json *v = find(key))
                {
                    if (!v->is_number())
                        throw ConfigError(path(key) + ": expected a number");
                    out = v->get<double>();
                }
            }

            template <typename Int>
            void integer(const std::string &key, Int &out)
            {
                if (const json *v = find(key))
                {
                    if (!v->is_number_integer())
                        throw ConfigError(path(key) + ": expected an integer");
                    if constexpr (std::is_unsigned_v<Int>)
                    {
                        if (v->get<long long>() < 0)
                            throw ConfigError(path(key) + ": expected a nonnegative integer");
                    }
                    out = v->get<Int>();
                }
            }

            void string(const std::string &key, std::string &out)
            {
                if (const json *v = find(key))
                {
                    if (!v->is_string())
                        throw ConfigError(path(key) + ": expected a string");
                    out = v->get<std::string>();
                }
            }

            void range(const std::string &key, Range &out)
            {
                if (const json *v = find(key))
                {
                    if (!v->is_array() || v->size() != 2 || !(*v)[0].is_number() || !(*v)[1].is_number())
                        throw ConfigError(path(key) + ": expected [lo, hi]");
                    out = {(*v)[0].get<double>(), (*v)[1].get<double>()};
                }
            }

            std::string path(const std::string &key) const { return where_ + "." + key; }

        private:
            const json &j_;
            std::string where_;
            std::set<std::string> seen_;
        };

        void read_scenario(const json &j, ScenarioConfig &s)
        {
            ObjectReader r(j, "scenario");
            r.number("carrier_frequency", s.carrier_frequency);
            r.integer("n_tx", s.n_tx);
            r.integer("n_rx", s.n_rx);
            r.number("element_spacing", s.element_spacing);
            r.integer("n_users", s.n_users);
            r.integer("n_targets", s.n_targets);
            r.integer("n_scatterers", s.n_scatterers);
            r.integer("paths_per_user", s.paths_per_user);
            r.integer("n_rf", s.n_rf);
            r.range("user_distance", s.user_distance);
            r.range("target_distance", s.target_distance);
            r.range("scatterer_distance", s.scatterer_distance);
            r.range("target_rcs", s.target_rcs);
            r.range("scatterer_rcs", s.scatterer_rcs);
            r.range("path_loss_exponent", s.path_loss_exponent);
            r.number("noise_dbm", s.noise_dbm);
            r.number("power_dbm", s.power_dbm);
            r.number("beta_tilde", s.beta_tilde);
        }

        void read_hybrid(const json &j, HybridOptions &h, const std::string &where)
        {
            ObjectReader r(j, where);
            r.integer("max_iterations", h.max_iterations);
            r.number("tolerance", h.tolerance);
            r.number("armijo", h.armijo);
        }

        void read_solver(const json &j, ExperimentConfig &c)
        {
            ObjectReader r(j, "solver");
            if (const json *s = r.find("sust"))
            {
                ObjectReader q(*s, "solver.sust");
                q.integer("max_outer", c.sust.max_outer);
                q.number("outer_tolerance", c.sust.outer_tolerance);
                q.integer("max_em_sweeps", c.sust.max_em_sweeps);
                q.number("em_tolerance", c.sust.em_tolerance);
                q.integer("fd_scan_points", c.sust.fd_scan_points);
                q.integer("fd_golden_steps", c.sust.fd_golden_steps);
                q.integer("fd_max_refine", c.sust.fd_max_refine);
                q.number("fd_tolerance", c.sust.fd_tolerance);
            }
            if (const json *m = r.find("mumt"))
            {
                ObjectReader q(*m, "solver.mumt");
                q.integer("max_outer", c.mumt.max_outer);
                q.number("outer_tolerance", c.mumt.outer_tolerance);
                q.integer("max_fp_rounds", c.mumt.max_fp_rounds);
                q.number("fp_tolerance", c.mumt.fp_tolerance);
            }
            if (const json *h = r.find("hybrid"))
            {
                read_hybrid(*h, c.sust.hybrid, "solver.hybrid");
                c.mumt.hybrid = c.sust.hybrid;
            }
        }

        json range_json(const Range &r) { return json::array({r.lo, r.hi}); }

        std::string fmt(double x)
        {
            char buf[40];
            std::snprintf(buf, sizeof buf, "%.12e", x);
            return buf;
        }

        std::string join(const RVec &v)
        {
            std::string s;
            for (Eigen::Index i = 0; i < v.size(); ++i)
                s += (i ? ";" : "") + fmt(v[i]);
            return s;
        }

        // Keeps the CSV field free of separators.
        std::string sanitize(std::string s)
        {
            for (char &ch : s)
                if (ch == ',' || ch == '\n' || ch == '\r' || ch == '"')
                    ch = ' ';
            return s;
        }

        void write_file(const fs::path &path, const std::string &text)
        {
            std::ofstream out(path, std::ios::binary);
            if (!out)
                throw std::runtime_error("cannot write " + path.string());
            out << text;
        }

        double fd_hybrid_gap(const SolverReport &r)
        {
            const double scale = std::max(std::abs(r.fd.value), std::numeric_limits<double>::min());
            return (r.fd.value - r.hybrid.value) / scale;
        }

        bool finite_report(const SolverReport &r)
        {
            auto ok = [](double x) { return std::isfinite(x); };
            return ok(r.hybrid.value) && ok(r.fd.value) && ok(r.hybrid.sum_rate) && r.hybrid.scnr.allFinite() &&
                   r.hybrid.sinr.allFinite() && ok(r.hybrid_residual);
        }

        fs::path output_dir(const ExperimentConfig &c) { return fs::path(c.output); }

        RunStatus status_of(const std::vector<TrialOutcome> &outcomes)
        {
            RunStatus st;
            st.rows = outcomes.size();
            for (const auto &o : outcomes)
                st.failures += o.ok ? 0 : 1;
            return st;
        }

        double sensing_sum(const Objectives &o) { return o.scnr.sum(); }
    }

    std::string scheme_name(Scheme s)
    {
        for (const auto &[k, n] : scheme_names)
            if (k == s)
                return n;
        return "unknown";
    }

    Scheme parse_scheme(const std::string &name)
    {
        for (const auto &[k, n] : scheme_names)
            if (n == name)
                return k;
        throw ConfigError("unknown scheme '" + name + "'");
    }

    std::string setting_name(Setting s) { return s == Setting::sust ? "sust" : "mumt"; }

    Setting parse_setting(const std::string &name)
    {
        if (name == "sust")
            return Setting::sust;
        if (name == "mumt")
            return Setting::mumt;
        throw ConfigError("unknown setting '" + name + "' (expected sust or mumt)");
    }

    std::string axis_name(SweepAxis a)
    {
        for (const auto &[k, n] : axis_names)
            if (k == a)
                return n;
        return "unknown";
    }

    SweepAxis parse_axis(const std::string &name)
    {
        for (const auto &[k, n] : axis_names)
            if (n == name)
                return k;
        throw ConfigError("unknown sweep axis '" + name + "'");
    }

    void ExperimentConfig::validate() const
    {
        if (schemes.empty())
            throw ConfigError("schemes: must not be empty");
        if (trials <= 0)
            throw ConfigError("trials: must be positive");
        if (truncation_degree < 0)
            throw ConfigError("truncation_degree: must be nonnegative");
        if (library.size <= 0)
            throw ConfigError("library.size: must be positive");
        if (workers < 0)
            throw ConfigError("workers: must be nonnegative");
        if (axis != SweepAxis::none && values.empty())
            throw ConfigError("sweep.values: must not be empty for axis " + axis_name(axis));
        if (tradeoff.points < 2 || !(tradeoff.beta_min > 0.0) || !(tradeoff.beta_max <= 1.0) ||
            !(tradeoff.beta_min < tradeoff.beta_max))
            throw ConfigError("tradeoff: need 0 < beta_min < beta_max <= 1 and at least 2 points");

        const auto &s = scenario;
        if (s.n_tx <= 0 || s.n_rx <= 0)
            throw ConfigError("scenario: array sizes must be positive");
        if (s.n_users <= 0 || s.n_targets <= 0 || s.n_scatterers < 0 || s.paths_per_user <= 0)
            throw ConfigError("scenario: need at least one CU, one target and one path per CU");
        if (s.n_rf < s.n_users)
            throw ConfigError("scenario.n_rf: must be at least n_users");
        if (!(s.carrier_frequency > 0.0) || !(s.element_spacing > 0.0))
            throw ConfigError("scenario: carrier frequency and spacing must be positive");
        if (!(s.beta_tilde >= 0.0 && s.beta_tilde <= 1.0))
            throw ConfigError("scenario.beta_tilde: must lie in [0, 1]");
        for (const Range *r : {&s.user_distance, &s.target_distance, &s.scatterer_distance, &s.target_rcs,
                               &s.scatterer_rcs, &s.path_loss_exponent})
            if (!(r->lo > 0.0) || !(r->lo <= r->hi))
                throw ConfigError("scenario: ranges need 0 < lo <= hi");
        if (setting == Setting::sust && (s.n_users != 1 || s.n_targets != 1))
            throw ConfigError("setting sust: needs n_users = n_targets = 1");
        for (double v : values)
        {
            if (!std::isfinite(v))
                throw ConfigError("sweep.values: must be finite");
            if (axis == SweepAxis::beta_tilde && !(v >= 0.0 && v <= 1.0))
                throw ConfigError("sweep.values: beta_tilde must lie in [0, 1]");
            if ((axis == SweepAxis::n_rf || axis == SweepAxis::n_tx) && (v != std::floor(v) || v < 1.0))
                throw ConfigError("sweep.values: " + axis_name(axis) + " needs positive integers");
            if (axis == SweepAxis::n_rf && v < s.n_users)
                throw ConfigError("sweep.values: n_rf must be at least n_users");
        }
    }

    ExperimentConfig parse_config(const std::string &text)
    {
        json j;
        try
        {
            j = json::parse(text);
        }
        catch (const json::parse_error &e)
        {
            throw ConfigError(std::string("malformed JSON: ") + e.what());
        }

        ExperimentConfig c;
        try
        {
            ObjectReader r(j, "config");
            std::string setting = setting_name(c.setting);
            r.string("setting", setting);
            c.setting = parse_setting(setting);
            if (const json *v = r.find("schemes"))
            {
                if (!v->is_array())
                    throw ConfigError("config.schemes: expected an array of names");
                c.schemes.clear();
                for (const auto &e : *v)
                {
                    if (!e.is_string())
                        throw ConfigError("config.schemes: expected an array of names");
                    c.schemes.push_back(parse_scheme(e.get<std::string>()));
                }
            }
            r.integer("trials", c.trials);
            r.integer("seed", c.seed);
            r.integer("truncation_degree", c.truncation_degree);
            r.integer("workers", c.workers);
            r.string("output", c.output);
            if (const json *v = r.find("scenario"))
                read_scenario(*v, c.scenario);
            if (const json *v = r.find("library"))
            {
                ObjectReader q(*v, "library");
                q.integer("size", c.library.size);
                q.integer("seed", c.library.seed);
                q.string("path", c.library.path);
            }
            if (const json *v = r.find("sweep"))
            {
                ObjectReader q(*v, "sweep");
                std::string axis = "none";
                q.string("axis", axis);
                c.axis = parse_axis(axis);
                if (const json *vals = q.find("values"))
                {
                    if (!vals->is_array())
                        throw ConfigError("sweep.values: expected an array of numbers");
                    for (const auto &e : *vals)
                    {
                        if (!e.is_number())
                            throw ConfigError("sweep.values: expected an array of numbers");
                        c.values.push_back(e.get<double>());
                    }
                }
            }
            if (const json *v = r.find("tradeoff"))
            {
                ObjectReader q(*v, "tradeoff");
                q.number("beta_min", c.tradeoff.beta_min);
                q.number("beta_max", c.tradeoff.beta_max);
                q.integer("points", c.tradeoff.points);
            }
            if (const json *v = r.find("solver"))
                read_solver(*v, c);
        }
        catch (const json::exception &e)
        {
            throw ConfigError(std::string("config: ") + e.what());
        }
        c.validate();
        return c;
    }

    ExperimentConfig load_config(const fs::path &path)
    {
        std::ifstream in(path, std::ios::binary);
        if (!in)
            throw ConfigError("cannot open config " + path.string());
        std::ostringstream ss;
        ss << in.rdbuf();
        try
        {
            return parse_config(ss.str());
        }
        catch (const ConfigError &e)
        {
            throw ConfigError(path.string() + ": " + e.what());
        }
    }

    std::string dump_config(const ExperimentConfig &c)
    {
        const auto &s = c.scenario;
        json schemes = json::array();
        for (Scheme sc : c.schemes)
            schemes.push_back(scheme_name(sc));
        json hybrid{{"max_iterations", c.sust.hybrid.max_iterations},
                    {"tolerance", c.sust.hybrid.tolerance},
                    {"armijo", c.sust.hybrid.armijo}};
        json j{{"setting", setting_name(c.setting)},
               {"schemes", schemes},
               {"trials", c.trials},
               {"seed", c.seed},
               {"truncation_degree", c.truncation_degree},
               {"workers", c.workers},
               {"output", c.output},
               {"scenario",
                {{"carrier_frequency", s.carrier_frequency},
                 {"n_tx", s.n_tx},
                 {"n_rx", s.n_rx},
                 {"element_spacing", s.element_spacing},
                 {"n_users", s.n_users},
                 {"n_targets", s.n_targets},
                 {"n_scatterers", s.n_scatterers},
                 {"paths_per_user", s.paths_per_user},
                 {"n_rf", s.n_rf},
                 {"user_distance", range_json(s.user_distance)},
                 {"target_distance", range_json(s.target_distance)},
                 {"scatterer_distance", range_json(s.scatterer_distance)},
                 {"target_rcs", range_json(s.target_rcs)},
                 {"scatterer_rcs", range_json(s.scatterer_rcs)},
                 {"path_loss_exponent", range_json(s.path_loss_exponent)},
                 {"noise_dbm", s.noise_dbm},
                 {"power_dbm", s.power_dbm},
                 {"beta_tilde", s.beta_tilde}}},
               {"library", {{"size", c.library.size}, {"seed", c.library.seed}, {"path", c.library.path}}},
               {"sweep", {{"axis", axis_name(c.axis)}, {"values", c.values}}},
               {"tradeoff",
                {{"beta_min", c.tradeoff.beta_min},
                 {"beta_max", c.tradeoff.beta_max},
                 {"points", c.tradeoff.points}}},
               {"solver",
                {{"sust",
                  {{"max_outer", c.sust.max_outer},
                   {"outer_tolerance", c.sust.outer_tolerance},
                   {"max_em_sweeps", c.sust.max_em_sweeps},
                   {"em_tolerance", c.sust.em_tolerance},
                   {"fd_scan_points", c.sust.fd_scan_points},
                   {"fd_golden_steps", c.sust.fd_golden_steps},
                   {"fd_max_refine", c.sust.fd_max_refine},
                   {"fd_tolerance", c.sust.fd_tolerance}}},
                 {"mumt",
                  {{"max_outer", c.mumt.max_outer},
                   {"outer_tolerance", c.mumt.outer_tolerance},
                   {"max_fp_rounds", c.mumt.max_fp_rounds},
                   {"fp_tolerance", c.mumt.fp_tolerance}}},
                 {"hybrid", hybrid}}}};
        return j.dump(2) + "\n";
    }

    RadiationModel ModelSet::model(Scheme s) const
    {
        switch (s)
        {
        case Scheme::ra_model_i:
            return RadiationModel::harmonic(basis);
        case Scheme::ra_model_ii:
            return RadiationModel::library(library);
        case Scheme::oa:
            return RadiationModel::fixed(FixedPattern::omni);
        case Scheme::cosa:
            return RadiationModel::fixed(FixedPattern::sine);
        }
        throw std::logic_error("unhandled scheme");
    }

    ModelSet build_models(const ExperimentConfig &c, std::vector<std::string> *warnings)
    {
        ModelSet m;
        m.basis = std::make_shared<SphericalHarmonicBasis>(c.truncation_degree);
        const bool needs_library =
            std::find(c.schemes.begin(), c.schemes.end(), Scheme::ra_model_ii) != c.schemes.end();
        if (!needs_library)
            return m;
        if (!c.library.path.empty())
        {
            try
            {
                m.library = std::make_shared<PatternLibrary>(load_pattern_library(c.library.path, warnings));
            }
            catch (const std::exception &e)
            {
                throw ConfigError(std::string("library.path: ") + e.what());
            }
        }
        else
            m.library = std::make_shared<PatternLibrary>(synth_pattern_library(c.library.size, c.library.seed, *m.basis));
        return m;
    }

    ScenarioConfig apply_sweep(ScenarioConfig s, SweepAxis axis, double value)
    {
        switch (axis)
        {
        case SweepAxis::none:
            break;
        case SweepAxis::power_dbm:
            s.power_dbm = value;
            break;
        case SweepAxis::beta_tilde:
            s.beta_tilde = value;
            break;
        case SweepAxis::n_rf:
            s.n_rf = static_cast<int>(std::lround(value));
            break;
        case SweepAxis::n_tx:
            s.n_tx = static_cast<int>(std::lround(value));
            break;
        }
        return s;
    }

    TrialOutcome solve_trial(const ExperimentConfig &c, const ModelSet &models, Scheme scheme, SweepAxis axis,
                             double value, int trial)
    {
        TrialOutcome o;
        o.scheme = scheme;
        o.sweep_value = value;
        o.trial = trial;
        o.seed = c.seed + static_cast<std::uint64_t>(trial);
        const auto t0 = std::chrono::steady_clock::now();
        try
        {
            const Scenario scenario = generate_scenario(apply_sweep(c.scenario, axis, value), o.seed);
            const EmChannelSet ch = build_em_channels(scenario, models.model(scheme));
            if (c.setting == Setting::sust)
            {
                SustOptions opt = c.sust;
                opt.hybrid.seed = o.seed;
                o.report = run_sust(ch, scenario.n_rf, opt);
            }
            else
            {
                MumtOptions opt = c.mumt;
                opt.hybrid.seed = o.seed;
                o.report = run_mumt(ch, scenario.n_rf, opt);
            }
            if (!finite_report(o.report))
                throw std::runtime_error("non-finite metrics");
        }
        catch (const std::exception &e)
        {
            o.ok = false;
            o.error = sanitize(e.what());
        }
        o.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        return o;
    }

    std::vector<TrialOutcome> run_cells(const ExperimentConfig &c, const ModelSet &models, SweepAxis axis,
                                        const std::vector<double> &values)
    {
        struct Cell
        {
            Scheme scheme;
            double value;
            int trial;
        };
        std::vector<Cell> cells;
        const std::vector<double> vals = axis == SweepAxis::none ? std::vector<double>{0.0} : values;
        for (Scheme s : c.schemes)
            for (double v : vals)
                for (int t = 0; t < c.trials; ++t)
                    cells.push_back({s, v, t});

        std::vector<TrialOutcome> out(cells.size());
        std::atomic<std::size_t> next{0};
        auto worker = [&]
        {
            for (std::size_t i = next++; i < cells.size(); i = next++)
                out[i] = solve_trial(c, models, cells[i].scheme, axis, cells[i].value, cells[i].trial);
        };
        const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
        const std::size_t n_workers =
            std::min<std::size_t>(cells.size(), c.workers > 0 ? static_cast<std::size_t>(c.workers) : hw);
        if (n_workers <= 1)
            worker();
        else
        {
            std::vector<std::jthread> pool;
            for (std::size_t w = 0; w < n_workers; ++w)
                pool.emplace_back(worker);
        }

        std::sort(out.begin(), out.end(), [](const TrialOutcome &a, const TrialOutcome &b)
                  { return std::tuple(a.scheme, a.sweep_value, a.trial) < std::tuple(b.scheme, b.sweep_value, b.trial); });
        return out;
    }

    std::string results_csv(SweepAxis axis, const std::vector<TrialOutcome> &outcomes)
    {
        std::string s = "scheme,axis,value,trial,seed,status,objective,objective_fd,sinr,sum_rate,scnr,scnr_sum,"
                        "iterations,fd_hybrid_gap,hybrid_residual\n";
        for (const auto &o : outcomes)
        {
            s += scheme_name(o.scheme) + "," + axis_name(axis) + "," + fmt(o.sweep_value) + "," +
                 std::to_string(o.trial) + "," + std::to_string(o.seed) + ",";
            if (!o.ok)
            {
                s += "error:" + o.error + ",0,0,0,0,0,0,0,0,0\n";
                continue;
            }
            const auto &r = o.report;
            s += std::string("ok,") + fmt(r.hybrid.value) + "," + fmt(r.fd.value) + "," + join(r.hybrid.sinr) + "," +
                 fmt(r.hybrid.sum_rate) + "," + join(r.hybrid.scnr) + "," + fmt(sensing_sum(r.hybrid)) + "," +
                 std::to_string(r.outer_iterations) + "," + fmt(fd_hybrid_gap(r)) + "," + fmt(r.hybrid_residual) +
                 "\n";
        }
        return s;
    }

    void write_outputs(const fs::path &dir, const ExperimentConfig &c, SweepAxis axis,
                       const std::vector<TrialOutcome> &outcomes)
    {
        fs::create_directories(dir);
        write_file(dir / "results.csv", results_csv(axis, outcomes));
        write_file(dir / "config.json", dump_config(c));

        json runs = json::array();
        for (const auto &o : outcomes)
        {
            json r{{"scheme", scheme_name(o.scheme)},
                   {"value", o.sweep_value},
                   {"trial", o.trial},
                   {"seed", o.seed},
                   {"status", o.ok ? "ok" : "error"},
                   {"wall_seconds", o.wall_seconds}};
            if (!o.ok)
                r["error"] = o.error;
            else
            {
                r["objective_trace"] = o.report.trace;
                r["varsigma"] = o.report.varsigma;
                r["em_varsigma"] = o.report.em_varsigma;
                r["outer_iterations"] = o.report.outer_iterations;
                r["converged"] = o.report.converged;
                r["warnings"] = o.report.warnings;
            }
            runs.push_back(std::move(r));
        }
        write_file(dir / "trace.json",
                   json{{"setting", setting_name(c.setting)}, {"axis", axis_name(axis)}, {"runs", runs}}.dump(2) + "\n");

        // mean / best / worst per (scheme, value) cell
        std::map<std::pair<Scheme, double>, std::vector<const TrialOutcome *>> cells;
        for (const auto &o : outcomes)
            cells[{o.scheme, o.sweep_value}].push_back(&o);
        json cj = json::array();
        for (const auto &[key, list] : cells)
        {
            auto stats = [&](auto metric)
            {
                double sum = 0.0, best = -std::numeric_limits<double>::infinity(),
                       worst = std::numeric_limits<double>::infinity();
                int n = 0;
                for (const auto *o : list)
                {
                    if (!o->ok)
                        continue;
                    const double x = metric(o->report);
                    sum += x;
                    best = std::max(best, x);
                    worst = std::min(worst, x);
                    ++n;
                }
                if (n == 0)
                    return json(nullptr);
                return json{{"mean", sum / n}, {"best", best}, {"worst", worst}};
            };
            int failures = 0;
            for (const auto *o : list)
                failures += o->ok ? 0 : 1;
            cj.push_back({{"scheme", scheme_name(key.first)},
                          {"value", key.second},
                          {"trials", list.size()},
                          {"failures", failures},
                          {"objective", stats([](const SolverReport &r) { return r.hybrid.value; })},
                          {"objective_fd", stats([](const SolverReport &r) { return r.fd.value; })},
                          {"sum_rate", stats([](const SolverReport &r) { return r.hybrid.sum_rate; })},
                          {"scnr_sum", stats([](const SolverReport &r) { return sensing_sum(r.hybrid); })}});
        }
        write_file(dir / "summary.json",
                   json{{"setting", setting_name(c.setting)}, {"axis", axis_name(axis)}, {"cells", cj}}.dump(2) + "\n");
    }

    RunStatus run_experiment(const ExperimentConfig &c)
    {
        const ModelSet models = build_models(c);
        const auto outcomes = run_cells(c, models, SweepAxis::none, {});
        write_outputs(output_dir(c), c, SweepAxis::none, outcomes);
        return status_of(outcomes);
    }

    RunStatus sweep_experiment(const ExperimentConfig &c)
    {
        if (c.axis == SweepAxis::none)
            throw ConfigError("sweep: config has no sweep axis");
        const ModelSet models = build_models(c);
        const auto outcomes = run_cells(c, models, c.axis, c.values);
        write_outputs(output_dir(c), c, c.axis, outcomes);
        return status_of(outcomes);
    }

    std::vector<double> tradeoff_grid(const TradeoffGrid &g)
    {
        std::vector<double> v(static_cast<std::size_t>(g.points));
        const double a = std::log10(g.beta_min), b = std::log10(g.beta_max);
        for (int i = 0; i < g.points; ++i)
            v[static_cast<std::size_t>(i)] = std::pow(10.0, a + (b - a) * i / (g.points - 1));
        v.back() = g.beta_max;
        return v;
    }

    std::vector<TradeoffPoint> tradeoff_points(Setting setting, const std::vector<TrialOutcome> &outcomes)
    {
        std::map<std::pair<Scheme, double>, std::tuple<double, double, int>> acc;
        for (const auto &o : outcomes)
        {
            if (!o.ok)
                continue;
            auto &[comm, sens, n] = acc[{o.scheme, o.sweep_value}];
            comm += setting == Setting::sust ? o.report.hybrid.sinr[0] : o.report.hybrid.sum_rate;
            sens += sensing_sum(o.report.hybrid);
            ++n;
        }
        std::vector<TradeoffPoint> pts;
        for (const auto &[key, v] : acc)
        {
            const auto &[comm, sens, n] = v;
            pts.push_back({key.first, key.second, comm / n, sens / n});
        }
        return pts;
    }

    RunStatus tradeoff_experiment(const ExperimentConfig &c)
    {
        const ModelSet models = build_models(c);
        const auto outcomes = run_cells(c, models, SweepAxis::beta_tilde, tradeoff_grid(c.tradeoff));
        const fs::path dir = output_dir(c);
        write_outputs(dir, c, SweepAxis::beta_tilde, outcomes);
        std::string csv = c.setting == Setting::sust ? "scheme,beta_tilde,sinr,scnr_sum\n"
                                                     : "scheme,beta_tilde,sum_rate,scnr_sum\n";
        auto pts = tradeoff_points(c.setting, outcomes);
        std::stable_sort(pts.begin(), pts.end(),
                         [](const TradeoffPoint &a, const TradeoffPoint &b) { return a.beta_tilde < b.beta_tilde; });
        for (const auto &p : pts)
            csv += scheme_name(p.scheme) + "," + fmt(p.beta_tilde) + "," + fmt(p.comm) + "," + fmt(p.sensing) + "\n";
        write_file(dir / "tradeoff.csv", csv);
        return status_of(outcomes);
    }

    PatternGrid beampattern_grid(const RadiationModel &model, const Scenario &scenario,
                                 const TriHybridBeamformer &bf, int ntheta, int nphi)
    {
        PatternGrid g;
        g.theta = RVec::LinSpaced(ntheta, 0.0, pi);
        g.phi.resize(nphi);
        for (int j = 0; j < nphi; ++j)
            g.phi[j] = 2.0 * pi * j / nphi;
        const int n_tx = scenario.tx.size();
        g.element_gain.assign(static_cast<std::size_t>(n_tx), RMat::Zero(ntheta, nphi));
        g.array_power = RMat::Zero(ntheta, nphi);
        const CMat F = bf.hybrid();
        for (int i = 0; i < ntheta; ++i)
            for (int j = 0; j < nphi; ++j)
            {
                const double th = g.theta[i], ph = g.phi[j];
                const CVec a = steering_vector(th, ph, scenario.tx, scenario.wavelength);
                CVec w(n_tx); // per-antenna composite response G_n a_n
                for (int n = 0; n < n_tx; ++n)
                {
                    const cplx G = model.realized_gain(bf.em[static_cast<std::size_t>(n)], th, ph);
                    g.element_gain[static_cast<std::size_t>(n)](i, j) = std::norm(G);
                    w[n] = G * a[n];
                }
                double p = 0.0;
                for (Eigen::Index k = 0; k < F.cols(); ++k)
                    p += std::norm(w.dot(F.col(k)));
                g.array_power(i, j) = p;
            }
        return g;
    }

    void export_beampattern(const fs::path &run_dir, int trial, int ntheta, int nphi)
    {
        const ExperimentConfig c = load_config(run_dir / "config.json");
        if (trial < 0)
            throw ConfigError("beampattern: trial must be nonnegative");
        if (ntheta < 2 || nphi < 1)
            throw ConfigError("beampattern: grid needs ntheta >= 2 and nphi >= 1");
        const ModelSet models = build_models(c);
        const std::uint64_t seed = c.seed + static_cast<std::uint64_t>(trial);
        const Scenario scenario = generate_scenario(c.scenario, seed);

        std::string elements = "scheme,antenna,theta,phi,gain\n";
        std::string array = "scheme,theta,phi,power\n";
        for (Scheme s : c.schemes)
        {
            const TrialOutcome o = solve_trial(c, models, s, SweepAxis::none, 0.0, trial);
            if (!o.ok)
                throw std::runtime_error(scheme_name(s) + ": " + o.error);
            const PatternGrid g = beampattern_grid(models.model(s), scenario, o.report.beamformer, ntheta, nphi);
            for (std::size_t n = 0; n < g.element_gain.size(); ++n)
                for (int i = 0; i < ntheta; ++i)
                    for (int j = 0; j < nphi; ++j)
                        elements += scheme_name(s) + "," + std::to_string(n) + "," + fmt(g.theta[i]) + "," +
                                    fmt(g.phi[j]) + "," + fmt(g.element_gain[n](i, j)) + "\n";
            for (int i = 0; i < ntheta; ++i)
                for (int j = 0; j < nphi; ++j)
                    array += scheme_name(s) + "," + fmt(g.theta[i]) + "," + fmt(g.phi[j]) + "," +
                             fmt(g.array_power(i, j)) + "\n";
        }

        std::string markers = "kind,index,path,theta,phi,distance\n";
        for (int k = 0; k < scenario.n_users(); ++k)
            for (std::size_t l = 0; l < scenario.users[static_cast<std::size_t>(k)].size(); ++l)
            {
                const auto &p = scenario.users[static_cast<std::size_t>(k)][l];
                markers += "user," + std::to_string(k) + "," + std::to_string(l) + "," + fmt(p.theta) + "," +
                           fmt(p.phi) + "," + fmt(p.distance) + "\n";
            }
        auto reflectors = [&](const std::vector<Reflector> &list, const std::string &kind)
        {
            for (std::size_t i = 0; i < list.size(); ++i)
                markers += kind + "," + std::to_string(i) + ",0," + fmt(list[i].theta) + "," + fmt(list[i].phi) + "," +
                           fmt(list[i].distance) + "\n";
        };
        reflectors(scenario.targets, "target");
        reflectors(scenario.scatterers, "scatterer");

        write_file(run_dir / "element_patterns.csv", elements);
        write_file(run_dir / "array_pattern.csv", array);
        write_file(run_dir / "markers.csv", markers);
    }
}
