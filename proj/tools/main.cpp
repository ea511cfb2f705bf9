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

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "trihybrid/harness.hpp"

namespace th = trihybrid::harness;

namespace
{
    struct Overrides
    {
        std::optional<std::uint64_t> seed;
        std::optional<int> trials;
        std::optional<std::string> out;
        std::vector<std::string> schemes;
        std::optional<std::string> model;
    };

    void add_common(CLI::App *cmd, Overrides &o)
    {
        cmd->add_option("--seed", o.seed, "Base scenario seed (trial t uses seed + t)");
        cmd->add_option("--trials", o.trials, "Monte Carlo trials per cell")->check(CLI::PositiveNumber);
        cmd->add_option("--out", o.out, "Output directory");
        cmd->add_option("--scheme", o.schemes, "Restrict to these schemes (repeatable)");
        cmd->add_option("--model", o.model, "Problem setting: sust or mumt");
    }

    th::ExperimentConfig configure(const std::string &path, const Overrides &o)
    {
        th::ExperimentConfig c = th::load_config(path);
        if (o.seed)
            c.seed = *o.seed;
        if (o.trials)
            c.trials = *o.trials;
        if (o.out)
            c.output = *o.out;
        if (!o.schemes.empty())
        {
            c.schemes.clear();
            for (const auto &s : o.schemes)
                c.schemes.push_back(th::parse_scheme(s));
        }
        if (o.model)
            c.setting = th::parse_setting(*o.model);
        c.validate();
        return c;
    }

    int report(const th::RunStatus &st, const std::string &dir)
    {
        std::cout << st.rows << " rows written to " << dir;
        if (st.failures)
            std::cout << ", " << st.failures << " failed trials";
        std::cout << "\n";
        return st.failures ? 1 : 0;
    }
}

int main(int argc, char **argv)
{
    CLI::App app{"Tri-hybrid ISAC beamforming experiments"};
    app.require_subcommand(1);

    std::string config_path;
    Overrides run_o, sweep_o, trade_o;

    auto *run = app.add_subcommand("run", "Solve every scheme on the configured scenario");
    run->add_option("config", config_path, "Experiment JSON")->required();
    add_common(run, run_o);

    auto *sweep = app.add_subcommand("sweep", "Sweep the configured axis");
    sweep->add_option("config", config_path, "Experiment JSON")->required();
    add_common(sweep, sweep_o);

    auto *tradeoff = app.add_subcommand("tradeoff", "Sweep beta_tilde over a log grid");
    tradeoff->add_option("config", config_path, "Experiment JSON")->required();
    add_common(tradeoff, trade_o);

    std::string run_dir;
    int trial = 0, ntheta = 37, nphi = 72;
    auto *beam = app.add_subcommand("beampattern", "Tabulate element and array patterns of a finished run");
    beam->add_option("run-dir", run_dir, "Directory holding config.json")->required();
    beam->add_option("--trial", trial, "Trial index to re-solve")->check(CLI::NonNegativeNumber);
    beam->add_option("--ntheta", ntheta, "Polar grid points")->check(CLI::Range(2, 100000));
    beam->add_option("--nphi", nphi, "Azimuth grid points")->check(CLI::Range(1, 100000));

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError &e)
    {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try
    {
        if (*run)
        {
            const auto c = configure(config_path, run_o);
            return report(th::run_experiment(c), c.output);
        }
        if (*sweep)
        {
            const auto c = configure(config_path, sweep_o);
            return report(th::sweep_experiment(c), c.output);
        }
        if (*tradeoff)
        {
            const auto c = configure(config_path, trade_o);
            return report(th::tradeoff_experiment(c), c.output);
        }
        th::export_beampattern(run_dir, trial, ntheta, nphi);
        std::cout << "patterns written to " << run_dir << "\n";
        return 0;
    }
    catch (const th::ConfigError &e)
    {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    }
    catch (const std::exception &e)
    {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
