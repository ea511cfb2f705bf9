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

#include "trihybrid/channel.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "trihybrid/random.hpp"

namespace trihybrid
{
    namespace
    {
        void check_angles(double theta, double phi, const char *what)
        {
            if (!(theta >= 0.0 && theta <= pi) || !(phi >= 0.0 && phi < 2.0 * pi))
                throw std::invalid_argument(std::string(what) + ": angle outside theta in [0, pi], phi in [0, 2 pi)");
        }

        // v(theta, phi) (x) 1 (.) (alpha a (x) 1) in antenna-major layout
        void accumulate_em(CVec &out, const CVec &v, cplx alpha, const CVec &a)
        {
            const Eigen::Index dim = v.size();
            for (Eigen::Index n = 0; n < a.size(); ++n)
                out.segment(n * dim, dim) += (alpha * a[n]) * v;
        }
    }

    void Scenario::validate() const
    {
        if (tx.nx < 1 || tx.ny < 1 || rx.nx < 1 || rx.ny < 1)
            throw std::invalid_argument("scenario: array dimensions must be positive");
        if (!(tx.dx > 0.0 && tx.dy > 0.0 && rx.dx > 0.0 && rx.dy > 0.0 && wavelength > 0.0))
            throw std::invalid_argument("scenario: spacings and wavelength must be positive");
        if (!(beta_tilde >= 0.0 && beta_tilde <= 1.0))
            throw std::invalid_argument("scenario: beta_tilde must lie in [0, 1]");
        if (!(noise_power > 0.0 && power_budget > 0.0))
            throw std::invalid_argument("scenario: noise power and power budget must be positive");
        if (n_rf < 1)
            throw std::invalid_argument("scenario: n_rf must be positive");
        for (const auto &u : users)
        {
            if (u.empty())
                throw std::invalid_argument("scenario: every user needs at least one path");
            for (const auto &p : u)
            {
                check_angles(p.theta, p.phi, "scenario");
                if (!(p.distance > 0.0))
                    throw std::invalid_argument("scenario: path distances must be positive");
            }
        }
        for (const auto *list : {&targets, &scatterers})
            for (const auto &e : *list)
            {
                check_angles(e.theta, e.phi, "scenario");
                if (!(e.distance > 0.0 && e.rcs > 0.0))
                    throw std::invalid_argument("scenario: reflector distance and RCS must be positive");
            }
    }

    double dbm_to_watt(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }

    ArrayGeometry planar_array(int n, double spacing)
    {
        if (n < 1)
            throw std::invalid_argument("planar_array: element count must be positive");
        int nx = static_cast<int>(std::floor(std::sqrt(static_cast<double>(n))));
        while (n % nx != 0)
            --nx;
        return ArrayGeometry{nx, n / nx, spacing, spacing};
    }

    Scenario generate_scenario(const ScenarioConfig &cfg, std::uint64_t seed)
    {
        if (cfg.n_users < 0 || cfg.n_targets < 0 || cfg.n_scatterers < 0 || cfg.paths_per_user < 1)
            throw std::invalid_argument("generate_scenario: entity counts out of range");
        if (!(cfg.carrier_frequency > 0.0))
            throw std::invalid_argument("generate_scenario: carrier frequency must be positive");

        Scenario sc;
        sc.tx = planar_array(cfg.n_tx, cfg.element_spacing);
        sc.rx = planar_array(cfg.n_rx, cfg.element_spacing);
        sc.wavelength = 299792458.0 / cfg.carrier_frequency;
        sc.noise_power = dbm_to_watt(cfg.noise_dbm);
        sc.power_budget = dbm_to_watt(cfg.power_dbm);
        sc.beta_tilde = cfg.beta_tilde;
        sc.n_rf = cfg.n_rf;
        sc.seed = seed;

        Rng rng(seed);
        sc.path_loss_exponent = rng.uniform(cfg.path_loss_exponent.lo, cfg.path_loss_exponent.hi);
        auto draw_theta = [&]() { return rng.uniform(0.0, 0.5 * pi); };
        auto draw_phi = [&]() { return rng.uniform(0.0, 2.0 * pi); };

        sc.users.resize(static_cast<std::size_t>(cfg.n_users));
        for (auto &u : sc.users)
        {
            u.resize(static_cast<std::size_t>(cfg.paths_per_user));
            for (auto &p : u)
            {
                p.theta = draw_theta();
                p.phi = draw_phi();
                p.distance = rng.uniform(cfg.user_distance.lo, cfg.user_distance.hi);
                p.phase = draw_phi();
            }
        }
        auto draw_reflector = [&](const Range &dist, const Range &rcs)
        {
            Reflector r;
            r.theta = draw_theta();
            r.phi = draw_phi();
            r.distance = rng.uniform(dist.lo, dist.hi);
            r.phase = draw_phi();
            r.rcs = rng.uniform(rcs.lo, rcs.hi);
            return r;
        };
        for (int i = 0; i < cfg.n_targets; ++i)
            sc.targets.push_back(draw_reflector(cfg.target_distance, cfg.target_rcs));
        for (int i = 0; i < cfg.n_scatterers; ++i)
            sc.scatterers.push_back(draw_reflector(cfg.scatterer_distance, cfg.scatterer_rcs));
        sc.validate();
        return sc;
    }

    CVec steering_vector(double theta, double phi, int nx, int ny, double dx, double dy, double wavelength)
    {
        const double kx = -2.0 * pi / wavelength * dx * std::sin(theta) * std::cos(phi);
        const double ky = -2.0 * pi / wavelength * dy * std::sin(theta) * std::sin(phi);
        CVec a(nx * ny);
        for (int ix = 0; ix < nx; ++ix)
            for (int iy = 0; iy < ny; ++iy)
                a[ix * ny + iy] = std::exp(j_unit * (kx * ix + ky * iy));
        return a;
    }

    CVec steering_vector(double theta, double phi, const ArrayGeometry &array, double wavelength)
    {
        return steering_vector(theta, phi, array.nx, array.ny, array.dx, array.dy, wavelength);
    }

    cplx comm_path_gain(double distance, double path_loss_exponent, double wavelength, double phase)
    {
        if (!(distance > 0.0))
            throw DomainError("comm_path_gain: distance must be positive");
        const double amp =
            std::sqrt(wavelength * wavelength / ((4.0 * pi) * (4.0 * pi) * std::pow(distance, path_loss_exponent)));
        return amp * std::exp(j_unit * phase);
    }

    cplx sensing_gain(double distance, double rcs, double wavelength, double phase)
    {
        if (!(distance > 0.0) || !(rcs > 0.0) || !(wavelength > 0.0))
            throw DomainError("sensing_gain: distance, RCS and wavelength must be positive");
        const double fp3 = std::pow(4.0 * pi, 3);
        const double amp = std::sqrt(wavelength * wavelength * rcs / (fp3 * std::pow(distance, 4)));
        return amp * std::exp(j_unit * phase);
    }

    CVec build_comm_em_channel(const Scenario &scenario, int user, const RadiationModel &model)
    {
        const auto &paths = scenario.users.at(static_cast<std::size_t>(user));
        if (paths.empty())
            throw std::invalid_argument("build_comm_em_channel: empty path list");
        const int nt = scenario.tx.size();
        const int dim = model.dim();
        CVec h = CVec::Zero(static_cast<Eigen::Index>(nt) * dim);
        for (const auto &p : paths)
        {
            const cplx alpha = comm_path_gain(p.distance, scenario.path_loss_exponent, scenario.wavelength, p.phase);
            accumulate_em(h, model.eval(p.theta, p.phi), alpha,
                          steering_vector(p.theta, p.phi, scenario.tx, scenario.wavelength));
        }
        return h * std::sqrt(static_cast<double>(nt) / static_cast<double>(paths.size()));
    }

    std::pair<CVec, CVec> build_sensing_em_channels(const Scenario &scenario, const Reflector &e,
                                                    const RadiationModel &tx_model, const RadiationModel &rx_model)
    {
        const cplx alpha = std::sqrt(sensing_gain(e.distance, e.rcs, scenario.wavelength, e.phase));
        CVec fwd = CVec::Zero(static_cast<Eigen::Index>(scenario.tx.size()) * tx_model.dim());
        CVec bwd = CVec::Zero(static_cast<Eigen::Index>(scenario.rx.size()) * rx_model.dim());
        accumulate_em(fwd, tx_model.eval(e.theta, e.phi), alpha,
                      steering_vector(e.theta, e.phi, scenario.tx, scenario.wavelength));
        accumulate_em(bwd, rx_model.eval(e.theta, e.phi), alpha,
                      steering_vector(e.theta, e.phi, scenario.rx, scenario.wavelength));
        return {fwd, bwd};
    }

    CMat assemble_F_EM(const EmCoefficients &coeffs)
    {
        if (coeffs.empty())
            throw std::invalid_argument("assemble_F_EM: no antennas");
        const Eigen::Index dim = coeffs.front().size();
        const auto nt = static_cast<Eigen::Index>(coeffs.size());
        CMat F = CMat::Zero(nt * dim, nt);
        for (Eigen::Index n = 0; n < nt; ++n)
        {
            if (coeffs[static_cast<std::size_t>(n)].size() != dim)
                throw std::invalid_argument("assemble_F_EM: inconsistent coefficient lengths");
            F.block(n * dim, n, dim, 1) = coeffs[static_cast<std::size_t>(n)];
        }
        return F;
    }

    CVec effective_channel(const CVec &h_em, const EmCoefficients &coeffs)
    {
        const auto nt = static_cast<Eigen::Index>(coeffs.size());
        if (nt == 0 || h_em.size() != nt * coeffs.front().size())
            throw std::invalid_argument("effective_channel: dimension mismatch");
        const Eigen::Index dim = coeffs.front().size();
        CVec h(nt);
        for (Eigen::Index n = 0; n < nt; ++n)
            h[n] = coeffs[static_cast<std::size_t>(n)].dot(h_em.segment(n * dim, dim));
        return h;
    }

    ReceiveWeights fixed_receive_combiner(const std::vector<CVec> &backward, int target, double noise_power)
    {
        const CVec &own = backward.at(static_cast<std::size_t>(target));
        const double nrm = own.norm();
        if (!(nrm > 0.0))
            throw std::invalid_argument("fixed_receive_combiner: zero backward channel");
        const CVec w = own / nrm;
        ReceiveWeights out;
        out.omega_self = std::norm(w.dot(own));
        for (int k = 0; k < static_cast<int>(backward.size()); ++k)
        {
            if (k == target)
                continue;
            out.interferers.emplace_back(k, std::norm(w.dot(backward[static_cast<std::size_t>(k)])));
        }
        out.noise = noise_power * w.squaredNorm();
        return out;
    }

    EmChannelSet build_em_channels(const Scenario &scenario, const RadiationModel &model)
    {
        scenario.validate();
        const RadiationModel rx_model = RadiationModel::fixed(FixedPattern::omni);
        EmChannelSet ch;
        ch.n_tx = scenario.tx.size();
        ch.dim = model.dim();
        ch.kind = model.kind();
        ch.noise_power = scenario.noise_power;
        ch.power_budget = scenario.power_budget;
        ch.beta_tilde = scenario.beta_tilde;
        ch.beta = scenario.beta();
        for (int k = 0; k < scenario.n_users(); ++k)
            ch.comm.push_back(build_comm_em_channel(scenario, k, model));
        for (const auto *list : {&scenario.targets, &scenario.scatterers})
            for (const auto &e : *list)
            {
                auto [f, b] = build_sensing_em_channels(scenario, e, model, rx_model);
                ch.sensing_fwd.push_back(std::move(f));
                ch.sensing_bwd.push_back(std::move(b));
            }
        for (int i = 0; i < scenario.n_targets(); ++i)
            ch.rx.push_back(fixed_receive_combiner(ch.sensing_bwd, i, scenario.noise_power));
        return ch;
    }

    EffectiveChannels effective_channels(const EmChannelSet &channels, const EmCoefficients &coeffs)
    {
        EffectiveChannels eff;
        eff.comm.reserve(channels.comm.size());
        for (const auto &h : channels.comm)
            eff.comm.push_back(effective_channel(h, coeffs));
        eff.sensing.reserve(channels.sensing_fwd.size());
        for (const auto &h : channels.sensing_fwd)
            eff.sensing.push_back(effective_channel(h, coeffs));
        return eff;
    }

    EmCoefficients initial_coefficients(int n_tx, int dim)
    {
        CVec e1 = CVec::Zero(dim);
        e1[0] = 1.0;
        return EmCoefficients(static_cast<std::size_t>(n_tx), e1);
    }
}
