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

#include "trihybrid/sust_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "trihybrid/numerics.hpp"

namespace trihybrid
{
    double SustProblem::sensing_numerator(const CVec &f) const { return beta * omega * std::norm(target.dot(f)); }

    double SustProblem::sensing_denominator(const CVec &f) const
    {
        double d = noise_rx;
        for (std::size_t k = 0; k < clutter.size(); ++k)
            d += clutter_weight[static_cast<Eigen::Index>(k)] * std::norm(clutter[k].dot(f));
        return d;
    }

    double SustProblem::value(const CVec &f) const
    {
        return beta_tilde * std::norm(comm.dot(f)) / noise + sensing_numerator(f) / sensing_denominator(f);
    }

    CMat SustProblem::clutter_covariance() const
    {
        CMat S = CMat::Zero(comm.size(), comm.size());
        for (std::size_t k = 0; k < clutter.size(); ++k)
            S += clutter_weight[static_cast<Eigen::Index>(k)] * clutter[k] * clutter[k].adjoint();
        return S;
    }

    SustProblem sust_problem(const EmChannelSet &channels, const EffectiveChannels &eff)
    {
        if (channels.n_users() != 1 || channels.n_targets() != 1)
            throw std::invalid_argument("sust_problem: needs exactly one CU and one target");
        SustProblem p;
        p.comm = eff.comm[0];
        p.target = eff.sensing[0];
        const ReceiveWeights &rx = channels.rx[0];
        p.clutter_weight.resize(static_cast<Eigen::Index>(rx.interferers.size()));
        for (std::size_t k = 0; k < rx.interferers.size(); ++k)
        {
            p.clutter.push_back(eff.sensing[static_cast<std::size_t>(rx.interferers[k].first)]);
            p.clutter_weight[static_cast<Eigen::Index>(k)] = rx.interferers[k].second;
        }
        p.omega = rx.omega_self;
        p.noise = channels.noise_power;
        p.noise_rx = rx.noise;
        p.beta_tilde = channels.beta_tilde;
        p.beta = channels.beta;
        return p;
    }

    CMat build_R(const SustProblem &p, double varsigma)
    {
        CMat R = (p.beta_tilde / p.noise) * (p.comm * p.comm.adjoint());
        R += (p.beta * p.omega) * (p.target * p.target.adjoint());
        R -= varsigma * p.clutter_covariance();
        return 0.5 * (R + R.adjoint());
    }

    FdResult dinkelbach_fd(const SustProblem &p, double P, const SustOptions &opt, const CVec *incumbent)
    {
        if (!(P > 0.0))
            throw std::invalid_argument("dinkelbach_fd: power budget must be positive");
        const double radius = std::sqrt(P);
        const CMat Mc = (p.beta_tilde / p.noise) * (p.comm * p.comm.adjoint());
        const CMat S = p.clutter_covariance();
        const CVec q = std::sqrt(p.beta * p.omega) * p.target;
        const CMat Rt = q * q.adjoint();

        auto solve_at = [&](double y) { return numerics::maximize_on_sphere(Mc - (y * y) * S, y * q, radius).x; };

        // scan y in [0, y_max]; the optimal auxiliary sqrt(N)/D never exceeds y_max
        const double y_max = q.norm() * radius / p.noise_rx;
        std::vector<double> ys{0.0};
        if (y_max > 0.0)
        {
            const int half = std::max(2, opt.fd_scan_points / 2);
            for (int i = 0; i < half; ++i)
                ys.push_back(y_max * std::pow(10.0, -6.0 + 6.0 * i / (half - 1)));
            for (int i = 1; i <= half; ++i)
                ys.push_back(y_max * i / half);
            std::sort(ys.begin(), ys.end());
            ys.erase(std::unique(ys.begin(), ys.end()), ys.end());
        }

        CVec best_f = solve_at(ys[0]);
        double best_v = p.value(best_f);
        std::size_t best_i = 0;
        for (std::size_t i = 1; i < ys.size(); ++i)
        {
            CVec f = solve_at(ys[i]);
            const double v = p.value(f);
            if (v > best_v)
            {
                best_v = v;
                best_f = std::move(f);
                best_i = i;
            }
        }

        // golden-section refinement between the neighbours of the best grid point
        if (ys.size() > 2)
        {
            double a = ys[best_i == 0 ? 0 : best_i - 1];
            double b = ys[std::min(best_i + 1, ys.size() - 1)];
            const double g = 0.5 * (std::sqrt(5.0) - 1.0);
            double x1 = b - g * (b - a), x2 = a + g * (b - a);
            CVec f1 = solve_at(x1), f2 = solve_at(x2);
            double v1 = p.value(f1), v2 = p.value(f2);
            for (int it = 0; it < opt.fd_golden_steps; ++it)
            {
                if (v1 >= v2)
                {
                    b = x2;
                    x2 = x1;
                    f2 = f1;
                    v2 = v1;
                    x1 = b - g * (b - a);
                    f1 = solve_at(x1);
                    v1 = p.value(f1);
                }
                else
                {
                    a = x1;
                    x1 = x2;
                    f1 = f2;
                    v1 = v2;
                    x2 = a + g * (b - a);
                    f2 = solve_at(x2);
                    v2 = p.value(f2);
                }
            }
            if (v1 > best_v)
            {
                best_v = v1;
                best_f = f1;
            }
            if (v2 > best_v)
            {
                best_v = v2;
                best_f = f2;
            }
        }

        FdResult out;
        auto ratio = [&](const CVec &f) { return p.sensing_numerator(f) / p.sensing_denominator(f); };
        double vs = ratio(best_f);
        out.varsigma_trace.push_back(vs);

        // stationary-point iteration: R = Mc + (beta omega R_t - varsigma S) / D
        out.converged = false;
        for (int it = 0; it < opt.fd_max_refine; ++it)
        {
            ++out.iterations;
            const double D = p.sensing_denominator(best_f);
            CMat R = Mc + (Rt - vs * S) / D;
            const CVec f = radius * numerics::hermitian_max_eigpair(R).vector;
            const double v = p.value(f);
            const double vs_new = ratio(f);
            // accepted only as a joint ascent of the objective and varsigma
            if (!(v > best_v) || vs_new < vs)
            {
                out.converged = true;
                break;
            }
            best_v = v;
            best_f = f;
            out.varsigma_trace.push_back(vs_new);
            const bool small = std::abs(vs_new - vs) <= opt.fd_tolerance * std::max(std::abs(vs), 1e-300);
            vs = vs_new;
            if (small)
            {
                out.converged = true;
                break;
            }
        }

        if (incumbent && incumbent->size() == best_f.size() && p.value(*incumbent) > best_v)
        {
            best_f = *incumbent;
            vs = ratio(best_f);
        }
        out.f = std::move(best_f);
        out.varsigma = vs;
        return out;
    }

    // ------------------------------------------------------------------ EM stage

    ExtendedTerms extended_terms(const EmChannelSet &ch, const CVec &f, const EmCoefficients &coeffs, int n)
    {
        const int dim = ch.dim;
        const cplx fn = std::conj(f[n]);
        auto make = [&](const CVec &h_em)
        {
            // s = sum_{m != n} a_m^H c_m where a_m = conj(f_m) h_m
            cplx total = 0.0;
            for (int m = 0; m < ch.n_tx; ++m)
                if (m != n)
                    total += f[m] * h_em.segment(static_cast<Eigen::Index>(m) * dim, dim).dot(coeffs[static_cast<std::size_t>(m)]);
            CVec ext(dim + 1);
            ext.head(dim) = fn * h_em.segment(static_cast<Eigen::Index>(n) * dim, dim);
            ext[dim] = std::conj(total);
            return ext;
        };
        ExtendedTerms t;
        t.comm = make(ch.comm.at(0));
        t.target = make(ch.sensing_fwd.at(0));
        for (const auto &[idx, w] : ch.rx.at(0).interferers)
        {
            (void)w;
            t.clutter.push_back(make(ch.sensing_fwd[static_cast<std::size_t>(idx)]));
        }
        return t;
    }

    namespace
    {
        cplx ext_product(const CVec &a_ext, const CVec &c)
        {
            const Eigen::Index dim = c.size();
            return a_ext.head(dim).dot(c) + std::conj(a_ext[dim]);
        }
    }

    double antenna_objective(const EmChannelSet &ch, const ExtendedTerms &t, const CVec &c)
    {
        const ReceiveWeights &rx = ch.rx.at(0);
        const double gamma = std::norm(ext_product(t.comm, c)) / ch.noise_power;
        double D = rx.noise;
        for (std::size_t k = 0; k < t.clutter.size(); ++k)
            D += rx.interferers[k].second * std::norm(ext_product(t.clutter[k], c));
        const double N = rx.omega_self * std::norm(ext_product(t.target, c));
        return ch.beta_tilde * gamma + ch.beta * N / D;
    }

    CMat em_coeffs_per_antenna(const EmChannelSet &ch, const ExtendedTerms &t, double varsigma,
                               double denominator_scale)
    {
        const ReceiveWeights &rx = ch.rx.at(0);
        CMat A = (ch.beta_tilde / ch.noise_power) * (t.comm * t.comm.adjoint());
        CMat sens = (ch.beta * rx.omega_self) * (t.target * t.target.adjoint());
        for (std::size_t k = 0; k < t.clutter.size(); ++k)
            sens -= (varsigma * rx.interferers[k].second) * (t.clutter[k] * t.clutter[k].adjoint());
        A += sens / denominator_scale;
        return 0.5 * (A + A.adjoint());
    }

    CVec solve_c_closed_form(const CMat &A)
    {
        const Eigen::Index dim = A.rows() - 1;
        if (dim < 1 || A.cols() != A.rows())
            throw std::invalid_argument("solve_c_closed_form: needs a square matrix of size at least 2");
        const CMat M = A.topLeftCorner(dim, dim);
        const CVec g = A.topRightCorner(dim, 1);
        CVec c = numerics::maximize_on_sphere(M, g, 1.0).x;
        c.normalize();
        return c;
    }

    CVec closed_form_extended(const CMat &A, double mu)
    {
        CVec e = CVec::Zero(A.rows());
        e[A.rows() - 1] = 1.0;
        const CVec x = numerics::shifted_solve(A, mu, e);
        return x / x[A.rows() - 1];
    }

    int select_c_model_ii(const EmChannelSet &ch, const ExtendedTerms &t)
    {
        const Eigen::Index S = ch.dim;
        int best = 0;
        double best_v = -std::numeric_limits<double>::infinity();
        CVec c = CVec::Zero(S);
        for (Eigen::Index s = 0; s < S; ++s)
        {
            c.setZero();
            c[s] = 1.0;
            const double v = antenna_objective(ch, t, c);
            if (v > best_v)
            {
                best_v = v;
                best = static_cast<int>(s);
            }
        }
        return best;
    }

    namespace
    {
        double full_value(const EmChannelSet &ch, const EmCoefficients &c, const CVec &f)
        {
            return sust_problem(ch, effective_channels(ch, c)).value(f);
        }

        // One EM stage: antenna-wise sweeps until the objective settles.
        void em_stage(const EmChannelSet &ch, const CVec &f, EmCoefficients &coeffs, const SustOptions &opt,
                      std::vector<double> &varsigma_trace)
        {
            const bool library = ch.kind == RadiationModel::Kind::library;
            double current = full_value(ch, coeffs, f);
            {
                const SustProblem p = sust_problem(ch, effective_channels(ch, coeffs));
                varsigma_trace.push_back(p.sensing_numerator(f) / p.sensing_denominator(f));
            }
            for (int sweep = 0; sweep < opt.max_em_sweeps; ++sweep)
            {
                const double before = current;
                for (int n = 0; n < ch.n_tx; ++n)
                {
                    if (f[n] == cplx(0.0, 0.0))
                        continue;
                    const ExtendedTerms t = extended_terms(ch, f, coeffs, n);
                    CVec &cn = coeffs[static_cast<std::size_t>(n)];
                    double v_inc = antenna_objective(ch, t, cn);
                    if (library)
                    {
                        const int s = select_c_model_ii(ch, t);
                        CVec c = CVec::Zero(ch.dim);
                        c[s] = 1.0;
                        if (antenna_objective(ch, t, c) >= v_inc)
                            cn = c;
                        continue;
                    }
                    // Dinkelbach parameter and denominator at the incumbent
                    const ReceiveWeights &rx = ch.rx.at(0);
                    double D = rx.noise;
                    for (std::size_t k = 0; k < t.clutter.size(); ++k)
                        D += rx.interferers[k].second * std::norm(ext_product(t.clutter[k], cn));
                    const double N = ch.beta * rx.omega_self * std::norm(ext_product(t.target, cn));
                    const double vs = N / D;
                    for (double scale : {D, 1.0})
                    {
                        const CVec c = solve_c_closed_form(em_coeffs_per_antenna(ch, t, vs, scale));
                        const double v = antenna_objective(ch, t, c);
                        if (v > v_inc)
                        {
                            v_inc = v;
                            cn = c;
                        }
                    }
                }
                current = full_value(ch, coeffs, f);
                const SustProblem p = sust_problem(ch, effective_channels(ch, coeffs));
                varsigma_trace.push_back(p.sensing_numerator(f) / p.sensing_denominator(f));
                if (std::abs(current - before) <= opt.em_tolerance * std::max(std::abs(before), 1e-300))
                    break;
            }
        }
    }

    SolverReport run_sust(const EmChannelSet &ch, int n_rf, const SustOptions &opt)
    {
        if (ch.n_users() != 1 || ch.n_targets() != 1)
            throw std::invalid_argument("run_sust: needs exactly one CU and one target");
        SolverReport rep;
        EmCoefficients coeffs = initial_coefficients(ch.n_tx, ch.dim);
        const bool fixed = ch.kind == RadiationModel::Kind::fixed;

        CVec f;
        double prev = -std::numeric_limits<double>::infinity();
        for (int outer = 0; outer < opt.max_outer; ++outer)
        {
            ++rep.outer_iterations;
            const SustProblem p = sust_problem(ch, effective_channels(ch, coeffs));
            FdResult fd = dinkelbach_fd(p, ch.power_budget, opt, f.size() ? &f : nullptr);
            if (!fd.converged)
                rep.warnings.push_back("fully digital refinement hit its iteration cap");
            f = fd.f;
            rep.varsigma.push_back(fd.varsigma_trace);
            rep.trace.push_back(p.value(f));
            if (fixed)
            {
                rep.converged = true;
                break;
            }
            rep.em_varsigma.emplace_back();
            em_stage(ch, f, coeffs, opt, rep.em_varsigma.back());
            const double cur = full_value(ch, coeffs, f);
            rep.trace.push_back(cur);
            if (std::abs(cur - prev) <= opt.outer_tolerance * std::max(std::abs(cur), 1e-300))
            {
                rep.converged = true;
                break;
            }
            prev = cur;
        }
        if (!rep.converged)
            rep.warnings.push_back("outer loop hit its iteration cap");

        rep.beamformer.em = coeffs;
        rep.beamformer.F_FD = f;
        HybridPair hp = factor_hybrid(rep.beamformer.F_FD, n_rf, ch.power_budget, opt.hybrid);
        rep.beamformer.F_RF = std::move(hp.F_RF);
        rep.beamformer.F_BB = std::move(hp.F_BB);
        rep.hybrid_residual = hp.residual;

        const EffectiveChannels eff = effective_channels(ch, coeffs);
        rep.fd = evaluate(ch, eff, rep.beamformer.F_FD, true);
        rep.hybrid = evaluate(ch, eff, rep.beamformer.hybrid(), true);
        return rep;
    }
}
