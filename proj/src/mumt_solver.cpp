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

#include "trihybrid/mumt_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "trihybrid/metrics.hpp"
#include "trihybrid/numerics.hpp"

namespace trihybrid
{
    double rate_weight(double beta_tilde) { return beta_tilde / std::log(2.0); }

    namespace
    {
        // sum_j sum_{kappa in I_i} omega_kappa |h_kappa^H f_j|^2 + noise_i
        double clutter_power(const EmChannelSet &ch, const EffectiveChannels &eff, const CMat &F, int i)
        {
            const ReceiveWeights &rx = ch.rx[static_cast<std::size_t>(i)];
            double d = rx.noise;
            for (const auto &[idx, w] : rx.interferers)
                d += w * (eff.sensing[static_cast<std::size_t>(idx)].adjoint() * F).squaredNorm();
            return d;
        }
    }

    Auxiliaries update_auxiliaries(const EmChannelSet &ch, const EffectiveChannels &eff, const CMat &F)
    {
        const int K = ch.n_users();
        const int I = ch.n_targets();
        const double bt = rate_weight(ch.beta_tilde);
        Auxiliaries aux;
        aux.gamma.resize(K);
        aux.p.resize(K);
        aux.q.resize(I, K);
        for (int k = 0; k < K; ++k)
        {
            const CVec &h = eff.comm[static_cast<std::size_t>(k)];
            const cplx s = h.dot(F.col(k));
            const double total = (h.adjoint() * F).squaredNorm() + ch.noise_power;
            const double interference = total - std::norm(s);
            aux.gamma[k] = std::norm(s) / interference;
            aux.p[k] = std::sqrt(bt * (1.0 + aux.gamma[k])) * s / total;
        }
        for (int i = 0; i < I; ++i)
        {
            const double D = clutter_power(ch, eff, F, i);
            const double w = std::sqrt(ch.beta * ch.rx[static_cast<std::size_t>(i)].omega_self);
            for (int k = 0; k < K; ++k)
                aux.q(i, k) = w * eff.sensing[static_cast<std::size_t>(i)].dot(F.col(k)) / D;
        }
        return aux;
    }

    double f_lagrangian(const EmChannelSet &ch, const EffectiveChannels &eff, const CMat &F, const RVec &gamma)
    {
        const double bt = rate_weight(ch.beta_tilde);
        double v = 0.0;
        for (int k = 0; k < ch.n_users(); ++k)
        {
            const CVec &h = eff.comm[static_cast<std::size_t>(k)];
            const double A = std::norm(h.dot(F.col(k)));
            const double AB = (h.adjoint() * F).squaredNorm() + ch.noise_power;
            v += bt * (std::log1p(gamma[k]) - gamma[k] + (1.0 + gamma[k]) * A / AB);
        }
        for (int i = 0; i < ch.n_targets(); ++i)
        {
            const double C = ch.rx[static_cast<std::size_t>(i)].omega_self *
                             (eff.sensing[static_cast<std::size_t>(i)].adjoint() * F).squaredNorm();
            v += ch.beta * C / clutter_power(ch, eff, F, i);
        }
        return v;
    }

    double f_quadratic(const EmChannelSet &ch, const EffectiveChannels &eff, const CMat &F, const Auxiliaries &aux)
    {
        const double bt = rate_weight(ch.beta_tilde);
        double v = 0.0;
        for (int k = 0; k < ch.n_users(); ++k)
        {
            const CVec &h = eff.comm[static_cast<std::size_t>(k)];
            const double g = aux.gamma[k];
            const double AB = (h.adjoint() * F).squaredNorm() + ch.noise_power;
            v += bt * (std::log1p(g) - g);
            v += 2.0 * std::real(std::conj(aux.p[k]) * std::sqrt(bt * (1.0 + g)) * h.dot(F.col(k)));
            v -= std::norm(aux.p[k]) * AB;
            for (int i = 0; i < ch.n_targets(); ++i)
            {
                const double w = std::sqrt(ch.beta * ch.rx[static_cast<std::size_t>(i)].omega_self);
                v += 2.0 * std::real(std::conj(aux.q(i, k)) * w * eff.sensing[static_cast<std::size_t>(i)].dot(F.col(k)));
                v -= std::norm(aux.q(i, k)) * clutter_power(ch, eff, F, i);
            }
        }
        return v;
    }

    namespace
    {
        struct BeamSystem
        {
            RVec lambda;
            CMat V;
            CMat rhs_t; // V^H r_k per column
        };

        BeamSystem beam_system(const EmChannelSet &ch, const EffectiveChannels &eff, const Auxiliaries &aux)
        {
            const int K = ch.n_users();
            const Eigen::Index N = ch.n_tx;
            const double bt = rate_weight(ch.beta_tilde);
            CMat M = CMat::Zero(N, N);
            for (int j = 0; j < K; ++j)
                M += std::norm(aux.p[j]) * eff.comm[static_cast<std::size_t>(j)] *
                     eff.comm[static_cast<std::size_t>(j)].adjoint();
            for (int i = 0; i < ch.n_targets(); ++i)
            {
                const double qi = aux.q.row(i).squaredNorm();
                if (qi == 0.0)
                    continue;
                for (const auto &[idx, w] : ch.rx[static_cast<std::size_t>(i)].interferers)
                    M += (qi * w) * eff.sensing[static_cast<std::size_t>(idx)] *
                         eff.sensing[static_cast<std::size_t>(idx)].adjoint();
            }
            CMat R(N, K);
            for (int k = 0; k < K; ++k)
            {
                CVec r = aux.p[k] * std::sqrt(bt * (1.0 + aux.gamma[k])) * eff.comm[static_cast<std::size_t>(k)];
                for (int i = 0; i < ch.n_targets(); ++i)
                    r += aux.q(i, k) * std::sqrt(ch.beta * ch.rx[static_cast<std::size_t>(i)].omega_self) *
                         eff.sensing[static_cast<std::size_t>(i)];
                R.col(k) = r;
            }
            Eigen::SelfAdjointEigenSolver<CMat> es(0.5 * (M + M.adjoint()));
            BeamSystem sys;
            sys.lambda = es.eigenvalues().cwiseMax(0.0);
            sys.V = es.eigenvectors();
            sys.rhs_t = sys.V.adjoint() * R;
            return sys;
        }

        double null_tolerance(const BeamSystem &sys) { return 1e-12 * std::max(sys.lambda.maxCoeff(), 1e-300); }

        CMat beams(const BeamSystem &sys, double mu)
        {
            CMat Z = sys.rhs_t;
            const double tol = null_tolerance(sys);
            for (Eigen::Index i = 0; i < Z.rows(); ++i)
            {
                const double d = sys.lambda[i] + mu;
                Z.row(i) *= (mu == 0.0 && sys.lambda[i] <= tol) ? 0.0 : 1.0 / d;
            }
            return sys.V * Z;
        }

        double power(const BeamSystem &sys, double mu)
        {
            double p = 0.0;
            const double tol = null_tolerance(sys);
            for (Eigen::Index i = 0; i < sys.rhs_t.rows(); ++i)
            {
                if (mu == 0.0 && sys.lambda[i] <= tol)
                    continue;
                const double d = sys.lambda[i] + mu;
                p += sys.rhs_t.row(i).squaredNorm() / (d * d);
            }
            return p;
        }
    }

    CMat fd_beams_at(const EmChannelSet &ch, const EffectiveChannels &eff, const Auxiliaries &aux, double mu)
    {
        return beams(beam_system(ch, eff, aux), mu);
    }

    BeamUpdate update_fd_beams(const EmChannelSet &ch, const EffectiveChannels &eff, const Auxiliaries &aux)
    {
        const BeamSystem sys = beam_system(ch, eff, aux);
        const double P = ch.power_budget;
        BeamUpdate out;
        const double rhs2 = sys.rhs_t.squaredNorm();
        if (rhs2 == 0.0)
        {
            out.F = CMat::Zero(ch.n_tx, ch.n_users());
            return out;
        }
        // budget slack at mu = 0 only if the linear term has no null-space part
        double null_part = 0.0;
        const double tol = null_tolerance(sys);
        for (Eigen::Index i = 0; i < sys.rhs_t.rows(); ++i)
            if (sys.lambda[i] <= tol)
                null_part += sys.rhs_t.row(i).squaredNorm();
        if (null_part <= 1e-24 * rhs2 && power(sys, 0.0) <= P)
        {
            out.F = beams(sys, 0.0);
            return out;
        }
        double lo = 0.0, hi = std::sqrt(rhs2 / P);
        while (power(sys, hi) > P)
            hi *= 2.0;
        for (int it = 0; it < 200 && hi - lo > 1e-14 * hi; ++it)
        {
            const double mid = 0.5 * (lo + hi);
            if (power(sys, mid) > P)
                lo = mid;
            else
                hi = mid;
        }
        out.mu = hi;
        out.F = beams(sys, hi);
        return out;
    }

    double MumtAntennaQuadratic::value(const CVec &c) const
    {
        CVec x(c.size() + 1);
        x.head(c.size()) = c;
        x[c.size()] = 1.0;
        return constant + std::real(x.dot(A * x)) + 2.0 * std::real(a.dot(x));
    }

    MumtAntennaQuadratic em_quadratic_per_antenna(const EmChannelSet &ch, const EffectiveChannels &eff,
                                                  const CMat &F, const Auxiliaries &aux, int n)
    {
        const int K = ch.n_users();
        const int dim = ch.dim;
        const double bt = rate_weight(ch.beta_tilde);

        // [conj(F(n,j)) h_n ; conj(sum_{m != n} F(m,j) conj(heff_m))]
        auto ext = [&](const CVec &h_em, const CVec &h_eff, int j)
        {
            CVec v(dim + 1);
            v.head(dim) = std::conj(F(n, j)) * h_em.segment(static_cast<Eigen::Index>(n) * dim, dim);
            const cplx rest = h_eff.dot(F.col(j)) - std::conj(h_eff[n]) * F(n, j);
            v[dim] = std::conj(rest);
            return v;
        };

        // clutter weight of every sensing entity
        RVec ent_w = RVec::Zero(ch.n_entities());
        double noise_const = 0.0;
        for (int k = 0; k < K; ++k)
            noise_const += std::norm(aux.p[k]) * ch.noise_power;
        for (int i = 0; i < ch.n_targets(); ++i)
        {
            const double qi = aux.q.row(i).squaredNorm();
            const ReceiveWeights &rx = ch.rx[static_cast<std::size_t>(i)];
            for (const auto &[idx, w] : rx.interferers)
                ent_w[idx] += qi * w;
            noise_const += qi * rx.noise;
        }

        MumtAntennaQuadratic out;
        out.A = CMat::Zero(dim + 1, dim + 1);
        out.a = CVec::Zero(dim + 1);
        for (int j = 0; j < K; ++j)
        {
            for (int k = 0; k < K; ++k)
            {
                const double wk = std::norm(aux.p[k]);
                if (wk == 0.0)
                    continue;
                const CVec v = ext(ch.comm[static_cast<std::size_t>(k)], eff.comm[static_cast<std::size_t>(k)], j);
                out.A.noalias() -= wk * v * v.adjoint();
            }
            for (int e = 0; e < ch.n_entities(); ++e)
            {
                if (ent_w[e] == 0.0)
                    continue;
                const CVec v = ext(ch.sensing_fwd[static_cast<std::size_t>(e)], eff.sensing[static_cast<std::size_t>(e)], j);
                out.A.noalias() -= ent_w[e] * v * v.adjoint();
            }
        }
        out.A(dim, dim) -= noise_const;
        for (int k = 0; k < K; ++k)
        {
            out.constant += bt * (std::log1p(aux.gamma[k]) - aux.gamma[k]);
            out.a += aux.p[k] * std::sqrt(bt * (1.0 + aux.gamma[k])) *
                     ext(ch.comm[static_cast<std::size_t>(k)], eff.comm[static_cast<std::size_t>(k)], k);
            for (int i = 0; i < ch.n_targets(); ++i)
                out.a += aux.q(i, k) * std::sqrt(ch.beta * ch.rx[static_cast<std::size_t>(i)].omega_self) *
                         ext(ch.sensing_fwd[static_cast<std::size_t>(i)], eff.sensing[static_cast<std::size_t>(i)], k);
        }
        out.A = 0.5 * (out.A + out.A.adjoint());
        return out;
    }

    CVec solve_c_mumt(const CMat &A, const CVec &a)
    {
        const Eigen::Index dim = A.rows() - 1;
        if (dim < 1 || A.cols() != A.rows() || a.size() != A.rows())
            throw std::invalid_argument("solve_c_mumt: dimension mismatch");
        const CMat M = A.topLeftCorner(dim, dim);
        const CVec g = A.topRightCorner(dim, 1) + a.head(dim);
        CVec c = numerics::maximize_on_sphere(M, g, 1.0).x;
        c.normalize();
        return c;
    }

    CVec mumt_closed_form_extended(const CMat &A, const CVec &a, double mu)
    {
        const Eigen::Index m = A.rows();
        CVec e = CVec::Zero(m);
        e[m - 1] = 1.0;
        const CVec Qe = numerics::shifted_solve(A, mu, e);
        const CVec Qa = numerics::shifted_solve(A, mu, a);
        const cplx scale = (1.0 + Qa[m - 1]) / Qe[m - 1];
        return scale * Qe - Qa;
    }

    int select_c_model_ii_mumt(const MumtAntennaQuadratic &quad)
    {
        const Eigen::Index S = quad.A.rows() - 1;
        int best = 0;
        double best_v = -std::numeric_limits<double>::infinity();
        const double base = quad.constant + std::real(quad.A(S, S)) + 2.0 * std::real(quad.a[S]);
        for (Eigen::Index s = 0; s < S; ++s)
        {
            // c_ext = e_s + e_last
            const double v = base + std::real(quad.A(s, s)) + 2.0 * std::real(quad.A(s, S)) + 2.0 * std::real(quad.a[s]);
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
        double true_objective(const EmChannelSet &ch, const EffectiveChannels &eff, const CMat &F)
        {
            return evaluate(ch, eff, F, false).value;
        }

        void refresh_antenna(const EmChannelSet &ch, EffectiveChannels &eff, const CVec &c, int n)
        {
            const Eigen::Index dim = ch.dim;
            for (std::size_t k = 0; k < ch.comm.size(); ++k)
                eff.comm[k][n] = c.dot(ch.comm[k].segment(n * dim, dim));
            for (std::size_t e = 0; e < ch.sensing_fwd.size(); ++e)
                eff.sensing[e][n] = c.dot(ch.sensing_fwd[e].segment(n * dim, dim));
        }

        bool settled(double before, double after, double tol)
        {
            return std::abs(after - before) <= tol * std::max(std::abs(after), 1e-300);
        }
    }

    SolverReport run_mumt(const EmChannelSet &ch, int n_rf, const MumtOptions &opt)
    {
        if (ch.n_users() < 1 || ch.n_targets() < 1)
            throw std::invalid_argument("run_mumt: needs at least one CU and one target");
        const int K = ch.n_users();
        const bool fixed = ch.kind == RadiationModel::Kind::fixed;
        const bool library = ch.kind == RadiationModel::Kind::library;
        const double slack = 1e-12;

        SolverReport rep;
        EmCoefficients coeffs = initial_coefficients(ch.n_tx, ch.dim);
        EffectiveChannels eff = effective_channels(ch, coeffs);

        // equal-power matched start
        CMat F(ch.n_tx, K);
        for (int k = 0; k < K; ++k)
        {
            const CVec &h = eff.comm[static_cast<std::size_t>(k)];
            F.col(k) = h.norm() > 0.0 ? CVec(h / h.norm()) : CVec(CVec::Constant(ch.n_tx, 1.0 / std::sqrt(ch.n_tx)));
        }
        F *= std::sqrt(ch.power_budget / K);

        double obj = true_objective(ch, eff, F);
        rep.trace.push_back(obj);
        for (int outer = 0; outer < opt.max_outer; ++outer)
        {
            ++rep.outer_iterations;
            const double start = obj;

            for (int round = 0; round < opt.max_fp_rounds; ++round)
            {
                const Auxiliaries aux = update_auxiliaries(ch, eff, F);
                const BeamUpdate bu = update_fd_beams(ch, eff, aux);
                const double cand = true_objective(ch, eff, bu.F);
                if (!(cand >= obj - slack * std::abs(obj)))
                    break;
                const bool done = settled(obj, cand, opt.fp_tolerance);
                if (cand >= obj)
                {
                    F = bu.F;
                    obj = cand;
                }
                if (done)
                    break;
            }
            rep.trace.push_back(obj);

            if (!fixed)
            {
                for (int round = 0; round < opt.max_fp_rounds; ++round)
                {
                    const double before = obj;
                    const Auxiliaries aux = update_auxiliaries(ch, eff, F);
                    const EmCoefficients saved = coeffs;
                    for (int n = 0; n < ch.n_tx; ++n)
                    {
                        const MumtAntennaQuadratic quad = em_quadratic_per_antenna(ch, eff, F, aux, n);
                        CVec &cn = coeffs[static_cast<std::size_t>(n)];
                        CVec cand;
                        if (library)
                        {
                            cand = CVec::Zero(ch.dim);
                            cand[select_c_model_ii_mumt(quad)] = 1.0;
                        }
                        else
                            cand = solve_c_mumt(quad.A, quad.a);
                        if (quad.value(cand) > quad.value(cn))
                        {
                            cn = cand;
                            refresh_antenna(ch, eff, cn, n);
                        }
                    }
                    const double cand = true_objective(ch, eff, F);
                    if (cand < obj)
                    {
                        coeffs = saved;
                        eff = effective_channels(ch, coeffs);
                        break;
                    }
                    obj = cand;
                    if (settled(before, obj, opt.fp_tolerance))
                        break;
                }
                rep.trace.push_back(obj);
            }

            if (fixed || settled(start, obj, opt.outer_tolerance))
            {
                rep.converged = true;
                break;
            }
        }
        if (!rep.converged)
            rep.warnings.push_back("outer loop hit its iteration cap");

        rep.beamformer.em = coeffs;
        rep.beamformer.F_FD = F;
        HybridPair hp = factor_hybrid(F, n_rf, ch.power_budget, opt.hybrid);
        rep.beamformer.F_RF = std::move(hp.F_RF);
        rep.beamformer.F_BB = std::move(hp.F_BB);
        rep.hybrid_residual = hp.residual;
        eff = effective_channels(ch, coeffs);
        rep.fd = evaluate(ch, eff, F, false);
        rep.hybrid = evaluate(ch, eff, rep.beamformer.hybrid(), false);
        return rep;
    }
}
