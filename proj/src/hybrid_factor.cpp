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

#include "trihybrid/hybrid_factor.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "trihybrid/random.hpp"

namespace trihybrid
{
    namespace
    {
        CMat unit_modulus(const CMat &X)
        {
            CMat Y = X;
            for (Eigen::Index i = 0; i < Y.size(); ++i)
            {
                const double a = std::abs(Y.data()[i]);
                Y.data()[i] = a > 0.0 ? Y.data()[i] / a : cplx(1.0, 0.0);
            }
            return Y;
        }

        double residual(const CMat &F_RF, const CMat &F_BB, const CMat &F_FD)
        {
            return (F_RF * F_BB - F_FD).squaredNorm();
        }

        HybridPair refine(const CMat &F_FD, CMat X, const HybridOptions &opt)
        {
            HybridPair out;
            CMat B = least_squares_baseband(X, F_FD);
            double r = residual(X, B, F_FD);
            out.residual_trace.push_back(r);
            int it = 0;
            for (; it < opt.max_iterations && r > 0.0; ++it)
            {
                // Euclidean gradient w.r.t. conj(X), projected on the torus tangent space
                const CMat E = X * B - F_FD;
                CMat G = E * B.adjoint();
                G -= (G.array() * X.array().conjugate()).real().cast<cplx>().matrix().cwiseProduct(X);
                const double g2 = G.squaredNorm();
                if (g2 <= 1e-300)
                    break;
                const double lip = std::max(B.squaredNorm(), 1e-300);
                double t = 1.0 / lip;
                CMat Xn;
                double rn = r;
                bool accepted = false;
                for (int ls = 0; ls < 60; ++ls)
                {
                    Xn = unit_modulus(X - t * G);
                    rn = residual(Xn, B, F_FD);
                    if (rn <= r - opt.armijo * t * g2)
                    {
                        accepted = true;
                        break;
                    }
                    t *= 0.5;
                }
                if (!accepted)
                    break;
                const CMat Bn = least_squares_baseband(Xn, F_FD);
                const double rb = residual(Xn, Bn, F_FD);
                X = std::move(Xn);
                B = rb <= rn ? Bn : B;
                const double change = r - std::min(rb, rn);
                r = std::min(rb, rn);
                out.residual_trace.push_back(r);
                if (change <= opt.tolerance * std::max(F_FD.squaredNorm(), 1e-300))
                {
                    ++it;
                    break;
                }
            }
            out.F_RF = std::move(X);
            out.F_BB = std::move(B);
            out.iterations = it;
            out.residual = r;
            return out;
        }
    }

    CMat least_squares_baseband(const CMat &F_RF, const CMat &F_FD)
    {
        return F_RF.completeOrthogonalDecomposition().solve(F_FD);
    }

    CMat phase_warm_start(const CMat &F_FD, int n_rf, std::uint64_t seed)
    {
        Rng rng(seed);
        CMat X(F_FD.rows(), n_rf);
        for (int j = 0; j < n_rf; ++j)
        {
            for (Eigen::Index i = 0; i < F_FD.rows(); ++i)
            {
                const double ph = rng.uniform(0.0, 2.0 * pi);
                const bool from_fd = j < F_FD.cols() && std::abs(F_FD(i, j)) > 0.0;
                X(i, j) = from_fd ? F_FD(i, j) / std::abs(F_FD(i, j)) : std::exp(j_unit * ph);
            }
        }
        return X;
    }

    CMat two_phasor_rf(const CMat &F_FD, int n_rf, std::uint64_t seed)
    {
        const Eigen::Index K = F_FD.cols();
        if (n_rf < 2 * K)
            throw std::invalid_argument("two_phasor_rf: needs n_rf >= 2 N_CU");
        CMat X = phase_warm_start(F_FD, n_rf, seed);
        for (Eigen::Index k = 0; k < K; ++k)
        {
            const double b = 0.5 * F_FD.col(k).cwiseAbs().maxCoeff();
            for (Eigen::Index i = 0; i < F_FD.rows(); ++i)
            {
                const double mag = std::abs(F_FD(i, k));
                const double arg = std::arg(F_FD(i, k));
                const double spread = b > 0.0 ? std::acos(std::clamp(mag / (2.0 * b), 0.0, 1.0)) : 0.5 * pi;
                X(i, 2 * k) = std::exp(j_unit * (arg + spread));
                X(i, 2 * k + 1) = std::exp(j_unit * (arg - spread));
            }
        }
        return X;
    }

    HybridPair factor_hybrid(const CMat &F_FD, int n_rf, double power_budget, const HybridOptions &options,
                             const std::optional<CMat> &initial_rf)
    {
        if (n_rf < 1)
            throw std::invalid_argument("factor_hybrid: n_rf must be positive");
        if (F_FD.size() == 0 || !F_FD.allFinite())
            throw std::invalid_argument("factor_hybrid: fully digital beamformer must be finite and nonempty");

        const double fd_power = F_FD.squaredNorm();
        const double scale = fd_power > 0.0 ? std::sqrt(fd_power) : 1.0;
        const CMat target = F_FD / scale;

        HybridPair best;
        if (initial_rf)
        {
            if (initial_rf->rows() != F_FD.rows() || initial_rf->cols() != n_rf)
                throw std::invalid_argument("factor_hybrid: initial analog stage has the wrong shape");
            best = refine(target, unit_modulus(*initial_rf), options);
        }
        else
        {
            best = refine(target, phase_warm_start(target, n_rf, options.seed), options);
            if (n_rf >= 2 * F_FD.cols())
            {
                HybridPair alt = refine(target, two_phasor_rf(target, n_rf, options.seed), options);
                if (alt.residual < best.residual)
                    best = std::move(alt);
            }
        }

        best.F_BB *= scale;
        const double achieved = (best.F_RF * best.F_BB).squaredNorm();
        const double wanted = std::min(fd_power, power_budget);
        if (achieved > 0.0)
            best.F_BB *= std::sqrt(wanted / achieved);
        return best;
    }
}
