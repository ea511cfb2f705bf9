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

#include "trihybrid/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace trihybrid::numerics
{
    namespace
    {
        CMat hermitian_part(const CMat &A)
        {
            if (A.rows() != A.cols())
                throw NumericError("Hermitian routine requires a square matrix");
            if (!A.allFinite())
                throw NumericError("Matrix contains non-finite entries");
            return 0.5 * (A + A.adjoint());
        }

        void fix_phase(CVec &v)
        {
            const double vmax = v.cwiseAbs().maxCoeff();
            for (Eigen::Index i = 0; i < v.size(); ++i)
            {
                if (std::abs(v[i]) > 1e-8 * vmax)
                {
                    v *= std::conj(v[i]) / std::abs(v[i]);
                    v[i] = std::abs(v[i]);
                    return;
                }
            }
        }
    }

    EigPair hermitian_max_eigpair(const CMat &A)
    {
        const CMat H = hermitian_part(A);
        Eigen::SelfAdjointEigenSolver<CMat> es(H);
        if (es.info() != Eigen::Success)
            throw NumericError("Eigen decomposition failed");
        const Eigen::Index last = H.rows() - 1;
        EigPair out{es.eigenvalues()[last], es.eigenvectors().col(last)};
        out.vector.normalize();
        fix_phase(out.vector);
        return out;
    }

    RVec all_eigenvalues(const CMat &A)
    {
        const CMat H = hermitian_part(A);
        Eigen::SelfAdjointEigenSolver<CMat> es(H, Eigen::EigenvaluesOnly);
        if (es.info() != Eigen::Success)
            throw NumericError("Eigen decomposition failed");
        return es.eigenvalues();
    }

    CVec shifted_solve(const CMat &A, double mu, const CVec &rhs)
    {
        if (A.rows() != A.cols() || A.rows() != rhs.size())
            throw NumericError("shifted_solve: dimension mismatch");
        CMat B = A;
        B.diagonal().array() -= mu;
        Eigen::PartialPivLU<CMat> lu(B);
        if (!(lu.rcond() >= 1e-14))
            throw SingularShiftError("shifted_solve: shifted matrix is singular to working precision");
        CVec x = lu.solve(rhs);
        // one step of iterative refinement
        const CVec r = rhs - B * x;
        x += lu.solve(r);
        return x;
    }

    double bisection(const std::function<double(double)> &f, double lo, double hi, double target, double tol)
    {
        if (lo > hi)
            std::swap(lo, hi);
        double flo = f(lo), fhi = f(hi);

        auto brackets = [&]()
        { return (flo - target) * (fhi - target) <= 0.0; };

        for (int k = 0; k < 60 && !brackets(); ++k)
        {
            const double width = std::max(hi - lo, 1e-300);
            const bool increasing = fhi >= flo;
            // widen towards the side where the target lies
            if ((increasing && target > fhi) || (!increasing && target < fhi))
            {
                hi = hi + width;
                fhi = f(hi);
            }
            else
            {
                lo = lo - width;
                flo = f(lo);
            }
        }
        if (!brackets())
            throw BracketError("bisection: target is not bracketed");
        if (std::abs(flo - target) <= tol)
            return lo;
        if (std::abs(fhi - target) <= tol)
            return hi;

        const bool increasing = fhi >= flo;
        double mid = 0.5 * (lo + hi);
        for (int it = 0; it < 200; ++it)
        {
            mid = 0.5 * (lo + hi);
            const double fm = f(mid);
            if (std::abs(fm - target) <= tol)
                return mid;
            if ((fm < target) == increasing)
                lo = mid;
            else
                hi = mid;
            if (hi - lo < 1e-12 * (1.0 + std::abs(mid)))
                break;
        }
        return 0.5 * (lo + hi);
    }

    SphereSolution maximize_on_sphere(const CMat &M, const CVec &g, double radius)
    {
        if (M.rows() != g.size())
            throw NumericError("maximize_on_sphere: dimension mismatch");
        if (!(radius > 0.0))
            throw NumericError("maximize_on_sphere: radius must be positive");

        const CMat H = hermitian_part(M);
        // scale so that the spectrum and the linear term are O(1)
        const double gnorm = g.norm();
        const double scale = std::max({H.cwiseAbs().maxCoeff(), gnorm / radius, std::numeric_limits<double>::min()});
        const CMat Hs = H / scale;
        const CVec gs = g / (scale * radius); // x = radius * z, ||z|| = 1, objective / (scale radius^2)

        Eigen::SelfAdjointEigenSolver<CMat> es(Hs);
        if (es.info() != Eigen::Success)
            throw NumericError("Eigen decomposition failed");
        const RVec &lam = es.eigenvalues();
        const CMat &V = es.eigenvectors();
        const Eigen::Index n = lam.size();
        const double lmax = lam[n - 1];
        const CVec gt = V.adjoint() * gs;

        const double gap_tol = 1e-10 * std::max(1.0, std::abs(lmax));
        double top_weight = 0.0;
        for (Eigen::Index i = 0; i < n; ++i)
            if (lmax - lam[i] <= gap_tol)
                top_weight += std::norm(gt[i]);

        SphereSolution out;
        const double gs_norm2 = gt.squaredNorm();

        if (top_weight <= 1e-24 * std::max(gs_norm2, 1e-300) || gs_norm2 == 0.0)
        {
            // hard case: the linear term has no weight on the top eigenspace
            CVec zp = CVec::Zero(n);
            Eigen::Index top_index = n - 1;
            for (Eigen::Index i = 0; i < n; ++i)
            {
                if (lmax - lam[i] > gap_tol)
                    zp[i] = gt[i] / (lmax - lam[i]);
                else
                    top_index = std::min(top_index, i);
            }
            const double zn2 = zp.squaredNorm();
            if (zn2 <= 1.0)
            {
                zp[top_index] = std::sqrt(1.0 - zn2);
                out.x = radius * (V * zp);
                out.multiplier = lmax * scale;
                out.hard_case = true;
                return out;
            }
        }

        auto norm2 = [&](double t)
        {
            double s = 0.0;
            for (Eigen::Index i = 0; i < n; ++i)
            {
                const double d = lmax + t - lam[i];
                s += std::norm(gt[i]) / (d * d);
            }
            return s;
        };
        // ||z(t)||^2 decreases from +inf (t -> 0+) to 0; norm2(||gs||) <= 1
        const double hi = std::max(std::sqrt(gs_norm2), 1e-300);
        double t = hi;
        if (norm2(hi) < 1.0)
        {
            double lo = 0.0, up = hi;
            for (int it = 0; it < 200; ++it)
            {
                const double mid = 0.5 * (lo + up);
                if (mid <= lo || mid >= up)
                    break;
                if (norm2(mid) > 1.0)
                    lo = mid;
                else
                    up = mid;
            }
            t = up;
        }
        CVec z(n);
        for (Eigen::Index i = 0; i < n; ++i)
            z[i] = gt[i] / (lmax + t - lam[i]);
        z.normalize();
        out.x = radius * (V * z);
        out.multiplier = (lmax + t) * scale;
        return out;
    }

    QuadratureRule gauss_legendre(int n)
    {
        if (n < 1)
            throw NumericError("gauss_legendre: n must be positive");
        QuadratureRule rule{RVec(n), RVec(n)};
        for (int i = 0; i < n; ++i)
        {
            double x = std::cos(pi * (i + 0.75) / (n + 0.5));
            double dp = 0.0;
            for (int it = 0; it < 100; ++it)
            {
                double p0 = 1.0, p1 = x;
                for (int k = 2; k <= n; ++k)
                {
                    const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                    p0 = p1;
                    p1 = p2;
                }
                if (n == 1)
                {
                    p1 = x;
                    p0 = 1.0;
                }
                dp = n * (x * p1 - p0) / (x * x - 1.0);
                const double dx = p1 / dp;
                x -= dx;
                if (std::abs(dx) < 1e-15)
                    break;
            }
            rule.nodes[i] = x;
            rule.weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
        }
        return rule;
    }
}
