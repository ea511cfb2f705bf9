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

// Reference computations used by the unit and acceptance tests. None of them
// calls into the library; they are slow brute-force or closed-form versions of
// what the library computes.

#ifndef TRIHYBRID_TESTS_ORACLES_HPP
#define TRIHYBRID_TESTS_ORACLES_HPP

#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <random>
#include <vector>

#include <Eigen/Dense>

namespace oracle
{
    using cplx = std::complex<double>;
    using CVec = Eigen::VectorXcd;
    using CMat = Eigen::MatrixXcd;
    inline constexpr double pi = 3.14159265358979323846;

    // Closed-form P_u^q(x) for u <= 4, no Condon-Shortley phase.
    inline double legendre_table(int u, int q, double x)
    {
        const double s = std::sqrt(std::max(0.0, 1.0 - x * x));
        switch (u * 10 + q)
        {
        case 0: return 1.0;
        case 10: return x;
        case 11: return s;
        case 20: return 0.5 * (3.0 * x * x - 1.0);
        case 21: return 3.0 * x * s;
        case 22: return 3.0 * s * s;
        case 30: return 0.5 * (5.0 * x * x * x - 3.0 * x);
        case 31: return 1.5 * (5.0 * x * x - 1.0) * s;
        case 32: return 15.0 * x * s * s;
        case 33: return 15.0 * s * s * s;
        case 40: return (35.0 * x * x * x * x - 30.0 * x * x + 3.0) / 8.0;
        case 41: return 2.5 * (7.0 * x * x * x - 3.0 * x) * s;
        case 42: return 7.5 * (7.0 * x * x - 1.0) * s * s;
        case 43: return 105.0 * x * s * s * s;
        case 44: return 105.0 * s * s * s * s;
        default: return std::numeric_limits<double>::quiet_NaN();
        }
    }

    struct Quadrature
    {
        std::vector<double> x, w;
    };

    // Gauss-Legendre rule by Newton iteration on the three-term recurrence.
    inline Quadrature gauss_legendre_newton(int n)
    {
        Quadrature q;
        q.x.resize(n);
        q.w.resize(n);
        for (int i = 0; i < n; ++i)
        {
            double z = std::cos(pi * (i + 0.75) / (n + 0.5));
            double dp = 0.0;
            for (int it = 0; it < 100; ++it)
            {
                double p0 = 1.0, p1 = z;
                for (int k = 2; k <= n; ++k)
                {
                    const double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
                    p0 = p1;
                    p1 = p2;
                }
                const double pn = n == 1 ? z : p1;
                const double pm = n == 1 ? 1.0 : p0;
                dp = n * (z * pn - pm) / (z * z - 1.0);
                const double dz = pn / dp;
                z -= dz;
                if (std::abs(dz) < 1e-16)
                    break;
            }
            q.x[i] = z;
            q.w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
        }
        return q;
    }

    // Dominant eigenpair by shifted power iteration.
    inline std::pair<double, CVec> power_iteration(const CMat &A, int steps, std::uint64_t seed)
    {
        const double shift = A.cwiseAbs().rowwise().sum().maxCoeff(); // Gershgorin bound
        const CMat B = A + shift * CMat::Identity(A.rows(), A.cols());
        std::mt19937_64 g(seed);
        std::normal_distribution<double> N;
        CVec v(A.rows());
        for (auto &e : v)
            e = cplx(N(g), N(g));
        v.normalize();
        for (int i = 0; i < steps; ++i)
        {
            v = B * v;
            v.normalize();
        }
        return {std::real(v.dot(A * v)), v};
    }

    inline double quad_ext(const CMat &A, const CVec &a, const CVec &c)
    {
        CVec x(c.size() + 1);
        x.head(c.size()) = c;
        x[c.size()] = 1.0;
        double v = std::real(x.dot(A * x));
        if (a.size())
            v += 2.0 * std::real(a.dot(x));
        return v;
    }

    // Maximum of [c;1]^H A [c;1] + 2 Re(a^H [c;1]) over unit c in C^2 on an
    // n^3 grid: c = e^{j g} (cos t, e^{j p} sin t).
    inline double grid_max_t2(const CMat &A, const CVec &a, int n = 100)
    {
        double best = -std::numeric_limits<double>::infinity();
        CVec c(2);
        for (int i = 0; i < n; ++i)
        {
            const double t = 0.5 * pi * i / (n - 1);
            for (int j = 0; j < n; ++j)
            {
                const double p = 2.0 * pi * j / n;
                for (int k = 0; k < n; ++k)
                {
                    const double g = 2.0 * pi * k / n;
                    c[0] = std::polar(std::cos(t), g);
                    c[1] = std::polar(std::sin(t), g + p);
                    best = std::max(best, quad_ext(A, a, c));
                }
            }
        }
        return best;
    }

    // beta_tilde |h_c^H f|^2 / noise + beta omega |h_t^H f|^2 / (sum_k w_k |h_k^H f|^2 + noise_rx)
    struct SustInstance
    {
        CVec hc, ht;
        std::vector<CVec> hk;
        std::vector<double> wk;
        double noise = 1.0, noise_rx = 1.0, beta_tilde = 0.5, beta = 0.5, omega = 1.0, P = 1.0;

        double value(const CVec &f) const
        {
            double D = noise_rx;
            for (std::size_t k = 0; k < hk.size(); ++k)
                D += wk[k] * std::norm(hk[k].dot(f));
            return beta_tilde * std::norm(hc.dot(f)) / noise + beta * omega * std::norm(ht.dot(f)) / D;
        }

        // Gradient with respect to conj(f).
        CVec gradient(const CVec &f) const
        {
            double D = noise_rx;
            CVec gD = CVec::Zero(f.size());
            for (std::size_t k = 0; k < hk.size(); ++k)
            {
                const cplx s = hk[k].dot(f);
                D += wk[k] * std::norm(s);
                gD += wk[k] * hk[k] * s;
            }
            const cplx st = ht.dot(f);
            const double Nn = beta * omega * std::norm(st);
            const CVec gN = beta * omega * ht * st;
            return beta_tilde / noise * hc * hc.dot(f) + (gN * D - Nn * gD) / (D * D);
        }
    };

    // Best value over restarts of projected gradient ascent on ||f||^2 <= P.
    inline double projected_gradient_max(const SustInstance &p, int restarts, int iterations, std::uint64_t seed)
    {
        std::mt19937_64 g(seed);
        std::normal_distribution<double> N;
        const double r = std::sqrt(p.P);
        auto project = [&](CVec f)
        {
            const double n = f.norm();
            if (n > r)
                f *= r / n;
            return f;
        };
        double best = -std::numeric_limits<double>::infinity();
        for (int s = 0; s < restarts; ++s)
        {
            CVec f(p.hc.size());
            for (auto &e : f)
                e = cplx(N(g), N(g));
            f = project(f * (r / f.norm()));
            double v = p.value(f);
            double step = 1.0;
            for (int it = 0; it < iterations; ++it)
            {
                const CVec gr = p.gradient(f);
                const double gn = gr.norm();
                if (gn == 0.0)
                    break;
                bool moved = false;
                for (int bt = 0; bt < 30; ++bt)
                {
                    const CVec cand = project(f + (step * r / gn) * gr);
                    const double vc = p.value(cand);
                    if (vc > v)
                    {
                        f = cand;
                        v = vc;
                        step = std::min(1.0, step * 2.0);
                        moved = true;
                        break;
                    }
                    step *= 0.5;
                }
                if (!moved)
                    break;
            }
            best = std::max(best, v);
        }
        return best;
    }

    inline CVec random_cvec(std::mt19937_64 &g, int n)
    {
        std::normal_distribution<double> N;
        CVec v(n);
        for (auto &e : v)
            e = cplx(N(g), N(g));
        return v;
    }

    inline CMat random_cmat(std::mt19937_64 &g, int m, int n)
    {
        std::normal_distribution<double> N;
        CMat M(m, n);
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < n; ++j)
                M(i, j) = cplx(N(g), N(g));
        return M;
    }

    inline CMat random_hermitian(std::mt19937_64 &g, int n)
    {
        const CMat B = random_cmat(g, n, n);
        return 0.5 * (B + B.adjoint());
    }
}

#endif
