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

#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "trihybrid/numerics.hpp"

using namespace trihybrid;
using namespace trihybrid::numerics;

TEST_CASE("dominant eigenpair of simple matrices")
{
    CMat D = CMat::Zero(2, 2);
    D(0, 0) = 2.0;
    D(1, 1) = 1.0;
    const EigPair e = hermitian_max_eigpair(D);
    CHECK(e.value == doctest::Approx(2.0));
    CHECK(std::abs(e.vector[0] - cplx(1.0, 0.0)) < 1e-12);
    CHECK(std::abs(e.vector[1]) < 1e-12);

    std::mt19937_64 g(3);
    const CVec a = oracle::random_cvec(g, 5);
    const EigPair r = hermitian_max_eigpair(a * a.adjoint());
    CHECK(r.value == doctest::Approx(a.squaredNorm()).epsilon(1e-12));
    CHECK(std::abs(std::abs(r.vector.dot(a)) - a.norm()) < 1e-10 * a.norm());
}

TEST_CASE("dominant eigenpair matches power iteration")
{
    std::mt19937_64 g(11);
    for (int trial = 0; trial < 5; ++trial)
    {
        const CMat A = oracle::random_hermitian(g, 8);
        const auto [lam, v] = oracle::power_iteration(A, 10000, 100 + trial);
        const EigPair e = hermitian_max_eigpair(A);
        CHECK(std::abs(e.value - lam) < 1e-8 * std::abs(lam));
        CHECK(std::abs(std::abs(e.vector.dot(v)) - 1.0) < 1e-8);
    }
}

TEST_CASE("full spectrum")
{
    const RVec l = all_eigenvalues(CMat::Identity(3, 3));
    CHECK((l - RVec::Ones(3)).norm() < 1e-14);

    CMat D = CMat::Zero(3, 3);
    D(0, 0) = 5.0;
    D(1, 1) = -1.0;
    const RVec d = all_eigenvalues(D);
    CHECK(d[0] == doctest::Approx(-1.0));
    CHECK(std::abs(d[1]) < 1e-14);
    CHECK(d[2] == doctest::Approx(5.0));

    std::mt19937_64 g(5);
    const CMat A = oracle::random_hermitian(g, 6);
    CHECK(all_eigenvalues(A).sum() == doctest::Approx(std::real(A.trace())).epsilon(1e-12));
}

TEST_CASE("shifted solve")
{
    CVec e = CVec::Zero(2);
    e[0] = 1.0;
    CHECK((shifted_solve(CMat::Zero(2, 2), -1.0, e) - e).norm() < 1e-15);

    CMat A = CMat::Zero(2, 2);
    A(0, 0) = 1.0;
    A(1, 1) = 2.0;
    const CVec x = shifted_solve(A, 3.0, CVec::Ones(2));
    CHECK(std::abs(x[0] - cplx(-0.5)) < 1e-15);
    CHECK(std::abs(x[1] - cplx(-1.0)) < 1e-15);

    std::mt19937_64 g(8);
    const CMat B = oracle::random_cmat(g, 5, 5);
    const CMat S = B * B.adjoint() + CMat::Identity(5, 5);
    const CVec rhs = oracle::random_cvec(g, 5);
    const CVec y = shifted_solve(S, -0.3, rhs);
    CHECK(((S + 0.3 * CMat::Identity(5, 5)) * y - rhs).norm() < 1e-10);

    CHECK_THROWS_AS(shifted_solve(A, 1.0, CVec::Ones(2)), SingularShiftError);
}

TEST_CASE("bisection")
{
    CHECK(bisection([](double x) { return x; }, 0.0, 1.0, 0.5, 1e-12) == doctest::Approx(0.5));
    CHECK(bisection([](double x) { return x * x * x; }, 0.0, 3.0, 8.0, 1e-12) == doctest::Approx(2.0).epsilon(1e-10));
    // decreasing function and a widened bracket
    CHECK(bisection([](double x) { return -x; }, 0.0, 1.0, -4.0, 1e-12) == doctest::Approx(4.0).epsilon(1e-10));
    CHECK_THROWS_AS(bisection([](double) { return 1.0; }, 0.0, 1.0, 2.0, 1e-12), BracketError);
}

TEST_CASE("norm-constraint root through the shifted system")
{
    // ||(A - mu I)^{-1} g||^2 = 1 for mu above the spectrum
    std::mt19937_64 g(21);
    const CMat A = oracle::random_hermitian(g, 4);
    const CVec rhs = oracle::random_cvec(g, 4);
    const double lmax = all_eigenvalues(A).maxCoeff();
    auto norm2 = [&](double mu) { return shifted_solve(A, mu, rhs).squaredNorm(); };
    const double mu = bisection(norm2, lmax + 1e-6, lmax + 100.0, 1.0, 1e-12);
    CHECK(std::abs(norm2(mu) - 1.0) < 1e-8);
}

TEST_CASE("sphere maximization beats random feasible points")
{
    std::mt19937_64 g(33);
    for (int trial = 0; trial < 10; ++trial)
    {
        const CMat M = oracle::random_hermitian(g, 4);
        const CVec lin = oracle::random_cvec(g, 4) * (trial % 3 == 0 ? 0.0 : 1.0);
        const SphereSolution s = maximize_on_sphere(M, lin, 2.0);
        CHECK(s.x.norm() == doctest::Approx(2.0).epsilon(1e-10));
        auto f = [&](const CVec &x) { return std::real(x.dot(M * x)) + 2.0 * std::real(lin.dot(x)); };
        const double v = f(s.x);
        for (int k = 0; k < 2000; ++k)
        {
            CVec x = oracle::random_cvec(g, 4);
            x *= 2.0 / x.norm();
            CHECK(f(x) <= v + 1e-9 * std::abs(v));
        }
        // stationarity: (mu I - M) x = g
        CHECK((s.multiplier * s.x - M * s.x - lin).norm() < 1e-8 * (1.0 + lin.norm() + M.norm()));
    }
}

TEST_CASE("Gauss-Legendre integrates polynomials exactly")
{
    const QuadratureRule q = gauss_legendre(10);
    for (int k = 0; k <= 19; ++k)
    {
        double s = 0.0;
        for (Eigen::Index i = 0; i < q.nodes.size(); ++i)
            s += q.weights[i] * std::pow(q.nodes[i], k);
        const double exact = k % 2 ? 0.0 : 2.0 / (k + 1);
        CHECK(std::abs(s - exact) < 1e-13);
    }
    const oracle::Quadrature o = oracle::gauss_legendre_newton(10);
    for (int i = 0; i < 10; ++i)
    {
        bool found = false;
        for (Eigen::Index j = 0; j < 10; ++j)
            found |= std::abs(q.nodes[j] - o.x[i]) < 1e-13 && std::abs(q.weights[j] - o.w[i]) < 1e-13;
        CHECK(found);
    }
}
