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

#ifndef TRIHYBRID_NUMERICS_HPP
#define TRIHYBRID_NUMERICS_HPP

#include <functional>
#include <stdexcept>
#include <string>

#include "trihybrid/types.hpp"

namespace trihybrid::numerics
{
    class NumericError : public std::runtime_error
    {
    public:
        using std::runtime_error::runtime_error;
    };

    // Thrown by shifted_solve when (A - mu I) is numerically singular.
    class SingularShiftError : public NumericError
    {
    public:
        using NumericError::NumericError;
    };

    class BracketError : public NumericError
    {
    public:
        using NumericError::NumericError;
    };

    struct EigPair
    {
        double value = 0.0;
        CVec vector;
    };

    // Dominant eigenpair of a Hermitian matrix (symmetrized internally).
    // The eigenvector is unit norm with its first non-negligible entry real positive.
    EigPair hermitian_max_eigpair(const CMat &A);

    // Full spectrum, ascending.
    RVec all_eigenvalues(const CMat &A);

    // Solves (A - mu I) x = rhs. Throws SingularShiftError when the reciprocal
    // condition number of the shifted matrix is below 1e-14.
    CVec shifted_solve(const CMat &A, double mu, const CVec &rhs);

    // Root of f(x) = target for monotone f (either direction) on [lo, hi].
    // When [lo, hi] does not bracket the target the interval is widened up to 60
    // times before BracketError is thrown. Stops when |f(x) - target| <= tol or
    // the interval is narrower than 1e-12 (1 + |x|); at most 200 halvings.
    double bisection(const std::function<double(double)> &f, double lo, double hi, double target, double tol);

    struct SphereSolution
    {
        CVec x;
        double multiplier = 0.0; // mu with (mu I - M) x = g
        bool hard_case = false;
    };

    // Global maximizer of x^H M x + 2 Re(g^H x) subject to ||x|| = radius.
    // M Hermitian. The multiplier satisfies mu >= lambda_max(M).
    SphereSolution maximize_on_sphere(const CMat &M, const CVec &g, double radius);

    struct QuadratureRule
    {
        RVec nodes;
        RVec weights;
    };

    // Gauss-Legendre nodes and weights on [-1, 1].
    QuadratureRule gauss_legendre(int n);
}

#endif
