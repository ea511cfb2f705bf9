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

#ifndef TRIHYBRID_HYBRID_FACTOR_HPP
#define TRIHYBRID_HYBRID_FACTOR_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "trihybrid/types.hpp"

namespace trihybrid
{
    struct HybridPair
    {
        CMat F_RF; // N_T x N_RF, unit-modulus entries
        CMat F_BB; // N_RF x N_CU
        double residual = 0.0; // ||F_RF F_BB - F_FD||_F^2 / ||F_FD||_F^2 before the power rescale
        std::vector<double> residual_trace;
        int iterations = 0;
    };

    struct HybridOptions
    {
        int max_iterations = 500;
        double tolerance = 1e-8;   // on the relative residual change
        double armijo = 1e-4;
        std::uint64_t seed = 0;    // padding phases of the warm start
    };

    // Least-squares digital stage for a fixed analog stage.
    CMat least_squares_baseband(const CMat &F_RF, const CMat &F_FD);

    // Alternates the least-squares digital stage with one Armijo step on the
    // unit-modulus torus. Without an explicit start it tries the phase warm start
    // and, when N_RF >= 2 N_CU, the exact two-phasor construction, keeping the
    // better. F_BB is finally rescaled to the power of F_FD, capped at budget.
    HybridPair factor_hybrid(const CMat &F_FD, int n_rf, double power_budget, const HybridOptions &options = {},
                             const std::optional<CMat> &initial_rf = std::nullopt);

    // Unit-modulus analog stage reproducing F_FD exactly with two phasors per
    // entry; requires n_rf >= 2 N_CU.
    CMat two_phasor_rf(const CMat &F_FD, int n_rf, std::uint64_t seed);

    // Phases of the first columns of F_FD, padded by seeded random phases.
    CMat phase_warm_start(const CMat &F_FD, int n_rf, std::uint64_t seed);
}

#endif
