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

#ifndef TRIHYBRID_BEAMFORMER_HPP
#define TRIHYBRID_BEAMFORMER_HPP

#include <string>
#include <vector>

#include "trihybrid/channel.hpp"
#include "trihybrid/metrics.hpp"
#include "trihybrid/types.hpp"

namespace trihybrid
{
    struct TriHybridBeamformer
    {
        EmCoefficients em; // per-antenna pattern coefficients
        CMat F_FD;         // fully digital surrogate, N_T x N_CU
        CMat F_RF;         // N_T x N_RF
        CMat F_BB;         // N_RF x N_CU

        CMat hybrid() const { return F_RF * F_BB; }
    };

    struct SolverReport
    {
        TriHybridBeamformer beamformer;
        Objectives fd;     // metrics of the fully digital surrogate
        Objectives hybrid; // metrics of F_RF F_BB
        double hybrid_residual = 0.0;
        std::vector<double> trace;                      // objective after every stage
        std::vector<std::vector<double>> varsigma;      // per FD stage, SUST only
        std::vector<std::vector<double>> em_varsigma;   // per EM stage, SUST only
        int outer_iterations = 0;
        bool converged = false;
        std::vector<std::string> warnings;
    };
}

#endif
