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

#ifndef TRIHYBRID_MUMT_SOLVER_HPP
#define TRIHYBRID_MUMT_SOLVER_HPP

#include "trihybrid/beamformer.hpp"
#include "trihybrid/channel.hpp"
#include "trihybrid/hybrid_factor.hpp"
#include "trihybrid/types.hpp"

namespace trihybrid
{
    struct MumtOptions
    {
        int max_outer = 50;
        double outer_tolerance = 1e-6; // relative change of the weighted objective
        int max_fp_rounds = 20;
        double fp_tolerance = 1e-8;
        HybridOptions hybrid;
    };

    // Weight of the natural-log rate inside the transforms, so that the
    // transformed objective equals the reported log2 objective.
    double rate_weight(double beta_tilde);

    struct Auxiliaries
    {
        RVec gamma; // per CU
        CVec p;     // per CU
        CMat q;     // q(i, k), target i, beam k
    };

    Auxiliaries update_auxiliaries(const EmChannelSet &channels, const EffectiveChannels &eff, const CMat &F);

    // Lagrangian-dual form at fixed gamma.
    double f_lagrangian(const EmChannelSet &channels, const EffectiveChannels &eff, const CMat &F, const RVec &gamma);

    // Quadratic-transform form at fixed auxiliaries.
    double f_quadratic(const EmChannelSet &channels, const EffectiveChannels &eff, const CMat &F,
                       const Auxiliaries &aux);

    struct BeamUpdate
    {
        CMat F;
        double mu = 0.0;
    };

    // Closed-form beams for a given power multiplier; mu = 0 uses the pseudo-inverse.
    CMat fd_beams_at(const EmChannelSet &channels, const EffectiveChannels &eff, const Auxiliaries &aux, double mu);

    // Beams of the quadratic-transform problem under the power budget, with the
    // multiplier found by bisection (zero when the budget is slack).
    BeamUpdate update_fd_beams(const EmChannelSet &channels, const EffectiveChannels &eff, const Auxiliaries &aux);

    // f_qua = constant + c_ext^H A c_ext + 2 Re(a^H c_ext) for antenna n.
    struct MumtAntennaQuadratic
    {
        CMat A;
        CVec a;
        double constant = 0.0;

        double value(const CVec &c) const;
    };

    MumtAntennaQuadratic em_quadratic_per_antenna(const EmChannelSet &channels, const EffectiveChannels &eff,
                                                  const CMat &F, const Auxiliaries &aux, int n);

    // Unit-norm maximizer of c_ext^H A c_ext + 2 Re(a^H c_ext) with c_ext = [c; 1].
    CVec solve_c_mumt(const CMat &A, const CVec &a);

    // Q((1 + e^T Q a) / (e^T Q e) e - a), Q = (A - mu I)^{-1}.
    CVec mumt_closed_form_extended(const CMat &A, const CVec &a, double mu);

    // Best library pattern index (0-based, lowest index on ties).
    int select_c_model_ii_mumt(const MumtAntennaQuadratic &quad);

    SolverReport run_mumt(const EmChannelSet &channels, int n_rf, const MumtOptions &options = {});
}

#endif
