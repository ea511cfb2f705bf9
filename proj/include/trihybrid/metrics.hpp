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

#ifndef TRIHYBRID_METRICS_HPP
#define TRIHYBRID_METRICS_HPP

#include "trihybrid/channel.hpp"
#include "trihybrid/types.hpp"

namespace trihybrid
{
    // Per-ratio terms of one CU: gamma_k = A_k / B_k.
    struct SinrTerms
    {
        double signal = 0.0;       // A_k
        double interference = 0.0; // B_k, noise included
        double value() const { return signal / interference; }
    };

    // Per-ratio terms of one target: eta_i = C_i / D_i.
    struct ScnrTerms
    {
        double signal = 0.0;  // C_i
        double clutter = 0.0; // D_i, receive noise included
        double value() const { return signal / clutter; }
    };

    struct Objectives
    {
        RVec sinr;
        double sum_rate = 0.0; // bits/s/Hz
        RVec scnr;
        double value = 0.0;
    };

    // F holds one transmit beam per CU (N_T x N_CU), already including the
    // analog and digital stages.
    SinrTerms comm_sinr_terms(const EffectiveChannels &eff, const CMat &F, int k, double noise_power);
    double comm_sinr(const EffectiveChannels &eff, const CMat &F, int k, double noise_power);

    ScnrTerms sensing_scnr_terms(const EmChannelSet &channels, const EffectiveChannels &eff, const CMat &F, int i);
    double sensing_scnr(const EmChannelSet &channels, const EffectiveChannels &eff, const CMat &F, int i);

    double objective_sust(double sinr, double scnr, double beta_tilde, double beta);
    double objective_mumt(double sum_rate, const RVec &scnr, double beta_tilde, double beta);

    // All metrics; the scalarization is the SNR form for a single CU and target
    // when sust is true, the rate form otherwise.
    Objectives evaluate(const EmChannelSet &channels, const EffectiveChannels &eff, const CMat &F, bool sust);
}

#endif
