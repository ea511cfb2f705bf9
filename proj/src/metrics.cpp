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

#include "trihybrid/metrics.hpp"

#include <cmath>
#include <stdexcept>

namespace trihybrid
{
    SinrTerms comm_sinr_terms(const EffectiveChannels &eff, const CMat &F, int k, double noise_power)
    {
        if (!(noise_power > 0.0))
            throw std::invalid_argument("comm_sinr: noise power must be positive");
        const CVec &h = eff.comm.at(static_cast<std::size_t>(k));
        if (F.rows() != h.size() || k >= F.cols())
            throw std::invalid_argument("comm_sinr: beamformer shape does not match the channels");
        SinrTerms t;
        t.interference = noise_power;
        for (Eigen::Index j = 0; j < F.cols(); ++j)
        {
            const double g = std::norm(h.dot(F.col(j)));
            if (j == k)
                t.signal = g;
            else
                t.interference += g;
        }
        return t;
    }

    double comm_sinr(const EffectiveChannels &eff, const CMat &F, int k, double noise_power)
    {
        return comm_sinr_terms(eff, F, k, noise_power).value();
    }

    ScnrTerms sensing_scnr_terms(const EmChannelSet &channels, const EffectiveChannels &eff, const CMat &F, int i)
    {
        if (F.size() == 0)
            throw std::invalid_argument("sensing_scnr: empty beamformer");
        const ReceiveWeights &rx = channels.rx.at(static_cast<std::size_t>(i));
        ScnrTerms t;
        t.signal = rx.omega_self * (eff.sensing.at(static_cast<std::size_t>(i)).adjoint() * F).squaredNorm();
        t.clutter = rx.noise;
        for (const auto &[idx, w] : rx.interferers)
            t.clutter += w * (eff.sensing[static_cast<std::size_t>(idx)].adjoint() * F).squaredNorm();
        return t;
    }

    double sensing_scnr(const EmChannelSet &channels, const EffectiveChannels &eff, const CMat &F, int i)
    {
        return sensing_scnr_terms(channels, eff, F, i).value();
    }

    double objective_sust(double sinr, double scnr, double beta_tilde, double beta)
    {
        return beta_tilde * sinr + beta * scnr;
    }

    double objective_mumt(double sum_rate, const RVec &scnr, double beta_tilde, double beta)
    {
        return beta_tilde * sum_rate + beta * scnr.sum();
    }

    Objectives evaluate(const EmChannelSet &channels, const EffectiveChannels &eff, const CMat &F, bool sust)
    {
        Objectives o;
        o.sinr.resize(channels.n_users());
        o.scnr.resize(channels.n_targets());
        for (int k = 0; k < channels.n_users(); ++k)
        {
            o.sinr[k] = comm_sinr(eff, F, k, channels.noise_power);
            o.sum_rate += std::log2(1.0 + o.sinr[k]);
        }
        for (int i = 0; i < channels.n_targets(); ++i)
            o.scnr[i] = sensing_scnr(channels, eff, F, i);
        if (sust)
        {
            if (channels.n_users() != 1 || channels.n_targets() != 1)
                throw std::invalid_argument("evaluate: the SNR-form objective needs one CU and one target");
            o.value = objective_sust(o.sinr[0], o.scnr[0], channels.beta_tilde, channels.beta);
        }
        else
            o.value = objective_mumt(o.sum_rate, o.scnr, channels.beta_tilde, channels.beta);
        return o;
    }
}
