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

#ifndef TRIHYBRID_SUST_SOLVER_HPP
#define TRIHYBRID_SUST_SOLVER_HPP

#include <vector>

#include "trihybrid/beamformer.hpp"
#include "trihybrid/channel.hpp"
#include "trihybrid/hybrid_factor.hpp"
#include "trihybrid/types.hpp"

namespace trihybrid
{
    struct SustOptions
    {
        int max_outer = 50;
        double outer_tolerance = 1e-6; // relative objective change
        int max_em_sweeps = 20;
        double em_tolerance = 1e-8;
        int fd_scan_points = 64;
        int fd_golden_steps = 40;
        int fd_max_refine = 100;
        double fd_tolerance = 1e-8;
        HybridOptions hybrid;
    };

    // Single CU / single target problem seen by the fully digital stage.
    struct SustProblem
    {
        CVec comm;
        CVec target;
        std::vector<CVec> clutter;
        RVec clutter_weight; // omega_kappa
        double omega = 0.0;
        double noise = 0.0;    // sigma_n^2
        double noise_rx = 0.0; // receive-side noise
        double beta_tilde = 0.0;
        double beta = 0.0;

        double sensing_numerator(const CVec &f) const;   // beta omega |h_t^H f|^2
        double sensing_denominator(const CVec &f) const; // sum omega_k |h_k^H f|^2 + noise_rx
        double value(const CVec &f) const;               // beta_tilde gamma + beta eta
        CMat clutter_covariance() const;                 // sum omega_k h_k h_k^H
    };

    SustProblem sust_problem(const EmChannelSet &channels, const EffectiveChannels &eff);

    // beta_tilde R_c / sigma^2 + beta omega R_t - varsigma sum omega_k R_k.
    CMat build_R(const SustProblem &problem, double varsigma);

    struct FdResult
    {
        CVec f;
        double varsigma = 0.0;
        std::vector<double> varsigma_trace;
        int iterations = 0;
        bool converged = true;
    };

    // Power-constrained maximizer of beta_tilde gamma + beta eta. A scan over the
    // real quadratic-transform auxiliary of the sensing ratio solves one sphere
    // subproblem per point; the best point is refined with stationary-point
    // eigen-iterations that are accepted only when they raise the objective
    // without lowering the sensing ratio varsigma. An incumbent, when given, is
    // returned if nothing beats it.
    FdResult dinkelbach_fd(const SustProblem &problem, double power_budget, const SustOptions &options = {},
                           const CVec *incumbent = nullptr);

    // Extended per-antenna vectors [a; conj(s)] of one channel, so that
    // h^H F_EM f = a_ext^H [c; 1].
    struct ExtendedTerms
    {
        CVec comm;
        CVec target;
        std::vector<CVec> clutter;
    };

    ExtendedTerms extended_terms(const EmChannelSet &channels, const CVec &f, const EmCoefficients &coeffs, int n);

    // Per-antenna objective: beta_tilde gamma + beta eta as a function of c^(n).
    double antenna_objective(const EmChannelSet &channels, const ExtendedTerms &terms, const CVec &c);

    // A^(n) with Dinkelbach parameter varsigma; the sensing block is divided by
    // denominator_scale (1 gives the subtractive form).
    CMat em_coeffs_per_antenna(const EmChannelSet &channels, const ExtendedTerms &terms, double varsigma,
                               double denominator_scale = 1.0);

    // Unit-norm maximizer of [c; 1]^H A [c; 1].
    CVec solve_c_closed_form(const CMat &A);

    // (A - mu I)^{-1} e / (e^T (A - mu I)^{-1} e).
    CVec closed_form_extended(const CMat &A, double mu);

    // Index of the best library pattern for antenna n (0-based, lowest index on ties).
    int select_c_model_ii(const EmChannelSet &channels, const ExtendedTerms &terms);

    SolverReport run_sust(const EmChannelSet &channels, int n_rf, const SustOptions &options = {});
}

#endif
