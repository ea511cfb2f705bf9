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

#ifndef TRIHYBRID_CHANNEL_HPP
#define TRIHYBRID_CHANNEL_HPP

#include <cstdint>
#include <utility>
#include <vector>

#include "trihybrid/em_basis.hpp"
#include "trihybrid/types.hpp"

namespace trihybrid
{
    // Uniform planar array in the xy-plane.
    struct ArrayGeometry
    {
        int nx = 4;
        int ny = 4;
        double dx = 0.005;
        double dy = 0.005;

        int size() const { return nx * ny; }
    };

    // One propagation path or one point reflector as seen from the array.
    struct PathRecord
    {
        double theta = 0.0;
        double phi = 0.0;
        double distance = 1.0;
        double phase = 0.0;
    };

    struct Reflector
    {
        double theta = 0.0;
        double phi = 0.0;
        double distance = 1.0;
        double phase = 0.0;
        double rcs = 1.0;
    };

    struct Scenario
    {
        ArrayGeometry tx;
        ArrayGeometry rx;
        double wavelength = 0.1;
        double path_loss_exponent = 2.0;
        double noise_power = 1e-12;  // W
        double power_budget = 1e-6;  // W
        double beta_tilde = 5e-3;    // communication weight; sensing weight is 1 - beta_tilde
        int n_rf = 2;
        std::uint64_t seed = 0;

        std::vector<std::vector<PathRecord>> users; // per CU path list
        std::vector<Reflector> targets;
        std::vector<Reflector> scatterers;

        double beta() const { return 1.0 - beta_tilde; }
        int n_users() const { return static_cast<int>(users.size()); }
        int n_targets() const { return static_cast<int>(targets.size()); }
        int n_scatterers() const { return static_cast<int>(scatterers.size()); }

        // Throws std::invalid_argument on violated invariants.
        void validate() const;
    };

    struct Range
    {
        double lo = 0.0;
        double hi = 0.0;
    };

    // Inputs of the random placement. Distances in meters, powers in dBm.
    struct ScenarioConfig
    {
        double carrier_frequency = 3e9;
        int n_tx = 16;
        int n_rx = 16;
        double element_spacing = 0.005;
        int n_users = 1;
        int n_targets = 1;
        int n_scatterers = 2;
        int paths_per_user = 5;
        int n_rf = 2;
        Range user_distance{50.0, 150.0};
        Range target_distance{20.0, 60.0};
        Range scatterer_distance{20.0, 60.0};
        Range target_rcs{1.0, 10.0};
        Range scatterer_rcs{1.0, 10.0};
        Range path_loss_exponent{2.0, 2.5};
        double noise_dbm = -94.0;
        double power_dbm = -30.0;
        double beta_tilde = 5e-3;
    };

    double dbm_to_watt(double dbm);

    // Factor n elements into nx * ny with nx the largest divisor not above sqrt(n).
    ArrayGeometry planar_array(int n, double spacing);

    // Angles uniform on theta in [0, pi/2], phi in [0, 2 pi); distances, RCS and
    // path-loss exponent uniform on the configured ranges; phases uniform.
    Scenario generate_scenario(const ScenarioConfig &config, std::uint64_t seed);

    CVec steering_vector(double theta, double phi, int nx, int ny, double dx, double dy, double wavelength);
    CVec steering_vector(double theta, double phi, const ArrayGeometry &array, double wavelength);

    cplx comm_path_gain(double distance, double path_loss_exponent, double wavelength, double phase);
    cplx sensing_gain(double distance, double rcs, double wavelength, double phase);

    // Antenna-major EM channel: entry n * dim + t holds v_t(theta, phi) alpha a_n.
    CVec build_comm_em_channel(const Scenario &scenario, int user, const RadiationModel &model);

    // Forward (transmit side, N_T * dim) and backward (receive side, N_R * dim_rx)
    // channels of a point reflector, each carrying sqrt(alpha_t).
    std::pair<CVec, CVec> build_sensing_em_channels(const Scenario &scenario, const Reflector &entity,
                                                    const RadiationModel &tx_model, const RadiationModel &rx_model);

    // One coefficient vector per transmit antenna.
    using EmCoefficients = std::vector<CVec>;

    // Block-diagonal N_T dim x N_T; column n holds c^(n).
    CMat assemble_F_EM(const EmCoefficients &coeffs);

    // F_EM^H h^EM computed block-wise; entry n is c^(n)H h_n.
    CVec effective_channel(const CVec &h_em, const EmCoefficients &coeffs);

    // Fixed receive side: isotropic elements, unit-norm matched filter toward the
    // intended target. Sensing entities are ordered targets first, then scatterers.
    struct ReceiveWeights
    {
        double omega_self = 0.0;
        std::vector<std::pair<int, double>> interferers; // (entity index, omega_kappa)
        double noise = 0.0;                              // sigma_n^2 ||w_i||^2
    };

    struct EmChannelSet
    {
        int n_tx = 0;
        int dim = 0;
        RadiationModel::Kind kind = RadiationModel::Kind::fixed;
        std::vector<CVec> comm;          // per CU
        std::vector<CVec> sensing_fwd;   // per sensing entity
        std::vector<CVec> sensing_bwd;   // per sensing entity
        std::vector<ReceiveWeights> rx;  // per target
        double noise_power = 0.0;
        double power_budget = 0.0;
        double beta_tilde = 0.0;
        double beta = 0.0;

        int n_users() const { return static_cast<int>(comm.size()); }
        int n_targets() const { return static_cast<int>(rx.size()); }
        int n_entities() const { return static_cast<int>(sensing_fwd.size()); }
    };

    // Every other entity interferes with the intended one.
    ReceiveWeights fixed_receive_combiner(const std::vector<CVec> &backward, int target, double noise_power);

    EmChannelSet build_em_channels(const Scenario &scenario, const RadiationModel &model);

    // Channels after EM beamforming (length N_T each).
    struct EffectiveChannels
    {
        std::vector<CVec> comm;
        std::vector<CVec> sensing;
    };

    EffectiveChannels effective_channels(const EmChannelSet &channels, const EmCoefficients &coeffs);

    // Isotropic start: e_1 for every antenna (length dim).
    EmCoefficients initial_coefficients(int n_tx, int dim);
}

#endif
