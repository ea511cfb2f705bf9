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

#ifndef TRIHYBRID_TESTS_FIXTURES_HPP
#define TRIHYBRID_TESTS_FIXTURES_HPP

#include <memory>

#include "trihybrid/channel.hpp"
#include "trihybrid/em_basis.hpp"

namespace fixtures
{
    using namespace trihybrid;

    inline std::shared_ptr<const SphericalHarmonicBasis> basis(int U = 2)
    {
        return std::make_shared<SphericalHarmonicBasis>(U);
    }

    inline RadiationModel model_i(int U = 2) { return RadiationModel::harmonic(basis(U)); }

    // Default scenario with a chosen number of CUs and targets.
    inline Scenario scenario(std::uint64_t seed, int n_users = 1, int n_targets = 1, int n_tx = 16)
    {
        ScenarioConfig cfg;
        cfg.n_users = n_users;
        cfg.n_targets = n_targets;
        cfg.n_tx = n_tx;
        cfg.n_rf = std::max(2, 2 * n_users);
        return generate_scenario(cfg, seed);
    }
}

#endif
