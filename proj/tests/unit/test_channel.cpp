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

#include "fixtures.hpp"
#include "oracles.hpp"
#include "trihybrid/channel.hpp"

using namespace trihybrid;

TEST_CASE("steering vector")
{
    const CVec a0 = steering_vector(0.0, 1.3, 4, 4, 0.005, 0.005, 0.1);
    CHECK((a0 - CVec::Ones(16)).norm() < 1e-14);
    CHECK((steering_vector(0.7, 0.2, 1, 1, 0.01, 0.01, 0.1) - CVec::Ones(1)).norm() < 1e-15);

    const CVec a = steering_vector(pi / 2, 0.0, 2, 2, 0.05, 0.05, 0.1);
    const cplx expect[4] = {1.0, 1.0, -1.0, -1.0};
    for (int i = 0; i < 4; ++i)
        CHECK(std::abs(a[i] - expect[i]) < 1e-12);
}

TEST_CASE("path and sensing gains")
{
    CHECK(std::abs(comm_path_gain(1.0, 2.0, 0.1, 0.0) - cplx(0.1 / (4.0 * pi))) < 1e-15);
    CHECK(std::abs(comm_path_gain(1.0, 2.0, 0.1, pi) + comm_path_gain(1.0, 2.0, 0.1, 0.0)) < 1e-15);
    CHECK(std::abs(comm_path_gain(2.0, 2.0, 0.1, 0.0)) == doctest::Approx(0.5 * std::abs(comm_path_gain(1.0, 2.0, 0.1, 0.0))));

    const double base = std::abs(sensing_gain(10.0, 1.0, 0.1, 0.0));
    CHECK(std::abs(sensing_gain(20.0, 1.0, 0.1, 0.0)) == doctest::Approx(base / 4.0));
    CHECK(std::abs(sensing_gain(10.0, 4.0, 0.1, 0.0)) == doctest::Approx(base * 2.0));
    CHECK(std::abs(sensing_gain(100.0, 1.0, 0.1, 0.0)) == doctest::Approx(2.2456e-7).epsilon(1e-4));
    CHECK_THROWS(sensing_gain(-1.0, 1.0, 0.1, 0.0));
}

TEST_CASE("planar array factorization")
{
    CHECK(planar_array(16, 0.005).nx == 4);
    CHECK(planar_array(8, 0.005).nx == 2);
    CHECK(planar_array(8, 0.005).ny == 4);
    CHECK(planar_array(7, 0.005).nx == 1);
    CHECK(dbm_to_watt(-30.0) == doctest::Approx(1e-6));
}

namespace
{
    Scenario single_path(double theta, double phi, double phase = 0.0)
    {
        Scenario s;
        s.tx = planar_array(4, 0.03);
        s.rx = planar_array(4, 0.03);
        s.wavelength = 0.1;
        s.users = {{PathRecord{theta, phi, 30.0, phase}}};
        s.targets = {Reflector{0.4, 1.0, 25.0, 0.3, 2.0}};
        return s;
    }
}

TEST_CASE("communication channel of the trivial array")
{
    Scenario s;
    s.tx = planar_array(1, 0.005);
    s.rx = planar_array(1, 0.005);
    s.users = {{PathRecord{0.3, 0.2, 1.0, 0.0}}};
    s.path_loss_exponent = 0.0;
    s.wavelength = 4.0 * pi; // unit path gain
    const CVec h = build_comm_em_channel(s, 0, RadiationModel::fixed(FixedPattern::omni));
    REQUIRE(h.size() == 1);
    CHECK(std::abs(h[0] - cplx(1.0)) < 1e-14);
}

TEST_CASE("effective channel equals the scalar element model")
{
    const Scenario s = single_path(0.6, 2.2, 0.4);
    const RadiationModel m = fixtures::model_i();
    const CVec h = build_comm_em_channel(s, 0, m);
    CHECK(h.size() == 4 * 9);

    std::mt19937_64 g(2);
    EmCoefficients c;
    for (int n = 0; n < 4; ++n)
        c.push_back(oracle::random_cvec(g, 9).normalized());
    const CVec eff = effective_channel(h, c);
    const CMat F_EM = assemble_F_EM(c);
    CHECK((F_EM.adjoint() * h - eff).norm() < 1e-14 * h.norm());

    const cplx alpha = comm_path_gain(30.0, s.path_loss_exponent, s.wavelength, 0.4);
    const CVec a = steering_vector(0.6, 2.2, s.tx, s.wavelength);
    for (int n = 0; n < 4; ++n)
    {
        const cplx ref = m.realized_gain(c[n], 0.6, 2.2) * alpha * a[n] * std::sqrt(4.0);
        CHECK(std::abs(eff[n] - ref) < 1e-12 * std::abs(ref));
    }
    CHECK((F_EM.adjoint() * F_EM - CMat::Identity(4, 4)).norm() < 1e-12);
}

TEST_CASE("paths in antiphase cancel")
{
    Scenario s = single_path(0.6, 2.2, 0.0);
    s.users[0].push_back(PathRecord{0.6, 2.2, 30.0, pi});
    const CVec h = build_comm_em_channel(s, 0, fixtures::model_i());
    CHECK(h.norm() < 1e-12 * std::abs(comm_path_gain(30.0, 2.0, 0.1, 0.0)));
}

TEST_CASE("sensing channels")
{
    Scenario s;
    s.tx = planar_array(1, 0.005);
    s.rx = planar_array(1, 0.005);
    s.wavelength = std::sqrt(std::pow(4.0 * pi, 3)); // unit round-trip gain at r = 1, rcs = 1
    const Reflector e{0.5, 0.5, 1.0, 0.0, 1.0};
    const RadiationModel omni = RadiationModel::fixed(FixedPattern::omni);
    auto [f, b] = build_sensing_em_channels(s, e, omni, omni);
    CHECK(std::abs(f[0] - cplx(1.0)) < 1e-12);
    CHECK(std::abs(b[0] - cplx(1.0)) < 1e-12);

    const Scenario s2 = single_path(0.6, 2.2);
    const RadiationModel m = fixtures::model_i();
    auto [fw, bw] = build_sensing_em_channels(s2, s2.targets[0], m, omni);
    const double amp = std::sqrt(std::abs(sensing_gain(25.0, 2.0, s2.wavelength, 0.3)));
    const CVec v = m.eval(0.4, 1.0);
    for (int n = 0; n < 4; ++n)
        for (int t = 0; t < 9; ++t)
            CHECK(std::abs(fw[n * 9 + t]) == doctest::Approx(amp * std::abs(v[t])).epsilon(1e-12));
    // the round-trip channel b f^T has rank one
    const CMat G = bw * fw.transpose();
    Eigen::JacobiSVD<CMat> svd(G);
    CHECK(svd.singularValues()[1] < 1e-12 * svd.singularValues()[0]);
}

TEST_CASE("matched receive combiner")
{
    std::mt19937_64 g(6);
    std::vector<CVec> back;
    for (int k = 0; k < 4; ++k)
        back.push_back(oracle::random_cvec(g, 16));
    const ReceiveWeights w = fixed_receive_combiner(back, 1, 2.5e-12);
    CHECK(w.omega_self == doctest::Approx(back[1].squaredNorm()));
    CHECK(w.noise == doctest::Approx(2.5e-12));
    REQUIRE(w.interferers.size() == 3);
    for (const auto &[idx, om] : w.interferers)
    {
        CHECK(idx != 1);
        CHECK(om <= back[idx].squaredNorm() * (1.0 + 1e-12));
        const double ref = std::norm(back[1].normalized().dot(back[idx]));
        CHECK(om == doctest::Approx(ref));
    }
}

TEST_CASE("scenario generation")
{
    const Scenario a = fixtures::scenario(42);
    const Scenario b = fixtures::scenario(42);
    CHECK(a.users.size() == 1);
    CHECK(a.users[0].size() == 5);
    CHECK(a.scatterers.size() == 2);
    CHECK(a.targets.size() == 1);
    for (std::size_t l = 0; l < 5; ++l)
    {
        CHECK(a.users[0][l].theta == b.users[0][l].theta);
        CHECK(a.users[0][l].phase == b.users[0][l].phase);
    }
    CHECK(a.scatterers[1].rcs == b.scatterers[1].rcs);
    CHECK(fixtures::scenario(43).users[0][0].theta != a.users[0][0].theta);
    CHECK(a.wavelength == doctest::Approx(0.0999308).epsilon(1e-5));
}

TEST_CASE("channel set layout")
{
    const Scenario s = fixtures::scenario(7, 2, 2);
    const EmChannelSet ch = build_em_channels(s, fixtures::model_i());
    CHECK(ch.n_users() == 2);
    CHECK(ch.n_targets() == 2);
    CHECK(ch.n_entities() == 4);
    CHECK(ch.comm[0].size() == 16 * 9);
    CHECK(ch.sensing_bwd[0].size() == 16);
    CHECK(ch.rx[0].interferers.size() == 3);
    const EffectiveChannels eff = effective_channels(ch, initial_coefficients(16, 9));
    CHECK(eff.comm[1].size() == 16);
    // isotropic start equals the omnidirectional benchmark
    const EmChannelSet oa = build_em_channels(s, RadiationModel::fixed(FixedPattern::omni));
    CHECK((eff.comm[0] - oa.comm[0]).norm() < 1e-12 * oa.comm[0].norm());
    CHECK((eff.sensing[3] - oa.sensing_fwd[3]).norm() < 1e-12 * oa.sensing_fwd[3].norm());
}
