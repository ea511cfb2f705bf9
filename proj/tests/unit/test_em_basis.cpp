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

#include <filesystem>
#include <fstream>
#include <random>

#include "oracles.hpp"
#include "trihybrid/em_basis.hpp"

using namespace trihybrid;
namespace fs = std::filesystem;

namespace
{
    fs::path temp_file(const std::string &name)
    {
        const fs::path dir = fs::temp_directory_path() / "trihybrid_tests";
        fs::create_directories(dir);
        return dir / name;
    }
}

TEST_CASE("associated Legendre values")
{
    CHECK(assoc_legendre(0, 0, 0.3) == 1.0);
    CHECK(assoc_legendre(1, 0, 0.5) == doctest::Approx(0.5));
    CHECK(assoc_legendre(2, 1, 0.5) == doctest::Approx(3.0 * 0.5 * std::sqrt(0.75)).epsilon(1e-14));
    CHECK(assoc_legendre(1, 2, 0.5) == 0.0);
    CHECK_THROWS_AS(assoc_legendre(2, 0, 1.5), DomainError);
    CHECK_THROWS_AS(assoc_legendre(-1, 0, 0.5), DomainError);
}

TEST_CASE("associated Legendre matches the closed-form table")
{
    std::mt19937_64 g(4);
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    double worst = 0.0;
    for (int k = 0; k < 1000; ++k)
    {
        const double x = U(g);
        for (int u = 0; u <= 4; ++u)
            for (int q = 0; q <= u; ++q)
            {
                const double ref = oracle::legendre_table(u, q, x);
                worst = std::max(worst, std::abs(assoc_legendre(u, q, x) - ref) / std::abs(ref));
            }
    }
    CHECK(worst < 1e-12);
}

TEST_CASE("harmonic index layout")
{
    CHECK(harmonic_index(0, 0) == 1);
    CHECK(harmonic_index(1, -1) == 2);
    CHECK(harmonic_index(2, 2) == 9);
    for (int t = 1; t <= 25; ++t)
    {
        const auto [u, q] = harmonic_degree_order(t);
        CHECK(harmonic_index(u, q) == t);
    }
    CHECK_THROWS(harmonic_index(1, 2));
}

TEST_CASE("basis values")
{
    const SphericalHarmonicBasis b(2);
    CHECK(b.size() == 9);
    const CVec v = b.eval(0.7, 2.1);
    CHECK(v.size() == 9);
    CHECK(std::abs(v[0] - cplx(1.0 / std::sqrt(4.0 * pi))) < 1e-15);

    CVec e1 = CVec::Zero(9), e3 = CVec::Zero(9);
    e1[0] = 1.0;
    e3[2] = 1.0;
    CHECK(std::abs(gain_model_i(b, e1, 1.3, 4.0) - cplx(0.28209479177387814)) < 1e-15);
    CHECK(std::abs(gain_model_i(b, e3, pi / 2, 0.4)) < 1e-15);
}

TEST_CASE("Model I gain equals term-by-term harmonic sum")
{
    const SphericalHarmonicBasis b(3);
    std::mt19937_64 g(9);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    for (int k = 0; k < 20; ++k)
    {
        const CVec c = oracle::random_cvec(g, b.size());
        const double th = pi * U(g), ph = 2.0 * pi * U(g);
        cplx ref = 0.0;
        for (int u = 0; u <= 3; ++u)
            for (int q = -u; q <= u; ++q)
            {
                const double N = std::sqrt((2 * u + 1) / (4.0 * pi) * std::tgamma(u - std::abs(q) + 1) /
                                           std::tgamma(u + std::abs(q) + 1));
                ref += c[harmonic_index(u, q) - 1] * N * oracle::legendre_table(u, std::abs(q), std::cos(th)) *
                       std::polar(1.0, q * ph);
            }
        CHECK(std::abs(gain_model_i(b, c, th, ph) - ref) < 1e-12 * (1.0 + std::abs(ref)));
    }
}

TEST_CASE("Gram matrix is the identity")
{
    for (int U = 0; U <= 4; ++U)
    {
        const SphericalHarmonicBasis b(U);
        const oracle::Quadrature q = oracle::gauss_legendre_newton(64);
        const int nphi = 128;
        CMat G = CMat::Zero(b.size(), b.size());
        for (int i = 0; i < 64; ++i)
            for (int j = 0; j < nphi; ++j)
            {
                const CVec v = b.eval(std::acos(q.x[i]), 2.0 * pi * j / nphi);
                G += (q.w[i] * 2.0 * pi / nphi) * v.conjugate() * v.transpose();
            }
        CHECK((G - CMat::Identity(b.size(), b.size())).cwiseAbs().maxCoeff() < 1e-6);
    }
}

TEST_CASE("fixed benchmark patterns")
{
    CHECK(fixed_pattern_gain(FixedPattern::omni, 0.3, 1.0) == 1.0);
    CHECK(fixed_pattern_gain(FixedPattern::sine, pi / 2, 1.0) == doctest::Approx(1.0));
    CHECK(fixed_pattern_gain(FixedPattern::sine, 0.0, 1.0) == 0.0);
}

TEST_CASE("synthetic library is deterministic and energy-normalized")
{
    const SphericalHarmonicBasis b(2);
    const PatternLibrary a = synth_pattern_library(64, 7, b);
    const PatternLibrary c = synth_pattern_library(64, 7, b);
    CHECK(a == c);
    CHECK(a.size() == 64);
    for (int s = 0; s < a.size(); ++s)
        CHECK(std::abs(a.sphere_energy(s) - 4.0 * pi) < 0.02 * 4.0 * pi);

    // node values are reproduced exactly by interpolation
    for (int i : {0, 13, 63})
        for (int j : {0, 77})
            CHECK(std::abs(a.gain(5, a.theta_node(i), a.phi_node(j)) - a.sample(5, i, j)) < 1e-12);

    // S = 1: the only pattern is the scaled gain of the drawn coefficients
    const PatternLibrary one = synth_pattern_library(1, 3, b);
    const CVec c1 = synth_pattern_coefficients(1, 3, b)[0];
    const double th = one.theta_node(20), ph = one.phi_node(30);
    const cplx expect =
        RadiationModel::harmonic(std::make_shared<SphericalHarmonicBasis>(b)).realized_gain(c1, th, ph);
    CHECK(std::abs(one.sample(0, 20, 30) - expect) < 1e-12);
}

TEST_CASE("isotropic coefficients realize unit gain in every model")
{
    auto basis = std::make_shared<SphericalHarmonicBasis>(2);
    const RadiationModel m = RadiationModel::harmonic(basis);
    CVec e1 = CVec::Zero(9);
    e1[0] = 1.0;
    for (double th : {0.0, 0.9, 2.5})
        CHECK(std::abs(m.realized_gain(e1, th, 1.1) - cplx(1.0)) < 1e-14);
    const RadiationModel oa = RadiationModel::fixed(FixedPattern::omni);
    CHECK(oa.realized_gain(CVec::Ones(1), 0.4, 0.2) == cplx(1.0));
}

TEST_CASE("library file round trip")
{
    const SphericalHarmonicBasis b(2);
    const PatternLibrary lib = synth_pattern_library(3, 11, b, 16, 32);
    const fs::path p = temp_file("roundtrip.lib");
    save_pattern_library(p, lib);
    std::vector<std::string> warnings;
    const PatternLibrary back = load_pattern_library(p, &warnings);
    CHECK(back.size() == lib.size());
    CHECK(back.ntheta() == 16);
    CHECK(back.nphi() == 32);
    for (int s = 0; s < 3; ++s)
        for (int i = 0; i < 16; ++i)
            for (int j = 0; j < 32; ++j)
                CHECK(back.sample(s, i, j) == lib.sample(s, i, j));
    CHECK(back.provenance() == LibraryProvenance::loaded);
}

TEST_CASE("library files with violations are rejected")
{
    const SphericalHarmonicBasis b(2);
    const PatternLibrary lib = synth_pattern_library(2, 5, b, 8, 16);

    // half the sphere energy
    std::vector<std::vector<cplx>> weak(2);
    for (int s = 0; s < 2; ++s)
        for (int i = 0; i < 8; ++i)
            for (int j = 0; j < 16; ++j)
                weak[s].push_back(lib.sample(s, i, j) * std::sqrt(0.5));
    const fs::path pw = temp_file("weak.lib");
    save_pattern_library(pw, PatternLibrary(8, 16, lib.scale(), LibraryProvenance::synthetic, weak));
    CHECK_THROWS_AS(load_pattern_library(pw), ParseError);

    // truncated file reports a line number
    const fs::path pt = temp_file("truncated.lib");
    save_pattern_library(pt, lib);
    std::ifstream in(pt);
    std::vector<std::string> lines;
    for (std::string l; std::getline(in, l);)
        lines.push_back(l);
    in.close();
    {
        std::ofstream out(pt);
        for (std::size_t i = 0; i + 10 < lines.size(); ++i)
            out << lines[i] << "\n";
    }
    try
    {
        load_pattern_library(pt);
        FAIL("expected a parse error");
    }
    catch (const ParseError &e)
    {
        const std::string msg = e.what();
        CHECK(msg.find("truncated.lib:") != std::string::npos);
        CHECK(msg.find(":" + std::to_string(lines.size() - 10) + ":") != std::string::npos);
    }

    const fs::path ph = temp_file("header.lib");
    {
        std::ofstream out(ph);
        out << "S two NTHETA 8 NPHI 16 SCALE 1\n";
    }
    CHECK_THROWS_AS(load_pattern_library(ph), ParseError);
    CHECK_THROWS_AS(load_pattern_library(temp_file("missing.lib")), ParseError);
}
