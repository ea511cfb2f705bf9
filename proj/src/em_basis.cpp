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

#include "trihybrid/em_basis.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "trihybrid/random.hpp"

namespace trihybrid
{
    double assoc_legendre(int u, int q, double x)
    {
        if (u < 0 || q < 0)
            throw DomainError("assoc_legendre: degree and order must be nonnegative");
        if (!(std::abs(x) <= 1.0))
            throw DomainError("assoc_legendre: argument outside [-1, 1]");
        if (q > u)
            return 0.0;

        // P_q^q = (2q-1)!! (1-x^2)^{q/2}
        double pqq = 1.0;
        const double s = std::sqrt(std::max(0.0, (1.0 - x) * (1.0 + x)));
        for (int k = 1; k <= q; ++k)
            pqq *= (2.0 * k - 1.0) * s;
        if (u == q)
            return pqq;

        double p_prev = pqq;
        double p_curr = x * (2.0 * q + 1.0) * pqq;
        for (int l = q + 2; l <= u; ++l)
        {
            const double p_next = ((2.0 * l - 1.0) * x * p_curr - (l + q - 1.0) * p_prev) / (l - q);
            p_prev = p_curr;
            p_curr = p_next;
        }
        return p_curr;
    }

    int harmonic_index(int u, int q)
    {
        if (u < 0 || std::abs(q) > u)
            throw std::out_of_range("harmonic_index: require 0 <= u and |q| <= u");
        return u * u + u + q + 1;
    }

    std::pair<int, int> harmonic_degree_order(int t)
    {
        if (t < 1)
            throw std::out_of_range("harmonic_degree_order: slot must be >= 1");
        const int u = static_cast<int>(std::floor(std::sqrt(static_cast<double>(t - 1))));
        // guard against rounding in sqrt
        int uu = u;
        while ((uu + 1) * (uu + 1) <= t - 1)
            ++uu;
        while (uu * uu > t - 1)
            --uu;
        return {uu, t - 1 - uu * uu - uu};
    }

    SphericalHarmonicBasis::SphericalHarmonicBasis(int truncation_degree)
        : degree_(truncation_degree), size_(truncation_degree * truncation_degree + 2 * truncation_degree + 1)
    {
        if (truncation_degree < 0)
            throw DomainError("SphericalHarmonicBasis: truncation degree must be nonnegative");
        norm_.resize(static_cast<std::size_t>(size_));
        for (int u = 0; u <= degree_; ++u)
        {
            for (int q = -u; q <= u; ++q)
            {
                const int aq = std::abs(q);
                double ratio = 1.0; // (u-|q|)! / (u+|q|)!
                for (int k = u - aq + 1; k <= u + aq; ++k)
                    ratio /= k;
                norm_[static_cast<std::size_t>(harmonic_index(u, q) - 1)] =
                    std::sqrt((2.0 * u + 1.0) / (4.0 * pi) * ratio);
            }
        }
    }

    double SphericalHarmonicBasis::normalization(int u, int q) const
    {
        return norm_[static_cast<std::size_t>(harmonic_index(u, q) - 1)];
    }

    CVec SphericalHarmonicBasis::eval(double theta, double phi) const
    {
        const double x = std::clamp(std::cos(theta), -1.0, 1.0);
        CVec b(size_);
        for (int u = 0; u <= degree_; ++u)
        {
            for (int q = -u; q <= u; ++q)
            {
                const int t = harmonic_index(u, q) - 1;
                const double p = assoc_legendre(u, std::abs(q), x);
                b[t] = norm_[static_cast<std::size_t>(t)] * p * std::exp(j_unit * (q * phi));
            }
        }
        return b;
    }

    cplx gain_model_i(const SphericalHarmonicBasis &basis, const CVec &coeffs, double theta, double phi)
    {
        if (coeffs.size() != basis.size())
            throw std::invalid_argument("gain_model_i: coefficient length does not match basis size");
        return basis.eval(theta, phi).transpose() * coeffs;
    }

    // ---------------------------------------------------------------- PatternLibrary

    PatternLibrary::PatternLibrary(int ntheta, int nphi, double scale, LibraryProvenance provenance,
                                   std::vector<std::vector<cplx>> gains)
        : ntheta_(ntheta), nphi_(nphi), scale_(scale), provenance_(provenance), gains_(std::move(gains))
    {
        if (ntheta < 2 || nphi < 1)
            throw std::invalid_argument("PatternLibrary: grid needs ntheta >= 2 and nphi >= 1");
        for (const auto &g : gains_)
            if (g.size() != static_cast<std::size_t>(ntheta) * static_cast<std::size_t>(nphi))
                throw std::invalid_argument("PatternLibrary: pattern sample count does not match grid");
    }

    double PatternLibrary::theta_node(int i) const { return pi * i / (ntheta_ - 1); }

    double PatternLibrary::phi_node(int j) const { return 2.0 * pi * j / nphi_; }

    cplx PatternLibrary::gain(int s, double theta, double phi) const
    {
        if (s < 0 || s >= size())
            throw std::out_of_range("PatternLibrary::gain: pattern index out of range");
        const double dt = pi / (ntheta_ - 1);
        const double dp = 2.0 * pi / nphi_;
        const double ti = std::clamp(theta / dt, 0.0, static_cast<double>(ntheta_ - 1));
        double pw = std::fmod(phi, 2.0 * pi);
        if (pw < 0.0)
            pw += 2.0 * pi;
        const double pj = pw / dp;

        int i0 = static_cast<int>(std::floor(ti));
        if (i0 >= ntheta_ - 1)
            i0 = ntheta_ - 2;
        const double wt = ti - i0;
        int j0 = static_cast<int>(std::floor(pj));
        double wp = pj - j0;
        j0 %= nphi_;
        const int j1 = (j0 + 1) % nphi_;
        if (nphi_ == 1)
            wp = 0.0;

        const cplx g00 = sample(s, i0, j0), g01 = sample(s, i0, j1);
        const cplx g10 = sample(s, i0 + 1, j0), g11 = sample(s, i0 + 1, j1);
        return (1.0 - wt) * ((1.0 - wp) * g00 + wp * g01) + wt * ((1.0 - wp) * g10 + wp * g11);
    }

    CVec PatternLibrary::eval(double theta, double phi) const
    {
        CVec b(size());
        for (int s = 0; s < size(); ++s)
            b[s] = gain(s, theta, phi);
        return b;
    }

    double PatternLibrary::sphere_energy(int s) const
    {
        const double dt = pi / (ntheta_ - 1);
        const double dp = 2.0 * pi / nphi_;
        double e = 0.0;
        for (int i = 0; i < ntheta_; ++i)
        {
            const double w = (i == 0 || i == ntheta_ - 1) ? 0.5 : 1.0;
            double ring = 0.0;
            for (int j = 0; j < nphi_; ++j)
                ring += std::norm(sample(s, i, j));
            e += w * std::sin(theta_node(i)) * ring;
        }
        return e * dt * dp;
    }

    double fixed_pattern_gain(FixedPattern p, double theta, double /*phi*/)
    {
        switch (p)
        {
        case FixedPattern::omni:
            return 1.0;
        case FixedPattern::sine:
            return std::sin(theta);
        }
        return 1.0;
    }

    std::vector<CVec> synth_pattern_coefficients(int S, std::uint64_t seed, const SphericalHarmonicBasis &basis)
    {
        if (S < 1)
            throw std::invalid_argument("synth_pattern_library: S must be >= 1");
        Rng rng(seed);
        std::vector<CVec> coeffs;
        coeffs.reserve(static_cast<std::size_t>(S));
        for (int s = 0; s < S; ++s)
        {
            CVec c = rng.complex_normal_vector(basis.size());
            c.normalize();
            coeffs.push_back(std::move(c));
        }
        return coeffs;
    }

    PatternLibrary tabulate_patterns(const std::vector<CVec> &coeffs, const SphericalHarmonicBasis &basis,
                                     int ntheta, int nphi)
    {
        std::vector<std::vector<cplx>> gains(coeffs.size(),
                                             std::vector<cplx>(static_cast<std::size_t>(ntheta) * nphi));
        const double dt = pi / (ntheta - 1);
        const double dp = 2.0 * pi / nphi;
        for (int i = 0; i < ntheta; ++i)
        {
            for (int j = 0; j < nphi; ++j)
            {
                const CVec b = basis.eval(i * dt, j * dp);
                for (std::size_t s = 0; s < coeffs.size(); ++s)
                    gains[s][static_cast<std::size_t>(i) * nphi + j] = isotropic_scale * coeffs[s].dot(b); // c^H b
            }
        }
        return PatternLibrary(ntheta, nphi, isotropic_scale, LibraryProvenance::synthetic, std::move(gains));
    }

    PatternLibrary synth_pattern_library(int S, std::uint64_t seed, const SphericalHarmonicBasis &basis, int ntheta,
                                         int nphi)
    {
        return tabulate_patterns(synth_pattern_coefficients(S, seed, basis), basis, ntheta, nphi);
    }

    void save_pattern_library(const std::filesystem::path &path, const PatternLibrary &library)
    {
        std::ofstream out(path);
        if (!out)
            throw std::runtime_error("save_pattern_library: cannot open " + path.string());
        char buf[160];
        std::snprintf(buf, sizeof(buf), "S %d NTHETA %d NPHI %d SCALE %.17g\n", library.size(), library.ntheta(),
                      library.nphi(), library.scale());
        out << buf;
        for (int s = 0; s < library.size(); ++s)
        {
            out << "PATTERN " << (s + 1) << '\n';
            for (int i = 0; i < library.ntheta(); ++i)
            {
                for (int j = 0; j < library.nphi(); ++j)
                {
                    const cplx g = library.sample(s, i, j);
                    std::snprintf(buf, sizeof(buf), "%.17g %.17g %.17g %.17g\n", library.theta_node(i),
                                  library.phi_node(j), g.real(), g.imag());
                    out << buf;
                }
            }
        }
        if (!out)
            throw std::runtime_error("save_pattern_library: write failed for " + path.string());
    }

    PatternLibrary load_pattern_library(const std::filesystem::path &path, std::vector<std::string> *warnings)
    {
        std::ifstream in(path);
        if (!in)
            throw ParseError("load_pattern_library: cannot open " + path.string());

        std::string line;
        long lineno = 0;
        auto fail = [&](const std::string &what)
        { throw ParseError(path.string() + ":" + std::to_string(lineno) + ": " + what); };
        auto next_line = [&]() -> bool
        {
            while (std::getline(in, line))
            {
                ++lineno;
                if (line.find_first_not_of(" \t\r") != std::string::npos)
                    return true;
            }
            return false;
        };

        if (!next_line())
            fail("empty file, expected header");
        int S = 0, ntheta = 0, nphi = 0;
        double scale = 0.0;
        {
            std::istringstream hs(line);
            std::string k1, k2, k3, k4;
            if (!(hs >> k1 >> S >> k2 >> ntheta >> k3 >> nphi >> k4 >> scale) || k1 != "S" || k2 != "NTHETA" ||
                k3 != "NPHI" || k4 != "SCALE")
                fail("malformed header, expected 'S <int> NTHETA <int> NPHI <int> SCALE <float>'");
            if (S < 1 || ntheta < 2 || nphi < 1 || !std::isfinite(scale))
                fail("header values out of range");
        }

        const double dt = pi / (ntheta - 1);
        const double dp = 2.0 * pi / nphi;
        const double grid_tol = 1e-9;
        std::vector<std::vector<cplx>> gains(static_cast<std::size_t>(S));
        for (int s = 0; s < S; ++s)
        {
            if (!next_line())
                fail("truncated file, expected 'PATTERN " + std::to_string(s + 1) + "'");
            {
                std::istringstream ps(line);
                std::string key;
                int idx = 0;
                if (!(ps >> key >> idx) || key != "PATTERN")
                    fail("expected 'PATTERN <s>' record");
                if (idx != s + 1)
                    fail("pattern index " + std::to_string(idx) + " out of sequence");
            }
            auto &g = gains[static_cast<std::size_t>(s)];
            g.resize(static_cast<std::size_t>(ntheta) * nphi);
            for (int i = 0; i < ntheta; ++i)
            {
                for (int j = 0; j < nphi; ++j)
                {
                    if (!next_line())
                        fail("truncated file inside pattern " + std::to_string(s + 1));
                    std::istringstream ls(line);
                    std::string ts, ps, rs, is;
                    if (!(ls >> ts >> ps >> rs >> is))
                        fail("expected 'theta phi re im'");
                    double th = 0, ph = 0, re = 0, im = 0;
                    try
                    {
                        th = std::stod(ts);
                        ph = std::stod(ps);
                        re = std::stod(rs);
                        im = std::stod(is);
                    }
                    catch (const std::exception &)
                    {
                        fail("non-numeric sample record");
                    }
                    if (!std::isfinite(re) || !std::isfinite(im))
                        fail("non-finite gain in pattern " + std::to_string(s + 1));
                    if (std::abs(th - i * dt) > grid_tol || std::abs(ph - j * dp) > grid_tol)
                        fail("sample does not lie on the rectangular " + std::to_string(ntheta) + "x" +
                             std::to_string(nphi) + " grid");
                    g[static_cast<std::size_t>(i) * nphi + j] = cplx(re, im);
                }
            }
        }

        PatternLibrary lib(ntheta, nphi, scale, LibraryProvenance::loaded, std::move(gains));
        const double target = 4.0 * pi;
        for (int s = 0; s < S; ++s)
        {
            const double dev = std::abs(lib.sphere_energy(s) - target) / target;
            if (dev > 0.10)
                throw ParseError(path.string() + ": pattern " + std::to_string(s + 1) + " sphere energy deviates " +
                                 std::to_string(100.0 * dev) + "% from 4 pi");
            if (dev > 0.02 && warnings)
                warnings->push_back("pattern " + std::to_string(s + 1) + " sphere energy deviates " +
                                    std::to_string(100.0 * dev) + "% from 4 pi");
        }
        return lib;
    }

    // ---------------------------------------------------------------- RadiationModel

    RadiationModel RadiationModel::harmonic(std::shared_ptr<const SphericalHarmonicBasis> basis)
    {
        RadiationModel m;
        m.kind_ = Kind::harmonic;
        m.basis_ = std::move(basis);
        return m;
    }

    RadiationModel RadiationModel::library(std::shared_ptr<const PatternLibrary> library)
    {
        RadiationModel m;
        m.kind_ = Kind::library;
        m.library_ = std::move(library);
        return m;
    }

    RadiationModel RadiationModel::fixed(FixedPattern pattern)
    {
        RadiationModel m;
        m.kind_ = Kind::fixed;
        m.fixed_ = pattern;
        return m;
    }

    int RadiationModel::dim() const
    {
        switch (kind_)
        {
        case Kind::harmonic:
            return basis_->size();
        case Kind::library:
            return library_->size();
        case Kind::fixed:
            return 1;
        }
        return 1;
    }

    CVec RadiationModel::eval(double theta, double phi) const
    {
        switch (kind_)
        {
        case Kind::harmonic:
            return isotropic_scale * basis_->eval(theta, phi);
        case Kind::library:
            return library_->eval(theta, phi);
        case Kind::fixed:
            break;
        }
        CVec v(1);
        v[0] = fixed_pattern_gain(fixed_, theta, phi);
        return v;
    }

    cplx RadiationModel::realized_gain(const CVec &coeffs, double theta, double phi) const
    {
        const CVec v = eval(theta, phi);
        if (coeffs.size() != v.size())
            throw std::invalid_argument("realized_gain: coefficient length does not match model dimension");
        return coeffs.dot(v); // conj(c)^T v
    }
}
