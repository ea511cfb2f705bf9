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

#ifndef TRIHYBRID_EM_BASIS_HPP
#define TRIHYBRID_EM_BASIS_HPP

#include <cstdint>
#include <filesystem>
#include <memory>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "trihybrid/types.hpp"

namespace trihybrid
{
    // Amplitude scale that maps a unit-energy pattern onto sphere energy 4 pi,
    // i.e. an isotropic radiator of gain 1.
    inline const double isotropic_scale = std::sqrt(4.0 * pi);

    class DomainError : public std::domain_error
    {
    public:
        using std::domain_error::domain_error;
    };

    class ParseError : public std::runtime_error
    {
    public:
        using std::runtime_error::runtime_error;
    };

    // Associated Legendre function P_u^q(x), 0 <= q, without the Condon-Shortley phase.
    // Returns 0 for q > u. Throws DomainError for |x| > 1 or negative arguments.
    double assoc_legendre(int u, int q, double x);

    // 1-based slot t = u^2 + u + q + 1 of the truncated basis.
    int harmonic_index(int u, int q);

    // Inverse of harmonic_index: (u, q) for a 1-based slot t.
    std::pair<int, int> harmonic_degree_order(int t);

    // Truncated spherical-harmonic basis b(theta, phi) of window length T = (U + 1)^2.
    class SphericalHarmonicBasis
    {
    public:
        explicit SphericalHarmonicBasis(int truncation_degree);

        int truncation_degree() const { return degree_; }
        int size() const { return size_; }

        // Normalization N_u^q = sqrt((2u+1)/(4 pi) (u-|q|)!/(u+|q|)!).
        double normalization(int u, int q) const;

        // b(theta, phi); entry t-1 holds N_u^q P_u^|q|(cos theta) e^{j q phi}.
        CVec eval(double theta, double phi) const;

    private:
        int degree_;
        int size_;
        std::vector<double> norm_; // indexed by t - 1
    };

    // G(theta, phi) = b^T(theta, phi) c (unconjugated).
    cplx gain_model_i(const SphericalHarmonicBasis &basis, const CVec &coeffs, double theta, double phi);

    enum class LibraryProvenance
    {
        synthetic,
        loaded
    };

    // S radiation patterns tabulated on a regular (theta, phi) lattice.
    // theta_i = i pi / (ntheta - 1), phi_j = 2 pi j / nphi; bilinear interpolation,
    // periodic in phi.
    class PatternLibrary
    {
    public:
        PatternLibrary() = default;
        PatternLibrary(int ntheta, int nphi, double scale, LibraryProvenance provenance,
                       std::vector<std::vector<cplx>> gains);

        int size() const { return static_cast<int>(gains_.size()); }
        int ntheta() const { return ntheta_; }
        int nphi() const { return nphi_; }
        double scale() const { return scale_; }
        LibraryProvenance provenance() const { return provenance_; }

        double theta_node(int i) const;
        double phi_node(int j) const;

        // Tabulated sample of pattern s (0-based) at grid node (i, j).
        cplx sample(int s, int i, int j) const { return gains_[s][static_cast<std::size_t>(i) * nphi_ + j]; }

        // Interpolated gain of pattern s (0-based).
        cplx gain(int s, double theta, double phi) const;

        // b~(theta, phi): all S gains at one angle.
        CVec eval(double theta, double phi) const;

        // Trapezoidal sphere quadrature of |G_s|^2 sin(theta) dtheta dphi.
        double sphere_energy(int s) const;

        bool operator==(const PatternLibrary &other) const = default;

    private:
        int ntheta_ = 0;
        int nphi_ = 0;
        double scale_ = 1.0;
        LibraryProvenance provenance_ = LibraryProvenance::synthetic;
        std::vector<std::vector<cplx>> gains_;
    };

    // Fixed benchmark elements: isotropic (gain 1) and sin(theta).
    enum class FixedPattern
    {
        omni,
        sine
    };

    double fixed_pattern_gain(FixedPattern p, double theta, double phi);

    // Draws S random unit-norm coefficient vectors from the basis and tabulates
    // sqrt(4 pi) b^T c on a 64 x 128 grid. Pure function of (S, seed, basis).
    PatternLibrary synth_pattern_library(int S, std::uint64_t seed, const SphericalHarmonicBasis &basis,
                                         int ntheta = 64, int nphi = 128);

    // Coefficients drawn by synth_pattern_library, in pattern order.
    std::vector<CVec> synth_pattern_coefficients(int S, std::uint64_t seed, const SphericalHarmonicBasis &basis);

    // Tabulates sqrt(4 pi) b^T c for explicit coefficient vectors.
    PatternLibrary tabulate_patterns(const std::vector<CVec> &coeffs, const SphericalHarmonicBasis &basis,
                                     int ntheta = 64, int nphi = 128);

    void save_pattern_library(const std::filesystem::path &path, const PatternLibrary &library);

    // Parses the line-oriented library format. Energy deviation from 4 pi beyond 2%
    // appends a warning; beyond 10% throws ParseError.
    PatternLibrary load_pattern_library(const std::filesystem::path &path, std::vector<std::string> *warnings = nullptr);

    // The per-element EM domain used to build channel vectors: the spherical
    // harmonic basis (scaled to isotropic gain), a discrete pattern library or a
    // fixed benchmark element (dimension 1).
    class RadiationModel
    {
    public:
        enum class Kind
        {
            harmonic,
            library,
            fixed
        };

        static RadiationModel harmonic(std::shared_ptr<const SphericalHarmonicBasis> basis);
        static RadiationModel library(std::shared_ptr<const PatternLibrary> library);
        static RadiationModel fixed(FixedPattern pattern);

        Kind kind() const { return kind_; }
        int dim() const;

        // Per-element EM vector at one angle (length dim()).
        CVec eval(double theta, double phi) const;

        // Gain realized by coefficients c in the channel, c^H v(theta, phi).
        cplx realized_gain(const CVec &coeffs, double theta, double phi) const;

        const SphericalHarmonicBasis *basis() const { return basis_.get(); }
        const PatternLibrary *pattern_library() const { return library_.get(); }
        FixedPattern fixed_pattern() const { return fixed_; }

    private:
        Kind kind_ = Kind::fixed;
        std::shared_ptr<const SphericalHarmonicBasis> basis_;
        std::shared_ptr<const PatternLibrary> library_;
        FixedPattern fixed_ = FixedPattern::omni;
    };
}

#endif
