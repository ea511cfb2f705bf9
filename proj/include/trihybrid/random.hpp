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

#ifndef TRIHYBRID_RANDOM_HPP
#define TRIHYBRID_RANDOM_HPP

#include <cmath>
#include <cstdint>
#include <random>

#include "trihybrid/types.hpp"

namespace trihybrid
{
    // Portable draws on top of mt19937_64; the std distributions are
    // implementation-defined, these are not.
    class Rng
    {
    public:
        explicit Rng(std::uint64_t seed) : engine_(seed) {}

        // Uniform in [0, 1) with 53 random bits.
        double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

        double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

        // Integer in [lo, hi].
        int uniform_int(int lo, int hi)
        {
            const auto span = static_cast<std::uint64_t>(hi - lo + 1);
            return lo + static_cast<int>(engine_() % span);
        }

        double normal()
        {
            double u1 = uniform();
            while (u1 <= 0.0)
                u1 = uniform();
            const double u2 = uniform();
            return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * pi * u2);
        }

        // Circularly-symmetric complex normal with unit variance.
        cplx complex_normal() { return cplx(normal(), normal()) * std::sqrt(0.5); }

        CVec complex_normal_vector(Eigen::Index n)
        {
            CVec v(n);
            for (Eigen::Index i = 0; i < n; ++i)
                v[i] = complex_normal();
            return v;
        }

        std::uint64_t next() { return engine_(); }

    private:
        std::mt19937_64 engine_;
    };
}

#endif
