// SPDX-License-Identifier: Apache-2.0
//
// ris-pdpr: pilot power and RIS phase configuration for RIS-assisted uplink MIMO
// Copyright (C) 2026 The ris-pdpr authors
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

#ifndef RIS_PDPR_RANDOM_HPP
#define RIS_PDPR_RANDOM_HPP

#include "types.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>

namespace ris_pdpr
{
    namespace detail
    {
        inline std::uint64_t splitmix64(std::uint64_t &state)
        {
            std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
            z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
            z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
            return z ^ (z >> 31);
        }

        inline std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
    } // namespace detail

    // xoshiro256** keyed by (seed, stream, counter).
    // Each Monte Carlo trial owns the substream (seed, stream, trial), so results do not
    // depend on which worker runs the trial or in which order.
    class StreamRng
    {
    public:
        using result_type = std::uint64_t;

        StreamRng(std::uint64_t seed, std::uint64_t stream, std::uint64_t counter)
        {
            std::uint64_t key = seed;
            std::uint64_t mix = detail::splitmix64(key);
            key = mix ^ (stream * 0xD1B54A32D192ED03ULL);
            mix = detail::splitmix64(key);
            key = mix ^ (counter * 0x8CB92BA72F3D8DD7ULL);
            for (auto &s : s_)
                s = detail::splitmix64(key);
        }

        static constexpr result_type min() { return 0; }
        static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

        result_type operator()()
        {
            const std::uint64_t result = detail::rotl(s_[1] * 5, 7) * 9;
            const std::uint64_t t = s_[1] << 17;
            s_[2] ^= s_[0];
            s_[3] ^= s_[1];
            s_[1] ^= s_[2];
            s_[0] ^= s_[3];
            s_[2] ^= t;
            s_[3] = detail::rotl(s_[3], 45);
            return result;
        }

    private:
        std::uint64_t s_[4];
    };

    // Circularly-symmetric complex Gaussian draws, E|z|^2 = variance.
    class ComplexGaussian
    {
    public:
        explicit ComplexGaussian(double variance = 1.0) : normal_(0.0, std::sqrt(variance / 2.0)) {}

        template <typename Rng>
        cdouble operator()(Rng &rng)
        {
            const double re = normal_(rng);
            const double im = normal_(rng);
            return {re, im};
        }

        template <typename Rng>
        CVector vector(Eigen::Index n, Rng &rng)
        {
            CVector z(n);
            for (Eigen::Index i = 0; i < n; ++i)
                z(i) = (*this)(rng);
            return z;
        }

        template <typename Rng>
        CMatrix matrix(Eigen::Index rows, Eigen::Index cols, Rng &rng)
        {
            CMatrix z(rows, cols);
            for (Eigen::Index j = 0; j < cols; ++j)
                for (Eigen::Index i = 0; i < rows; ++i)
                    z(i, j) = (*this)(rng);
            return z;
        }

    private:
        std::normal_distribution<double> normal_;
    };

    // B B^H / cols with B an n x rank complex Gaussian matrix, scaled by `scale`.
    template <typename Rng>
    CMatrix random_psd(Eigen::Index n, Eigen::Index rank, double scale, Rng &rng)
    {
        ComplexGaussian gauss(1.0);
        const CMatrix b = gauss.matrix(n, rank, rng);
        CMatrix c = (scale / static_cast<double>(std::max<Eigen::Index>(rank, 1))) * b * b.adjoint();
        return 0.5 * (c + c.adjoint());
    }

} // namespace ris_pdpr

#endif
