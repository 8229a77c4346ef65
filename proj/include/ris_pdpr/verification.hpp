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

#ifndef RIS_PDPR_VERIFICATION_HPP
#define RIS_PDPR_VERIFICATION_HPP

#include "estimation.hpp"
#include "random.hpp"
#include "receiver.hpp"
#include "types.hpp"

#include <array>
#include <cmath>
#include <cstdint>
#include <string>

// Seeded matrix-identity suites run by the `validate` experiment.

namespace ris_pdpr
{
    struct IdentitySuiteResult
    {
        std::string name;
        int draws = 0;
        double maxRelativeError = 0.0;
        double tolerance = 0.0;

        bool pass() const { return maxRelativeError < tolerance; }
    };

    namespace detail
    {
        template <typename Rng>
        double log_uniform(Rng &rng, double lo_exp, double hi_exp)
        {
            std::uniform_real_distribution<double> u(lo_exp, hi_exp);
            return std::pow(10.0, u(rng));
        }

        template <typename Rng>
        CVector random_unit_vector(Eigen::Index n, Rng &rng)
        {
            ComplexGaussian gauss(1.0);
            CVector z = gauss.vector(n, rng);
            return z / z.norm();
        }

        inline constexpr std::array<Eigen::Index, 4> identity_dims{1, 2, 4, 10};
    } // namespace detail

    // Conditional MSE expanded term by term against 1/(1 + rho) on random PSD covariances.
    inline IdentitySuiteResult mse_identity_suite(int draws, std::uint64_t seed, double tolerance = 1e-8)
    {
        IdentitySuiteResult r{"mse_equals_inverse_one_plus_rho", draws, 0.0, tolerance};
        for (int d = 0; d < draws; ++d)
        {
            StreamRng rng(seed, 0xA11Du, static_cast<std::uint64_t>(d));
            const Eigen::Index nb = detail::identity_dims[static_cast<std::size_t>(d) % detail::identity_dims.size()];
            std::uniform_int_distribution<Eigen::Index> rank_pick(1, nb);
            const CMatrix c = random_psd(nb, rank_pick(rng), detail::log_uniform(rng, -1.0, 1.0), rng);
            const double scale = detail::log_uniform(rng, -2.0, 1.0);
            const double pd = detail::log_uniform(rng, -1.0, 2.0);
            const EstimationStatistics stats = conditional_stats(c, scale);

            const Eigen::LLT<CMatrix> llt(stats.R);
            ComplexGaussian gauss(1.0);
            const CVector h_hat = llt.matrixL() * gauss.vector(nb, rng);

            const double mse = conditional_mmse(h_hat, stats, pd);
            const double target = 1.0 / (1.0 + post_snr_rho(h_hat, stats, pd));
            r.maxRelativeError = std::max(r.maxRelativeError, std::abs(mse - target) / target);
        }
        return r;
    }

    // Rank-one closed forms against the general Hermitian-solve path.
    inline IdentitySuiteResult rank1_stats_suite(int draws, std::uint64_t seed, double tolerance = 1e-10)
    {
        IdentitySuiteResult r{"rank1_closed_forms_match_general", draws, 0.0, tolerance};
        for (int d = 0; d < draws; ++d)
        {
            StreamRng rng(seed, 0xB1Du, static_cast<std::uint64_t>(d));
            const Eigen::Index nb = detail::identity_dims[static_cast<std::size_t>(d) % detail::identity_dims.size()];
            std::uniform_int_distribution<Eigen::Index> nr_pick(1, 64);
            const Eigen::Index nr = nr_pick(rng);
            const double zeta = detail::log_uniform(rng, -2.0, 1.0);
            const double scale = detail::log_uniform(rng, -3.0, 2.0);
            const SteeringVector u(detail::random_unit_vector(nb, rng));

            const double g = zeta * static_cast<double>(nr * nb);
            const CMatrix c = g * u.entries() * u.entries().adjoint();
            const EstimationStatistics general = conditional_stats(c, scale);
            const EstimationStatistics closed = rank1_conditional_stats(zeta, nr, nb, u, scale);
            const double err = std::max({relative_frobenius(closed.R, general.R),
                                         relative_frobenius(closed.D, general.D),
                                         relative_frobenius(closed.Q, general.Q)});
            r.maxRelativeError = std::max(r.maxRelativeError, err);
        }
        return r;
    }

} // namespace ris_pdpr

#endif
