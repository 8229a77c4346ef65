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

#include "ris_pdpr/receiver.hpp"
#include "ris_pdpr/verification.hpp"

#include "oracles.hpp"

#include <catch_amalgamated.hpp>

using namespace ris_pdpr;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace
{
    EstimationStatistics scalar_stats(double d, double q)
    {
        EstimationStatistics s;
        s.R = CMatrix::Constant(1, 1, 1.0);
        s.D = CMatrix::Constant(1, 1, d);
        s.Q = CMatrix::Constant(1, 1, q);
        s.pilotNoiseScale = 1.0;
        return s;
    }

    struct RandomInstance
    {
        EstimationStatistics stats;
        CVector hHat;
        double pd;
    };

    RandomInstance random_instance(StreamRng &rng, Eigen::Index nb)
    {
        std::uniform_int_distribution<Eigen::Index> rank_pick(1, nb);
        const CMatrix c = random_psd(nb, rank_pick(rng), detail::log_uniform(rng, -1.0, 1.0), rng);
        const EstimationStatistics s = conditional_stats(c, detail::log_uniform(rng, -2.0, 1.0));
        const Eigen::LLT<CMatrix> llt(s.R);
        const CVector h = llt.matrixL() * ComplexGaussian(1.0).vector(nb, rng);
        return {s, h, detail::log_uniform(rng, -1.0, 2.0)};
    }
} // namespace

TEST_CASE("scalar receiver", "[receiver]")
{
    const EstimationStatistics s = scalar_stats(1.0, 0.0);
    const CVector one = CVector::Ones(1);
    CHECK_THAT(std::abs(mmse_filter(one, s, 1.0)(0) - cdouble(0.5, 0.0)), WithinAbs(0.0, 1e-15));
    CHECK_THAT(conditional_mmse(one, s, 1.0), WithinAbs(0.5, 1e-15));
    CHECK_THAT(post_snr_rho(one, s, 1.0), WithinAbs(1.0, 1e-15));
}

TEST_CASE("zero estimate", "[receiver]")
{
    StreamRng rng(41, 0, 0);
    const CMatrix c = random_psd(4, 2, 1.0, rng);
    const EstimationStatistics s = conditional_stats(c, 0.3);
    const CVector zero = CVector::Zero(4);
    CHECK(mmse_filter(zero, s, 2.0).norm() == 0.0);
    CHECK(conditional_mmse(zero, s, 2.0) == 1.0);
    CHECK(post_snr_rho(zero, s, 2.0) == 0.0);
}

TEST_CASE("filter solves the normal equations", "[receiver]")
{
    StreamRng rng(42, 0, 0);
    for (int k = 0; k < 100; ++k)
    {
        const RandomInstance in = random_instance(rng, 1 + k % 8);
        const CVector w = mmse_filter(in.hHat, in.stats, in.pd);
        const CVector ref = oracle::wiener_solution(in.stats.D * in.hHat, in.stats.Q, in.pd);
        CHECK((w - ref).norm() <= 1e-10 * std::max(1.0, ref.norm()));
        // any perturbation increases the MSE
        const CVector dw = 1e-3 * ComplexGaussian(1.0).vector(w.size(), rng);
        CHECK(conditional_mse(w + dw, in.hHat, in.stats, in.pd) >= conditional_mse(w, in.hHat, in.stats, in.pd));
    }
}

TEST_CASE("conditional MMSE equals 1/(1+rho)", "[receiver]")
{
    StreamRng rng(43, 0, 0);
    for (int k = 0; k < 1000; ++k)
    {
        const RandomInstance in = random_instance(rng, std::array<Eigen::Index, 4>{1, 2, 4, 10}[k % 4]);
        const double mse = conditional_mmse(in.hHat, in.stats, in.pd);
        const double rho = post_snr_rho(in.hHat, in.stats, in.pd);
        CHECK_THAT(mse, WithinRel(1.0 / (1.0 + rho), 1e-8));

        const MseTerms t = mse_expansion_terms(in.hHat, in.stats, in.pd);
        CHECK_THAT(t.term1, WithinRel(t.term2, 1e-8));
        CHECK_THAT(t.term1, WithinRel(rho / (1.0 + rho), 1e-8));
    }
}

TEST_CASE("rho does not decrease with data power", "[receiver]")
{
    StreamRng rng(44, 0, 0);
    for (int k = 0; k < 100; ++k)
    {
        const RandomInstance in = random_instance(rng, 1 + k % 6);
        double previous = 0.0;
        for (int p = 0; p < 10; ++p)
        {
            const double rho = post_snr_rho(in.hHat, in.stats, std::pow(10.0, -2.0 + 0.5 * p));
            CHECK(rho >= previous * (1.0 - 1e-12));
            previous = rho;
        }
    }
}

TEST_CASE("rank-one rho follows lambda |u^H h_u|^2", "[receiver]")
{
    StreamRng rng(45, 0, 0);
    for (int k = 0; k < 50; ++k)
    {
        const Eigen::Index nb = 1 + k % 5;
        const Eigen::Index nr = 4 + k;
        const double zeta = 0.1 + 0.05 * k;
        const double pp = 0.5 + 0.1 * k, pd = 2.0 - 0.02 * k;
        CVector uz = ComplexGaussian(1.0).vector(nb, rng);
        const SteeringVector u(uz / uz.norm());
        const double scale = 1.0 / pp;
        const EstimationStatistics s = rank1_conditional_stats(zeta, nr, nb, u, scale);

        // h_hat = R^{1/2} h_u
        Eigen::SelfAdjointEigenSolver<CMatrix> eig(s.R);
        const CMatrix rhalf = eig.eigenvectors() * eig.eigenvalues().cwiseSqrt().cast<cdouble>().asDiagonal() *
                              eig.eigenvectors().adjoint();
        const CVector hu = ComplexGaussian(1.0).vector(nb, rng);
        const CVector hHat = rhalf * hu;

        const double g = zeta * static_cast<double>(nr * nb);
        const double lambda = g * g / (g * scale + g / pd + scale / pd);
        CHECK_THAT(post_snr_rho(hHat, s, pd), WithinRel(lambda * std::norm(u.entries().dot(hu)), 1e-9));
    }
}

TEST_CASE("input checks", "[receiver]")
{
    const EstimationStatistics s = scalar_stats(1.0, 0.0);
    CHECK_THROWS_AS(mmse_filter(CVector::Ones(1), s, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(post_snr_rho(CVector::Ones(2), s, 1.0), std::invalid_argument);
}

TEST_CASE("identity suites pass on their default tolerances", "[receiver]")
{
    CHECK(mse_identity_suite(200, 3).pass());
    CHECK(rank1_stats_suite(200, 3).pass());
}
