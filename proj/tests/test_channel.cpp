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

#include "ris_pdpr/channel.hpp"
#include "ris_pdpr/risopt.hpp"

#include <catch_amalgamated.hpp>

#include <numbers>

using namespace ris_pdpr;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace
{
    CVector random_unit_modulus(Eigen::Index n, StreamRng &rng)
    {
        std::uniform_real_distribution<double> ang(-std::numbers::pi, std::numbers::pi);
        CVector p(n);
        for (Eigen::Index i = 0; i < n; ++i)
            p(i) = std::polar(1.0, ang(rng));
        return p;
    }

    SteeringVector random_steering(Eigen::Index n, StreamRng &rng)
    {
        ComplexGaussian g(1.0);
        const CVector z = g.vector(n, rng);
        return SteeringVector(z / z.norm());
    }

    CorrelationMatrix random_real_psd(Eigen::Index n, StreamRng &rng)
    {
        std::normal_distribution<double> nd;
        RMatrix b(n, n);
        for (Eigen::Index j = 0; j < n; ++j)
            for (Eigen::Index i = 0; i < n; ++i)
                b(i, j) = nd(rng);
        RMatrix c = b * b.transpose() / static_cast<double>(n);
        c = 0.5 * (c + c.transpose()).eval();
        return CorrelationMatrix{c};
    }
} // namespace

TEST_CASE("line-of-sight channel", "[channel]")
{
    SECTION("scalar case")
    {
        const SteeringVector one(CVector::Ones(1));
        const CMatrix h = los_channel(one, one);
        CHECK(h(0, 0) == cdouble(1.0, 0.0));
    }
    SECTION("Frobenius norm squared equals N_r N_b")
    {
        StreamRng rng(21, 0, 0);
        for (int k = 0; k < 20; ++k)
        {
            const SteeringVector u = random_steering(1 + k % 7, rng);
            const SteeringVector v = random_steering(1 + (3 * k) % 11, rng);
            CHECK_THAT(los_channel(u, v).squaredNorm(), WithinRel(static_cast<double>(u.size() * v.size()), 1e-10));
        }
    }
}

TEST_CASE("effective gain zeta", "[channel]")
{
    StreamRng rng(22, 0, 0);
    SECTION("identity correlation makes phases immaterial")
    {
        for (int k = 0; k < 20; ++k)
        {
            const Eigen::Index n = 1 + k;
            const SteeringVector v = random_steering(n, rng);
            const CorrelationMatrix eye{RMatrix::Identity(n, n)};
            CHECK_THAT(effective_gain_zeta(v, random_unit_modulus(n, rng), eye), WithinAbs(1.0, 1e-12));
        }
    }
    SECTION("single element")
    {
        const SteeringVector v(CVector::Constant(1, std::polar(1.0, 0.7)));
        const CorrelationMatrix c{RMatrix::Ones(1, 1)};
        CHECK_THAT(effective_gain_zeta(v, random_unit_modulus(1, rng), c), WithinAbs(1.0, 1e-15));
    }
    SECTION("bounded by N_r lambda_max(G) and equal to the quadratic form in G")
    {
        for (int k = 0; k < 50; ++k)
        {
            const Eigen::Index n = 2 + k % 9;
            const SteeringVector v = random_steering(n, rng);
            const CorrelationMatrix c = random_real_psd(n, rng);
            const CVector psi = random_unit_modulus(n, rng);
            const double zeta = effective_gain_zeta(v, psi, c);
            const CouplingMatrix g = coupling_matrix(v, c);
            Eigen::SelfAdjointEigenSolver<CMatrix> eig(g.entries, Eigen::EigenvaluesOnly);
            CHECK(zeta <= static_cast<double>(n) * eig.eigenvalues().maxCoeff() * (1.0 + 1e-12));
            CHECK_THAT(quadratic_gain(g, psi), WithinAbs(zeta, 1e-12 * std::max(1.0, zeta)));
        }
    }
    SECTION("invariant under a global phase rotation")
    {
        for (int k = 0; k < 20; ++k)
        {
            const Eigen::Index n = 3 + k % 5;
            const SteeringVector v = random_steering(n, rng);
            const CorrelationMatrix c = random_real_psd(n, rng);
            const CVector psi = random_unit_modulus(n, rng);
            const cdouble rot = std::polar(1.0, 0.37 * (k + 1));
            CHECK_THAT(effective_gain_zeta(v, (rot * psi).eval(), c),
                       WithinAbs(effective_gain_zeta(v, psi, c), 1e-12));
        }
    }
    SECTION("dimension mismatch and non-unit phases throw")
    {
        const SteeringVector v = random_steering(3, rng);
        const CorrelationMatrix c{RMatrix::Identity(3, 3)};
        CHECK_THROWS_AS(effective_gain_zeta(v, CVector::Ones(2), c), std::invalid_argument);
        CHECK_THROWS_AS(effective_gain_zeta(v, CVector::Constant(3, cdouble(2.0, 0.0)), c), std::invalid_argument);
    }
}

TEST_CASE("cascade covariance", "[channel]")
{
    StreamRng rng(23, 0, 0);
    SECTION("scalar case is [zeta]")
    {
        const SteeringVector one(CVector::Ones(1));
        const CorrelationMatrix c{RMatrix::Constant(1, 1, 1.0)};
        const CMatrix cov = cascade_covariance(one, one, CVector::Ones(1), c, 1.0);
        CHECK_THAT(cov(0, 0).real(), WithinAbs(1.0, 1e-15));
    }
    SECTION("rank one with eigenvalue zeta N_r N_b on random instances")
    {
        for (int k = 0; k < 30; ++k)
        {
            const Eigen::Index nb = 1 + k % 6, nr = 1 + (5 * k) % 13;
            const CascadeStatistics s = make_cascade_statistics(random_steering(nb, rng), random_steering(nr, rng),
                                                                random_unit_modulus(nr, rng), random_real_psd(nr, rng));
            Eigen::SelfAdjointEigenSolver<CMatrix> eig(s.cascadeCovariance, Eigen::EigenvaluesOnly);
            const RVector ev = eig.eigenvalues();
            const double lmax = ev.maxCoeff();
            CHECK((ev.array() > 1e-10 * lmax).count() == 1);
            CHECK_THAT(lmax, WithinRel(s.gain(), 1e-8));
        }
    }
    SECTION("wrong zeta is reported as an internal inconsistency")
    {
        const SteeringVector u = random_steering(3, rng), v = random_steering(4, rng);
        const CVector psi = random_unit_modulus(4, rng);
        const CorrelationMatrix c = random_real_psd(4, rng);
        const double zeta = effective_gain_zeta(v, psi, c);
        CHECK_THROWS_AS(cascade_covariance(u, v, psi, c, 1.5 * zeta + 0.1), consistency_error);
    }
}

TEST_CASE("cascade channel sampling", "[channel]")
{
    StreamRng setup(24, 0, 0);
    const SteeringVector u = steering_vector(planar_array_positions(2, 2, 0.5), 0.2, 0.1);
    const ArrayGeometry ris = planar_array_positions(3, 3, 1.0 / 7.0);
    const SteeringVector v = steering_vector(ris, -0.3, 0.0);

    SECTION("zero correlation yields the zero channel")
    {
        const CascadeStatistics s = make_cascade_statistics(u, v, CVector::Ones(9), CorrelationMatrix{RMatrix::Zero(9, 9)});
        StreamRng rng(1, 2, 3);
        CHECK(sample_cascade_channel(s, rng).norm() == 0.0);
    }

    const CascadeStatistics s = make_cascade_statistics(u, v, random_unit_modulus(9, setup), isotropic_correlation(ris));

    SECTION("same substream gives the same vector")
    {
        StreamRng a(5, 6, 7), b(5, 6, 7);
        CHECK(sample_cascade_channel(s, a) == sample_cascade_channel(s, b));
    }
    SECTION("empirical mean and covariance over 1e5 draws")
    {
        const int n = 100000;
        CVector mean = CVector::Zero(4);
        CMatrix cov = CMatrix::Zero(4, 4);
        CMatrix second_abs = CMatrix::Zero(4, 4);
        for (int t = 0; t < n; ++t)
        {
            StreamRng rng(9, 1, static_cast<std::uint64_t>(t));
            const CVector h = sample_cascade_channel(s, rng);
            mean += h;
            cov += h * h.adjoint();
        }
        mean /= n;
        cov /= n;
        CHECK(mean.norm() < 5.0 * std::sqrt(s.cascadeCovariance.trace().real() / n));
        // entrywise: Var(h_i h_j^*) = C_ii C_jj for circular Gaussians
        for (Eigen::Index i = 0; i < 4; ++i)
            for (Eigen::Index j = 0; j < 4; ++j)
            {
                const double se = std::sqrt(s.cascadeCovariance(i, i).real() * s.cascadeCovariance(j, j).real() / n);
                CHECK(std::abs(cov(i, j) - s.cascadeCovariance(i, j)) < 3.0 * std::sqrt(2.0) * se);
            }
    }
}
