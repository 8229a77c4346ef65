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

#include "ris_pdpr/analysis.hpp"

#include "oracles.hpp"

#include <catch_amalgamated.hpp>

#include <numbers>

using namespace ris_pdpr;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("power split", "[analysis]")
{
    for (int tc : {2, 10, 160})
        CHECK(data_ratio(1.0, tc) == 1.0);
    CHECK_THAT(data_ratio(80.0, 160), WithinRel(80.0 / 159.0, 1e-15));
    CHECK_THAT(data_ratio(80.0, 160), WithinAbs(0.50314, 5e-6));
    CHECK_THROWS_AS(data_ratio(0.0, 160), std::invalid_argument);
    CHECK_THROWS_AS(data_ratio(160.0, 160), std::invalid_argument);

    // total energy over the block is tau_c P_t
    const PowerSplit p = make_power_split(40, 7.5, 3.0);
    CHECK_THAT(p.pilotPower() + 39.0 * p.dataPower(), WithinRel(40.0 * 3.0, 1e-14));
}

TEST_CASE("lambda from powers", "[analysis]")
{
    CHECK_THAT(lambda_from_powers(1.0, 1.0, 1.0, 1.0, 1.0), WithinRel(1.0 / 3.0, 1e-15));
    // perfect channel knowledge: lambda -> g P_d
    const double g = 0.3 * 16 * 4;
    CHECK_THAT(lambda_from_powers(0.3, 16, 4, 1e15, 1e9) / (g * 1e9), WithinAbs(1.0, 1e-6));
    // longer pilots act like more pilot power
    CHECK_THAT(lambda_from_powers(0.5, 9, 2, 0.4, 1.1, 5), WithinRel(lambda_from_powers(0.5, 9, 2, 2.0, 1.1), 1e-14));
    CHECK_THROWS_AS(lambda_from_powers(0.0, 1, 1, 1, 1), std::invalid_argument);
}

TEST_CASE("lambda from the ratio form", "[analysis]")
{
    CHECK_THAT(lambda_from_ratio(1.0, 160, 1.0), WithinRel(1.0 / 25920.0, 1e-14));
    CHECK(lambda_from_ratio(5.0, 160, 1e-9) < 1e-9);
    CHECK(lambda_from_ratio(5.0, 160, 160.0 - 1e-9) < 1e-9);
    CHECK_THROWS_AS(lambda_from_ratio(1.0, 160, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(lambda_from_ratio(1.0, 160, 160.0), std::invalid_argument);

    SECTION("equals the power form with zeta N_r N_b SNR = a / tau_c")
    {
        for (double a : {1e-3, 0.1, 1.0, 42.0, 1e4})
            for (int tc : {2, 3, 10, 160, 1000})
                for (double frac : {0.01, 0.3, 0.5, 0.9})
                {
                    const double gp = frac * tc;
                    const double zeta = 0.37, nr = 25, nb = 10;
                    const double snr = a / tc / (zeta * nr * nb);
                    const PowerSplit s = make_power_split(tc, gp, snr);
                    CHECK_THAT(lambda_from_ratio(a, s),
                               WithinRel(lambda_from_powers(zeta, nr, nb, s.pilotPower(), s.dataPower()), 1e-12));
                }
    }
    SECTION("matches an independent long double evaluation")
    {
        for (double a : {1e-3, 1.0, 1e5})
            for (double gp : {0.5, 13.0, 99.0})
                CHECK_THAT(lambda_from_ratio(a, 100, gp), WithinRel(static_cast<double>(oracle::lambda_ratio(a, 100, gp)), 1e-14));
    }
}

TEST_CASE("scaled exponential integral", "[analysis]")
{
    SECTION("quadrature oracle")
    {
        for (double x : {1e-8, 1e-4, 0.01, 0.1, 0.5, 0.999, 1.0, 1.001, 2.0, 10.0, 100.0, 1e4, 1e8})
            CHECK_THAT(e1_scaled(x), WithinRel(static_cast<double>(oracle::e1_scaled(x)), 1e-12));
    }
    SECTION("anchors")
    {
        CHECK_THAT(std::exp(-1.0) * e1_scaled(1.0), WithinAbs(0.2193839, 5e-8));
        CHECK_THAT(e1_scaled(1.0), WithinAbs(0.596347, 5e-7));
        CHECK_THAT(e1_scaled(100.0), WithinAbs(0.00990194, 5e-9));
        // asymptotic series (1/x) sum_k (-1)^k k! / x^k, truncated after k = 6
        const double x = 100.0;
        double asym = 0.0, term = 1.0;
        for (int k = 0; k <= 6; ++k)
        {
            asym += term;
            term *= -(k + 1) / x;
        }
        asym /= x;
        CHECK_THAT(e1_scaled(x), WithinRel(asym, 1e-10));
        CHECK_THAT(e1_scaled(1e-8) + std::log(1e-8), WithinAbs(-std::numbers::egamma, 1e-6));
    }
    SECTION("classical bounds 1/(x+1) < S(x) < 1/x")
    {
        for (int k = 0; k <= 200; ++k)
        {
            const double x = std::pow(10.0, -6.0 + 12.0 * k / 200.0);
            const double s = e1_scaled(x);
            CHECK(s > 1.0 / (x + 1.0));
            CHECK(s < 1.0 / x);
        }
    }
    SECTION("domain")
    {
        CHECK_THROWS_AS(e1_scaled(0.0), std::invalid_argument);
        CHECK_THROWS_AS(e1_scaled(-1.0), std::invalid_argument);
        CHECK(e1_scaled(std::numeric_limits<double>::infinity()) == 0.0);
    }
}

TEST_CASE("ergodic MMSE", "[analysis]")
{
    CHECK(ergodic_mmse(0.0) == 1.0);
    CHECK_THAT(ergodic_mmse(1.0), WithinAbs(0.596347, 5e-7));
    CHECK_THAT(summarize(1.0).ergodicMmseDb,
               WithinAbs(10.0 * std::log10(static_cast<double>(oracle::e1_scaled(1.0L))), 1e-12));
    CHECK_THAT(summarize(1.0).ergodicMmseDb, WithinAbs(-2.2450, 5e-5));
    const double l = 1e6;
    CHECK_THAT(ergodic_mmse(l), WithinRel((std::log(l) - std::numbers::egamma) / l, 1e-3));
    CHECK_THAT(ergodic_mmse(l), WithinRel(1.3237e-5, 1e-4));
    CHECK_THROWS_AS(ergodic_mmse(-1e-3), std::invalid_argument);

    SECTION("strictly decreasing and convex on a log grid")
    {
        std::vector<double> lam, f;
        for (int k = 0; k < 1000; ++k)
        {
            lam.push_back(std::pow(10.0, -4.0 + 10.0 * k / 999.0));
            f.push_back(ergodic_mmse(lam.back()));
        }
        for (std::size_t k = 1; k < f.size(); ++k)
            CHECK(f[k] < f[k - 1]);
        for (std::size_t k = 1; k + 1 < f.size(); ++k)
        {
            const double s1 = (f[k] - f[k - 1]) / (lam[k] - lam[k - 1]);
            const double s2 = (f[k + 1] - f[k]) / (lam[k + 1] - lam[k]);
            CHECK(s2 >= s1 - 1e-9 * std::abs(s1));
        }
    }
    SECTION("dB field is 10 log10 of the linear value")
    {
        for (double lambda : {1e-6, 0.3, 7.0, 1e4})
        {
            const ClosedFormSummary s = summarize(lambda);
            CHECK_THAT(s.ergodicMmseDb, WithinAbs(10.0 * std::log10(s.ergodicMmse), 1e-12));
        }
    }
}

TEST_CASE("optimal pilot ratio", "[analysis]")
{
    SECTION("limits and reference value")
    {
        CHECK_THAT(optimal_pilot_ratio(1e-6, 160), WithinRel(80.0, 1e-3));
        CHECK_THAT(optimal_pilot_ratio(1e8, 160), WithinRel(160.0 / (1.0 + std::sqrt(159.0)), 1e-3));
        CHECK_THAT(high_snr_pilot_ratio(160), WithinAbs(11.7565, 5e-5));
        CHECK_THAT(optimal_pilot_ratio(10.0, 160), WithinAbs(37.94, 5e-3));
    }
    SECTION("agrees with the textbook root where it is well conditioned")
    {
        for (double a : {1.0, 10.0, 1e3, 1e6})
            for (int tc : {3, 10, 160, 1000})
            {
                const double t = tc;
                const double x = (t - 1) * (t - 1) / (a * a) + ((t - 1) * (t - 1) + (t - 1)) / a + t - 1;
                const double literal = (t * (1 - t) / a - t + t * std::sqrt(x)) / (t - 2);
                CHECK_THAT(optimal_pilot_ratio(a, tc), WithinRel(literal, 1e-9));
            }
    }
    SECTION("bracketed by the limits and decreasing in a")
    {
        for (int tc : {3, 10, 40, 160, 1000})
        {
            double previous = tc;
            for (int k = 0; k <= 120; ++k)
            {
                const double a = std::pow(10.0, -5.0 + 12.0 * k / 120.0);
                const double g = optimal_pilot_ratio(a, tc);
                CHECK(g > high_snr_pilot_ratio(tc));
                CHECK(g < low_snr_pilot_ratio(tc));
                CHECK(g <= previous);
                previous = g;
            }
        }
    }
    SECTION("minimizes the ergodic MMSE")
    {
        for (double a : {1e-2, 1.0, 30.0, 1e4})
            for (int tc : {10, 160})
            {
                auto objective = [&](long double g) {
                    return -oracle::mmse_reduction(oracle::lambda_ratio(a, tc, g));
                };
                const double ref = oracle::golden_section_min(objective, 1e-9L, tc - 1e-9L, 1e-7L);
                CHECK_THAT(optimal_pilot_ratio(a, tc), WithinAbs(ref, 1e-4));
            }
    }
    SECTION("short coherence intervals")
    {
        CHECK_THROWS_AS(optimal_pilot_ratio(1.0, 2), unsupported_error);
        // lambda is flat at its maximum, so the search resolves gamma_p to about sqrt(eps)
        CHECK_THAT(optimal_pilot_ratio_numeric(3.0, 2), WithinAbs(1.0, 1e-6));
        CHECK_THAT(best_pilot_ratio(0.5, 2), WithinAbs(1.0, 1e-6));
        CHECK_THAT(optimal_pilot_ratio_numeric(10.0, 160), WithinAbs(optimal_pilot_ratio(10.0, 160), 1e-6));
    }
    SECTION("PDPR limits")
    {
        const PdprLimits l = pdpr_limits(160);
        CHECK(l.lowSnrPdpr == 159.0);
        CHECK_THAT(l.highSnrPdpr, WithinAbs(12.6095, 5e-5));
        const PdprLimits two = pdpr_limits(2);
        CHECK(two.lowSnrPdpr == 1.0);
        CHECK(two.highSnrPdpr == 1.0);
        CHECK_THAT(pdpr_limits(1000000).highSnrPdpr / std::sqrt(1000000.0), WithinAbs(1.0, 1e-5));
        // consistent with the gamma_p limits: gamma_p / gamma_d
        CHECK_THAT(low_snr_pilot_ratio(160) / data_ratio(low_snr_pilot_ratio(160), 160), WithinRel(l.lowSnrPdpr, 1e-14));
        CHECK_THAT(high_snr_pilot_ratio(160) / data_ratio(high_snr_pilot_ratio(160), 160), WithinRel(l.highSnrPdpr, 1e-12));
    }
}
