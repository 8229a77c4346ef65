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

#ifndef RIS_PDPR_ANALYSIS_HPP
#define RIS_PDPR_ANALYSIS_HPP

#include "types.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <utility>

// Closed-form layer for the rank-one cascade. With alpha = sigma = 1 the post-combining SNR rho
// is exponential with mean lambda, and the ergodic MMSE is E[1/(1+rho)] = (1/lambda) S(1/lambda)
// where S(x) = e^x E1(x).

namespace ris_pdpr
{
    // Power bookkeeping inside one coherence block of tauC symbols.
    struct PowerSplit
    {
        int tauC = 0;
        int tauP = 1;
        double gammaP = 1.0; // P_p / P_t
        double gammaD = 1.0; // P_d / P_t
        double snr = 1.0;    // P_t / sigma^2 (linear)

        double pilotPower() const { return gammaP * snr; }
        double dataPower() const { return gammaD * snr; }
    };

    // gamma_d = (tau_c - gamma_p) / (tau_c - 1), for a single pilot symbol.
    inline double data_ratio(double gammaP, int tauC)
    {
        if (tauC < 2)
            throw std::invalid_argument("data_ratio: tau_c must be >= 2");
        if (!(gammaP > 0.0) || !(gammaP < tauC))
            throw std::invalid_argument("data_ratio: gamma_p must lie in (0, tau_c)");
        return (tauC - gammaP) / (tauC - 1.0);
    }

    inline PowerSplit make_power_split(int tauC, double gammaP, double snr)
    {
        if (!(snr > 0.0))
            throw std::invalid_argument("make_power_split: SNR must be positive");
        PowerSplit p;
        p.tauC = tauC;
        p.tauP = 1;
        p.gammaP = gammaP;
        p.gammaD = data_ratio(gammaP, tauC);
        p.snr = snr;
        return p;
    }

    // lambda = g^2 / (g/(tau_p P_p) + g/P_d + 1/(tau_p P_p P_d)),  g = zeta N_r N_b
    inline double lambda_from_powers(double zeta, double nr, double nb, double pilotPower, double dataPower,
                                     int tauP = 1)
    {
        if (!(zeta > 0.0) || !(nr > 0.0) || !(nb > 0.0) || !(pilotPower > 0.0) || !(dataPower > 0.0) || tauP < 1)
            throw std::invalid_argument("lambda_from_powers: all inputs must be positive");
        const double g = zeta * nr * nb;
        const double pilot_noise = 1.0 / (tauP * pilotPower);
        const double data_noise = 1.0 / dataPower;
        return g * g / (g * pilot_noise + g * data_noise + pilot_noise * data_noise);
    }

    // Ratio form with aggregate gain a, single pilot symbol:
    //   lambda = a^2 gp (tc - gp) / ((tc^2 + (tc-2) tc gp) a + tc^2 (tc-1))
    // This equals lambda_from_powers evaluated with zeta N_r N_b SNR = a / tc.
    inline double lambda_from_ratio(double aggregateGain, int tauC, double gammaP)
    {
        if (!(aggregateGain > 0.0))
            throw std::invalid_argument("lambda_from_ratio: aggregate gain must be positive");
        if (tauC < 2)
            throw std::invalid_argument("lambda_from_ratio: tau_c must be >= 2");
        if (!(gammaP > 0.0) || !(gammaP < tauC))
            throw std::invalid_argument("lambda_from_ratio: gamma_p must lie in (0, tau_c)");
        const double a = aggregateGain;
        const double tc = tauC;
        const double num = a * a * gammaP * (tc - gammaP);
        const double den = (tc * tc + (tc - 2.0) * tc * gammaP) * a + tc * tc * (tc - 1.0);
        return num / den;
    }

    inline double lambda_from_ratio(double aggregateGain, const PowerSplit &split)
    {
        if (split.tauP != 1)
            throw std::invalid_argument("lambda_from_ratio: only a single pilot symbol is supported");
        return lambda_from_ratio(aggregateGain, split.tauC, split.gammaP);
    }

    namespace detail
    {
        inline constexpr double euler_gamma = std::numbers::egamma;

        // e^x E1(x) through E1(x) = -gamma - ln x - sum_{k>=1} (-x)^k / (k k!); intended for x <= 1.
        inline double e1_scaled_series(double x)
        {
            double sum = 0.0;
            double term = 1.0; // (-x)^k / k!
            for (int k = 1; k < 200; ++k)
            {
                term *= -x / k;
                const double contribution = term / k;
                sum += contribution;
                if (std::abs(contribution) < 1e-17 * std::abs(sum))
                    break;
            }
            const double e1 = -euler_gamma - std::log(x) - sum;
            return std::exp(x) * e1;
        }

        // e^x E1(x) by the continued fraction 1/(x+1- 1/(x+3- 4/(x+5- ...))), modified Lentz.
        // Converges for x > 0; fast for x >= 1 and never forms e^x or e^-x.
        inline double e1_scaled_continued_fraction(double x)
        {
            constexpr double tiny = 1e-300;
            constexpr double eps = 1e-16;
            double b = x + 1.0;
            double c = 1.0 / tiny;
            double d = 1.0 / b;
            double h = d;
            for (int i = 1; i < 100000; ++i)
            {
                const double an = -static_cast<double>(i) * i;
                b += 2.0;
                d = an * d + b;
                if (std::abs(d) < tiny)
                    d = tiny;
                c = b + an / c;
                if (std::abs(c) < tiny)
                    c = tiny;
                d = 1.0 / d;
                const double delta = c * d;
                h *= delta;
                if (std::abs(delta - 1.0) < eps)
                    return h;
            }
            throw consistency_error("e1_scaled: continued fraction did not converge");
        }
    } // namespace detail

    // S(x) = e^x E1(x) for x > 0; series up to x = 1, continued fraction beyond.
    inline double e1_scaled(double x)
    {
        if (!(x > 0.0))
            throw std::invalid_argument("e1_scaled: argument must be positive");
        if (std::isinf(x))
            return 0.0;
        return x <= 1.0 ? detail::e1_scaled_series(x) : detail::e1_scaled_continued_fraction(x);
    }

    // E[1/(1+rho)] for rho ~ Exp(mean lambda)
    inline double ergodic_mmse(double lambda)
    {
        if (lambda < 0.0 || std::isnan(lambda))
            throw std::invalid_argument("ergodic_mmse: lambda must be non-negative");
        if (lambda == 0.0)
            return 1.0;
        const double x = 1.0 / lambda;
        if (std::isinf(x))
            return 1.0;
        return x * e1_scaled(x);
    }

    struct ClosedFormSummary
    {
        double lambda = 0.0;
        double ergodicMmse = 1.0;
        double ergodicMmseDb = 0.0;
    };

    inline ClosedFormSummary summarize(double lambda)
    {
        ClosedFormSummary s;
        s.lambda = lambda;
        s.ergodicMmse = ergodic_mmse(lambda);
        s.ergodicMmseDb = db10(s.ergodicMmse);
        return s;
    }

    // Maximizer of lambda_from_ratio over gamma_p. With Y = (tc-1)/a + 1 and
    // X = (tc-1)^2/a^2 + ((tc-1)^2 + (tc-1))/a + tc - 1 the textbook root
    //   (tc (1-tc)/a - tc + tc sqrt(X)) / (tc - 2)  =  tc (sqrt(X) - Y) / (tc - 2)
    // is evaluated as tc Y / (sqrt(X) + Y), using X - Y^2 = (tc - 2) Y, which avoids the cancellation
    // between sqrt(X) and Y when a is small.
    inline double optimal_pilot_ratio(double aggregateGain, int tauC)
    {
        if (tauC < 3)
            throw unsupported_error("optimal_pilot_ratio: closed form needs tau_c >= 3; use optimal_pilot_ratio_numeric");
        if (!(aggregateGain > 0.0))
            throw std::invalid_argument("optimal_pilot_ratio: aggregate gain must be positive");
        const double tc = tauC;
        const double a = aggregateGain;
        const double y = (tc - 1.0) / a + 1.0;
        const double x = (tc - 1.0) * (tc - 1.0) / (a * a) + ((tc - 1.0) * (tc - 1.0) + (tc - 1.0)) / a + tc - 1.0;
        double g = tc * y / (std::sqrt(x) + y);
        // keep strictly inside (0, tc)
        g = std::min(std::max(g, std::nextafter(0.0, 1.0)), std::nextafter(tc, 0.0));
        return g;
    }

    // Golden-section maximization of lambda_from_ratio over gamma_p in (0, tau_c).
    // Valid for every tau_c >= 2 (lambda is unimodal in gamma_p); used where the closed form is undefined.
    inline double optimal_pilot_ratio_numeric(double aggregateGain, int tauC, double tolerance = 1e-10)
    {
        if (tauC < 2)
            throw std::invalid_argument("optimal_pilot_ratio_numeric: tau_c must be >= 2");
        if (!(aggregateGain > 0.0))
            throw std::invalid_argument("optimal_pilot_ratio_numeric: aggregate gain must be positive");
        const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
        double lo = 0.0;
        double hi = tauC;
        auto f = [&](double g) { return lambda_from_ratio(aggregateGain, tauC, g); };
        double x1 = hi - inv_phi * (hi - lo);
        double x2 = lo + inv_phi * (hi - lo);
        double f1 = f(x1);
        double f2 = f(x2);
        while (hi - lo > tolerance * std::max(1.0, hi))
        {
            if (f1 < f2)
            {
                lo = x1;
                x1 = x2;
                f1 = f2;
                x2 = lo + inv_phi * (hi - lo);
                f2 = f(x2);
            }
            else
            {
                hi = x2;
                x2 = x1;
                f2 = f1;
                x1 = hi - inv_phi * (hi - lo);
                f1 = f(x1);
            }
        }
        return 0.5 * (lo + hi);
    }

    // Closed form where defined, numeric search otherwise.
    inline double best_pilot_ratio(double aggregateGain, int tauC)
    {
        return tauC >= 3 ? optimal_pilot_ratio(aggregateGain, tauC) : optimal_pilot_ratio_numeric(aggregateGain, tauC);
    }

    struct PdprLimits
    {
        double lowSnrPdpr = 0.0;  // gamma_p* / gamma_d* as SNR -> 0
        double highSnrPdpr = 0.0; // gamma_p* / gamma_d* as SNR -> infinity
    };

    inline PdprLimits pdpr_limits(int tauC)
    {
        if (tauC < 2)
            throw std::invalid_argument("pdpr_limits: tau_c must be >= 2");
        return {tauC - 1.0, std::sqrt(tauC - 1.0)};
    }

    // gamma_p* markers: tau_c / 2 at low SNR, tau_c / (1 + sqrt(tau_c - 1)) at high SNR
    inline double low_snr_pilot_ratio(int tauC) { return tauC / 2.0; }
    inline double high_snr_pilot_ratio(int tauC) { return tauC / (1.0 + std::sqrt(tauC - 1.0)); }

} // namespace ris_pdpr

#endif
