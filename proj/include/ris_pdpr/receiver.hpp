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

#ifndef RIS_PDPR_RECEIVER_HPP
#define RIS_PDPR_RECEIVER_HPP

#include "estimation.hpp"
#include "types.hpp"

#include <cmath>

// MMSE reception of y_d = sqrt(P_d) h x + n_d given the LS estimate h_hat and the conditional
// statistics (D, Q) of h. Large-scale gain and noise power are normalized to one.

namespace ris_pdpr
{
    namespace detail
    {
        inline void check_receiver_inputs(const CVector &hHat, const EstimationStatistics &stats, double dataPower)
        {
            if (!(dataPower > 0.0))
                throw std::invalid_argument("receiver: data power must be positive");
            if (hHat.size() != stats.D.rows() || stats.D.rows() != stats.Q.rows())
                throw std::invalid_argument("receiver: dimension mismatch between estimate and statistics");
        }
    } // namespace detail

    // w = sqrt(P_d) (P_d (m m^H + Q) + I)^-1 m, m = D h_hat
    inline CVector mmse_filter(const CVector &hHat, const EstimationStatistics &stats, double dataPower)
    {
        detail::check_receiver_inputs(hHat, stats, dataPower);
        const Eigen::Index n = hHat.size();
        const CVector m = stats.D * hHat;
        const CMatrix system = dataPower * (m * m.adjoint() + stats.Q) + CMatrix::Identity(n, n);
        const Eigen::LLT<CMatrix> llt(system);
        if (llt.info() != Eigen::Success)
            throw consistency_error("mmse_filter: receive covariance is not positive definite");
        return std::sqrt(dataPower) * llt.solve(m);
    }

    // E[|w^H y_d - x|^2 | h_hat] expanded term by term:
    //   P_d w^H (m m^H + Q) w - sqrt(P_d) (w^H m + m^H w) + w^H w + 1
    inline double conditional_mse(const CVector &w, const CVector &hHat, const EstimationStatistics &stats,
                                  double dataPower)
    {
        const CVector m = stats.D * hHat;
        const cdouble wm = w.dot(m); // w^H m
        const double quad = dataPower * (std::norm(wm) + w.dot(stats.Q * w).real());
        const double cross = std::sqrt(dataPower) * 2.0 * wm.real();
        return quad - cross + w.squaredNorm() + 1.0;
    }

    inline double conditional_mmse(const CVector &hHat, const EstimationStatistics &stats, double dataPower)
    {
        return conditional_mse(mmse_filter(hHat, stats, dataPower), hHat, stats, dataPower);
    }

    // rho = m^H (Q + I/P_d)^-1 m
    inline double post_snr_rho(const CVector &hHat, const EstimationStatistics &stats, double dataPower)
    {
        detail::check_receiver_inputs(hHat, stats, dataPower);
        const Eigen::Index n = hHat.size();
        const CVector m = stats.D * hHat;
        const CMatrix a = stats.Q + (1.0 / dataPower) * CMatrix::Identity(n, n);
        const Eigen::LLT<CMatrix> llt(a);
        if (llt.info() != Eigen::Success)
            throw consistency_error("post_snr_rho: Q + I/P_d is not positive definite");
        const cdouble rho = m.dot(llt.solve(m));
        if (std::abs(rho.imag()) > 1e-12 * std::abs(rho) + 1e-300)
            throw consistency_error("post_snr_rho: quadratic form has a non-negligible imaginary part");
        return std::max(0.0, rho.real());
    }

    // The two non-trivial terms of the MSE expansion
    //   MSE = 1 - 2 term1 + term2,  term1 = sqrt(P_d) w^H m,  term2 = P_d w^H (m m^H + A) w,  A = Q + I/P_d.
    // Both equal rho / (1 + rho) for the MMSE filter.
    struct MseTerms
    {
        double term1 = 0.0;
        double term2 = 0.0;
    };

    inline MseTerms mse_expansion_terms(const CVector &hHat, const EstimationStatistics &stats, double dataPower)
    {
        const Eigen::Index n = hHat.size();
        const CVector w = mmse_filter(hHat, stats, dataPower);
        const CVector m = stats.D * hHat;
        const CMatrix a = stats.Q + (1.0 / dataPower) * CMatrix::Identity(n, n);
        MseTerms t;
        t.term1 = (std::sqrt(dataPower) * w.dot(m)).real();
        t.term2 = dataPower * w.dot((m * m.adjoint() + a) * w).real();
        return t;
    }

    struct ReceiverOutput
    {
        CVector filter;
        double conditionalMmse = 1.0;
        double rho = 0.0;
    };

    inline ReceiverOutput mmse_receive(const CVector &hHat, const EstimationStatistics &stats, double dataPower)
    {
        ReceiverOutput out;
        out.filter = mmse_filter(hHat, stats, dataPower);
        out.conditionalMmse = conditional_mse(out.filter, hHat, stats, dataPower);
        out.rho = post_snr_rho(hHat, stats, dataPower);
        return out;
    }

} // namespace ris_pdpr

#endif
