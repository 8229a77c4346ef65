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

#ifndef RIS_PDPR_CHANNEL_HPP
#define RIS_PDPR_CHANNEL_HPP

#include "geometry.hpp"
#include "random.hpp"
#include "types.hpp"

#include <algorithm>
#include <cmath>
#include <string>

// Phase convention
// ----------------
// A RIS configuration is stored as a unit-modulus vector `phases` with entries e^{+j theta_n}.
// The reflection matrix applied to the incident field is Psi = diag(conj(phases)) = diag(e^{-j theta_n}),
// so the effective gain  zeta = v^H Psi C_r Psi^* v  equals  phases^H G phases  with
// G = diag(v^H) C_r diag(v). Exported angles are theta_n = arg(phases_n).

namespace ris_pdpr
{
    inline void require_unit_modulus(const CVector &phases, const char *who)
    {
        for (Eigen::Index i = 0; i < phases.size(); ++i)
            if (std::abs(std::abs(phases(i)) - 1.0) > 1e-12)
                throw std::invalid_argument(std::string(who) + ": phase entries must have unit modulus");
    }

    // Psi = diag(conj(phases))
    inline CMatrix reflection_matrix(const CVector &phases)
    {
        return phases.conjugate().asDiagonal();
    }

    // Rank-one line-of-sight BS-RIS channel H = sqrt(N_r N_b) u v^H, size N_b x N_r.
    inline CMatrix los_channel(const SteeringVector &u, const SteeringVector &v)
    {
        const double scale = std::sqrt(static_cast<double>(u.size() * v.size()));
        return scale * u.entries() * v.entries().adjoint();
    }

    // zeta = v^H Psi C_r Psi^* v, evaluated literally.
    inline double effective_gain_zeta(const SteeringVector &v, const CVector &phases,
                                      const CorrelationMatrix &risCorrelation)
    {
        const Eigen::Index n = v.size();
        if (phases.size() != n || risCorrelation.size() != n)
            throw std::invalid_argument("effective_gain_zeta: dimension mismatch");
        require_unit_modulus(phases, "effective_gain_zeta");

        const CMatrix psi = reflection_matrix(phases);
        const CMatrix cr = risCorrelation.entries.cast<cdouble>();
        const cdouble z = (v.entries().adjoint() * psi * cr * psi.conjugate() * v.entries())(0, 0);

        const double magnitude = std::abs(z);
        if (std::abs(z.imag()) > 1e-12 * magnitude + 1e-300)
            throw consistency_error("effective_gain_zeta: quadratic form has a non-negligible imaginary part");
        if (z.real() < -1e-12 * std::max(1.0, risCorrelation.entries.norm()))
            throw consistency_error("effective_gain_zeta: negative gain, correlation matrix is not PSD");
        return std::max(0.0, z.real());
    }

    // Cascade covariance C = H Psi C_r Psi^* H^H through the full product, cross-checked against
    // the rank-one form zeta N_r N_b u u^H. Throws consistency_error when the two disagree.
    inline CMatrix cascade_covariance(const SteeringVector &u, const SteeringVector &v, const CVector &phases,
                                      const CorrelationMatrix &risCorrelation, double zeta)
    {
        const CMatrix h = los_channel(u, v);
        const CMatrix psi = reflection_matrix(phases);
        const CMatrix cr = risCorrelation.entries.cast<cdouble>();
        CMatrix full = h * psi * cr * psi.conjugate() * h.adjoint();
        full = 0.5 * (full + full.adjoint()).eval();

        const double nrnb = static_cast<double>(u.size() * v.size());
        const CMatrix rank1 = zeta * nrnb * u.entries() * u.entries().adjoint();

        const double scale = std::max(full.norm(), rank1.norm());
        if (scale > 0.0 && (full - rank1).norm() > 1e-10 * scale)
            throw consistency_error("cascade_covariance: full product and rank-one form disagree");
        return full;
    }

    struct CascadeStatistics
    {
        SteeringVector u;                  // BS steering vector, length N_b
        SteeringVector v;                  // RIS steering vector, length N_r
        CVector phases;                    // unit modulus, length N_r
        CorrelationMatrix risCorrelation;  // N_r x N_r
        double zeta = 0.0;                 // effective RIS gain
        CMatrix losChannel;                // H, N_b x N_r
        CMatrix cascadeCovariance;         // C, N_b x N_b
        RMatrix correlationFactor;         // F F^T = C_r (clamped), N_r x rank
        int clippedEigenvalues = 0;

        Eigen::Index nb() const { return u.size(); }
        Eigen::Index nr() const { return v.size(); }
        double gain() const { return zeta * static_cast<double>(nb() * nr()); } // zeta N_r N_b
    };

    inline CascadeStatistics make_cascade_statistics(SteeringVector u, SteeringVector v, CVector phases,
                                                     CorrelationMatrix risCorrelation)
    {
        if (phases.size() != v.size() || risCorrelation.size() != v.size())
            throw std::invalid_argument("make_cascade_statistics: dimension mismatch");
        CascadeStatistics s;
        s.zeta = effective_gain_zeta(v, phases, risCorrelation);
        s.losChannel = los_channel(u, v);
        s.cascadeCovariance = cascade_covariance(u, v, phases, risCorrelation, s.zeta);
        CorrelationFactor f = factorize_correlation(risCorrelation);
        s.correlationFactor = std::move(f.factor);
        s.clippedEigenvalues = f.clippedEigenvalues;
        s.u = std::move(u);
        s.v = std::move(v);
        s.phases = std::move(phases);
        s.risCorrelation = std::move(risCorrelation);
        return s;
    }

    // h = H Psi h_r with h_r = F z, z ~ CN(0, I_rank).
    template <typename Rng>
    CVector sample_cascade_channel(const CascadeStatistics &stats, Rng &rng)
    {
        const Eigen::Index rank = stats.correlationFactor.cols();
        if (rank == 0)
            return CVector::Zero(stats.nb());
        ComplexGaussian gauss(1.0);
        const CVector z = gauss.vector(rank, rng);
        CVector hr(stats.nr());
        hr.real() = stats.correlationFactor * z.real();
        hr.imag() = stats.correlationFactor * z.imag();
        const CVector reflected = stats.phases.conjugate().cwiseProduct(hr);
        return stats.losChannel * reflected;
    }

} // namespace ris_pdpr

#endif
