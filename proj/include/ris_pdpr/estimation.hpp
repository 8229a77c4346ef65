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

#ifndef RIS_PDPR_ESTIMATION_HPP
#define RIS_PDPR_ESTIMATION_HPP

#include "geometry.hpp"
#include "random.hpp"
#include "types.hpp"

#include <cmath>
#include <limits>
#include <cstdint>
#include <numbers>
#include <numeric>

namespace ris_pdpr
{
    struct PilotSequence
    {
        CVector symbols; // length tau_p, unit-modulus entries
        int root = 1;

        Eigen::Index length() const { return symbols.size(); }
    };

    // s_j = exp(-i pi r j (j+1) / L), j = 0..L-1, for odd L and gcd(r, L) = 1.
    inline PilotSequence zadoff_chu(int length, int root)
    {
        if (length < 1 || length % 2 == 0)
            throw std::invalid_argument("zadoff_chu: length must be an odd positive integer");
        if (std::gcd(root, length) != 1)
            throw std::invalid_argument("zadoff_chu: root must be coprime to the length");

        PilotSequence s;
        s.root = root;
        s.symbols.resize(length);
        // Reduce r j (j+1) modulo 2L in integers so the phase stays exact for long sequences.
        const std::int64_t period = 2 * static_cast<std::int64_t>(length);
        const std::int64_t r = ((static_cast<std::int64_t>(root) % period) + period) % period;
        for (std::int64_t j = 0; j < length; ++j)
        {
            const std::int64_t k = (r * ((j * (j + 1)) % period)) % period;
            const double half_turns = static_cast<double>(k) / static_cast<double>(length);
            s.symbols(j) = {boost::math::cos_pi(half_turns), -boost::math::sin_pi(half_turns)};
        }
        return s;
    }

    // Y_p = sqrt(P_p) h s^T + N_p with i.i.d. CN(0, noiseVariance) noise.
    template <typename Rng>
    CMatrix simulate_pilot_observation(const CVector &h, const PilotSequence &pilot, double pilotPower, Rng &rng,
                                       double noiseVariance = 1.0)
    {
        if (!(pilotPower > 0.0))
            throw std::invalid_argument("simulate_pilot_observation: pilot power must be positive");
        if (noiseVariance < 0.0)
            throw std::invalid_argument("simulate_pilot_observation: noise variance must be non-negative");
        CMatrix y = std::sqrt(pilotPower) * h * pilot.symbols.transpose();
        if (noiseVariance > 0.0)
        {
            ComplexGaussian gauss(noiseVariance);
            y += gauss.matrix(y.rows(), y.cols(), rng);
        }
        return y;
    }

    // Least-squares estimate: correlate with the pilot, h_hat = Y_p s^* / (sqrt(P_p) tau_p).
    // Uses S^H S = tau_p I without materializing S = s (x) I.
    inline CVector ls_estimate(const CMatrix &observation, const PilotSequence &pilot, double pilotPower)
    {
        if (observation.cols() != pilot.length())
            throw std::invalid_argument("ls_estimate: observation width does not match the pilot length");
        if (!(pilotPower > 0.0))
            throw std::invalid_argument("ls_estimate: pilot power must be positive");
        const double scale = 1.0 / (std::sqrt(pilotPower) * static_cast<double>(pilot.length()));
        return scale * (observation * pilot.symbols.conjugate());
    }

    // sigma^2 / (alpha^2 tau_p P_p) with alpha = sigma = 1
    inline double pilot_noise_scale(double pilotPower, int tauP = 1)
    {
        if (!(pilotPower > 0.0) || tauP < 1)
            throw std::invalid_argument("pilot_noise_scale: pilot power and tau_p must be positive");
        return 1.0 / (static_cast<double>(tauP) * pilotPower);
    }

    // Distribution of the channel given its LS estimate: h | h_hat ~ CN(D h_hat, Q).
    struct EstimationStatistics
    {
        CMatrix R; // covariance of h_hat
        CMatrix D; // C R^-1
        CMatrix Q; // C - C R^-1 C
        double pilotNoiseScale = 0.0;
    };

    namespace detail
    {
        inline CMatrix hermitian_part(const CMatrix &m) { return 0.5 * (m + m.adjoint()); }

        inline void require_psd(const CMatrix &c, const char *who)
        {
            if (c.rows() != c.cols())
                throw std::invalid_argument(std::string(who) + ": matrix must be square");
            const double scale = std::max(c.norm(), 1e-300);
            if ((c - c.adjoint()).norm() > 1e-10 * scale)
                throw std::invalid_argument(std::string(who) + ": matrix must be Hermitian");
            Eigen::SelfAdjointEigenSolver<CMatrix> eig(hermitian_part(c), Eigen::EigenvaluesOnly);
            const double lmax = eig.eigenvalues().maxCoeff();
            if (eig.eigenvalues().minCoeff() < -1e-10 * std::max(lmax, 0.0) - 1e-300)
                throw std::invalid_argument(std::string(who) + ": matrix must be positive semidefinite");
        }
    } // namespace detail

    // General path: R = C + scale I, D = C R^-1 and Q = C - C R^-1 C, evaluated through the
    // Hermitian eigendecomposition C = V diag(c_k) V^H, which R shares:
    //   D = V diag(c_k / (c_k + s)) V^H,  Q = V diag(c_k s / (c_k + s)) V^H.
    // A plain solve loses about log10(c_max / s) digits in D, and the literal difference in Q
    // cancels when C dominates the noise. Eigenvalues below n * 4 eps * c_max are rounding residue
    // of the null space and are set to zero; kept, they would be amplified by 1/s.
    inline EstimationStatistics conditional_stats(const CMatrix &cascadeCovariance, double pilotNoiseScale)
    {
        if (!(pilotNoiseScale > 0.0))
            throw std::invalid_argument("conditional_stats: pilot noise scale must be positive");
        detail::require_psd(cascadeCovariance, "conditional_stats");

        const Eigen::Index n = cascadeCovariance.rows();
        const CMatrix c = detail::hermitian_part(cascadeCovariance);
        const double s = pilotNoiseScale;

        const Eigen::SelfAdjointEigenSolver<CMatrix> eig(c);
        if (eig.info() != Eigen::Success)
            throw consistency_error("conditional_stats: eigendecomposition failed");
        RVector ck = eig.eigenvalues();
        const double floor = static_cast<double>(n) * 4.0 * std::numeric_limits<double>::epsilon() *
                             std::max(ck.maxCoeff(), 0.0);
        for (Eigen::Index k = 0; k < n; ++k)
            if (ck(k) <= floor)
                ck(k) = 0.0;
        const RVector shrink = ck.array() / (ck.array() + s);
        const CMatrix &v = eig.eigenvectors();

        EstimationStatistics out;
        out.pilotNoiseScale = s;
        out.R = c + s * CMatrix::Identity(n, n);
        out.D = detail::hermitian_part(v * shrink.cast<cdouble>().asDiagonal() * v.adjoint());
        out.Q = s * out.D;
        return out;
    }

    // Closed forms for C = g u u^H, g = zeta N_r N_b, s = pilot noise scale:
    //   R^-1 = (I - g/(g+s) u u^H) / s,  D = g/(g+s) u u^H,  Q = g s/(g+s) u u^H.
    inline EstimationStatistics rank1_conditional_stats(double zeta, Eigen::Index nr, Eigen::Index nb,
                                                        const SteeringVector &u, double pilotNoiseScale)
    {
        if (!(zeta > 0.0))
            throw std::invalid_argument("rank1_conditional_stats: zeta must be positive");
        if (!(pilotNoiseScale > 0.0))
            throw std::invalid_argument("rank1_conditional_stats: pilot noise scale must be positive");
        if (u.size() != nb)
            throw std::invalid_argument("rank1_conditional_stats: steering vector length must equal N_b");

        const double g = zeta * static_cast<double>(nr * nb);
        const double s = pilotNoiseScale;
        const CMatrix uu = u.entries() * u.entries().adjoint();
        const CMatrix eye = CMatrix::Identity(nb, nb);

        EstimationStatistics out;
        out.pilotNoiseScale = s;
        out.R = g * uu + s * eye;
        out.D = (g / (g + s)) * uu;
        out.Q = (g * s / (g + s)) * uu;
        return out;
    }

    // R^-1 for the rank-one cascade, via Sherman-Morrison.
    inline CMatrix rank1_inverse_estimate_covariance(double zeta, Eigen::Index nr, Eigen::Index nb,
                                                     const SteeringVector &u, double pilotNoiseScale)
    {
        const double g = zeta * static_cast<double>(nr * nb);
        const double s = pilotNoiseScale;
        return (CMatrix::Identity(nb, nb) - (g / (g + s)) * u.entries() * u.entries().adjoint()) / s;
    }

    // D R^{1/2} = (C R^-1 C)^{1/2} = sqrt(g^2 / (g + s)) u u^H; returns the scalar coefficient.
    inline double rank1_whitened_gain(double zeta, Eigen::Index nr, Eigen::Index nb, double pilotNoiseScale)
    {
        const double g = zeta * static_cast<double>(nr * nb);
        return std::sqrt(g * g / (g + pilotNoiseScale));
    }

} // namespace ris_pdpr

#endif
