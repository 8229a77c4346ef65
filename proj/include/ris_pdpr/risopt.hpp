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

#ifndef RIS_PDPR_RISOPT_HPP
#define RIS_PDPR_RISOPT_HPP

#include "channel.hpp"
#include "geometry.hpp"
#include "random.hpp"
#include "types.hpp"

#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <vector>

// Statistical RIS phase configuration: maximize zeta = psi^H G psi over unit-modulus psi by
// dimension-wise sinusoidal maximization (cyclic coordinate ascent, one element at a time).

namespace ris_pdpr
{
    struct CouplingMatrix
    {
        CMatrix entries; // Hermitian N_r x N_r

        Eigen::Index size() const { return entries.rows(); }
    };

    // G = diag(v^H) C_r diag(v)
    inline CouplingMatrix coupling_matrix(const SteeringVector &v, const CorrelationMatrix &risCorrelation)
    {
        if (risCorrelation.size() != v.size())
            throw std::invalid_argument("coupling_matrix: dimension mismatch");
        const CVector &a = v.entries();
        CouplingMatrix g;
        g.entries = a.conjugate().asDiagonal() * risCorrelation.entries.cast<cdouble>() * a.asDiagonal();
        return g;
    }

    inline double quadratic_gain(const CouplingMatrix &g, const CVector &phases)
    {
        return phases.dot(g.entries * phases).real();
    }

    // New value for phases(n): exp(i arg(sum_{m != n} g_nm psi_m)). Entries m < n are expected to
    // already hold this sweep's values. A vanishing sum leaves the entry unchanged.
    inline cdouble dsm_step(const CVector &phases, const CouplingMatrix &g, Eigen::Index n)
    {
        // G Hermitian: row n times psi = col(n)^H psi, which reads contiguous storage
        cdouble sum = g.entries.col(n).dot(phases);
        sum -= g.entries(n, n) * phases(n);
        const double magnitude = std::abs(sum);
        if (magnitude < 1e-300)
            return phases(n);
        return sum / magnitude;
    }

    struct DsmOptions
    {
        std::optional<double> epsilon; // default 1e-10 * |trace(G)|
        int maxSweeps = 1000;
    };

    struct PhaseOptimizationResult
    {
        CVector phases;
        double zeta = 0.0;
        std::vector<double> history; // history[0] is the initial objective, then one entry per sweep
        int iterations = 0;
        bool converged = false;
    };

    inline double default_dsm_epsilon(const CouplingMatrix &g)
    {
        const double t = std::abs(g.entries.trace());
        return t > 0.0 ? 1e-10 * t : 1e-300;
    }

    // Sweeps n = 0..N_r-1 until |zeta_k - zeta_{k-1}| <= epsilon. At least one sweep always runs.
    // Running out of sweeps is reported through `converged`, not an exception.
    inline PhaseOptimizationResult dsm_optimize(const CouplingMatrix &g, const CVector &initialPhases,
                                                const DsmOptions &options = {})
    {
        if (g.entries.rows() != g.entries.cols() || initialPhases.size() != g.size())
            throw std::invalid_argument("dsm_optimize: dimension mismatch");
        require_unit_modulus(initialPhases, "dsm_optimize");
        const double epsilon = options.epsilon.value_or(default_dsm_epsilon(g));
        if (!(epsilon > 0.0))
            throw std::invalid_argument("dsm_optimize: epsilon must be positive");
        if (options.maxSweeps < 1)
            throw std::invalid_argument("dsm_optimize: maxSweeps must be >= 1");

        PhaseOptimizationResult r;
        r.phases = initialPhases;
        double previous = quadratic_gain(g, r.phases);
        r.history.push_back(previous);

        const Eigen::Index n = g.size();
        while (r.iterations < options.maxSweeps)
        {
            ++r.iterations;
            for (Eigen::Index i = 0; i < n; ++i)
                r.phases(i) = dsm_step(r.phases, g, i);
            const double current = quadratic_gain(g, r.phases);
            r.history.push_back(current);
            const bool done = std::abs(current - previous) <= epsilon;
            previous = current;
            if (done)
            {
                r.converged = true;
                break;
            }
        }
        r.zeta = previous;
        return r;
    }

    inline CVector uniform_phases(Eigen::Index n) { return CVector::Ones(n); }

    template <typename Rng>
    CVector random_phases(Eigen::Index n, Rng &rng)
    {
        std::uniform_real_distribution<double> angle(-std::numbers::pi, std::numbers::pi);
        CVector p(n);
        for (Eigen::Index i = 0; i < n; ++i)
            p(i) = std::polar(1.0, angle(rng));
        return p;
    }

    // All-ones start followed by `restarts` seeded random starts; keeps the best result.
    inline PhaseOptimizationResult dsm_optimize_with_restarts(const CouplingMatrix &g, int restarts,
                                                              std::uint64_t seed, const DsmOptions &options = {})
    {
        PhaseOptimizationResult best = dsm_optimize(g, uniform_phases(g.size()), options);
        for (int k = 0; k < restarts; ++k)
        {
            StreamRng rng(seed, 0x7215u, static_cast<std::uint64_t>(k));
            PhaseOptimizationResult candidate = dsm_optimize(g, random_phases(g.size(), rng), options);
            if (candidate.zeta > best.zeta)
                best = std::move(candidate);
        }
        return best;
    }

    // theta_n = arg(phases_n) in (-pi, pi], with signed zero normalized to +0.
    inline std::vector<double> phase_angles(const CVector &phases)
    {
        std::vector<double> out(static_cast<std::size_t>(phases.size()));
        for (Eigen::Index i = 0; i < phases.size(); ++i)
        {
            double theta = std::arg(phases(i)) + 0.0;
            if (theta <= -std::numbers::pi)
                theta = std::numbers::pi;
            out[static_cast<std::size_t>(i)] = theta;
        }
        return out;
    }

} // namespace ris_pdpr

#endif
