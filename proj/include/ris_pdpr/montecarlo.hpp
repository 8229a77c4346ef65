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

#ifndef RIS_PDPR_MONTECARLO_HPP
#define RIS_PDPR_MONTECARLO_HPP

#include "analysis.hpp"
#include "channel.hpp"
#include "estimation.hpp"
#include "random.hpp"
#include "receiver.hpp"
#include "risopt.hpp"
#include "types.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <exception>
#include <mutex>
#include <span>
#include <string>
#include <thread>
#include <vector>

namespace ris_pdpr
{
    // Everything needed to simulate one pilot + data exchange over the cascade channel.
    struct Scenario
    {
        CascadeStatistics cascade;
        PilotSequence pilot;
        double pilotPower = 1.0;
        double dataPower = 1.0;
        double pilotNoiseVariance = 1.0;
        EstimationStatistics estimation; // conditional statistics for this pilot power

        double lambda() const
        {
            return lambda_from_powers(cascade.zeta, static_cast<double>(cascade.nr()), static_cast<double>(cascade.nb()),
                                      pilotPower, dataPower, static_cast<int>(pilot.length()));
        }
    };

    inline Scenario make_scenario(CascadeStatistics cascade, PilotSequence pilot, double pilotPower, double dataPower)
    {
        Scenario s;
        s.estimation = conditional_stats(cascade.cascadeCovariance,
                                         pilot_noise_scale(pilotPower, static_cast<int>(pilot.length())));
        s.cascade = std::move(cascade);
        s.pilot = std::move(pilot);
        s.pilotPower = pilotPower;
        s.dataPower = dataPower;
        return s;
    }

    // Array and link description from which a Scenario is built.
    struct ScenarioSpec
    {
        int bsRows = 2, bsCols = 2;
        double bsSpacing = 0.5;
        int risRows = 3, risCols = 3;
        double risSpacing = 1.0 / 7.0;
        double bsAzimuth = 0.0, bsElevation = 0.0;
        double risAzimuth = 0.0, risElevation = 0.0;
        bool optimizePhases = true; // DSM from all-ones; otherwise all-ones phases
    };

    inline CascadeStatistics build_cascade(const ScenarioSpec &spec)
    {
        const ArrayGeometry bs = planar_array_positions(spec.bsRows, spec.bsCols, spec.bsSpacing);
        const ArrayGeometry ris = planar_array_positions(spec.risRows, spec.risCols, spec.risSpacing);
        SteeringVector u = steering_vector(bs, spec.bsAzimuth, spec.bsElevation);
        SteeringVector v = steering_vector(ris, spec.risAzimuth, spec.risElevation);
        CorrelationMatrix cr = isotropic_correlation(ris);
        CVector phases = uniform_phases(ris.size());
        if (spec.optimizePhases)
            phases = dsm_optimize(coupling_matrix(v, cr), phases).phases;
        return make_cascade_statistics(std::move(u), std::move(v), std::move(phases), std::move(cr));
    }

    // Powers such that zeta N_r N_b SNR = aggregateGain with P_p = gamma_p SNR, P_d = gamma_d SNR.
    inline Scenario scenario_for_gain(CascadeStatistics cascade, double aggregateGain, int tauC, double gammaP)
    {
        const double snr = aggregateGain / cascade.gain();
        const PowerSplit split = make_power_split(tauC, gammaP, snr);
        return make_scenario(std::move(cascade), zadoff_chu(1, 1), split.pilotPower(), split.dataPower());
    }

    struct RunOptions
    {
        unsigned threads = 0; // 0: hardware concurrency
    };

    namespace detail
    {
        inline unsigned resolve_threads(unsigned requested, std::size_t work)
        {
            unsigned t = requested == 0 ? std::max(1u, std::thread::hardware_concurrency()) : requested;
            return static_cast<unsigned>(std::min<std::size_t>(t, std::max<std::size_t>(work, 1)));
        }

        // out[i] = fn(i) for i in [0, n), split in contiguous blocks across workers.
        template <typename Fn>
        void parallel_fill(std::span<double> out, unsigned threads, Fn fn)
        {
            const std::size_t n = out.size();
            const unsigned workers = resolve_threads(threads, n);
            if (workers <= 1)
            {
                for (std::size_t i = 0; i < n; ++i)
                    out[i] = fn(i);
                return;
            }
            std::exception_ptr failure;
            std::mutex failure_mutex;
            std::vector<std::thread> pool;
            pool.reserve(workers);
            for (unsigned w = 0; w < workers; ++w)
            {
                const std::size_t begin = n * w / workers;
                const std::size_t end = n * (w + 1) / workers;
                pool.emplace_back([&, begin, end] {
                    try
                    {
                        for (std::size_t i = begin; i < end; ++i)
                            out[i] = fn(i);
                    }
                    catch (...)
                    {
                        std::lock_guard<std::mutex> lock(failure_mutex);
                        if (!failure)
                            failure = std::current_exception();
                    }
                });
            }
            for (auto &t : pool)
                t.join();
            if (failure)
                std::rethrow_exception(failure);
        }

        // Pairwise summation in index order; the result depends only on the values.
        inline double pairwise_sum(std::span<const double> x)
        {
            if (x.size() <= 32)
            {
                double s = 0.0;
                for (double v : x)
                    s += v;
                return s;
            }
            const std::size_t half = x.size() / 2;
            return pairwise_sum(x.first(half)) + pairwise_sum(x.subspan(half));
        }

        struct Moments
        {
            double mean = 0.0;
            double variance = 0.0; // unbiased
        };

        inline Moments moments(std::span<const double> x)
        {
            Moments m;
            const double n = static_cast<double>(x.size());
            if (x.empty())
                return m;
            m.mean = pairwise_sum(x) / n;
            if (x.size() > 1)
            {
                std::vector<double> sq(x.size());
                for (std::size_t i = 0; i < x.size(); ++i)
                    sq[i] = (x[i] - m.mean) * (x[i] - m.mean);
                m.variance = pairwise_sum(sq) / (n - 1.0);
            }
            return m;
        }

        inline constexpr std::uint64_t mmse_stream = 0x4D4D5345u; // per-scenario stream tag

        struct TrialOutcome
        {
            double mse = 1.0;
            double rho = 0.0;
        };

        // One pilot + data exchange: draw h, observe the pilot, estimate, receive.
        inline TrialOutcome simulate_trial(const Scenario &s, std::uint64_t seed, std::uint64_t stream,
                                           std::uint64_t trial)
        {
            StreamRng rng(seed, stream, trial);
            const CVector h = sample_cascade_channel(s.cascade, rng);
            const CMatrix y = simulate_pilot_observation(h, s.pilot, s.pilotPower, rng, s.pilotNoiseVariance);
            const CVector h_hat = ls_estimate(y, s.pilot, s.pilotPower);
            TrialOutcome o;
            o.mse = conditional_mmse(h_hat, s.estimation, s.dataPower);
            o.rho = post_snr_rho(h_hat, s.estimation, s.dataPower);
#ifndef NDEBUG
            if (std::abs(o.mse - 1.0 / (1.0 + o.rho)) > 1e-8 * (1.0 / (1.0 + o.rho)))
                throw consistency_error("simulate_trial: conditional MSE differs from 1/(1+rho)");
#endif
            return o;
        }
    } // namespace detail

    struct TrialReport
    {
        std::string label;
        std::size_t trials = 0;
        double empiricalMean = 0.0;
        double standardError = 0.0;
        double closedForm = 0.0;
        double zScore = 0.0;
        double lambda = 0.0;

        bool passes(double zLimit = 4.0) const { return std::isfinite(zScore) && std::abs(zScore) < zLimit; }
    };

    inline TrialReport make_trial_report(std::span<const double> samples, double closedForm)
    {
        TrialReport r;
        const detail::Moments m = detail::moments(samples);
        r.trials = samples.size();
        r.empiricalMean = m.mean;
        r.standardError = std::sqrt(m.variance / static_cast<double>(samples.size()));
        r.closedForm = closedForm;
        const double diff = r.empiricalMean - closedForm;
        r.zScore = r.standardError > 0.0 ? diff / r.standardError
                                         : (diff == 0.0 ? 0.0 : std::copysign(INFINITY, diff));
        return r;
    }

    // Per-trial conditional MMSE values, trial t drawn from substream (seed, stream, t).
    inline std::vector<double> simulate_mmse_samples(const Scenario &scenario, std::size_t trials, std::uint64_t seed,
                                                     const RunOptions &options = {},
                                                     std::uint64_t stream = detail::mmse_stream)
    {
        std::vector<double> samples(trials);
        detail::parallel_fill(samples, options.threads, [&](std::size_t t) {
            return detail::simulate_trial(scenario, seed, stream, t).mse;
        });
        return samples;
    }

    // Mean conditional MMSE over `trials` draws against (1/lambda) S(1/lambda).
    inline TrialReport empirical_ergodic_mmse(const Scenario &scenario, std::size_t trials, std::uint64_t seed,
                                              const RunOptions &options = {},
                                              std::uint64_t stream = detail::mmse_stream)
    {
        if (trials < 1)
            throw std::invalid_argument("empirical_ergodic_mmse: trials must be >= 1");
        const std::vector<double> samples = simulate_mmse_samples(scenario, trials, seed, options, stream);
        const double lambda = scenario.lambda();
        TrialReport r = make_trial_report(samples, ergodic_mmse(lambda));
        r.lambda = lambda;
        return r;
    }

    struct ExponentialityReport
    {
        std::size_t trials = 0;
        double sampleMean = 0.0;
        double sampleSecondMoment = 0.0;
        double lambdaClosedForm = 0.0;
        double meanZ = 0.0;         // (mean - lambda) / SE(mean)
        double secondMomentZ = 0.0; // (m2 - 2 lambda^2) / SE(m2)
        double ksStatistic = -1.0;  // sup |F_n - F|, negative when not computed
        double ksThreshold = 0.0;   // 1.63 / sqrt(n), alpha = 0.01

        bool moments_pass(double zLimit) const
        {
            return std::abs(meanZ) < zLimit && std::abs(secondMomentZ) < zLimit;
        }
        bool ks_pass() const { return ksStatistic >= 0.0 && ksStatistic < ksThreshold; }
    };

    struct RhoSamples
    {
        std::vector<double> rho;
        ExponentialityReport report;
    };

    // Kolmogorov-Smirnov distance of the sample to Exp(mean lambda).
    inline double ks_exponential(std::vector<double> samples, double lambda)
    {
        std::sort(samples.begin(), samples.end());
        const double n = static_cast<double>(samples.size());
        double d = 0.0;
        for (std::size_t i = 0; i < samples.size(); ++i)
        {
            const double f = -std::expm1(-samples[i] / lambda);
            d = std::max(d, std::max(f - i / n, (i + 1) / n - f));
        }
        return d;
    }

    inline constexpr std::uint64_t rho_stream = 0x52484Fu;

    // Post-combining SNR samples and their moment check against Exp(mean lambda).
    // The exponential law holds for the rank-one cascade only.
    inline RhoSamples sample_rho(const Scenario &scenario, std::size_t trials, std::uint64_t seed,
                                 const RunOptions &options = {}, bool computeKs = false)
    {
        if (trials < 2)
            throw std::invalid_argument("sample_rho: at least two trials are required");
        {
            Eigen::SelfAdjointEigenSolver<CMatrix> eig(scenario.cascade.cascadeCovariance, Eigen::EigenvaluesOnly);
            const RVector &ev = eig.eigenvalues();
            const double lmax = ev.maxCoeff();
            const auto above = (ev.array() > 1e-10 * lmax).count();
            if (!(lmax > 0.0) || above != 1)
                throw std::invalid_argument("sample_rho: cascade covariance must have rank one");
        }

        RhoSamples out;
        out.rho.resize(trials);
        detail::parallel_fill(out.rho, options.threads, [&](std::size_t t) {
            return detail::simulate_trial(scenario, seed, rho_stream, t).rho;
        });

        std::vector<double> sq(trials);
        for (std::size_t i = 0; i < trials; ++i)
            sq[i] = out.rho[i] * out.rho[i];
        const detail::Moments m1 = detail::moments(out.rho);
        const detail::Moments m2 = detail::moments(sq);
        const double n = static_cast<double>(trials);
        const double lambda = scenario.lambda();

        ExponentialityReport &r = out.report;
        r.trials = trials;
        r.sampleMean = m1.mean;
        r.sampleSecondMoment = m2.mean;
        r.lambdaClosedForm = lambda;
        r.meanZ = (m1.mean - lambda) / std::sqrt(m1.variance / n);
        r.secondMomentZ = (m2.mean - 2.0 * lambda * lambda) / std::sqrt(m2.variance / n);
        r.ksThreshold = 1.63 / std::sqrt(n);
        if (computeKs)
            r.ksStatistic = ks_exponential(out.rho, lambda);
        return out;
    }

    struct GridPoint
    {
        std::string label;
        Scenario scenario;
    };

    // One report per grid point; point k uses stream k so points are independent and reorderable.
    inline std::vector<TrialReport> validate_closed_form(const std::vector<GridPoint> &grid, std::size_t trialsPerPoint,
                                                         std::uint64_t seed, const RunOptions &options = {})
    {
        if (grid.empty())
            throw std::invalid_argument("validate_closed_form: grid must not be empty");
        std::vector<TrialReport> reports;
        reports.reserve(grid.size());
        for (std::size_t k = 0; k < grid.size(); ++k)
        {
            const std::uint64_t stream = detail::mmse_stream + k;
            TrialReport r = empirical_ergodic_mmse(grid[k].scenario, trialsPerPoint, seed, options, stream);
            r.label = grid[k].label;
            reports.push_back(std::move(r));
        }
        return reports;
    }

} // namespace ris_pdpr

#endif
