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

#ifndef RIS_PDPR_GEOMETRY_HPP
#define RIS_PDPR_GEOMETRY_HPP

#include "types.hpp"

#include <boost/math/special_functions/cos_pi.hpp>
#include <boost/math/special_functions/sin_pi.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

namespace ris_pdpr
{
    // Planar array in the y-z plane. All lengths are in carrier wavelengths.
    // Elements are ordered row-major: index = row * cols + col, position = (0, col*d, row*d).
    struct ArrayGeometry
    {
        int rows = 0;
        int cols = 0;
        double spacing = 0.0;
        std::vector<Eigen::Vector3d> positions;

        Eigen::Index size() const { return static_cast<Eigen::Index>(positions.size()); }
    };

    inline ArrayGeometry planar_array_positions(int rows, int cols, double spacing)
    {
        if (rows < 1 || cols < 1)
            throw std::invalid_argument("planar_array_positions: rows and cols must be >= 1");
        if (!(spacing > 0.0) || !std::isfinite(spacing))
            throw std::invalid_argument("planar_array_positions: spacing must be a positive finite number");

        ArrayGeometry g;
        g.rows = rows;
        g.cols = cols;
        g.spacing = spacing;
        g.positions.reserve(static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols));
        for (int r = 0; r < rows; ++r)
            for (int c = 0; c < cols; ++c)
                g.positions.emplace_back(0.0, c * spacing, r * spacing);
        return g;
    }

    // Square ceil(sqrt(count)) grid, keeping the first `count` elements in row-major order.
    // For non-square counts the last row is partially filled, so positions.size() < rows*cols.
    inline ArrayGeometry truncated_square_array(int count, double spacing)
    {
        if (count < 1)
            throw std::invalid_argument("truncated_square_array: count must be >= 1");
        int side = static_cast<int>(std::ceil(std::sqrt(static_cast<double>(count))));
        while (side * side < count)
            ++side;
        while (side > 1 && (side - 1) * (side - 1) >= count)
            --side;
        ArrayGeometry g = planar_array_positions(side, side, spacing);
        g.positions.resize(static_cast<std::size_t>(count));
        g.rows = (count + side - 1) / side;
        return g;
    }

    // Unit-norm plane-wave response of an array.
    class SteeringVector
    {
    public:
        SteeringVector() = default;

        // Throws if the vector is not unit norm to 1e-12.
        explicit SteeringVector(CVector entries) : entries_(std::move(entries))
        {
            if (entries_.size() == 0)
                throw std::invalid_argument("SteeringVector: empty vector");
            if (std::abs(entries_.norm() - 1.0) > 1e-12)
                throw std::invalid_argument("SteeringVector: vector must have unit norm");
        }

        const CVector &entries() const { return entries_; }
        Eigen::Index size() const { return entries_.size(); }
        cdouble operator()(Eigen::Index i) const { return entries_(i); }

    private:
        CVector entries_;
    };

    // Unit propagation direction for azimuth (in the x-y plane, from +x) and elevation (from the x-y plane).
    inline Eigen::Vector3d propagation_direction(double azimuth, double elevation)
    {
        return {std::cos(elevation) * std::cos(azimuth),
                std::cos(elevation) * std::sin(azimuth),
                std::sin(elevation)};
    }

    // a_n = exp(-i 2 pi <k, p_n>) / sqrt(N)
    inline SteeringVector steering_vector(const ArrayGeometry &geometry, double azimuth, double elevation)
    {
        const Eigen::Index n = geometry.size();
        if (n == 0)
            throw std::invalid_argument("steering_vector: empty geometry");
        const Eigen::Vector3d k = propagation_direction(azimuth, elevation);
        const double amplitude = 1.0 / std::sqrt(static_cast<double>(n));

        CVector a(n);
        for (Eigen::Index i = 0; i < n; ++i)
        {
            // 2<k,p> in half-turns; sin_pi/cos_pi keep integer multiples exact
            const double half_turns = 2.0 * k.dot(geometry.positions[static_cast<std::size_t>(i)]);
            a(i) = amplitude * cdouble(boost::math::cos_pi(half_turns), -boost::math::sin_pi(half_turns));
        }
        // Renormalize away the last-ulp drift of the amplitude products.
        a /= a.norm();
        return SteeringVector(std::move(a));
    }

    // sin(pi x) / (pi x), with sinc(0) = 1 and exact zeros at nonzero integers.
    inline double normalized_sinc(double x)
    {
        if (x == 0.0)
            return 1.0;
        return boost::math::sin_pi(x) / (std::numbers::pi * x);
    }

    // Real symmetric spatial correlation of the RIS elements.
    struct CorrelationMatrix
    {
        RMatrix entries;

        Eigen::Index size() const { return entries.rows(); }
    };

    // Isotropic scattering over the half-space in front of the surface:
    // c_nm = sinc(2 ||p_n - p_m||) with positions in wavelengths.
    inline CorrelationMatrix isotropic_correlation(const ArrayGeometry &geometry)
    {
        const Eigen::Index n = geometry.size();
        CorrelationMatrix c{RMatrix::Identity(n, n)};
        for (Eigen::Index i = 0; i < n; ++i)
            for (Eigen::Index j = i + 1; j < n; ++j)
            {
                const double d = (geometry.positions[static_cast<std::size_t>(i)] -
                                  geometry.positions[static_cast<std::size_t>(j)])
                                     .norm();
                const double value = normalized_sinc(2.0 * d);
                c.entries(i, j) = value;
                c.entries(j, i) = value;
            }
        return c;
    }

    // F with F F^T equal to the eigenvalue-clamped correlation matrix.
    // Only columns for strictly positive eigenvalues are kept (rank = F.cols()).
    struct CorrelationFactor
    {
        RMatrix factor;
        int clippedEigenvalues = 0;
        Eigen::Index rank() const { return factor.cols(); }
    };

    // Eigenvalues in [-1e-10 * lambda_max, 0) are clamped to zero and counted.
    // Anything more negative means the matrix is not a covariance.
    inline CorrelationFactor factorize_correlation(const CorrelationMatrix &correlation)
    {
        const Eigen::Index n = correlation.size();
        CorrelationFactor out;
        if (n == 0)
            return out;
        if ((correlation.entries - correlation.entries.transpose()).norm() >
            1e-12 * std::max(1.0, correlation.entries.norm()))
            throw std::invalid_argument("factorize_correlation: matrix is not symmetric");

        Eigen::SelfAdjointEigenSolver<RMatrix> eig(correlation.entries);
        if (eig.info() != Eigen::Success)
            throw consistency_error("factorize_correlation: eigendecomposition failed");

        const RVector &values = eig.eigenvalues();
        const double lambda_max = std::max(0.0, values.maxCoeff());
        const double floor = -1e-10 * lambda_max;

        std::vector<Eigen::Index> keep;
        for (Eigen::Index i = 0; i < n; ++i)
        {
            const double l = values(i);
            if (l < floor || (lambda_max == 0.0 && l < 0.0))
                throw std::invalid_argument("factorize_correlation: matrix has a significantly negative eigenvalue");
            if (l < 0.0)
                ++out.clippedEigenvalues;
            else if (l > 0.0)
                keep.push_back(i);
        }

        out.factor.resize(n, static_cast<Eigen::Index>(keep.size()));
        for (std::size_t c = 0; c < keep.size(); ++c)
        {
            const Eigen::Index i = keep[c];
            out.factor.col(static_cast<Eigen::Index>(c)) = eig.eigenvectors().col(i) * std::sqrt(values(i));
        }
        return out;
    }

} // namespace ris_pdpr

#endif
