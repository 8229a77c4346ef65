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

#ifndef RIS_PDPR_TYPES_HPP
#define RIS_PDPR_TYPES_HPP

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

namespace ris_pdpr
{
    using cdouble = std::complex<double>;
    using CVector = Eigen::VectorXcd;
    using CMatrix = Eigen::MatrixXcd;
    using RVector = Eigen::VectorXd;
    using RMatrix = Eigen::MatrixXd;

    // Two computation routes that must agree disagreed beyond tolerance.
    class consistency_error : public std::runtime_error
    {
    public:
        using std::runtime_error::runtime_error;
    };

    // A closed form was requested outside the range where it is defined.
    class unsupported_error : public std::domain_error
    {
    public:
        using std::domain_error::domain_error;
    };

    // Relative Frobenius distance ||a - b|| / max(||b||, tiny)
    template <typename A, typename B>
    inline double relative_frobenius(const Eigen::MatrixBase<A> &a, const Eigen::MatrixBase<B> &b)
    {
        const double denom = b.norm();
        const double diff = (a - b).norm();
        return denom > 0.0 ? diff / denom : diff;
    }

    inline double db10(double linear) { return 10.0 * std::log10(linear); }
    inline double from_db10(double db) { return std::pow(10.0, db / 10.0); }

} // namespace ris_pdpr

#endif
