// SPDX-License-Identifier: Apache-2.0
//
// thzris - RIS and receive-beamformer optimization for THz links with molecular re-radiation
// Copyright (C) 2026 The thzris authors
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

#ifndef thzris_core_H
#define thzris_core_H

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace thzris
{
    using cplx = std::complex<double>;
    using CVec = Eigen::VectorXcd;
    using CMat = Eigen::MatrixXcd;
    using RVec = Eigen::VectorXd;
    using RMat = Eigen::MatrixXd;

    inline constexpr double speed_of_light = 2.99792458e8; // m/s
    inline constexpr double pi = std::numbers::pi;

    inline double deg_to_rad(double deg) { return deg * pi / 180.0; }
    inline double rad_to_deg(double rad) { return rad * 180.0 / pi; }

    // dBm/Hz -> W/Hz
    inline double dbm_to_watt(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }

    // Error hierarchy. Everything thrown by the library derives from thzris::Error.
    struct Error : std::runtime_error
    {
        using std::runtime_error::runtime_error;
        virtual const char *kind() const noexcept { return "error"; }
    };

    struct ValidationError : Error
    {
        using Error::Error;
        const char *kind() const noexcept override { return "validation"; }
    };

    struct GeometryError : Error
    {
        using Error::Error;
        const char *kind() const noexcept override { return "geometry"; }
    };

    struct FrontHemisphereError : GeometryError
    {
        using GeometryError::GeometryError;
        const char *kind() const noexcept override { return "front_hemisphere"; }
    };

    struct OutOfRangeError : Error
    {
        using Error::Error;
        const char *kind() const noexcept override { return "out_of_range"; }
    };

    struct ConfigError : Error
    {
        using Error::Error;
        const char *kind() const noexcept override { return "config"; }
    };

    // Collects non-fatal warnings (degenerate SINR, zero beamformer target, ...).
    // Passing nullptr wherever a Diagnostics* is accepted discards them.
    struct Diagnostics
    {
        std::vector<std::string> warnings;
        void warn(std::string msg) { warnings.push_back(std::move(msg)); }
    };

    inline void warn(Diagnostics *diag, std::string msg)
    {
        if (diag != nullptr)
            diag->warn(std::move(msg));
    }

    // SplitMix64 finalizer, used to derive child seeds.
    inline std::uint64_t mix64(std::uint64_t x)
    {
        x += 0x9E3779B97F4A7C15ULL;
        x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
        x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
        return x ^ (x >> 31);
    }

    // Explicit, seedable and splittable random stream. Never global: every
    // stochastic routine takes one by reference.
    class RandomStream
    {
    public:
        explicit RandomStream(std::uint64_t seed = 0) : seed_(seed), engine_(mix64(seed)) {}

        std::uint64_t seed() const { return seed_; }

        // Independent child stream; depends only on (seed, index), not on how
        // much of this stream has been consumed.
        RandomStream split(std::uint64_t index) const
        {
            return RandomStream(mix64(seed_ ^ mix64(index + 0x632BE59BD9B4E019ULL)));
        }

        double normal() { return normal_(engine_); }
        double uniform() { return uniform_(engine_); }
        double uniform_phase() { return 2.0 * pi * uniform(); }

        // Circularly-symmetric complex normal with unit variance: two real
        // normals scaled by 1/sqrt(2).
        cplx complex_normal()
        {
            const double re = normal();
            const double im = normal();
            return {re * std::numbers::sqrt2 / 2.0, im * std::numbers::sqrt2 / 2.0};
        }

        CMat complex_normal_matrix(Eigen::Index rows, Eigen::Index cols)
        {
            CMat m(rows, cols);
            for (Eigen::Index c = 0; c < cols; ++c)
                for (Eigen::Index r = 0; r < rows; ++r)
                    m(r, c) = complex_normal();
            return m;
        }

        std::mt19937_64 &engine() { return engine_; }

    private:
        std::uint64_t seed_;
        std::mt19937_64 engine_;
        std::normal_distribution<double> normal_{0.0, 1.0};
        std::uniform_real_distribution<double> uniform_{0.0, 1.0};
    };

    inline bool is_hermitian(const CMat &A, double tol)
    {
        if (A.rows() != A.cols())
            return false;
        const double scale = A.cwiseAbs().maxCoeff(); // relative: channel matrices are tiny
        return (A - A.adjoint()).cwiseAbs().maxCoeff() <= tol * scale;
    }
}

#endif
