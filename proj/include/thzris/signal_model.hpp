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


#ifndef thzris_signal_model_H
#define thzris_signal_model_H

#include "absorption.hpp"
#include "channel.hpp"
#include "core.hpp"
#include "scenario.hpp"

#include <cmath>
#include <string>

namespace thzris
{
    // RIS configuration with the appended unit element: theta0 = [Theta, 1].
    class RisConfig
    {
    public:
        RisConfig() = default;

        explicit RisConfig(CVec theta0) : theta0_(std::move(theta0))
        {
            if (theta0_.size() < 1)
                throw ValidationError("RisConfig: empty vector");
            if (theta0_[theta0_.size() - 1] != cplx(1.0, 0.0))
                throw ValidationError("RisConfig: last element must be exactly 1");
            for (Eigen::Index l = 0; l < theta0_.size(); ++l)
                if (!(std::abs(theta0_[l]) <= 1.0 + 1e-12))
                    throw ValidationError("RisConfig: element magnitude exceeds 1");
        }

        static RisConfig all_ones(Eigen::Index n_elements) { return RisConfig(CVec::Ones(n_elements + 1)); }

        // Unit-modulus configuration from N element phases.
        static RisConfig from_phases(const RVec &phases)
        {
            CVec t(phases.size() + 1);
            for (Eigen::Index l = 0; l < phases.size(); ++l)
                t[l] = std::polar(1.0, phases[l]);
            t[phases.size()] = 1.0;
            return RisConfig(std::move(t));
        }

        // i.i.d. uniform phases, last element 1.
        static RisConfig random_phases(Eigen::Index n_elements, RandomStream &rng)
        {
            RVec ph(n_elements);
            for (Eigen::Index l = 0; l < n_elements; ++l)
                ph[l] = rng.uniform_phase();
            return from_phases(ph);
        }

        const CVec &theta0() const { return theta0_; }
        Eigen::Index n_elements() const { return theta0_.size() - 1; }
        double power() const { return theta0_.squaredNorm(); } // Theta0^H Theta0
        double physical_power() const { return power() - 1.0; } // Theta^H Theta

    private:
        CVec theta0_;
    };

    // Unit-norm receive beamformer.
    class Beamformer
    {
    public:
        Beamformer() = default;

        explicit Beamformer(CVec u) : u_(std::move(u))
        {
            if (u_.size() < 1 || std::abs(u_.norm() - 1.0) > 1e-9)
                throw ValidationError("Beamformer: vector must have unit norm");
        }

        static Beamformer normalized(const CVec &v)
        {
            const double nrm = v.norm();
            if (!(nrm > 0.0) || !std::isfinite(nrm))
                throw ValidationError("Beamformer: cannot normalize a zero vector");
            return Beamformer(v / nrm);
        }

        static Beamformer basis(Eigen::Index n, Eigen::Index k = 0)
        {
            CVec e = CVec::Zero(n);
            e[k] = 1.0;
            return Beamformer(std::move(e));
        }

        const CVec &u() const { return u_; }
        Eigen::Index size() const { return u_.size(); }

    private:
        CVec u_;
    };

    // Thermal and molecular-re-radiation noise variances. The molecular
    // terms are already summed over all transmitters including Tx0.
    struct NoiseModel
    {
        double sigma_w_sq = 0.0;  // W
        double sigma_m1_sq = 0.0; // W, direct paths
        double sigma_m2_sq = 0.0; // W per unit Theta0^H Theta0, reflected paths
        int zeta = 0;

        double effective(const RisConfig &theta0) const { return effective(theta0.power()); }

        double effective(double theta0_power) const
        {
            return sigma_w_sq + zeta * (sigma_m1_sq + sigma_m2_sq * theta0_power);
        }
    };

    // Closed-form re-radiation noise variances. Direct-path terms come from
    // the Tx_i -> Rx hop (only when the direct link exists); reflected-path
    // terms combine both RIS hops.
    inline NoiseModel molecular_noise(const Geometry &geo, const SystemParams &params, const AbsorptionModel &model)
    {
        params.validate();
        if (params.tx_powers.size() != geo.n_tx())
            throw ValidationError("molecular_noise: tx_powers size does not match transmitter count");

        const double f = params.carrier_frequency;
        NoiseModel nm;
        nm.zeta = params.zeta;
        nm.sigma_w_sq = params.thermal_noise_power();

        const double tau_alpha = transmittance(model, f, geo.d_alpha);
        for (std::size_t i = 0; i < geo.n_tx(); ++i)
        {
            const double P = params.tx_powers[i];
            // A blocked direct path carries no re-radiated energy either.
            if (params.direct_link_present)
            {
                const double a_direct = path_amplitude(f, geo.d[i]);
                nm.sigma_m1_sq += a_direct * a_direct * P * absorbed_fraction(model, f, geo.d[i]);
            }

            const double a_refl = speed_of_light * speed_of_light /
                                  (16.0 * pi * pi * f * f * geo.d_alpha * geo.d_gamma[i]);
            const double tau_gamma = transmittance(model, f, geo.d_gamma[i]);
            nm.sigma_m2_sq += a_refl * a_refl * P * (1.0 - tau_alpha * tau_gamma);
        }
        return nm;
    }

    namespace detail
    {
        inline void check_dims(const Beamformer &u, const RisConfig &theta0, const ChannelSet &ch,
                               const SystemParams &params)
        {
            if (ch.n_tx() == 0)
                throw ValidationError("empty channel set");
            if (params.tx_powers.size() != ch.n_tx())
                throw ValidationError("tx_powers size does not match channel set");
            if (ch.H.front().rows() != u.size())
                throw ValidationError("beamformer length does not match N_R");
            if (ch.H.front().cols() != theta0.theta0().size())
                throw ValidationError("RIS configuration length does not match N + 1");
        }
    }

    // Receive SINR
    //   P0 |u^H H0 th|^2 / (sum_{i>=1} Pi |u^H Hi th|^2 + u^H u (sigma_w^2 + zeta sigma_m^2(th)))
    // A zero denominator yields 0 and a warning.
    inline double sinr(const Beamformer &u, const RisConfig &theta0, const ChannelSet &ch, const NoiseModel &noise,
                       const SystemParams &params, Diagnostics *diag = nullptr)
    {
        detail::check_dims(u, theta0, ch, params);
        const CVec &th = theta0.theta0();
        const double signal = params.tx_powers[0] * std::norm(u.u().dot(ch.H[0] * th));
        double denom = u.u().squaredNorm() * noise.effective(theta0);
        for (std::size_t i = 1; i < ch.n_tx(); ++i)
            denom += params.tx_powers[i] * std::norm(u.u().dot(ch.H[i] * th));
        if (!(denom > 0.0))
        {
            warn(diag, "sinr: zero interference-plus-noise power; returning 0");
            return 0.0;
        }
        return signal / denom;
    }

    // B log2(1 + gamma), bit/s
    inline double throughput(double gamma, double bandwidth)
    {
        if (!(gamma >= 0.0))
            throw ValidationError("throughput: gamma must be >= 0");
        return bandwidth * std::log2(1.0 + gamma);
    }

    // Sample-path simulation of the reflected-path re-radiation noise: per
    // transmitter and RIS element, (n1 a_m sqrt(tau_alpha) + n2) scaled by the
    // cascaded path amplitude, summed. Only the N physical elements enter.
    // Returns the empirical variance of the summed noise term.
    inline double simulate_appendix_chain(const RisConfig &theta0, const Geometry &geo, const SystemParams &params,
                                          const AbsorptionModel &model, std::size_t n_samples, RandomStream &rng)
    {
        if (n_samples < 10000)
            throw ValidationError("simulate_appendix_chain: n_samples must be >= 1e4");
        if (params.tx_powers.size() != geo.n_tx())
            throw ValidationError("simulate_appendix_chain: tx_powers size does not match transmitter count");
        const double f = params.carrier_frequency;
        const double tau_alpha = transmittance(model, f, geo.d_alpha);
        const double sq_tau_alpha = std::sqrt(tau_alpha);
        const Eigen::Index n = theta0.n_elements();

        struct Hop
        {
            double amp;     // cascaded path amplitude
            double sd_n1;   // std of n1 (incident hop)
            double sd_n2_0; // std of n2 per unit |alpha_m|
        };
        std::vector<Hop> hops;
        for (std::size_t i = 0; i < geo.n_tx(); ++i)
        {
            const double P = params.tx_powers[i];
            const double amp = speed_of_light * speed_of_light /
                               (16.0 * pi * pi * f * f * geo.d_alpha * geo.d_gamma[i]);
            hops.push_back({amp, std::sqrt(P * absorbed_fraction(model, f, geo.d_gamma[i])),
                            std::sqrt(P * absorbed_fraction(model, f, geo.d_alpha))});
        }

        cplx sum(0.0, 0.0);
        double sum_sq = 0.0;
        for (std::size_t s = 0; s < n_samples; ++s)
        {
            cplx z(0.0, 0.0);
            for (const Hop &h : hops)
            {
                cplx zi(0.0, 0.0);
                for (Eigen::Index m = 0; m < n; ++m)
                {
                    const cplx refl = theta0.theta0()[m];
                    const cplx n1 = h.sd_n1 * rng.complex_normal();
                    const cplx n2 = h.sd_n2_0 * std::abs(refl) * rng.complex_normal();
                    zi += n1 * refl * sq_tau_alpha + n2;
                }
                z += h.amp * zi;
            }
            sum += z;
            sum_sq += std::norm(z);
        }
        const double ns = static_cast<double>(n_samples);
        const cplx mean = sum / ns;
        return (sum_sq - ns * std::norm(mean)) / (ns - 1.0);
    }
}

#endif
