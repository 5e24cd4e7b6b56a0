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


#ifndef thzris_channel_H
#define thzris_channel_H

#include "absorption.hpp"
#include "core.hpp"
#include "scenario.hpp"

#include <ostream>
#include <vector>

namespace thzris
{
    // ULA array factor: entry m = exp(j 2 pi (d/lambda) m sin(theta)), m = 0..n-1.
    inline CVec steering(int n_elements, double theta, double spacing_ratio = 0.5)
    {
        if (n_elements < 1)
            throw ValidationError("steering: n_elements must be >= 1");
        CVec a(n_elements);
        const double step = 2.0 * pi * spacing_ratio * std::sin(theta);
        for (int m = 0; m < n_elements; ++m)
            a[m] = std::polar(1.0, step * m);
        return a;
    }

    // Free-space amplitude factor c / (4 pi f d).
    inline double path_amplitude(double f, double d) { return speed_of_light / (4.0 * pi * f * d); }

    // One link of the re-radiation-parameterized Rician channel:
    //   (sqrt(tau) F_los + sqrt((1 - zeta)(1 - tau)) H_nlos) c / (4 pi f d)
    // H_nlos is always drawn (and multiplied by zero for zeta = 1), so the
    // stream consumption does not depend on zeta.
    inline CMat synthesize_link(const CMat &los_matrix, double d, double f, int zeta, const AbsorptionModel &model,
                                RandomStream &rng)
    {
        if (!(d > 0.0))
            throw GeometryError("synthesize_link: link distance must be > 0");
        if (zeta != 0 && zeta != 1)
            throw ValidationError("synthesize_link: zeta must be 0 or 1");

        const double tau = transmittance(model, f, d);
        const double absorbed = absorbed_fraction(model, f, d);
        const double los_coef = std::sqrt(tau);
        const double nlos_coef = std::sqrt((1.0 - zeta) * absorbed);

        const CMat nlos = rng.complex_normal_matrix(los_matrix.rows(), los_matrix.cols());
        return (los_coef * los_matrix + nlos_coef * nlos) * path_amplitude(f, d);
    }

    // Realized channels for one scenario draw. H[i] = [h_SR Diag(h_ST[i])  h_RT[i]].
    struct ChannelSet
    {
        std::vector<CVec> h_RT; // N_R per transmitter
        std::vector<CVec> h_ST; // N per transmitter
        CMat h_SR;              // N_R x N
        std::vector<CMat> H;    // N_R x (N + 1) per transmitter

        std::size_t n_tx() const { return H.size(); }
        Eigen::Index n_rx() const { return h_SR.rows(); }
        Eigen::Index n_ris() const { return h_SR.cols(); }

        // Assemble the stacked matrices from the per-link components.
        static ChannelSet from_links(std::vector<CVec> h_rt, std::vector<CVec> h_st, CMat h_sr)
        {
            if (h_rt.size() != h_st.size() || h_rt.empty())
                throw ValidationError("ChannelSet: need matching non-empty h_RT and h_ST lists");
            ChannelSet cs;
            cs.h_RT = std::move(h_rt);
            cs.h_ST = std::move(h_st);
            cs.h_SR = std::move(h_sr);
            const Eigen::Index nr = cs.h_SR.rows();
            const Eigen::Index n = cs.h_SR.cols();
            for (std::size_t i = 0; i < cs.h_RT.size(); ++i)
            {
                if (cs.h_RT[i].size() != nr || cs.h_ST[i].size() != n)
                    throw ValidationError("ChannelSet: inconsistent link dimensions");
                CMat Hi(nr, n + 1);
                Hi.leftCols(n) = cs.h_SR * cs.h_ST[i].asDiagonal();
                Hi.col(n) = cs.h_RT[i];
                cs.H.push_back(std::move(Hi));
            }
            return cs;
        }

        // Stacked-only set (tests and synthetic instances).
        static ChannelSet from_stacked(std::vector<CMat> H)
        {
            if (H.empty())
                throw ValidationError("ChannelSet: need at least one stacked matrix");
            ChannelSet cs;
            for (const auto &Hi : H)
                if (Hi.rows() != H.front().rows() || Hi.cols() != H.front().cols() || Hi.cols() < 1)
                    throw ValidationError("ChannelSet: stacked matrices must share dimensions");
            cs.H = std::move(H);
            cs.h_SR = cs.H.front().leftCols(cs.H.front().cols() - 1) * 0.0;
            for (const auto &Hi : cs.H)
            {
                cs.h_RT.push_back(Hi.col(Hi.cols() - 1));
                cs.h_ST.push_back(CVec::Zero(Hi.cols() - 1));
            }
            return cs;
        }
    };

    // Draw every link of the scenario. Stream order: for each transmitter
    // h_RT then h_ST, then h_SR. h_RT is drawn even without a direct link so
    // that the remaining links do not depend on that switch.
    inline ChannelSet build_channel_set(const Geometry &geo, const SystemParams &params, const AbsorptionModel &model,
                                        RandomStream &rng)
    {
        params.validate();
        if (geo.n_tx() == 0)
            throw ValidationError("build_channel_set: geometry has no transmitters");

        const double f = params.carrier_frequency;
        const double s = params.spacing_ratio;
        const int nr = geo.n_rx_antennas;
        const int n = geo.n_ris_elements;

        std::vector<CVec> h_rt, h_st;
        for (std::size_t i = 0; i < geo.n_tx(); ++i)
        {
            const CMat los_rt = steering(nr, geo.theta_R[i], s).conjugate();
            CVec rt = synthesize_link(los_rt, geo.d[i], f, params.zeta, model, rng);
            if (!params.direct_link_present)
                rt.setZero();
            h_rt.push_back(std::move(rt));

            const CMat los_st = n > 0 ? CMat(steering(n, geo.theta_S[i], s).conjugate()) : CMat(0, 1);
            h_st.push_back(synthesize_link(los_st, geo.d_gamma[i], f, params.zeta, model, rng));
        }
        const CMat los_sr = n > 0 ? CMat(steering(nr, geo.theta_alpha, s).conjugate() *
                                         steering(n, geo.theta_beta, s).transpose())
                                  : CMat(nr, 0);
        CMat h_sr = synthesize_link(los_sr, geo.d_alpha, f, params.zeta, model, rng);
        return ChannelSet::from_links(std::move(h_rt), std::move(h_st), std::move(h_sr));
    }

    // Debug dump: one row per matrix entry.
    inline void write_channel_csv(std::ostream &out, const ChannelSet &cs)
    {
        out << "matrix,tx,row,col,re,im\n";
        out.precision(17);
        auto dump = [&](const char *name, std::size_t tx, const CMat &m) {
            for (Eigen::Index c = 0; c < m.cols(); ++c)
                for (Eigen::Index r = 0; r < m.rows(); ++r)
                    out << name << ',' << tx << ',' << r << ',' << c << ',' << m(r, c).real() << ','
                        << m(r, c).imag() << '\n';
        };
        for (std::size_t i = 0; i < cs.n_tx(); ++i)
        {
            dump("h_RT", i, cs.h_RT[i]);
            dump("h_ST", i, cs.h_ST[i]);
            dump("H", i, cs.H[i]);
        }
        dump("h_SR", 0, cs.h_SR);
    }
}

#endif
