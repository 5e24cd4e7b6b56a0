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


#ifndef thzris_scenario_H
#define thzris_scenario_H

#include "core.hpp"

#include <cmath>
#include <string>
#include <vector>

namespace thzris
{
    // Re-radiation manifestation: molecular re-radiation appears either as
    // additive Gaussian noise or as the NLOS component of a Rician channel.
    enum class ReRadiation : int
    {
        Scattering = 0, // zeta = 0
        Noise = 1       // zeta = 1
    };

    inline int zeta_value(ReRadiation r) { return static_cast<int>(r); }

    inline ReRadiation rerad_from_zeta(int zeta)
    {
        if (zeta == 0)
            return ReRadiation::Scattering;
        if (zeta == 1)
            return ReRadiation::Noise;
        throw ValidationError("zeta must be 0 or 1, got " + std::to_string(zeta));
    }

    struct SystemParams
    {
        double carrier_frequency = 220e9;                    // Hz
        double bandwidth = 10e9;                             // Hz
        std::vector<double> tx_powers = {2.0, 2.0, 2.0, 2.0}; // W, index 0 = Tx of interest
        double thermal_noise_density = dbm_to_watt(-174.0);  // W/Hz
        int zeta = 0;
        bool direct_link_present = true;
        double spacing_ratio = 0.5; // element spacing over wavelength

        // Atmosphere descriptor. Provenance of the absorption table only.
        double temperature = 300.15;    // K
        double pressure = 1.0;          // atm
        double relative_humidity = 0.5; // fraction

        double thermal_noise_power() const { return thermal_noise_density * bandwidth; }
        double wavelength() const { return speed_of_light / carrier_frequency; }

        void validate() const
        {
            if (!(carrier_frequency > 0.0))
                throw ValidationError("carrier_frequency must be > 0");
            if (!(bandwidth > 0.0))
                throw ValidationError("bandwidth must be > 0");
            if (tx_powers.empty())
                throw ValidationError("tx_powers must not be empty");
            for (double p : tx_powers)
                if (!(p > 0.0))
                    throw ValidationError("all tx_powers must be > 0");
            if (!(thermal_noise_density > 0.0))
                throw ValidationError("thermal_noise_density must be > 0");
            if (zeta != 0 && zeta != 1)
                throw ValidationError("zeta must be 0 or 1");
            if (!(spacing_ratio > 0.0))
                throw ValidationError("spacing_ratio must be > 0");
        }
    };

    struct Point2
    {
        double x = 0.0;
        double y = 0.0;
    };

    inline double distance(Point2 a, Point2 b) { return std::hypot(b.x - a.x, b.y - a.y); }

    // What to do with a link whose angle falls outside the open front
    // half-plane of the array.
    enum class HemispherePolicy
    {
        Strict, // |theta| < pi/2, otherwise FrontHemisphereError
        Closed, // |theta| <= pi/2 (endfire allowed)
        Fold    // back-lobe angles mapped to asin(sin(theta)); a ULA cannot tell front from back
    };

    struct Placement
    {
        Point2 rx_position{0.0, 0.0};
        Point2 ris_position{1.0, 0.0};
        std::vector<Point2> tx_positions; // index 0 = Tx of interest, rest = interferers
        double rx_array_normal = 0.0;     // rad, direction the Rx ULA faces
        double ris_array_normal = pi;     // rad
        int n_rx_antennas = 1;
        int n_ris_elements = 1; // 0 runs the link without a RIS
        HemispherePolicy hemisphere = HemispherePolicy::Strict;

        std::size_t n_tx() const { return tx_positions.size(); }
    };

    // Distances and angles for every link of the scenario. Angles are signed,
    // measured from the normal of the array at which they are observed.
    struct Geometry
    {
        std::vector<double> d;        // Tx_i -> Rx
        std::vector<double> d_gamma;  // Tx_i -> RIS
        double d_alpha = 0.0;         // RIS -> Rx
        std::vector<double> theta_R;  // arrival at Rx from Tx_i
        std::vector<double> theta_S;  // arrival at RIS from Tx_i
        double theta_alpha = 0.0;     // arrival at Rx from RIS
        double theta_beta = 0.0;      // departure at RIS toward Rx
        int n_rx_antennas = 1;
        int n_ris_elements = 1;

        std::size_t n_tx() const { return d.size(); }
    };

    namespace detail
    {
        // Wrap to (-pi, pi].
        inline double wrap_angle(double a)
        {
            a = std::remainder(a, 2.0 * pi);
            if (a <= -pi)
                a += 2.0 * pi;
            return a;
        }

        inline double link_angle(Point2 from_array, Point2 to_node, double normal,
                                 HemispherePolicy policy, const char *what)
        {
            const double bearing = std::atan2(to_node.y - from_array.y, to_node.x - from_array.x);
            const double theta = wrap_angle(bearing - normal);
            const double half = pi / 2.0;
            switch (policy)
            {
            case HemispherePolicy::Strict:
                if (!(std::abs(theta) < half))
                    throw FrontHemisphereError(std::string(what) + ": angle " + std::to_string(rad_to_deg(theta)) +
                                               " deg outside the open front hemisphere");
                return theta;
            case HemispherePolicy::Closed:
                if (std::abs(theta) > half + 1e-12)
                    throw FrontHemisphereError(std::string(what) + ": angle " + std::to_string(rad_to_deg(theta)) +
                                               " deg outside the closed front hemisphere");
                return std::clamp(theta, -half, half);
            case HemispherePolicy::Fold:
                return std::asin(std::clamp(std::sin(theta), -1.0, 1.0));
            }
            return theta;
        }

        inline double checked_distance(Point2 a, Point2 b, const char *what)
        {
            const double dd = distance(a, b);
            if (!(dd > 0.0) || !std::isfinite(dd))
                throw GeometryError(std::string("coincident positions: ") + what);
            return dd;
        }
    }

    // Resolve node placements into link distances and array-relative angles.
    inline Geometry resolve_geometry(const Placement &p)
    {
        if (p.n_rx_antennas < 1)
            throw ValidationError("n_rx_antennas must be >= 1");
        if (p.n_ris_elements < 0)
            throw ValidationError("n_ris_elements must be >= 0 (0 = no RIS)");
        if (p.tx_positions.empty())
            throw ValidationError("at least one transmitter is required");

        Geometry g;
        g.n_rx_antennas = p.n_rx_antennas;
        g.n_ris_elements = p.n_ris_elements;

        g.d_alpha = detail::checked_distance(p.ris_position, p.rx_position, "RIS and Rx");
        g.theta_alpha = detail::link_angle(p.rx_position, p.ris_position, p.rx_array_normal, p.hemisphere,
                                           "Rx <- RIS");
        g.theta_beta = detail::link_angle(p.ris_position, p.rx_position, p.ris_array_normal, p.hemisphere,
                                          "RIS -> Rx");

        for (std::size_t i = 0; i < p.tx_positions.size(); ++i)
        {
            const Point2 tx = p.tx_positions[i];
            const std::string tag = "Tx" + std::to_string(i);
            g.d.push_back(detail::checked_distance(tx, p.rx_position, (tag + " and Rx").c_str()));
            g.d_gamma.push_back(detail::checked_distance(tx, p.ris_position, (tag + " and RIS").c_str()));
            g.theta_R.push_back(detail::link_angle(p.rx_position, tx, p.rx_array_normal, p.hemisphere,
                                                   ("Rx <- " + tag).c_str()));
            g.theta_S.push_back(detail::link_angle(p.ris_position, tx, p.ris_array_normal, p.hemisphere,
                                                   ("RIS <- " + tag).c_str()));
        }
        // Transmitters may not sit on top of each other either
        for (std::size_t i = 0; i < p.tx_positions.size(); ++i)
            for (std::size_t j = i + 1; j < p.tx_positions.size(); ++j)
                detail::checked_distance(p.tx_positions[i], p.tx_positions[j],
                                         ("Tx" + std::to_string(i) + " and Tx" + std::to_string(j)).c_str());
        return g;
    }
}

#endif
