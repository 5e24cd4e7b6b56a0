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


#ifndef thzris_config_H
#define thzris_config_H

#include "experiments.hpp"

#include <json.hpp>

#include <algorithm>
#include <filesystem>
#include <functional>
#include <fstream>
#include <set>
#include <string>

namespace thzris
{
    // JSON scenario file with sections "system", "placement", "optimizer" and
    // "sweep". Lengths in m, frequencies in Hz, powers in W, angles in deg.
    // Missing keys keep the values of `defaults`; unknown keys are rejected.
    namespace detail
    {
        using nlohmann::json;

        inline void reject_unknown(const json &obj, const std::string &section, const std::set<std::string> &known)
        {
            if (!obj.is_object())
                throw ConfigError("section [" + section + "] must be an object");
            for (const auto &[key, _] : obj.items())
                if (!known.contains(key))
                    throw ConfigError("unknown key '" + key + "' in [" + section + "]");
        }

        template <class T>
        void read(const json &obj, const char *key, T &dst, const std::string &section)
        {
            if (!obj.contains(key))
                return;
            try
            {
                dst = obj.at(key).get<T>();
            }
            catch (const json::exception &e)
            {
                throw ConfigError("[" + section + "]." + key + ": " + e.what());
            }
        }

        inline Point2 read_point(const json &v, const std::string &what)
        {
            if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number())
                throw ConfigError(what + ": expected [x, y]");
            return {v[0].get<double>(), v[1].get<double>()};
        }

        inline HemispherePolicy parse_hemisphere(const std::string &s)
        {
            if (s == "strict")
                return HemispherePolicy::Strict;
            if (s == "closed")
                return HemispherePolicy::Closed;
            if (s == "fold")
                return HemispherePolicy::Fold;
            throw ConfigError("front_hemisphere must be strict, closed or fold");
        }
    }

    inline ScenarioConfig parse_config(const nlohmann::json &root, ScenarioConfig c = default_scenario(),
                                       const std::filesystem::path &base_dir = {})
    {
        using detail::read;
        if (!root.is_object())
            throw ConfigError("config root must be an object");
        detail::reject_unknown(root, "root", {"system", "placement", "optimizer", "sweep"});

        if (root.contains("system"))
        {
            const auto &s = root.at("system");
            detail::reject_unknown(s, "system",
                                   {"carrier_frequency_hz", "bandwidth_hz", "tx_power_w", "thermal_noise_density_w_per_hz",
                                    "thermal_noise_density_dbm_per_hz", "zeta", "temperature_k", "pressure_atm",
                                    "relative_humidity", "direct_link_present", "spacing_ratio", "absorption_table"});
            read(s, "carrier_frequency_hz", c.system.carrier_frequency, "system");
            read(s, "bandwidth_hz", c.system.bandwidth, "system");
            if (s.contains("tx_power_w"))
            {
                if (s.at("tx_power_w").is_number())
                    c.system.tx_powers = {s.at("tx_power_w").get<double>()};
                else
                    read(s, "tx_power_w", c.system.tx_powers, "system");
            }
            if (s.contains("thermal_noise_density_w_per_hz") && s.contains("thermal_noise_density_dbm_per_hz"))
                throw ConfigError("[system]: give thermal noise density in W/Hz or dBm/Hz, not both");
            read(s, "thermal_noise_density_w_per_hz", c.system.thermal_noise_density, "system");
            if (s.contains("thermal_noise_density_dbm_per_hz"))
            {
                double dbm = 0.0;
                read(s, "thermal_noise_density_dbm_per_hz", dbm, "system");
                c.system.thermal_noise_density = dbm_to_watt(dbm);
            }
            read(s, "zeta", c.system.zeta, "system");
            read(s, "temperature_k", c.system.temperature, "system");
            read(s, "pressure_atm", c.system.pressure, "system");
            read(s, "relative_humidity", c.system.relative_humidity, "system");
            read(s, "direct_link_present", c.system.direct_link_present, "system");
            read(s, "spacing_ratio", c.system.spacing_ratio, "system");
            if (s.contains("absorption_table"))
            {
                std::string path;
                read(s, "absorption_table", path, "system");
                std::filesystem::path pth(path);
                c.absorption_table = (pth.is_relative() && !base_dir.empty() ? base_dir / pth : pth).string();
            }
        }

        if (root.contains("placement"))
        {
            const auto &p = root.at("placement");
            detail::reject_unknown(p, "placement",
                                   {"rx_position_m", "ris_position_m", "tx_positions_m", "rx_array_normal_deg",
                                    "ris_array_normal_deg", "n_rx_antennas", "n_ris_elements", "front_hemisphere"});
            if (p.contains("rx_position_m"))
                c.placement.rx_position = detail::read_point(p.at("rx_position_m"), "rx_position_m");
            if (p.contains("ris_position_m"))
                c.placement.ris_position = detail::read_point(p.at("ris_position_m"), "ris_position_m");
            if (p.contains("tx_positions_m"))
            {
                const auto &list = p.at("tx_positions_m");
                if (!list.is_array() || list.empty())
                    throw ConfigError("tx_positions_m: expected a non-empty list of [x, y]");
                c.placement.tx_positions.clear();
                for (const auto &pt : list)
                    c.placement.tx_positions.push_back(detail::read_point(pt, "tx_positions_m"));
            }
            double deg = 0.0;
            if (p.contains("rx_array_normal_deg"))
            {
                read(p, "rx_array_normal_deg", deg, "placement");
                c.placement.rx_array_normal = deg_to_rad(deg);
            }
            if (p.contains("ris_array_normal_deg"))
            {
                read(p, "ris_array_normal_deg", deg, "placement");
                c.placement.ris_array_normal = deg_to_rad(deg);
            }
            read(p, "n_rx_antennas", c.placement.n_rx_antennas, "placement");
            read(p, "n_ris_elements", c.placement.n_ris_elements, "placement");
            if (p.contains("front_hemisphere"))
            {
                std::string h;
                read(p, "front_hemisphere", h, "placement");
                c.placement.hemisphere = detail::parse_hemisphere(h);
            }
        }

        // A single power, or defaults sized for another transmitter count, broadcast.
        const bool uniform_powers = std::adjacent_find(c.system.tx_powers.begin(), c.system.tx_powers.end(),
                                                       std::not_equal_to<>()) == c.system.tx_powers.end();
        const bool powers_given = root.contains("system") && root.at("system").contains("tx_power_w");
        if (!c.system.tx_powers.empty() && uniform_powers &&
            (c.system.tx_powers.size() == 1 || !powers_given))
            c.system.tx_powers.assign(c.placement.tx_positions.size(), c.system.tx_powers.front());
        if (c.system.tx_powers.size() != c.placement.tx_positions.size())
            throw ConfigError("tx_power_w must have one entry per transmitter (or be a single number)");

        if (root.contains("optimizer"))
        {
            const auto &o = root.at("optimizer");
            detail::reject_unknown(o, "optimizer",
                                   {"epsilon", "bisection_upper", "bisection_tol", "n_randomizations",
                                    "max_bcd_iterations", "min_bcd_iterations", "rng_seed", "solver_tolerance"});
            read(o, "epsilon", c.optimizer.epsilon, "optimizer");
            read(o, "bisection_upper", c.optimizer.bisection_upper, "optimizer");
            read(o, "bisection_tol", c.optimizer.bisection_tol, "optimizer");
            read(o, "n_randomizations", c.optimizer.n_randomizations, "optimizer");
            read(o, "max_bcd_iterations", c.optimizer.max_bcd_iterations, "optimizer");
            read(o, "min_bcd_iterations", c.optimizer.min_bcd_iterations, "optimizer");
            read(o, "rng_seed", c.optimizer.rng_seed, "optimizer");
            read(o, "solver_tolerance", c.optimizer.solver.tolerance, "optimizer");
        }

        if (root.contains("sweep"))
        {
            const auto &s = root.at("sweep");
            detail::reject_unknown(s, "sweep", {"variable", "values", "trials", "modes", "zeta_values", "direct_link"});
            if (!s.contains("variable"))
                throw ConfigError("[sweep]: 'variable' is required");
            std::string var;
            read(s, "variable", var, "sweep");
            SweepSpec spec = default_sweep(parse_sweep_variable(var));
            read(s, "values", spec.values, "sweep");
            read(s, "trials", spec.trials, "sweep");
            read(s, "zeta_values", spec.zeta_values, "sweep");
            if (s.contains("direct_link"))
            {
                std::vector<bool> dl;
                read(s, "direct_link", dl, "sweep");
                spec.direct_link = dl;
            }
            if (s.contains("modes"))
            {
                std::vector<std::string> modes;
                read(s, "modes", modes, "sweep");
                spec.modes.clear();
                for (const auto &m : modes)
                    spec.modes.push_back(parse_mode(m));
            }
            c.sweep = spec;
        }

        c.system.validate();
        c.optimizer.validate();
        if (c.sweep)
            c.sweep->validate();
        return c;
    }

    inline ScenarioConfig load_config(const std::string &path, ScenarioConfig defaults = default_scenario())
    {
        std::ifstream in(path);
        if (!in)
            throw ConfigError("cannot open config file '" + path + "'");
        nlohmann::json root;
        try
        {
            root = nlohmann::json::parse(in);
        }
        catch (const nlohmann::json::parse_error &e)
        {
            throw ConfigError(path + ": " + e.what());
        }
        return parse_config(root, std::move(defaults), std::filesystem::path(path).parent_path());
    }
}

#endif
