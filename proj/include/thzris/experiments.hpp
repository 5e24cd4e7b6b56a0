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


#ifndef thzris_experiments_H
#define thzris_experiments_H

#include "absorption.hpp"
#include "channel.hpp"
#include "core.hpp"
#include "optimizer.hpp"
#include "scenario.hpp"
#include "signal_model.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <functional>
#include <limits>
#include <mutex>
#include <optional>
#include <ostream>
#include <string>
#include <thread>
#include <vector>

namespace thzris
{
    enum class SweepVariable
    {
        RisElements,
        RxAntennas,
        RisPositionX,
        Frequency
    };

    enum class RisMode
    {
        Optimized,
        Random
    };

    inline std::string to_string(SweepVariable v)
    {
        switch (v)
        {
        case SweepVariable::RisElements:
            return "ris_elements";
        case SweepVariable::RxAntennas:
            return "rx_antennas";
        case SweepVariable::RisPositionX:
            return "ris_position_x";
        case SweepVariable::Frequency:
            return "frequency";
        }
        return "?";
    }

    inline std::string to_string(RisMode m) { return m == RisMode::Optimized ? "optimized" : "random"; }

    inline SweepVariable parse_sweep_variable(const std::string &s)
    {
        for (auto v : {SweepVariable::RisElements, SweepVariable::RxAntennas, SweepVariable::RisPositionX,
                       SweepVariable::Frequency})
            if (to_string(v) == s)
                return v;
        throw ConfigError("unknown sweep variable '" + s + "'");
    }

    inline RisMode parse_mode(const std::string &s)
    {
        if (s == "optimized")
            return RisMode::Optimized;
        if (s == "random")
            return RisMode::Random;
        throw ConfigError("unknown mode '" + s + "'");
    }

    struct SweepSpec
    {
        SweepVariable variable = SweepVariable::RisElements;
        std::vector<double> values;
        int trials = 50;
        std::vector<RisMode> modes = {RisMode::Optimized, RisMode::Random};
        std::vector<int> zeta_values = {0, 1};
        std::vector<bool> direct_link = {true, false};

        void validate() const
        {
            if (values.empty())
                throw ValidationError("sweep: values must not be empty");
            if (!std::is_sorted(values.begin(), values.end()))
                throw ValidationError("sweep: values must be sorted ascending");
            if (trials < 1)
                throw ValidationError("sweep: trials must be >= 1");
            if (modes.empty() || zeta_values.empty() || direct_link.empty())
                throw ValidationError("sweep: modes, zeta_values and direct_link must be non-empty");
            for (int z : zeta_values)
                if (z != 0 && z != 1)
                    throw ValidationError("sweep: zeta values must be 0 or 1");
            if (variable == SweepVariable::RisElements || variable == SweepVariable::RxAntennas)
                for (double v : values)
                    if (!(v >= 1.0) || v != std::floor(v))
                        throw ValidationError("sweep: element counts must be positive integers");
        }
    };

    struct ScenarioConfig
    {
        SystemParams system;
        Placement placement;
        OptimizerConfig optimizer;
        std::optional<SweepSpec> sweep;
        std::string absorption_table; // CSV path; empty = use the caller's model
    };

    // Indoor scenario: Rx at the origin with 100 antennas, a 250-element RIS
    // 1 m along +x, Tx0 1 m away at 60 deg, three interferers on a 6 m ring
    // at 5, 75 and 135 deg, all transmitting 2 W at 220 GHz over 10 GHz.
    inline ScenarioConfig default_scenario()
    {
        ScenarioConfig c;
        c.system.carrier_frequency = 220e9;
        c.system.bandwidth = 10e9;
        c.system.tx_powers = {2.0, 2.0, 2.0, 2.0};
        c.system.thermal_noise_density = dbm_to_watt(-174.0);
        c.system.zeta = 0;
        c.system.direct_link_present = true;
        c.system.temperature = 273.15 + 27.0;
        c.system.pressure = 1.0;
        c.system.relative_humidity = 0.5;

        auto polar = [](double r, double deg) {
            return Point2{r * std::cos(deg_to_rad(deg)), r * std::sin(deg_to_rad(deg))};
        };
        c.placement.rx_position = {0.0, 0.0};
        c.placement.ris_position = {1.0, 0.0};
        c.placement.tx_positions = {polar(1.0, 60.0), polar(6.0, 5.0), polar(6.0, 75.0), polar(6.0, 135.0)};
        c.placement.rx_array_normal = 0.0;
        c.placement.ris_array_normal = pi;
        c.placement.n_rx_antennas = 100;
        c.placement.n_ris_elements = 250;
        // Two interferers lie behind the RIS and one behind the Rx for these normals.
        c.placement.hemisphere = HemispherePolicy::Fold;
        return c;
    }

    // Default axis values per sweep.
    inline SweepSpec default_sweep(SweepVariable v)
    {
        SweepSpec s;
        s.variable = v;
        switch (v)
        {
        case SweepVariable::RisElements:
            s.values = {50, 100, 150, 200, 250};
            break;
        case SweepVariable::RxAntennas:
            s.values = {20, 40, 60, 80, 100};
            break;
        case SweepVariable::RisPositionX:
            s.values = {0.25, 0.5, 0.75, 1.0, 1.25, 1.5, 1.75};
            break;
        case SweepVariable::Frequency:
            for (int g = 100; g <= 450; g += 10)
                s.values.push_back(g * 1e9);
            break;
        }
        return s;
    }

    // Placement adjustments of the position and frequency sweeps: 50 RIS
    // elements; for the position sweep Tx0 at (2, 0) and the RIS facing +y so
    // the collinear Tx0-RIS-Rx links sit at endfire.
    inline ScenarioConfig sweep_scenario(SweepVariable v, ScenarioConfig base = default_scenario())
    {
        if (v == SweepVariable::RisPositionX || v == SweepVariable::Frequency)
            base.placement.n_ris_elements = 50;
        if (v == SweepVariable::RisPositionX)
        {
            base.placement.tx_positions.at(0) = {2.0, 0.0};
            base.placement.ris_array_normal = pi / 2.0;
        }
        return base;
    }

    inline ScenarioConfig apply_sweep_value(ScenarioConfig c, SweepVariable v, double value)
    {
        switch (v)
        {
        case SweepVariable::RisElements:
            c.placement.n_ris_elements = static_cast<int>(value);
            break;
        case SweepVariable::RxAntennas:
            c.placement.n_rx_antennas = static_cast<int>(value);
            break;
        case SweepVariable::RisPositionX:
            c.placement.ris_position.x = value;
            break;
        case SweepVariable::Frequency:
            c.system.carrier_frequency = value;
            break;
        }
        return c;
    }

    struct ResultRow
    {
        std::string sweep_var;
        double value = 0.0;
        int zeta = 0;
        bool direct = false;
        RisMode mode = RisMode::Optimized;
        double mean_throughput = 0.0; // bit/s
        double stderr_throughput = 0.0;
        double mean_iterations = 0.0;
        int failures = 0;
        int trials_ok = 0;
        double wall_s = 0.0;
        std::vector<double> samples; // per-trial throughput, NaN for failed trials
    };

    struct TrialContext
    {
        double value;
        std::size_t value_index;
        int trial;
        int zeta;
        bool direct;
    };

    struct RunOptions
    {
        unsigned threads = 0; // 0 = hardware concurrency
        // Called once per optimized trial with its BCD trace; invocations are serialized.
        std::function<void(const TrialContext &, const BcdTrace &)> on_trace;
    };

    namespace detail
    {
        struct TrialOutcome
        {
            double throughput = 0.0;
            double iterations = 0.0;
            double wall = 0.0;
            bool failed = false;
        };

        template <class Fn>
        void parallel_for(std::size_t n, unsigned threads, Fn &&fn)
        {
            if (threads == 0)
                threads = std::max(1u, std::thread::hardware_concurrency());
            threads = static_cast<unsigned>(std::min<std::size_t>(threads, n));
            if (threads <= 1)
            {
                for (std::size_t i = 0; i < n; ++i)
                    fn(i);
                return;
            }
            std::atomic<std::size_t> next{0};
            std::vector<std::jthread> pool;
            for (unsigned t = 0; t < threads; ++t)
                pool.emplace_back([&] {
                    for (std::size_t i = next++; i < n; i = next++)
                        fn(i);
                });
        }
    }

    // Monte-Carlo sweep. Trial streams derive from (seed, value index, trial)
    // only, so zeta, direct-link and mode cells of one sweep point see the same
    // channel draw (paired comparisons). The optimized mode starts BCD from the
    // better of all-ones and the trial's random configuration.
    inline std::vector<ResultRow> run_sweep(const SweepSpec &spec, const ScenarioConfig &base,
                                            const AbsorptionModel &model, std::uint64_t seed,
                                            const RunOptions &opts = {})
    {
        spec.validate();
        base.optimizer.validate();

        const std::size_t nv = spec.values.size();
        const std::size_t nz = spec.zeta_values.size();
        const std::size_t nd = spec.direct_link.size();
        const std::size_t nm = spec.modes.size();
        const std::size_t ntr = static_cast<std::size_t>(spec.trials);
        auto cell = [&](std::size_t v, std::size_t z, std::size_t d, std::size_t m) {
            return ((v * nz + z) * nd + d) * nm + m;
        };
        std::vector<detail::TrialOutcome> outcomes(nv * nz * nd * nm * ntr);

        const RandomStream root(seed);
        std::mutex trace_mutex;

        detail::parallel_for(nv * ntr, opts.threads, [&](std::size_t job) {
            const std::size_t v = job / ntr;
            const std::size_t trial = job % ntr;
            const ScenarioConfig cfg = apply_sweep_value(base, spec.variable, spec.values[v]);
            const RandomStream stream = root.split(v).split(trial);

            for (std::size_t z = 0; z < nz; ++z)
                for (std::size_t d = 0; d < nd; ++d)
                {
                    SystemParams params = cfg.system;
                    params.zeta = spec.zeta_values[z];
                    params.direct_link_present = spec.direct_link[d];
                    const TrialContext ctx{spec.values[v], v, static_cast<int>(trial), params.zeta,
                                           params.direct_link_present};

                    auto t0 = std::chrono::steady_clock::now();
                    std::optional<ChannelSet> ch;
                    NoiseModel noise;
                    RisConfig random_cfg;
                    try
                    {
                        const Geometry geo = resolve_geometry(cfg.placement);
                        RandomStream ch_rng = stream.split(0);
                        ch = build_channel_set(geo, params, model, ch_rng);
                        noise = molecular_noise(geo, params, model);
                        RandomStream rand_rng = stream.split(1);
                        random_cfg = RisConfig::random_phases(ch->n_ris(), rand_rng);
                    }
                    catch (const std::exception &)
                    {
                        ch.reset();
                    }
                    const double setup = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

                    for (std::size_t m = 0; m < nm; ++m)
                    {
                        auto &out = outcomes[cell(v, z, d, m) * ntr + trial];
                        t0 = std::chrono::steady_clock::now();
                        if (!ch)
                        {
                            out.failed = true;
                            continue;
                        }
                        try
                        {
                            double gamma = 0.0;
                            if (spec.modes[m] == RisMode::Random)
                            {
                                const Beamformer u = optimal_beamformer(random_cfg, *ch, noise, params);
                                gamma = sinr(u, random_cfg, *ch, noise, params);
                            }
                            else
                            {
                                RandomStream opt_rng = stream.split(2);
                                const BcdResult r =
                                    bcd_optimize(*ch, noise, params, cfg.optimizer, opt_rng, {random_cfg});
                                gamma = r.gamma;
                                out.iterations = static_cast<double>(r.trace.iterations.size());
                                if (opts.on_trace)
                                {
                                    std::lock_guard lock(trace_mutex);
                                    opts.on_trace(ctx, r.trace);
                                }
                            }
                            out.throughput = throughput(gamma, params.bandwidth);
                        }
                        catch (const std::exception &)
                        {
                            out.failed = true;
                        }
                        out.wall = setup + std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
                    }
                }
        });

        std::vector<ResultRow> rows;
        for (std::size_t v = 0; v < nv; ++v)
            for (std::size_t z = 0; z < nz; ++z)
                for (std::size_t d = 0; d < nd; ++d)
                    for (std::size_t m = 0; m < nm; ++m)
                    {
                        ResultRow row;
                        row.sweep_var = to_string(spec.variable);
                        row.value = spec.values[v];
                        row.zeta = spec.zeta_values[z];
                        row.direct = spec.direct_link[d];
                        row.mode = spec.modes[m];
                        double sum = 0.0, iters = 0.0;
                        for (std::size_t t = 0; t < ntr; ++t)
                        {
                            const auto &o = outcomes[cell(v, z, d, m) * ntr + t];
                            row.wall_s += o.wall;
                            if (o.failed)
                            {
                                ++row.failures;
                                row.samples.push_back(std::numeric_limits<double>::quiet_NaN());
                                continue;
                            }
                            ++row.trials_ok;
                            sum += o.throughput;
                            iters += o.iterations;
                            row.samples.push_back(o.throughput);
                        }
                        if (row.trials_ok > 0)
                        {
                            const double k = row.trials_ok;
                            row.mean_throughput = sum / k;
                            row.mean_iterations = iters / k;
                            if (row.trials_ok > 1)
                            {
                                double ss = 0.0;
                                for (double x : row.samples)
                                    if (!std::isnan(x))
                                        ss += (x - row.mean_throughput) * (x - row.mean_throughput);
                                row.stderr_throughput = std::sqrt(ss / (k - 1.0) / k);
                            }
                        }
                        rows.push_back(std::move(row));
                    }
        return rows;
    }

    inline constexpr const char *result_csv_header =
        "sweep_var,value,zeta,direct,mode,mean_throughput_bps,stderr_bps,mean_iters,failures,wall_s";

    inline void write_results_csv(std::ostream &out, const std::vector<ResultRow> &rows)
    {
        out << result_csv_header << '\n';
        const auto old_prec = out.precision(12);
        for (const auto &r : rows)
            out << r.sweep_var << ',' << r.value << ',' << r.zeta << ',' << (r.direct ? "true" : "false") << ','
                << to_string(r.mode) << ',' << r.mean_throughput << ',' << r.stderr_throughput << ','
                << r.mean_iterations << ',' << r.failures << ',' << r.wall_s << '\n';
        out.precision(old_prec);
    }
}

#endif
