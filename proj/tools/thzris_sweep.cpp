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


// Batch driver: Monte-Carlo throughput sweeps over RIS size, Rx antennas,
// RIS position or carrier frequency, written as CSV.

#include <thzris/thzris.hpp>

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <memory>
#include <optional>

namespace
{
    int fail(const std::string &kind, const std::string &message)
    {
        std::cerr << nlohmann::json{{"error", kind}, {"message", message}}.dump() << std::endl;
        return 2;
    }

    std::vector<int> zeta_choice(const std::string &s)
    {
        if (s == "0")
            return {0};
        if (s == "1")
            return {1};
        return {0, 1};
    }

    std::vector<bool> direct_choice(const std::string &s)
    {
        if (s == "on")
            return {true};
        if (s == "off")
            return {false};
        return {true, false};
    }

    std::vector<thzris::RisMode> mode_choice(const std::string &s)
    {
        if (s == "optimized")
            return {thzris::RisMode::Optimized};
        if (s == "random")
            return {thzris::RisMode::Random};
        return {thzris::RisMode::Optimized, thzris::RisMode::Random};
    }
}

int main(int argc, char **argv)
{
    CLI::App app{"Joint RIS / receive-beamformer optimization sweeps for THz links"};

    std::string config_path, sweep_name, zeta = "both", direct = "both", mode = "both";
    std::string output_path, table_path;
    std::optional<int> trials;
    std::uint64_t seed = 1;
    unsigned threads = 0;
    bool trace = false;

    app.add_option("--config", config_path, "Scenario config file (JSON)")->check(CLI::ExistingFile);
    app.add_option("--sweep", sweep_name, "Sweep variable")
        ->check(CLI::IsMember({"ris_elements", "rx_antennas", "ris_position_x", "frequency"}));
    app.add_option("--trials", trials, "Monte-Carlo trials per sweep point")->check(CLI::PositiveNumber);
    app.add_option("--seed", seed, "Root random seed");
    app.add_option("--zeta", zeta, "Re-radiation model: 0 (scattering), 1 (noise) or both")
        ->check(CLI::IsMember({"0", "1", "both"}));
    app.add_option("--direct-link", direct, "Direct Tx0-Rx link")->check(CLI::IsMember({"on", "off", "both"}));
    app.add_option("--mode", mode, "RIS configuration")->check(CLI::IsMember({"optimized", "random", "both"}));
    app.add_option("--output", output_path, "Output CSV (default: stdout)");
    app.add_option("--absorption-table", table_path, "Absorption table CSV (frequency_hz,k_per_m)");
    app.add_option("--threads", threads, "Worker threads (0 = all cores)");
    app.add_flag("--trace", trace, "Write per-iteration BCD rows (to <output>.trace.csv, or stderr)");

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::CallForHelp &e)
    {
        return app.exit(e);
    }
    catch (const CLI::CallForAllHelp &e)
    {
        return app.exit(e);
    }
    catch (const CLI::ParseError &e)
    {
        return fail("usage", e.what());
    }

    try
    {
        thzris::ScenarioConfig cfg = config_path.empty() ? thzris::default_scenario() : thzris::load_config(config_path);

        if (sweep_name.empty() && !cfg.sweep)
            return fail("usage", "no sweep given: pass --sweep or add a [sweep] section to the config");
        const thzris::SweepVariable var =
            sweep_name.empty() ? cfg.sweep->variable : thzris::parse_sweep_variable(sweep_name);

        thzris::SweepSpec spec = (cfg.sweep && cfg.sweep->variable == var) ? *cfg.sweep : thzris::default_sweep(var);
        if (config_path.empty())
            cfg = thzris::sweep_scenario(var, cfg);
        if (trials)
            spec.trials = *trials;
        if (zeta != "both" || !cfg.sweep)
            spec.zeta_values = zeta_choice(zeta);
        if (direct != "both" || !cfg.sweep)
            spec.direct_link = direct_choice(direct);
        if (mode != "both" || !cfg.sweep)
            spec.modes = mode_choice(mode);

        if (!table_path.empty())
            cfg.absorption_table = table_path;
        if (cfg.absorption_table.empty())
            cfg.absorption_table = THZRIS_SAMPLE_TABLE;
        const auto model = thzris::AbsorptionModel::from_csv_file(cfg.absorption_table);

        std::ofstream trace_file;
        std::ostream *trace_out = nullptr;
        if (trace)
        {
            if (output_path.empty())
                trace_out = &std::cerr;
            else
            {
                trace_file.open(output_path + ".trace.csv");
                if (!trace_file)
                    return fail("io", "cannot open trace file '" + output_path + ".trace.csv'");
                trace_out = &trace_file;
            }
            *trace_out << "value,zeta,direct,trial,iteration,gamma,t_star,delta\n";
        }

        thzris::RunOptions opts;
        opts.threads = threads;
        if (trace_out != nullptr)
            opts.on_trace = [&](const thzris::TrialContext &ctx, const thzris::BcdTrace &tr) {
                for (const auto &it : tr.iterations)
                    *trace_out << ctx.value << ',' << ctx.zeta << ',' << (ctx.direct ? "true" : "false") << ','
                               << ctx.trial << ',' << it.iteration << ',' << it.gamma << ',' << it.t_star << ','
                               << it.delta << '\n';
            };

        const auto rows = thzris::run_sweep(spec, cfg, model, seed, opts);

        if (output_path.empty())
            thzris::write_results_csv(std::cout, rows);
        else
        {
            std::ofstream out(output_path);
            if (!out)
                return fail("io", "cannot open output file '" + output_path + "'");
            thzris::write_results_csv(out, rows);
            if (!out)
                return fail("io", "failed writing '" + output_path + "'");
        }
    }
    catch (const thzris::Error &e)
    {
        return fail(e.kind(), e.what());
    }
    catch (const std::exception &e)
    {
        return fail("internal", e.what());
    }
    return 0;
}
