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


#ifndef thzris_absorption_H
#define thzris_absorption_H

#include "core.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

namespace thzris
{
    // Molecular absorption coefficient k(f), tabulated and interpolated
    // piecewise-linearly in frequency. No extrapolation.
    class AbsorptionModel
    {
    public:
        struct Sample
        {
            double frequency; // Hz
            double k;         // 1/m
        };

        AbsorptionModel() = default;

        explicit AbsorptionModel(std::vector<Sample> table) : table_(std::move(table))
        {
            if (table_.empty())
                throw ValidationError("absorption table is empty");
            for (std::size_t i = 0; i < table_.size(); ++i)
            {
                if (!std::isfinite(table_[i].frequency) || !std::isfinite(table_[i].k))
                    throw ValidationError("absorption table contains non-finite values");
                if (table_[i].k < 0.0)
                    throw ValidationError("absorption coefficient must be >= 0");
                if (i > 0 && !(table_[i].frequency > table_[i - 1].frequency))
                    throw ValidationError("absorption table frequencies must be strictly increasing");
            }
        }

        // Frequency-flat model over [f_min, f_max].
        static AbsorptionModel constant(double k, double f_min = 1e9, double f_max = 10e12)
        {
            return AbsorptionModel({{f_min, k}, {f_max, k}});
        }

        // CSV with header `frequency_hz,k_per_m`, rows sorted ascending.
        static AbsorptionModel from_csv(std::istream &in, const std::string &source = "<stream>")
        {
            std::string line;
            if (!std::getline(in, line))
                throw ValidationError(source + ": empty absorption table");
            if (trim(line) != "frequency_hz,k_per_m")
                throw ValidationError(source + ": expected header 'frequency_hz,k_per_m', got '" + trim(line) + "'");

            std::vector<Sample> rows;
            std::size_t line_no = 1;
            while (std::getline(in, line))
            {
                ++line_no;
                const std::string t = trim(line);
                if (t.empty())
                    continue;
                const auto comma = t.find(',');
                if (comma == std::string::npos)
                    throw ValidationError(source + ":" + std::to_string(line_no) + ": expected two columns");
                try
                {
                    std::size_t used = 0;
                    const std::string fs = trim(t.substr(0, comma));
                    const std::string ks = trim(t.substr(comma + 1));
                    const double f = std::stod(fs, &used);
                    if (used != fs.size())
                        throw std::invalid_argument(fs);
                    const double k = std::stod(ks, &used);
                    if (used != ks.size())
                        throw std::invalid_argument(ks);
                    rows.push_back({f, k});
                }
                catch (const std::logic_error &)
                {
                    throw ValidationError(source + ":" + std::to_string(line_no) + ": malformed number");
                }
            }
            return AbsorptionModel(std::move(rows));
        }

        static AbsorptionModel from_csv_file(const std::string &path)
        {
            std::ifstream in(path);
            if (!in)
                throw ValidationError("cannot open absorption table '" + path + "'");
            return from_csv(in, path);
        }

        double min_frequency() const { return table_.front().frequency; }
        double max_frequency() const { return table_.back().frequency; }
        const std::vector<Sample> &table() const { return table_; }

        // k(f) in 1/m
        double coefficient(double f) const
        {
            if (table_.empty())
                throw ValidationError("absorption model has no table");
            if (!(f >= min_frequency() && f <= max_frequency()))
                throw OutOfRangeError("frequency " + std::to_string(f) + " Hz outside absorption table range [" +
                                      std::to_string(min_frequency()) + ", " + std::to_string(max_frequency()) + "]");
            if (table_.size() == 1)
                return table_.front().k;
            auto hi = std::lower_bound(table_.begin(), table_.end(), f,
                                       [](const Sample &s, double v) { return s.frequency < v; });
            if (hi == table_.begin())
                return hi->k;
            auto lo = hi - 1;
            const double w = (f - lo->frequency) / (hi->frequency - lo->frequency);
            return lo->k + w * (hi->k - lo->k);
        }

    private:
        static std::string trim(const std::string &s)
        {
            const auto b = s.find_first_not_of(" \t\r\n");
            if (b == std::string::npos)
                return {};
            const auto e = s.find_last_not_of(" \t\r\n");
            return s.substr(b, e - b + 1);
        }

        std::vector<Sample> table_;
    };

    // tau(f, d) = exp(-k(f) d)
    inline double transmittance(const AbsorptionModel &model, double f, double d)
    {
        if (!(d >= 0.0))
            throw ValidationError("distance must be >= 0");
        return std::exp(-model.coefficient(f) * d);
    }

    // 1 - tau(f, d), accurate for small k d.
    inline double absorbed_fraction(const AbsorptionModel &model, double f, double d)
    {
        if (!(d >= 0.0))
            throw ValidationError("distance must be >= 0");
        return -std::expm1(-model.coefficient(f) * d);
    }

    // K_d = tau / (1 - tau); +inf for tau == 1. Channel code must use the
    // coefficient forms tau and (1 - tau) instead of this ratio.
    inline double rician_factor(const AbsorptionModel &model, double f, double d)
    {
        const double absorbed = absorbed_fraction(model, f, d);
        if (absorbed <= 0.0)
            return std::numeric_limits<double>::infinity();
        return transmittance(model, f, d) / absorbed;
    }
}

#endif
