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


// Small scenario instances shared by the optimizer, experiment and acceptance tests.

#ifndef thzris_test_fixtures_H
#define thzris_test_fixtures_H

#include <thzris/thzris.hpp>

namespace fixture
{
    using namespace thzris;

    struct Instance
    {
        SystemParams params;
        Geometry geo;
        ChannelSet ch;
        NoiseModel noise;
    };

    // Default layout scaled down to n_rx antennas and n RIS elements with the
    // first n_interferers of the three ring interferers.
    inline ScenarioConfig small_scenario(int n_rx, int n, int n_interferers, int zeta, bool direct)
    {
        ScenarioConfig c = default_scenario();
        c.placement.n_rx_antennas = n_rx;
        c.placement.n_ris_elements = n;
        c.placement.tx_positions.resize(1 + n_interferers);
        c.system.tx_powers.assign(1 + n_interferers, 2.0);
        c.system.zeta = zeta;
        c.system.direct_link_present = direct;
        return c;
    }

    inline Instance make_instance(const ScenarioConfig &c, const AbsorptionModel &model, RandomStream rng)
    {
        Instance inst;
        inst.params = c.system;
        inst.geo = resolve_geometry(c.placement);
        inst.ch = build_channel_set(inst.geo, inst.params, model, rng);
        inst.noise = molecular_noise(inst.geo, inst.params, model);
        return inst;
    }

    inline const AbsorptionModel &sample_table()
    {
        static const AbsorptionModel m = AbsorptionModel::from_csv_file(THZRIS_SAMPLE_TABLE);
        return m;
    }

    // Mean SINR of random unit-modulus configurations, each with its optimal beamformer.
    inline double random_baseline(const Instance &inst, int draws, RandomStream &rng)
    {
        double sum = 0.0;
        for (int d = 0; d < draws; ++d)
        {
            const RisConfig th = RisConfig::random_phases(inst.ch.n_ris(), rng);
            sum += sinr(optimal_beamformer(th, inst.ch, inst.noise, inst.params), th, inst.ch, inst.noise, inst.params);
        }
        return sum / draws;
    }
}

#endif
