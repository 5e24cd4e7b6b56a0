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


#ifndef thzris_thzris_H
#define thzris_thzris_H

#include "absorption.hpp"
#include "channel.hpp"
#include "config.hpp"
#include "core.hpp"
#include "experiments.hpp"
#include "optimizer.hpp"
#include "scenario.hpp"
#include "sdp.hpp"
#include "signal_model.hpp"

#endif
