// SPDX-License-Identifier: Apache-2.0
//
// cfmimo: closed-form and Monte Carlo analysis of cell-free massive MIMO
// under channel aging.
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
#pragma once

#include "cfmimo/aging.hpp"
#include "cfmimo/config.hpp"
#include "cfmimo/downlink.hpp"
#include "cfmimo/energy.hpp"
#include "cfmimo/estimation.hpp"
#include "cfmimo/experiment.hpp"
#include "cfmimo/linalg.hpp"
#include "cfmimo/montecarlo.hpp"
#include "cfmimo/parallel.hpp"
#include "cfmimo/random.hpp"
#include "cfmimo/scenario.hpp"
#include "cfmimo/smallcell.hpp"
#include "cfmimo/special_functions.hpp"
#include "cfmimo/stats.hpp"
#include "cfmimo/uplink.hpp"
