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
#include "cfmimo/energy.hpp"

#include <catch_amalgamated.hpp>

using namespace cfmimo;

namespace {

FrameConfig frame200() { return FrameConfig{200, 10, 1e-5}; }

}  // namespace

TEST_CASE("circuit power at the reference sizes", "[energy]") {
  const PowerModelParams pm;
  // K = 20 UEs, L = 100 APs with N = 2 antennas, no traffic.
  CHECK(circuit_power(pm, 20, 100, 2, 0.0) == Catch::Approx(2.0 + 40.0 + 82.5).epsilon(1e-14));
  CHECK(circuit_power(pm, 20, 100, 2, 0.0) == Catch::Approx(124.5).epsilon(1e-14));
  // Traffic term: L B SE_sum P_bt = 100 * 20e6 * 50 * 0.25e-9 = 25 W.
  CHECK(circuit_power(pm, 20, 100, 2, 50.0) - circuit_power(pm, 20, 100, 2, 0.0) ==
        Catch::Approx(25.0).epsilon(1e-12));
}

TEST_CASE("sum SE averages the two directions", "[energy]") {
  CHECK(sum_se({1.0, 2.0}, {3.0, 0.0}) == Catch::Approx(3.0));
  CHECK(sum_se({}, {}) == 0.0);
  CHECK_THROWS(sum_se({1.0}, {1.0, 2.0}));
}

TEST_CASE("total power", "[energy]") {
  const PowerModelParams pm;
  const FrameConfig f = frame200();
  const RMatrix trQ = RMatrix::Constant(2, 3, 2.0);
  const RMatrix mu = RMatrix::Constant(2, 3, 0.25);  // sum_k mu tr Q = 1 per AP
  const std::vector<double> eta{1.0, 0.5};
  const double s2 = 1e-13;
  const auto b = total_power(pm, f, eta, 0.1, mu, trQ, 0.2, s2, 2, 4.0);
  CHECK(b.tx_ul == Catch::Approx(0.1 * s2 * 1.5 / 0.4).epsilon(1e-14));
  CHECK(b.tx_dl == Catch::Approx(0.2 * s2 * 3.0 / 0.4).epsilon(1e-14));
  CHECK(b.circuit == Catch::Approx(circuit_power(pm, 2, 3, 2, 4.0)).epsilon(1e-14));
  CHECK(b.fronthaul_traffic == Catch::Approx(3 * 20e6 * 4.0 * 0.25e-9).epsilon(1e-14));
  CHECK(b.total == Catch::Approx(210.0 / 400.0 * b.tx_ul + 190.0 / 400.0 * b.tx_dl + b.circuit)
                       .epsilon(1e-14));

  PowerModelParams radiated = pm;
  radiated.normalized_snr = true;
  const auto r = total_power(radiated, f, eta, 0.1, mu, trQ, 0.2, s2, 2, 4.0);
  CHECK(r.tx_ul == Catch::Approx(0.1 * 1.5 / 0.4).epsilon(1e-14));
  CHECK(r.tx_dl == Catch::Approx(0.2 * 3.0 / 0.4).epsilon(1e-14));

  const auto silent = total_power(pm, f, eta, 0.0, mu, trQ, 0.0, s2, 2, 4.0);
  CHECK(silent.total == Catch::Approx(silent.circuit).epsilon(1e-15));
}

TEST_CASE("energy efficiency", "[energy]") {
  const PowerModelParams pm;
  const double se = 37.5;
  const double p = circuit_power(pm, 20, 100, 2, se);
  const double ee = energy_efficiency(pm, se, p);
  CHECK(ee * p == Catch::Approx(pm.bandwidth * se).epsilon(1e-14));
  // With the transmit terms held fixed, P_total grows in SE_sum with slope
  // L B P_bt.
  const double slope = (circuit_power(pm, 20, 100, 2, se + 1.0) - p);
  CHECK(slope == Catch::Approx(100 * pm.bandwidth * pm.P_bt).epsilon(1e-10));
  CHECK_THROWS(energy_efficiency(pm, se, 0.0));
}

TEST_CASE("power model validation", "[energy]") {
  PowerModelParams pm;
  const RMatrix one = RMatrix::Ones(1, 1);
  CHECK_THROWS(total_power(pm, FrameConfig{10, 10, 1e-5}, {1.0}, 0.1, one, one, 0.1, 1e-13, 1, 1.0));
  pm.pa_efficiency_ap = 0.0;
  CHECK_THROWS(pm.validate());
  pm = PowerModelParams{};
  pm.P_0 = -1.0;
  CHECK_THROWS(pm.validate());
  pm = PowerModelParams{};
  pm.bandwidth = 0.0;
  CHECK_THROWS(circuit_power(pm, 1, 1, 1, 0.0));
}
