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
#include "cfmimo/special_functions.hpp"
#include "oracles/quadrature.hpp"

#include <catch_amalgamated.hpp>

#include <cmath>
#include <vector>

using namespace cfmimo;

TEST_CASE("J0 agrees with the integral representation", "[kernels]") {
  // Arguments reached by rho for the Doppler and block lengths in use, plus
  // the asymptotic branch.
  std::vector<double> xs{0.0, 1e-6, 0.01, 0.3, 1.0, 2.0, 3.3, 4.9, 7.1, 9.6, 11.9,
                         12.4, 14.2, 16.9, 17.1, 19.7, 23.4, 28.6, 33.2, 41.9, 49.0};
  for (double x : xs) {
    const double ref = oracle::j0(x);
    INFO("x = " << x);
    CHECK(std::fabs(bessel_j0(x) - ref) <= 1e-10 * std::fabs(ref));
  }
}

TEST_CASE("J0 is even", "[kernels]") {
  for (double x : {0.5, 3.0, 25.0}) CHECK(bessel_j0(-x) == bessel_j0(x));
}

TEST_CASE("first zero of J0 matches bisection on the quadrature", "[kernels]") {
  const double ref = oracle::j0_first_zero();
  CHECK(std::fabs(bessel_j0_first_zero() - ref) <= 1e-12 * ref);
  CHECK(std::fabs(bessel_j0_first_zero() - 2.404825557695773) < 1e-13);
}

TEST_CASE("scaled E1 agrees with quadrature", "[kernels]") {
  for (double e = -6.0; e <= 6.0; e += 0.5) {
    const double x = std::pow(10.0, e);
    const double ref = oracle::scaled_e1(x);
    INFO("x = " << x);
    CHECK(std::fabs(scaled_expint_e1(x) - ref) <= 1e-10 * ref);
  }
}

TEST_CASE("E1 reference values", "[kernels]") {
  CHECK(std::fabs(expint_e1(1.0) - 0.219383934395520) < 1e-12);
  CHECK(std::fabs(expint_e1(1.0) - std::exp(-1.0) * oracle::scaled_e1(1.0)) < 1e-13);
  CHECK(expint_e1(800.0) == 0.0);
  CHECK(scaled_expint_e1(800.0) > 0.0);
  CHECK(scaled_expint_e1(std::numeric_limits<double>::infinity()) == 0.0);
}

TEST_CASE("E1 rejects non-positive arguments", "[kernels]") {
  CHECK_THROWS_AS(expint_e1(0.0), std::domain_error);
  CHECK_THROWS_AS(scaled_expint_e1(-1.0), std::domain_error);
  CHECK_THROWS_AS(scaled_expint_e1(std::nan("")), std::domain_error);
}
