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
#include "cfmimo/scenario.hpp"

#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

using namespace cfmimo;

TEST_CASE("three-slope pathloss", "[scenario]") {
  CHECK(pathloss_db(5.0) == -81.2);
  CHECK(pathloss_db(9.99) == -81.2);
  CHECK(pathloss_db(10.0) == Catch::Approx(-81.2).epsilon(1e-12));
  CHECK(pathloss_db(20.0) == Catch::Approx(-87.2206).margin(1e-4));
  CHECK(pathloss_db(49.99) == Catch::Approx(-61.2 - 20.0 * std::log10(49.99)).epsilon(1e-14));
  CHECK(pathloss_db(50.0) == Catch::Approx(-35.7 - 35.0 * std::log10(50.0)).epsilon(1e-14));
  // The middle and far slopes meet within a few tenths of a dB at 50 m.
  CHECK(std::fabs(pathloss_db(49.999) - pathloss_db(50.0)) < 0.05);
}

TEST_CASE("shadowing covariance entries", "[scenario]") {
  CHECK(shadowing_covariance_entry(0.0, 0.0) == 64.0);
  CHECK(shadowing_covariance_entry(0.0, 1e9) == Catch::Approx(32.0));
  CHECK(shadowing_covariance_entry(1e9, 1e9) < 1e-12);
  CHECK(shadowing_covariance_entry(100.0, 100.0) == Catch::Approx(32.0));
}

namespace {

ScenarioGeometry fixed_geometry() {
  std::vector<Point> aps{{0, 0}, {120, 40}, {300, 300}, {460, 90}};
  std::vector<Point> ues{{200, 210}, {5, 5}, {480, 480}};
  return make_geometry(aps, ues, 500.0);
}

}  // namespace

TEST_CASE("joint shadowing covariance is PSD with unit-pair variance 64", "[scenario]") {
  const ScenarioGeometry g = fixed_geometry();
  const ShadowingCovariance sc = shadowing_covariance(g);
  // UE 1 sits 7 m from AP 0, so that pair carries no shadowing.
  CHECK(sc.pairs.size() == 11);
  for (Eigen::Index a = 0; a < sc.cov.rows(); ++a) CHECK(sc.cov(a, a) == 64.0);
  Eigen::SelfAdjointEigenSolver<RMatrix> es(sc.cov);
  CHECK(es.eigenvalues().minCoeff() > -1e-9);
  CHECK_NOTHROW(shadowing_covariance_sqrt(sc));
}

TEST_CASE("sampled shadowing has the target covariance", "[scenario]") {
  const ScenarioGeometry g = fixed_geometry();
  const ShadowingCovariance sc = shadowing_covariance(g);
  const auto n = sc.cov.rows();
  const int draws = 100000;
  RMatrix sum = RMatrix::Zero(n, n);
  RMatrix sum2 = RMatrix::Zero(n, n);
  Rng rng(17);
  for (int t = 0; t < draws; ++t) {
    const RMatrix F = sample_shadowing(g, rng);
    CHECK(F(1, 0) == 0.0);
    RVector v(n);
    for (Eigen::Index a = 0; a < n; ++a) v(a) = F(sc.pairs[a].first, sc.pairs[a].second);
    const RMatrix o = v * v.transpose();
    sum += o;
    sum2 += o.cwiseAbs2();
  }
  int misses = 0;
  for (Eigen::Index a = 0; a < n; ++a) {
    for (Eigen::Index b = 0; b < n; ++b) {
      const double m = sum(a, b) / draws;
      const double se = std::sqrt((sum2(a, b) / draws - m * m) / draws);
      if (std::fabs(m - sc.cov(a, b)) > 3.0 * se) ++misses;
    }
  }
  // 121 entries at 3 SE: a handful of misses is expected.
  CHECK(misses <= 3);
}

TEST_CASE("drops are deterministic in the seed", "[scenario]") {
  const SystemDims dims{12, 5, 2};
  const Drop a = generate_drop(dims, 500.0, 99, true);
  const Drop b = generate_drop(dims, 500.0, 99, true);
  const Drop c = generate_drop(dims, 500.0, 100, true);
  CHECK(a.fading.beta == b.fading.beta);
  CHECK(a.fading.beta != c.fading.beta);
  for (const auto& p : a.geometry.ap_positions) {
    CHECK(p.x >= 0.0);
    CHECK(p.x <= 500.0);
  }
  const Drop flat = generate_drop(dims, 500.0, 99, false);
  CHECK(flat.fading.shadowing_db.isZero());
  CHECK(flat.geometry.d == a.geometry.d);
}

TEST_CASE("drop argument errors", "[scenario]") {
  CHECK_THROWS(generate_drop(SystemDims{0, 3, 1}, 500.0, 1, true));
  CHECK_THROWS(generate_drop(SystemDims{3, 3, 0}, 500.0, 1, true));
  CHECK_THROWS(generate_drop(SystemDims{3, 3, 1}, 0.0, 1, true));
  CHECK_THROWS(generate_drop(SystemDims{3, 3, 1}, std::nan(""), 1, true));
}

namespace {

double eig_spread(const CMatrix& R) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(R);
  return es.eigenvalues().maxCoeff() / std::max(es.eigenvalues().minCoeff(), 1e-300);
}

}  // namespace

TEST_CASE("spatial correlation matrices", "[scenario]") {
  const SystemDims dims{6, 4, 4};
  const Drop d = generate_drop(dims, 500.0, 5, true);
  const auto narrow = build_correlation(dims, d.geometry, d.fading, AngularSpread::degrees(10.0));
  const auto wide = build_correlation(dims, d.geometry, d.fading, AngularSpread::degrees(50.0));
  const auto flat = build_correlation(dims, d.geometry, d.fading, AngularSpread::uncorrelated_fading());
  for (std::size_t k = 0; k < dims.K; ++k) {
    for (std::size_t l = 0; l < dims.L; ++l) {
      const double beta = d.fading.beta(k, l);
      const CMatrix& R = narrow.R(k, l);
      CHECK(std::fabs(R.trace().real() - 4.0 * beta) <= 1e-9 * 4.0 * beta);
      CHECK(hermitian_defect(R) <= 1e-12 * beta);
      CHECK(eig_spread(R) > eig_spread(wide.R(k, l)));
      CHECK(flat.R(k, l) == CMatrix(beta * CMatrix::Identity(4, 4)));
    }
  }
  const SystemDims one{3, 2, 1};
  const auto scalar = build_correlation(one, generate_drop(one, 500.0, 5, true).geometry,
                                        generate_drop(one, 500.0, 5, true).fading,
                                        AngularSpread::degrees(30.0));
  CHECK(scalar.R(0, 0).size() == 1);
  CHECK(scalar.R(1, 2)(0, 0).imag() == 0.0);
  CHECK_THROWS(build_correlation(dims, d.geometry, d.fading, AngularSpread::degrees(0.0)));
  CHECK_THROWS(build_correlation(dims, d.geometry, d.fading, AngularSpread::degrees(-5.0)));
}

TEST_CASE("local scattering entries", "[scenario]") {
  const double beta = 2.5;
  const double asd = 20.0 * std::numbers::pi / 180.0;
  const double phi = 0.4;
  const CMatrix R = local_scattering_ula(3, beta, phi, asd);
  const double spread = asd * std::numbers::pi * std::cos(phi);
  const cd expected = beta * std::exp(-spread * spread / 2.0) *
                      std::exp(cd(0.0, -std::numbers::pi * std::sin(phi)));
  CHECK(std::abs(R(0, 1) - expected) < 1e-14);
  CHECK(std::abs(R(1, 0) - std::conj(expected)) < 1e-14);
  CHECK_THROWS(local_scattering_ula(3, beta, std::nan(""), asd));
}
