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
#include "oracles/quadrature.hpp"
#include "support.hpp"

#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

using namespace cfmimo;
using cfmimo::test::manual_model;

namespace {

RMatrix beta_grid() {
  RMatrix b(6, 4);
  b << 2e-9, 3e-10, 8e-11, 5e-11,
       4e-10, 1e-9, 2e-10, 6e-11,
       9e-11, 1.5e-10, 3e-9, 4e-10,
       6e-11, 2e-10, 5e-10, 1.2e-9,
       7e-10, 9e-11, 1e-10, 8e-10,
       1e-10, 6e-10, 9e-10, 2e-10;
  return b;
}

}  // namespace

TEST_CASE("closed form without pilot sharing", "[smallcell]") {
  for (double w : {1e-3, 0.5, 7.0, 3e4}) {
    const double single = scaled_expint_e1(1.0 / w) / std::numbers::ln2;
    CHECK(smallcell_rate_closed_form(w, 0.0) == Catch::Approx(single).epsilon(1e-14));
    CHECK(smallcell_rate_closed_form(w, 1e-16) == Catch::Approx(single).epsilon(1e-12));
    // Tiny but non-zero A joins the limit smoothly; the second term is
    // about w A / ln 2 there.
    CHECK(std::fabs(smallcell_rate_closed_form(w, 1e-9) - single) <= 2e-9 * w / std::numbers::ln2 + 1e-12);
  }
  CHECK(smallcell_rate_closed_form(0.0, 0.3) == 0.0);
}

TEST_CASE("closed form is E{log2(1 + w y / (1 + w A y))}", "[smallcell]") {
  for (auto [w, A] : {std::pair{0.8, 0.0}, std::pair{12.0, 0.35}, std::pair{300.0, 2.0}}) {
    const auto f = [w = w, A = A](long double t) -> long double {
      if (t >= 1.0L) return 0.0L;
      const long double y = t / (1.0L - t);
      const long double jac = 1.0L / ((1.0L - t) * (1.0L - t));
      return std::exp(-y) * std::log2(1.0L + w * y / (1.0L + w * A * y)) * jac;
    };
    const double ref = static_cast<double>(oracle::integrate(f, 0.0L, 1.0L, 1e-14L));
    CHECK(smallcell_rate_closed_form(w, A) == Catch::Approx(ref).epsilon(1e-9));
  }
}

TEST_CASE("single scalar UE matches the hand formula", "[smallcell]") {
  RMatrix beta(1, 1);
  beta << 2e-9;
  const double p = 0.1, s2 = 2.5e-13;
  const auto m = manual_model(beta, 1, {1}, 1, p, s2, 0.0, 30);
  const auto pc = UplinkPowerControl::full(1, p);
  const double gamma = p * beta(0, 0) * beta(0, 0) / (p * beta(0, 0) + s2);
  const double w = p * gamma / (p * beta(0, 0) - p * gamma + s2);
  const auto t = smallcell_terms_n1(m.st, m.lsf, m.pilots, m.aging, pc, 0, 0, 0);
  CHECK(t.w == Catch::Approx(w).epsilon(1e-12));
  CHECK(t.A == 0.0);
  const SEResult r = smallcell_se(m.st, m.factors, m.lsf, m.pilots, m.aging, pc, m.frame, {});
  const double rate = scaled_expint_e1(1.0 / w) / std::numbers::ln2;
  CHECK(r.se[0] == Catch::Approx(29.0 / 30.0 * rate).epsilon(1e-12));
}

TEST_CASE("serving AP maximizes the SE", "[smallcell]") {
  const auto m = manual_model(beta_grid(), 1, {1, 2, 3, 1, 2, 3}, 3, 0.1, 2.5e-13, 0.002, 80);
  const auto pc = UplinkPowerControl::full(6, 0.1);
  const SEResult r = smallcell_se(m.st, m.factors, m.lsf, m.pilots, m.aging, pc, m.frame, {});
  for (std::size_t k = 0; k < 6; ++k) {
    double best = 0.0;
    for (std::size_t l = 0; l < 4; ++l) {
      const auto rates = smallcell_rates_n1(m.st, m.lsf, m.pilots, m.aging, pc, m.frame, k, l);
      double se = 0.0;
      for (double v : rates) se += v;
      best = std::max(best, se / m.frame.tau_c);
    }
    CHECK(r.se[k] == Catch::Approx(best).epsilon(1e-12));
    const SEResult fixed = smallcell_se(m.st, m.factors, m.lsf, m.pilots, m.aging, pc, m.frame,
                                        {}, std::vector<std::size_t>(6, r.serving_ap[k]));
    CHECK(fixed.se[k] == Catch::Approx(r.se[k]).epsilon(1e-12));
  }
  SmallCellOptions forced;
  forced.mode = SmallCellMode::closed_form_n1;
  const auto m2 = manual_model(beta_grid(), 2, {1, 2, 3, 1, 2, 3}, 3, 0.1, 2.5e-13, 0.002, 80);
  CHECK_THROWS(smallcell_se(m2.st, m2.factors, m2.lsf, m2.pilots, m2.aging, pc, m2.frame, forced));
}

TEST_CASE("N = 1 closed form against the sampled conditional SINR", "[smallcell][oracle]") {
  const auto m = manual_model(beta_grid(), 1, {1, 2, 3, 1, 2, 3}, 3, 0.1, 2.5e-13, 0.002, 80);
  auto pc = UplinkPowerControl::full(6, 0.1);
  pc.eta = {1.0, 0.6, 1.0, 0.8, 1.0, 0.5};
  const SEResult cf = smallcell_se(m.st, m.factors, m.lsf, m.pilots, m.aging, pc, m.frame, {});
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t k = 0; k < 6; ++k) pairs.emplace_back(k, cf.serving_ap[k]);
  const std::vector<int> instants{m.frame.lambda(), m.frame.lambda() + 30, m.frame.tau_c};
  OracleOptions opts;
  opts.trials = 100000;
  opts.seed = 77;
  const auto est = smallcell_oracle({m.st, m.factors, m.pilots, m.aging, m.frame}, m.lsf, pc,
                                    pairs, instants, opts);
  for (const auto& e : est) {
    const double closed = std::log2(1.0 + cf.sinr_at(e.k, e.n));
    INFO("k = " << e.k << " n = " << e.n);
    CHECK(std::fabs(e.rate_conditional - closed) <= 0.01 * closed);
    CHECK(std::fabs(e.m1 - e.m1_model) <= 4.0 * e.m1_diff_se);
    CHECK(std::fabs(e.m2 - e.m2_model) <= 4.0 * e.m2_diff_se);
    // Conditioning on every estimate at the AP can only raise the average
    // rate (the log is convex in the interference power).
    CHECK(e.rate >= closed - 3.0 * e.rate_se);
  }
}

TEST_CASE("Monte Carlo small-cell rates agree with the oracle", "[smallcell][oracle]") {
  const auto m = manual_model(beta_grid(), 2, {1, 2, 3, 1, 2, 3}, 3, 0.1, 2.5e-13, 0.002, 60, 30.0);
  const auto pc = UplinkPowerControl::full(6, 0.1);
  const std::vector<std::pair<std::size_t, std::size_t>> pairs{{0, 0}, {2, 2}, {3, 3}};
  const auto rates = smallcell_rates_mc(m.st, m.factors, m.pilots, m.aging, pc, m.frame, pairs, 20000, 5);
  OracleOptions opts;
  opts.trials = 20000;
  opts.seed = 6;
  const std::vector<int> instants{m.frame.lambda(), m.frame.tau_c};
  const auto est = smallcell_oracle({m.st, m.factors, m.pilots, m.aging, m.frame}, m.lsf, pc,
                                    pairs, instants, opts);
  for (std::size_t q = 0; q < pairs.size(); ++q) {
    for (std::size_t j = 0; j < instants.size(); ++j) {
      const auto& e = est[q * instants.size() + j];
      const double v = rates[q][static_cast<std::size_t>(e.n - m.frame.lambda())];
      // Two independent estimates of the same mean.
      CHECK(std::fabs(v - e.rate) <= 5.0 * std::sqrt(2.0) * e.rate_se);
    }
  }
  CHECK_THROWS(smallcell_rates_mc(m.st, m.factors, m.pilots, m.aging, pc, m.frame, pairs, 0, 5));
}
