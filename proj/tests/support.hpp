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

#include "cfmimo/cfmimo.hpp"

#include <complex>
#include <vector>

namespace cfmimo::test {

/// Small configuration used across the unit tests.
inline RunConfig small_config(std::size_t L = 10, std::size_t K = 4, std::size_t N = 2,
                              int tau_c = 50, int tau_p = 4, double f = 0.002) {
  RunConfig c;
  c.scenario.L = L;
  c.scenario.K = K;
  c.scenario.N = N;
  c.aging.tau_c = tau_c;
  c.estimation.tau_p = tau_p;
  c.aging.f_D_Ts = f;
  c.run.drops = 1;
  c.run.threads = 1;
  return c;
}

/// Drop with hand-placed large-scale gains. R_kl = beta_kl I, or the local
/// scattering matrix when asd_deg > 0.
struct ManualModel {
  SystemDims dims;
  LargeScaleFading lsf;
  SpatialCorrelation corr;
  FrameConfig frame;
  AgingProfile aging;
  PilotAssignment pilots;
  EstimationStatistics st;
  Grid<CMatrix> factors;
};

inline ManualModel manual_model(const RMatrix& beta, std::size_t N, std::vector<int> pilot,
                                int tau_p, double p, double sigma2, double f, int tau_c,
                                double asd_deg = 0.0) {
  ManualModel m;
  m.dims = {static_cast<std::size_t>(beta.cols()), static_cast<std::size_t>(beta.rows()), N};
  m.lsf.beta = beta;
  m.lsf.shadowing_db = RMatrix::Zero(beta.rows(), beta.cols());
  m.corr.N = N;
  m.corr.uncorrelated = asd_deg <= 0.0;
  m.corr.asd_deg = asd_deg;
  m.corr.R = Grid<CMatrix>(m.dims.K, m.dims.L);
  m.corr.nominal_angle = RMatrix::Zero(beta.rows(), beta.cols());
  for (std::size_t k = 0; k < m.dims.K; ++k) {
    for (std::size_t l = 0; l < m.dims.L; ++l) {
      const double angle = 0.3 + 0.7 * static_cast<double>(k) + 0.45 * static_cast<double>(l);
      m.corr.nominal_angle(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(l)) = angle;
      const auto n = static_cast<Eigen::Index>(N);
      m.corr.R(k, l) = asd_deg > 0.0
                           ? local_scattering_ula(N, beta(k, l), angle, asd_deg * std::numbers::pi / 180.0)
                           : CMatrix(beta(k, l) * CMatrix::Identity(n, n));
    }
  }
  m.frame.tau_c = tau_c;
  m.frame.tau_p = tau_p;
  m.aging = aging_profile(m.frame, m.dims.K, f);
  m.pilots = make_pilot_assignment(tau_p, std::move(pilot), std::vector<double>(m.dims.K, p));
  m.st = estimation_stats(m.corr, m.lsf, m.pilots, m.aging, m.frame, sigma2);
  m.factors = correlation_factors(m.corr);
  return m;
}

/// Running mean and standard error of a real statistic.
struct Moment {
  double sum = 0.0;
  double sum2 = 0.0;
  std::size_t n = 0;

  void add(double x) {
    sum += x;
    sum2 += x * x;
    ++n;
  }
  double mean() const { return sum / static_cast<double>(n); }
  double stderr_() const {
    const double m = mean();
    const double var = (sum2 / static_cast<double>(n) - m * m) * static_cast<double>(n) /
                       static_cast<double>(n - 1);
    return std::sqrt(std::max(var, 0.0) / static_cast<double>(n));
  }
  bool within(double expected, double k_se = 3.0) const {
    return std::fabs(mean() - expected) <= k_se * stderr_();
  }
};

}  // namespace cfmimo::test
