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

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <stdexcept>
#include <vector>

namespace cfmimo {

/// Sample quantile with linear interpolation between order statistics
/// (position 1 + (n - 1) q on the sorted sample).
inline double quantile(std::vector<double> v, double q) {
  if (v.empty()) throw std::invalid_argument("quantile of an empty sample");
  if (!(q >= 0.0 && q <= 1.0)) throw std::invalid_argument("quantile level must lie in [0, 1]");
  std::sort(v.begin(), v.end());
  const double h = (static_cast<double>(v.size()) - 1.0) * q;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, v.size() - 1);
  return v[lo] + (h - static_cast<double>(lo)) * (v[hi] - v[lo]);
}

inline double mean(const std::vector<double>& v) {
  if (v.empty()) throw std::invalid_argument("mean of an empty sample");
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

/// Standard error of the mean.
inline double standard_error(const std::vector<double>& v) {
  if (v.size() < 2) return std::numeric_limits<double>::infinity();
  const double m = mean(v);
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return std::sqrt(s / static_cast<double>(v.size() - 1) / static_cast<double>(v.size()));
}

struct CdfSummary {
  std::vector<double> levels;
  std::vector<double> values;
  double median = 0.0;
  double p05 = 0.0;
  double mean = 0.0;
  double mean_stderr = 0.0;
};

inline CdfSummary summarize(const std::vector<double>& sample, std::size_t grid_points = 101) {
  CdfSummary s;
  if (grid_points < 2) throw std::invalid_argument("CDF grid needs at least two points");
  for (std::size_t i = 0; i < grid_points; ++i) {
    const double q = static_cast<double>(i) / static_cast<double>(grid_points - 1);
    s.levels.push_back(q);
    s.values.push_back(quantile(sample, q));
  }
  s.median = quantile(sample, 0.5);
  s.p05 = quantile(sample, 0.05);
  s.mean = cfmimo::mean(sample);
  s.mean_stderr = standard_error(sample);
  return s;
}

/// Delete-one-block jackknife. block_sums[b] holds the per-trial statistic
/// vector summed over block b, counts[b] its trial count. f maps a vector of
/// per-trial means to the estimates of interest.
struct JackknifeResult {
  std::vector<double> estimate;
  std::vector<double> stderr_;
};

inline JackknifeResult jackknife(
    const std::vector<std::vector<double>>& block_sums, const std::vector<std::size_t>& counts,
    const std::function<std::vector<double>(const std::vector<double>&)>& f) {
  if (block_sums.empty() || block_sums.size() != counts.size()) {
    throw std::invalid_argument("jackknife needs one count per block");
  }
  const std::size_t D = block_sums.front().size();
  const std::size_t B = block_sums.size();
  std::vector<double> total(D, 0.0);
  std::size_t n = 0;
  for (std::size_t b = 0; b < B; ++b) {
    for (std::size_t d = 0; d < D; ++d) total[d] += block_sums[b][d];
    n += counts[b];
  }
  std::vector<double> m(D);
  for (std::size_t d = 0; d < D; ++d) m[d] = total[d] / static_cast<double>(n);
  JackknifeResult r;
  r.estimate = f(m);
  const std::size_t E = r.estimate.size();
  r.stderr_.assign(E, std::numeric_limits<double>::infinity());
  if (B < 2) return r;
  std::vector<std::vector<double>> loo(B);
  std::vector<double> avg(E, 0.0);
  for (std::size_t b = 0; b < B; ++b) {
    const double nb = static_cast<double>(n - counts[b]);
    for (std::size_t d = 0; d < D; ++d) m[d] = (total[d] - block_sums[b][d]) / nb;
    loo[b] = f(m);
    for (std::size_t e = 0; e < E; ++e) avg[e] += loo[b][e] / static_cast<double>(B);
  }
  for (std::size_t e = 0; e < E; ++e) {
    double s = 0.0;
    for (std::size_t b = 0; b < B; ++b) s += (loo[b][e] - avg[e]) * (loo[b][e] - avg[e]);
    r.stderr_[e] = std::sqrt(static_cast<double>(B - 1) / static_cast<double>(B) * s);
  }
  return r;
}

}  // namespace cfmimo
