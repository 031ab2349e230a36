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

#include "cfmimo/estimation.hpp"
#include "cfmimo/special_functions.hpp"
#include "cfmimo/uplink.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <vector>

namespace cfmimo {

enum class SmallCellMode { automatic, closed_form_n1, monte_carlo };

struct SmallCellOptions {
  SmallCellMode mode = SmallCellMode::automatic;  // closed form when N = 1
  int trials = 200;                // estimate draws per (UE, AP) in Monte Carlo mode
  std::size_t candidates = 3;      // APs per UE searched in Monte Carlo mode (0 = all)
  std::uint64_t seed = 0;
};

/// Parameters of the N = 1 closed form for UE k served by AP l at lag n - lambda:
/// rate = [e^{x1} E1(x1) - e^{x2} E1(x2)] / ln 2 with x1 = 1/(w(1+A)), x2 = 1/(wA).
struct SmallCellClosedFormTerms {
  double w = 0.0;
  double A = 0.0;
};

inline SmallCellClosedFormTerms smallcell_terms_n1(const EstimationStatistics& st,
                                                   const LargeScaleFading& lsf,
                                                   const PilotAssignment& pilots,
                                                   const AgingProfile& aging,
                                                   const UplinkPowerControl& pc,
                                                   std::size_t k, std::size_t l, int lag) {
  if (st.N != 1) throw std::invalid_argument("closed-form small-cell SE requires N = 1");
  const auto kk = static_cast<Eigen::Index>(k);
  const auto ll = static_cast<Eigen::Index>(l);
  const double p = pc.p_u;
  double den = st.sigma2;
  for (std::size_t i = 0; i < st.K; ++i) {
    den += p * pc.eta[i] * lsf.beta(static_cast<Eigen::Index>(i), ll);
  }
  for (std::size_t i : pilots.sharing_set(k)) {
    den -= p * aging.rho2(i, lag) * pc.eta[i] * st.tr_Q(static_cast<Eigen::Index>(i), ll);
  }
  SmallCellClosedFormTerms t;
  const double rk2 = aging.rho2(k, lag);
  t.w = rk2 * p * pc.eta[k] * st.tr_Q(kk, ll) / den;
  if (!(t.w > 0.0)) return t;
  // The estimates of pilot mates are scalar multiples of each other:
  // h_hat_il = c_i h_hat_kl.
  const double ref = st.pilot_scale[k] * lsf.beta(kk, ll);
  for (std::size_t i : pilots.sharing_set(k)) {
    if (i == k) continue;
    const double ci = st.pilot_scale[i] * lsf.beta(static_cast<Eigen::Index>(i), ll) / ref;
    t.A += aging.rho2(i, lag) * pc.eta[i] * ci * ci;
  }
  t.A /= rk2 * pc.eta[k];
  return t;
}

/// E{log2(1 + w y / (1 + w A y))} for y ~ Exp(1).
inline double smallcell_rate_closed_form(double w, double A) {
  if (!(w > 0.0)) return 0.0;
  const double first = scaled_expint_e1(1.0 / (w * (1.0 + A)));
  const double second = A < 1e-14 ? 0.0 : scaled_expint_e1(1.0 / (w * A));
  return std::max(0.0, first - second) / std::numbers::ln2;
}

/// Per-instant rates of UE k served by AP l, N = 1 closed form.
inline std::vector<double> smallcell_rates_n1(const EstimationStatistics& st,
                                              const LargeScaleFading& lsf,
                                              const PilotAssignment& pilots,
                                              const AgingProfile& aging,
                                              const UplinkPowerControl& pc,
                                              const FrameConfig& frame, std::size_t k,
                                              std::size_t l) {
  std::vector<double> rate(static_cast<std::size_t>(frame.data_instants()));
  for (int lag = 0; lag < frame.data_instants(); ++lag) {
    const auto t = smallcell_terms_n1(st, lsf, pilots, aging, pc, k, l, lag);
    rate[static_cast<std::size_t>(lag)] = smallcell_rate_closed_form(t.w, t.A);
  }
  return rate;
}

namespace detail {

// UEs grouped by identical temporal-correlation tables, so the per-instant
// interference sum costs one term per group.
inline std::vector<std::vector<std::size_t>> aging_groups(const AgingProfile& aging) {
  std::vector<std::vector<std::size_t>> groups;
  std::vector<double> keys;
  for (std::size_t k = 0; k < aging.num_ues(); ++k) {
    const auto it = std::find(keys.begin(), keys.end(), std::fabs(aging.f_D_Ts[k]));
    if (it == keys.end()) {
      keys.push_back(std::fabs(aging.f_D_Ts[k]));
      groups.push_back({k});
    } else {
      groups[static_cast<std::size_t>(it - keys.begin())].push_back(k);
    }
  }
  return groups;
}

inline std::vector<std::size_t> candidate_aps(const RMatrix& beta, std::size_t k,
                                              std::size_t count) {
  const auto L = static_cast<std::size_t>(beta.cols());
  std::vector<std::size_t> idx(L);
  for (std::size_t l = 0; l < L; ++l) idx[l] = l;
  if (count == 0 || count >= L) return idx;
  std::partial_sort(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(count), idx.end(),
                    [&](std::size_t a, std::size_t b) {
                      return beta(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(a)) >
                             beta(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(b));
                    });
  idx.resize(count);
  return idx;
}

}  // namespace detail

/// Per-instant rates of (UE, AP) pairs, averaging log2(1 + SINR) conditioned
/// on all channel estimates at the AP over Monte Carlo estimate draws.
/// pairs[j] = (k, l); returns rates[j][n - lambda].
inline std::vector<std::vector<double>> smallcell_rates_mc(
    const EstimationStatistics& st, const Grid<CMatrix>& factors,
    const PilotAssignment& pilots, const AgingProfile& aging, const UplinkPowerControl& pc,
    const FrameConfig& frame, const std::vector<std::pair<std::size_t, std::size_t>>& pairs,
    int trials, std::uint64_t seed) {
  if (trials < 1) throw std::invalid_argument("small-cell trials must be >= 1");
  const int T = frame.data_instants();
  const double p = pc.p_u;
  const auto groups = detail::aging_groups(aging);
  std::vector<std::vector<double>> rates(pairs.size(), std::vector<double>(T, 0.0));

  std::vector<std::size_t> aps;
  for (const auto& pr : pairs) aps.push_back(pr.second);
  std::sort(aps.begin(), aps.end());
  aps.erase(std::unique(aps.begin(), aps.end()), aps.end());

  const auto n = static_cast<Eigen::Index>(st.N);
  for (std::size_t l : aps) {
    CMatrix B = st.sigma2 * CMatrix::Identity(n, n);
    for (std::size_t i = 0; i < st.K; ++i) B += p * pc.eta[i] * factors(i, l) * factors(i, l).adjoint();
    std::vector<std::size_t> users;
    for (std::size_t j = 0; j < pairs.size(); ++j) {
      if (pairs[j].second == l) users.push_back(j);
    }
    std::vector<double> X(groups.size());
    for (int t = 0; t < trials; ++t) {
      Rng rng(derive_seed(seed, Stream::smallcell,
                          {static_cast<std::uint64_t>(t), static_cast<std::uint64_t>(l)}));
      const ApEstimateSample s = sample_estimate_at_ap(st, factors, pilots, aging, frame, l, rng);
      for (std::size_t j : users) {
        const std::size_t k = pairs[j].first;
        const CVector& hk = s.h_hat[k];
        const double g = hk.squaredNorm();
        const double base = hk.dot(B * hk).real();
        for (std::size_t gi = 0; gi < groups.size(); ++gi) {
          double x = 0.0;
          for (std::size_t i : groups[gi]) {
            double v = -hk.dot(st.Q(i, l) * hk).real();
            if (i != k) v += std::norm(hk.dot(s.h_hat[i]));
            x += p * pc.eta[i] * v;
          }
          X[gi] = x;
        }
        const double sig = p * pc.eta[k] * g * g;
        auto& acc = rates[j];
        for (int lag = 0; lag < T; ++lag) {
          double den = base;
          for (std::size_t gi = 0; gi < groups.size(); ++gi) {
            den += aging.rho2(groups[gi].front(), lag) * X[gi];
          }
          acc[static_cast<std::size_t>(lag)] += std::log2(1.0 + aging.rho2(k, lag) * sig / den);
        }
      }
    }
  }
  for (auto& r : rates) {
    for (double& v : r) v /= trials;
  }
  return rates;
}

/// Small-cell uplink: every UE is served by the single AP that maximizes its
/// SE. When `serving` is given, those APs are used instead of searching.
/// sinr[k][n] holds the effective per-instant SINR 2^rate - 1.
inline SEResult smallcell_se(const EstimationStatistics& st, const Grid<CMatrix>& factors,
                             const LargeScaleFading& lsf, const PilotAssignment& pilots,
                             const AgingProfile& aging, const UplinkPowerControl& pc,
                             const FrameConfig& frame, const SmallCellOptions& opts,
                             const std::optional<std::vector<std::size_t>>& serving = std::nullopt) {
  detail::check_power_control(pc, st.K);
  bool closed = opts.mode == SmallCellMode::closed_form_n1 ||
                (opts.mode == SmallCellMode::automatic && st.N == 1);
  if (closed && st.N != 1) throw std::invalid_argument("closed-form small-cell SE requires N = 1");
  if (serving && serving->size() != st.K) {
    throw std::invalid_argument("one serving AP per UE is required");
  }

  std::vector<std::vector<std::size_t>> cand(st.K);
  for (std::size_t k = 0; k < st.K; ++k) {
    if (serving) {
      cand[k] = {serving->at(k)};
    } else if (closed) {
      cand[k] = detail::candidate_aps(lsf.beta, k, 0);
    } else {
      cand[k] = detail::candidate_aps(lsf.beta, k, opts.candidates);
    }
  }

  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t k = 0; k < st.K; ++k) {
    for (std::size_t l : cand[k]) pairs.emplace_back(k, l);
  }
  std::vector<std::vector<double>> rates;
  if (closed) {
    for (const auto& [k, l] : pairs) {
      rates.push_back(smallcell_rates_n1(st, lsf, pilots, aging, pc, frame, k, l));
    }
  } else {
    rates = smallcell_rates_mc(st, factors, pilots, aging, pc, frame, pairs, opts.trials,
                               opts.seed);
  }

  SEResult r;
  r.scheme = Scheme::sc;
  r.tau_c = frame.tau_c;
  r.lambda = frame.lambda();
  r.sinr.resize(st.K);
  r.serving_ap.assign(st.K, 0);
  std::vector<double> best(st.K, -1.0);
  for (std::size_t j = 0; j < pairs.size(); ++j) {
    const auto [k, l] = pairs[j];
    double se = 0.0;
    for (double v : rates[j]) se += v;
    se /= frame.tau_c;
    if (se > best[k]) {
      best[k] = se;
      r.serving_ap[k] = l;
      r.sinr[k].resize(rates[j].size());
      for (std::size_t m = 0; m < rates[j].size(); ++m) r.sinr[k][m] = std::exp2(rates[j][m]) - 1.0;
    }
  }
  r.se = best;
  return r;
}

}  // namespace cfmimo
