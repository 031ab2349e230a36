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
#include "cfmimo/downlink.hpp"
#include "cfmimo/estimation.hpp"
#include "cfmimo/parallel.hpp"
#include "cfmimo/random.hpp"
#include "cfmimo/stats.hpp"
#include "cfmimo/uplink.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

namespace cfmimo {

/// Everything the oracle needs about one drop.
struct OracleModel {
  const EstimationStatistics& st;
  const Grid<CMatrix>& factors;
  const PilotAssignment& pilots;
  const AgingProfile& aging;
  const FrameConfig& frame;
};

struct OracleOptions {
  std::size_t trials = 10000;
  std::uint64_t seed = 0;
  std::uint64_t drop = 0;
  unsigned threads = 1;
  std::size_t block = 100;  // trials per jackknife block
};

/// Channel realizations anchored at lambda: h[t_k] = rho h[lambda] + rho_bar f
/// and h[n] = rho[n - lambda] h[lambda] + rho_bar[n - lambda] u[n].
struct ChannelTrajectory {
  std::vector<int> instants;  // data instants carried in u
  Grid<CVector> h_lambda;
  Grid<CVector> h_pilot;
  Grid<CVector> h_hat;
  std::vector<Grid<CVector>> u;  // u[j](k, l) for instant instants[j]

  CVector h(const AgingProfile& aging, int lambda, std::size_t k, std::size_t l,
            std::size_t j) const {
    const int lag = instants[j] - lambda;
    return aging.rho(k, lag) * h_lambda(k, l) + aging.rho_bar(k, lag) * u[j](k, l);
  }
};

inline ChannelTrajectory sample_trajectory(const OracleModel& m, const std::vector<int>& instants,
                                           Rng& rng) {
  const int lambda = m.frame.lambda();
  for (int n : instants) {
    if (n < lambda || n > m.frame.tau_c) throw std::invalid_argument("instant outside the data phase");
  }
  ChannelTrajectory tr;
  tr.instants = instants;
  tr.h_lambda = Grid<CVector>(m.st.K, m.st.L);
  tr.h_pilot = Grid<CVector>(m.st.K, m.st.L);
  tr.h_hat = Grid<CVector>(m.st.K, m.st.L);
  for (std::size_t l = 0; l < m.st.L; ++l) {
    ApEstimateSample a = sample_estimate_at_ap(m.st, m.factors, m.pilots, m.aging, m.frame, l, rng);
    for (std::size_t k = 0; k < m.st.K; ++k) {
      tr.h_lambda(k, l) = std::move(a.h[k]);
      tr.h_pilot(k, l) = std::move(a.h_pilot[k]);
      tr.h_hat(k, l) = std::move(a.h_hat[k]);
    }
  }
  tr.u.assign(instants.size(), Grid<CVector>(m.st.K, m.st.L));
  for (std::size_t j = 0; j < instants.size(); ++j) {
    for (std::size_t k = 0; k < m.st.K; ++k) {
      for (std::size_t l = 0; l < m.st.L; ++l) tr.u[j](k, l) = rng.complex_normal_vector(m.factors(k, l));
    }
  }
  return tr;
}

/// 0-anchored evolution h[n] = rho[n] h[0] + rho_bar[n] g[n] for one
/// (UE, AP) pair; element 0 of the result is h[0].
inline std::vector<CVector> sample_trajectory_zero_anchored(const CMatrix& factor,
                                                            const AgingProfile& aging,
                                                            std::size_t k,
                                                            const std::vector<int>& instants,
                                                            Rng& rng) {
  std::vector<CVector> out;
  out.push_back(rng.complex_normal_vector(factor));
  for (int n : instants) {
    out.push_back(aging.rho(k, n) * out.front() + aging.rho_bar(k, n) * rng.complex_normal_vector(factor));
  }
  return out;
}

namespace detail {

// Runs trials in blocks; trial t draws from its own stream, so each block
// sum is the same whatever the worker count. Returns per-block sums.
template <class TrialFn>
std::pair<std::vector<std::vector<double>>, std::vector<std::size_t>> run_blocks(
    std::size_t dims, const OracleOptions& opts, TrialFn&& trial) {
  if (opts.trials < 1) throw std::invalid_argument("oracle needs at least one trial");
  const std::size_t bs = std::max<std::size_t>(1, opts.block);
  const std::size_t B = (opts.trials + bs - 1) / bs;
  std::vector<std::vector<double>> sums(B, std::vector<double>(dims, 0.0));
  std::vector<std::size_t> counts(B, 0);
  parallel_for(B, opts.threads, [&](std::size_t b) {
    const std::size_t t0 = b * bs;
    const std::size_t t1 = std::min(opts.trials, t0 + bs);
    for (std::size_t t = t0; t < t1; ++t) {
      Rng rng(derive_seed(opts.seed, Stream::trial, {opts.drop, t}));
      trial(t, rng, sums[b]);
    }
    counts[b] = t1 - t0;
  });
  return {std::move(sums), std::move(counts)};
}

}  // namespace detail

/// Empirical uplink SINR terms for UE k at instant n.
struct SinrTermEstimates {
  std::size_t k = 0;
  int n = 0;
  std::size_t trials = 0;
  double ds = 0.0, bu = 0.0, ca = 0.0, ns = 0.0, sinr = 0.0;
  double ds_se = 0.0, bu_se = 0.0, ca_se = 0.0, ns_se = 0.0, sinr_se = 0.0;
  std::vector<double> ui, ui_se;
};

/// Samples trajectories, pilot estimates and receiver noise, forms the
/// per-AP soft estimates h_hat_kl^H y_l[n] and combines them with the given
/// weights; every expectation of the SINR is replaced by a sample mean.
inline std::vector<SinrTermEstimates> uplink_oracle(const OracleModel& m,
                                                    const UplinkPowerControl& pc,
                                                    const WeightFn& weights,
                                                    const std::vector<int>& instants,
                                                    const OracleOptions& opts) {
  const std::size_t K = m.st.K;
  const std::size_t L = m.st.L;
  const std::size_t J = instants.size();
  const std::size_t W = 5 + K;
  const int lambda = m.frame.lambda();
  const auto n = static_cast<Eigen::Index>(m.st.N);
  std::vector<CVector> a(K * J);
  for (std::size_t k = 0; k < K; ++k) {
    for (std::size_t j = 0; j < J; ++j) a[k * J + j] = weights(k, instants[j]);
  }
  const double noise_std = std::sqrt(m.st.sigma2);

  auto [sums, counts] = detail::run_blocks(K * J * W, opts, [&](std::size_t, Rng& rng,
                                                                std::vector<double>& acc) {
    const ChannelTrajectory tr = sample_trajectory(m, instants, rng);
    for (std::size_t j = 0; j < J; ++j) {
      std::vector<CVector> w(L);
      for (std::size_t l = 0; l < L; ++l) w[l] = noise_std * rng.complex_normal_vector(n);
      Grid<CVector> hn(K, L);
      for (std::size_t i = 0; i < K; ++i) {
        for (std::size_t l = 0; l < L; ++l) hn(i, l) = tr.h(m.aging, lambda, i, l, j);
      }
      for (std::size_t k = 0; k < K; ++k) {
        const CVector& ak = a[k * J + j];
        cd x = 0.0, y = 0.0, ns = 0.0;
        std::vector<cd> g(K, 0.0);
        for (std::size_t l = 0; l < L; ++l) {
          const CVector& hh = tr.h_hat(k, l);
          const cd al = std::conj(ak(static_cast<Eigen::Index>(l)));
          x += al * hh.dot(tr.h_lambda(k, l));
          y += al * hh.dot(tr.u[j](k, l));
          ns += al * hh.dot(w[l]);
          for (std::size_t i = 0; i < K; ++i) {
            if (i != k) g[i] += al * hh.dot(hn(i, l));
          }
        }
        double* s = &acc[(k * J + j) * W];
        s[0] += x.real();
        s[1] += x.imag();
        s[2] += std::norm(x);
        s[3] += std::norm(y);
        s[4] += std::norm(ns);
        for (std::size_t i = 0; i < K; ++i) s[5 + i] += std::norm(g[i]);
      }
    }
  });

  const std::size_t O = 5 + K;  // ds bu ca ns sinr ui...
  auto f = [&](const std::vector<double>& mu) {
    std::vector<double> out(K * J * O);
    for (std::size_t k = 0; k < K; ++k) {
      for (std::size_t j = 0; j < J; ++j) {
        const int lag = instants[j] - lambda;
        const double* s = &mu[(k * J + j) * W];
        double* o = &out[(k * J + j) * O];
        const double p = pc.p_u;
        const double mean2 = s[0] * s[0] + s[1] * s[1];
        const double var = s[2] - mean2;
        o[0] = m.aging.rho2(k, lag) * p * pc.eta[k] * mean2;
        o[1] = m.aging.rho2(k, lag) * p * pc.eta[k] * var;
        o[2] = std::pow(m.aging.rho_bar(k, lag), 2) * p * pc.eta[k] * s[3];
        o[3] = s[4];
        double den = o[1] + o[2] + o[3];
        for (std::size_t i = 0; i < K; ++i) {
          o[5 + i] = i == k ? 0.0 : p * pc.eta[i] * s[5 + i];
          den += o[5 + i];
        }
        o[4] = o[0] / den;
      }
    }
    return out;
  };
  const JackknifeResult jk = jackknife(sums, counts, f);

  std::vector<SinrTermEstimates> res;
  for (std::size_t k = 0; k < K; ++k) {
    for (std::size_t j = 0; j < J; ++j) {
      const std::size_t o = (k * J + j) * O;
      SinrTermEstimates e;
      e.k = k;
      e.n = instants[j];
      e.trials = opts.trials;
      e.ds = jk.estimate[o];
      e.bu = jk.estimate[o + 1];
      e.ca = jk.estimate[o + 2];
      e.ns = jk.estimate[o + 3];
      e.sinr = jk.estimate[o + 4];
      e.ds_se = jk.stderr_[o];
      e.bu_se = jk.stderr_[o + 1];
      e.ca_se = jk.stderr_[o + 2];
      e.ns_se = jk.stderr_[o + 3];
      e.sinr_se = jk.stderr_[o + 4];
      e.ui.assign(jk.estimate.begin() + static_cast<std::ptrdiff_t>(o + 5),
                  jk.estimate.begin() + static_cast<std::ptrdiff_t>(o + O));
      e.ui_se.assign(jk.stderr_.begin() + static_cast<std::ptrdiff_t>(o + 5),
                     jk.stderr_.begin() + static_cast<std::ptrdiff_t>(o + O));
      res.push_back(std::move(e));
    }
  }
  return res;
}

struct DownlinkOracleEstimate {
  std::size_t k = 0;
  int n = 0;
  double sinr_coh = 0.0, sinr_coh_se = 0.0;
  double sinr_nc = 0.0, sinr_nc_se = 0.0;
  double rate_nc_sic = 0.0;      // sum_l log2(1 + zeta_kl)
  double rate_nc_product = 0.0;  // log2 of the telescoped product
  std::vector<double> zeta;      // per-AP SINRs, AP order 1..L
};

struct DownlinkOracleResult {
  std::vector<DownlinkOracleEstimate> estimates;
  std::vector<double> ap_power;     // empirical E|x_l|^2 (W)
  std::vector<double> ap_power_se;
};

/// Downlink expectations by sampling. Coherent: the mean effective gain and
/// second moments of sum_l sqrt(mu_il) h_kl[n]^H h_hat_il. Non-coherent: the
/// per-AP SINRs of successive decoding in AP order 1..L.
inline DownlinkOracleResult downlink_oracle(const OracleModel& m, const DownlinkPowerControl& pc,
                                            const std::vector<int>& instants,
                                            const OracleOptions& opts) {
  const std::size_t K = m.st.K;
  const std::size_t L = m.st.L;
  const std::size_t J = instants.size();
  const int lambda = m.frame.lambda();
  const RMatrix smu = pc.mu.cwiseSqrt();
  const auto kk = [](std::size_t v) { return static_cast<Eigen::Index>(v); };

  // Layout: per k [Re z, Im z, (Re x_l, Im x_l) * L]; per (k, j)
  // [Re D, Im D, |D|^2, sum_i!=k |D_ki|^2, sum_i!=k sum_l mu_il |g_kil|^2,
  //  (Re g_l, Im g_l, |g_l|^2) * L]; per l [|x_l|^2].
  const std::size_t WK = 2 + 2 * L;
  const std::size_t WJ = 5 + 3 * L;
  const std::size_t off_j = K * WK;
  const std::size_t off_p = off_j + K * J * WJ;
  const std::size_t dims = off_p + L;

  auto [sums, counts] = detail::run_blocks(dims, opts, [&](std::size_t, Rng& rng,
                                                          std::vector<double>& acc) {
    const ChannelTrajectory tr = sample_trajectory(m, instants, rng);
    for (std::size_t k = 0; k < K; ++k) {
      double* s = &acc[k * WK];
      cd z = 0.0;
      for (std::size_t l = 0; l < L; ++l) {
        const cd x = tr.h_lambda(k, l).dot(tr.h_hat(k, l));
        z += smu(kk(k), kk(l)) * x;
        s[2 + 2 * l] += x.real();
        s[3 + 2 * l] += x.imag();
      }
      s[0] += z.real();
      s[1] += z.imag();
    }
    for (std::size_t j = 0; j < J; ++j) {
      Grid<CVector> hn(K, L);
      for (std::size_t i = 0; i < K; ++i) {
        for (std::size_t l = 0; l < L; ++l) hn(i, l) = tr.h(m.aging, lambda, i, l, j);
      }
      for (std::size_t k = 0; k < K; ++k) {
        double* s = &acc[off_j + (k * J + j) * WJ];
        double cross = 0.0;
        double nc_cross = 0.0;
        cd dkk = 0.0;
        for (std::size_t i = 0; i < K; ++i) {
          cd d = 0.0;
          for (std::size_t l = 0; l < L; ++l) {
            const cd g = hn(k, l).dot(tr.h_hat(i, l));
            d += smu(kk(i), kk(l)) * g;
            if (i == k) {
              s[5 + 3 * l] += g.real();
              s[6 + 3 * l] += g.imag();
              s[7 + 3 * l] += std::norm(g);
            } else {
              nc_cross += pc.mu(kk(i), kk(l)) * std::norm(g);
            }
          }
          if (i == k) {
            dkk = d;
          } else {
            cross += std::norm(d);
          }
        }
        s[0] += dkk.real();
        s[1] += dkk.imag();
        s[2] += std::norm(dkk);
        s[3] += cross;
        s[4] += nc_cross;
      }
    }
    // Transmitted signal with sampled symbols.
    std::vector<cd> q(K);
    for (auto& v : q) v = rng.complex_normal();
    for (std::size_t l = 0; l < L; ++l) {
      CVector x = CVector::Zero(kk(m.st.N));
      for (std::size_t i = 0; i < K; ++i) x += smu(kk(i), kk(l)) * q[i] * tr.h_hat(i, l);
      acc[off_p + l] += pc.p_d * x.squaredNorm();
    }
  });

  const std::size_t O = 4 + L;
  auto f = [&](const std::vector<double>& mu) {
    std::vector<double> out(K * J * O + L);
    for (std::size_t k = 0; k < K; ++k) {
      const double* sk = &mu[k * WK];
      for (std::size_t j = 0; j < J; ++j) {
        const double r2 = m.aging.rho2(k, instants[j] - lambda);
        const double* s = &mu[off_j + (k * J + j) * WJ];
        double* o = &out[(k * J + j) * O];
        const double num_coh = r2 * pc.p_d * (sk[0] * sk[0] + sk[1] * sk[1]);
        const double var_dkk = s[2] - (s[0] * s[0] + s[1] * s[1]);
        o[0] = num_coh / (pc.p_d * (s[3] + var_dkk) + m.st.sigma2);

        std::vector<double> S(L);
        double V = pc.p_d * s[4] + m.st.sigma2;
        double Ssum = 0.0;
        for (std::size_t l = 0; l < L; ++l) {
          const double mu_kl = pc.mu(kk(k), kk(l));
          const double mx2 = sk[2 + 2 * l] * sk[2 + 2 * l] + sk[3 + 2 * l] * sk[3 + 2 * l];
          const double gm2 = s[5 + 3 * l] * s[5 + 3 * l] + s[6 + 3 * l] * s[6 + 3 * l];
          V += pc.p_d * mu_kl * (s[7 + 3 * l] - gm2);
          S[l] = r2 * pc.p_d * mu_kl * mx2;
          Ssum += S[l];
        }
        o[1] = Ssum / V;
        double tail = Ssum;
        double sic = 0.0;
        for (std::size_t l = 0; l < L; ++l) {
          tail -= S[l];
          const double zeta = S[l] / (V + tail);
          o[4 + l] = zeta;
          sic += std::log2(1.0 + zeta);
        }
        o[2] = sic;
        o[3] = std::log2((V + Ssum) / V);
      }
    }
    for (std::size_t l = 0; l < L; ++l) out[K * J * O + l] = mu[off_p + l];
    return out;
  };
  const JackknifeResult jk = jackknife(sums, counts, f);

  DownlinkOracleResult res;
  for (std::size_t k = 0; k < K; ++k) {
    for (std::size_t j = 0; j < J; ++j) {
      const std::size_t o = (k * J + j) * O;
      DownlinkOracleEstimate e;
      e.k = k;
      e.n = instants[j];
      e.sinr_coh = jk.estimate[o];
      e.sinr_coh_se = jk.stderr_[o];
      e.sinr_nc = jk.estimate[o + 1];
      e.sinr_nc_se = jk.stderr_[o + 1];
      e.rate_nc_sic = jk.estimate[o + 2];
      e.rate_nc_product = jk.estimate[o + 3];
      e.zeta.assign(jk.estimate.begin() + static_cast<std::ptrdiff_t>(o + 4),
                    jk.estimate.begin() + static_cast<std::ptrdiff_t>(o + O));
      res.estimates.push_back(std::move(e));
    }
  }
  for (std::size_t l = 0; l < L; ++l) {
    res.ap_power.push_back(jk.estimate[K * J * O + l]);
    res.ap_power_se.push_back(jk.stderr_[K * J * O + l]);
  }
  return res;
}

struct SmallCellOracleEstimate {
  std::size_t k = 0;
  std::size_t l = 0;
  int n = 0;
  // E{log2(1 + SINR)} with the SINR conditioned on every estimate at AP l.
  double rate = 0.0, rate_se = 0.0;
  // N = 1 only: E{log2(1 + SINR)} with the interference power conditioned
  // on h_hat_kl alone, B |h_hat|^2 + D, and the moment check of that form:
  // sampled E{|I|^2} and E{|I|^2 |h_hat|^2} against the same expectations
  // of the conditional form.
  double rate_conditional = 0.0, rate_conditional_se = 0.0;
  double m1 = 0.0, m1_model = 0.0, m1_diff_se = 0.0;
  double m2 = 0.0, m2_model = 0.0, m2_diff_se = 0.0;
};

/// Small-cell rates for (UE, AP) pairs at the given instants.
inline std::vector<SmallCellOracleEstimate> smallcell_oracle(
    const OracleModel& m, const LargeScaleFading& lsf, const UplinkPowerControl& pc,
    const std::vector<std::pair<std::size_t, std::size_t>>& pairs,
    const std::vector<int>& instants, const OracleOptions& opts) {
  const std::size_t K = m.st.K;
  const std::size_t J = instants.size();
  const std::size_t P = pairs.size();
  const int lambda = m.frame.lambda();
  const bool scalar = m.st.N == 1;
  const auto n = static_cast<Eigen::Index>(m.st.N);
  const double p = pc.p_u;
  const std::size_t W = 8;  // rate, rate_cond, m1, m1_model, m2, m2_model, d1, d2

  // Conditional interference form at N = 1: B |h_hat|^2 + D.
  std::vector<double> Bc(P * J, 0.0), Dc(P * J, 0.0);
  if (scalar) {
    for (std::size_t q = 0; q < P; ++q) {
      const auto [k, l] = pairs[q];
      const auto ll = static_cast<Eigen::Index>(l);
      for (std::size_t j = 0; j < J; ++j) {
        const int lag = instants[j] - lambda;
        double D = 0.0;
        for (std::size_t i = 0; i < K; ++i) D += p * pc.eta[i] * lsf.beta(static_cast<Eigen::Index>(i), ll);
        double B = 0.0;
        const double ref = m.st.pilot_scale[k] * lsf.beta(static_cast<Eigen::Index>(k), ll);
        for (std::size_t i : m.pilots.sharing_set(k)) {
          D -= p * m.aging.rho2(i, lag) * pc.eta[i] * m.st.tr_Q(static_cast<Eigen::Index>(i), ll);
          if (i == k) continue;
          const double c = m.st.pilot_scale[i] * lsf.beta(static_cast<Eigen::Index>(i), ll) / ref;
          B += m.aging.rho2(i, lag) * p * pc.eta[i] * c * c;
        }
        Bc[q * J + j] = B;
        Dc[q * J + j] = D;
      }
    }
  }

  std::vector<std::size_t> aps;
  for (const auto& pr : pairs) aps.push_back(pr.second);
  std::sort(aps.begin(), aps.end());
  aps.erase(std::unique(aps.begin(), aps.end()), aps.end());
  std::vector<CMatrix> Bmat(aps.size());
  for (std::size_t a = 0; a < aps.size(); ++a) {
    Bmat[a] = m.st.sigma2 * CMatrix::Identity(n, n);
    for (std::size_t i = 0; i < K; ++i) {
      Bmat[a] += p * pc.eta[i] * m.factors(i, aps[a]) * m.factors(i, aps[a]).adjoint();
    }
  }

  auto [sums, counts] = detail::run_blocks(P * J * W, opts, [&](std::size_t, Rng& rng,
                                                               std::vector<double>& acc) {
    for (std::size_t a = 0; a < aps.size(); ++a) {
      const std::size_t l = aps[a];
      const ApEstimateSample s = sample_estimate_at_ap(m.st, m.factors, m.pilots, m.aging, m.frame, l, rng);
      for (std::size_t q = 0; q < P; ++q) {
        if (pairs[q].second != l) continue;
        const std::size_t k = pairs[q].first;
        const CVector& hk = s.h_hat[k];
        const double g = hk.squaredNorm();
        const double base = hk.dot(Bmat[a] * hk).real();
        for (std::size_t j = 0; j < J; ++j) {
          const int lag = instants[j] - lambda;
          double den = base;
          for (std::size_t i = 0; i < K; ++i) {
            double v = -hk.dot(m.st.Q(i, l) * hk).real();
            if (i != k) v += std::norm(hk.dot(s.h_hat[i]));
            den += p * pc.eta[i] * m.aging.rho2(i, lag) * v;
          }
          double* o = &acc[(q * J + j) * W];
          const double sig = m.aging.rho2(k, lag) * p * pc.eta[k] * g * g;
          o[0] += std::log2(1.0 + sig / den);
          if (!scalar) continue;
          const double B = Bc[q * J + j];
          const double D = Dc[q * J + j];
          o[1] += std::log2(1.0 + m.aging.rho2(k, lag) * p * pc.eta[k] * g / (B * g + D + m.st.sigma2));
          // Sampled interference: estimation error, aging innovation and
          // the other UEs' channels at instant n, with random symbols.
          cd I = 0.0;
          const cd hh = hk(0);
          const double rb = m.aging.rho_bar(k, lag);
          for (std::size_t i = 0; i < K; ++i) {
            const cd sym = rng.complex_normal(p * pc.eta[i]);
            const cd u = rng.complex_normal_vector(m.factors(i, l))(0);
            const double ri = m.aging.rho(i, lag);
            const double rbi = m.aging.rho_bar(i, lag);
            if (i == k) {
              I += (ri * (s.h[k](0) - hh) + rb * u) * sym;
            } else {
              I += (ri * s.h[i](0) + rbi * u) * sym;
            }
          }
          const double I2 = std::norm(I);
          const double model = B * g + D;
          o[2] += I2;
          o[3] += model;
          o[4] += I2 * g;
          o[5] += model * g;
          o[6] += I2 - model;
          o[7] += (I2 - model) * g;
        }
      }
    }
  });

  const JackknifeResult jk = jackknife(sums, counts, [](const std::vector<double>& mu) { return mu; });
  std::vector<SmallCellOracleEstimate> res;
  for (std::size_t q = 0; q < P; ++q) {
    for (std::size_t j = 0; j < J; ++j) {
      const std::size_t o = (q * J + j) * W;
      SmallCellOracleEstimate e;
      e.k = pairs[q].first;
      e.l = pairs[q].second;
      e.n = instants[j];
      e.rate = jk.estimate[o];
      e.rate_se = jk.stderr_[o];
      e.rate_conditional = jk.estimate[o + 1];
      e.rate_conditional_se = jk.stderr_[o + 1];
      e.m1 = jk.estimate[o + 2];
      e.m1_model = jk.estimate[o + 3];
      e.m2 = jk.estimate[o + 4];
      e.m2_model = jk.estimate[o + 5];
      e.m1_diff_se = jk.stderr_[o + 6];
      e.m2_diff_se = jk.stderr_[o + 7];
      res.push_back(e);
    }
  }
  return res;
}

}  // namespace cfmimo
