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
#include "cfmimo/estimation.hpp"
#include "cfmimo/uplink.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace cfmimo {

/// Downlink power coefficients mu_kl (K x L) and per-AP budget p_d (W).
struct DownlinkPowerControl {
  RMatrix mu;
  double p_d = 0.0;
};

/// mu_kl = w_k / sum_i tr(Q_il) w_i. Every AP spends exactly its budget.
inline RMatrix downlink_mu(const EstimationStatistics& st, const RVector& w) {
  RMatrix mu(static_cast<Eigen::Index>(st.K), static_cast<Eigen::Index>(st.L));
  for (Eigen::Index l = 0; l < mu.cols(); ++l) {
    const double den = st.tr_Q.col(l).dot(w);
    if (!(den > 0.0)) {
      throw ModelError("AP " + std::to_string(l) + " has no usable channel estimate");
    }
    mu.col(l) = w / den;
  }
  return mu;
}

inline DownlinkPowerControl downlink_full_power(const EstimationStatistics& st, double p_d) {
  return {downlink_mu(st, RVector::Ones(static_cast<Eigen::Index>(st.K))), p_d};
}

/// Weights 1/beta_bar_k with beta_bar_k = sum_l beta_kl / L.
inline DownlinkPowerControl downlink_sccpc(const EstimationStatistics& st, const RMatrix& beta,
                                           double p_d) {
  const RVector bbar = beta.rowwise().mean();
  if (!(bbar.minCoeff() > 0.0)) throw std::invalid_argument("beta must be positive");
  return {downlink_mu(st, bbar.cwiseInverse()), p_d};
}

/// Expected transmit power of every AP relative to p_d: sum_k mu_kl tr(Q_kl).
inline RVector downlink_power_usage(const EstimationStatistics& st, const RMatrix& mu) {
  return mu.cwiseProduct(st.tr_Q).colwise().sum().transpose();
}

namespace detail {

inline void check_downlink(const EstimationStatistics& st, const DownlinkPowerControl& pc) {
  if (pc.mu.rows() != static_cast<Eigen::Index>(st.K) ||
      pc.mu.cols() != static_cast<Eigen::Index>(st.L)) {
    throw std::invalid_argument("mu must be K x L");
  }
  if (!(pc.mu.minCoeff() >= 0.0)) throw std::invalid_argument("mu must be non-negative");
  if (!(pc.p_d > 0.0)) throw std::invalid_argument("p_d must be positive");
}

// sum_i sum_l mu_il tr(Q_il R_kl); tr_QR[i](k, l) holds tr(Q_il R_kl).
inline double downlink_interference(const EstimationStatistics& st, const RMatrix& mu,
                                    std::size_t k) {
  double s = 0.0;
  for (std::size_t i = 0; i < st.K; ++i) {
    s += mu.row(static_cast<Eigen::Index>(i)).dot(st.tr_QR[i].row(static_cast<Eigen::Index>(k)));
  }
  return s;
}

}  // namespace detail

/// Coherent joint transmission: every AP sends the same symbol to UE k.
inline SEResult downlink_coherent(const EstimationStatistics& st, const PilotAssignment& pilots,
                                  const AgingProfile& aging, const DownlinkPowerControl& pc,
                                  const FrameConfig& frame) {
  detail::check_downlink(st, pc);
  SEResult r;
  r.scheme = Scheme::dl_coherent;
  r.tau_c = frame.tau_c;
  r.lambda = frame.lambda();
  r.sinr.assign(st.K, std::vector<double>(static_cast<std::size_t>(frame.data_instants())));
  const RMatrix smu = pc.mu.cwiseSqrt();
  for (std::size_t k = 0; k < st.K; ++k) {
    const auto kk = static_cast<Eigen::Index>(k);
    const double coh = std::pow(smu.row(kk).dot(st.tr_Q.row(kk)), 2);
    const double inter = pc.p_d * detail::downlink_interference(st, pc.mu, k);
    double contamination = 0.0;
    for (std::size_t i : pilots.sharing_set(k)) {
      if (i == k) continue;
      contamination +=
          std::norm(smu.row(static_cast<Eigen::Index>(i)).cast<cd>().dot(st.tr_Qbar(k, i)));
    }
    for (int lag = 0; lag < frame.data_instants(); ++lag) {
      const double r2 = aging.rho2(k, lag);
      r.sinr[k][static_cast<std::size_t>(lag)] =
          r2 * pc.p_d * coh / (inter + r2 * pc.p_d * contamination + st.sigma2);
    }
  }
  finalize_se(r);
  return r;
}

/// Non-coherent transmission: each AP sends its own symbol, decoded with
/// successive interference cancellation at the UE.
inline SEResult downlink_noncoherent(const EstimationStatistics& st,
                                     const PilotAssignment& pilots, const AgingProfile& aging,
                                     const DownlinkPowerControl& pc, const FrameConfig& frame) {
  detail::check_downlink(st, pc);
  SEResult r;
  r.scheme = Scheme::dl_noncoherent;
  r.tau_c = frame.tau_c;
  r.lambda = frame.lambda();
  r.sinr.assign(st.K, std::vector<double>(static_cast<std::size_t>(frame.data_instants())));
  for (std::size_t k = 0; k < st.K; ++k) {
    const auto kk = static_cast<Eigen::Index>(k);
    const double sig = pc.mu.row(kk).dot(st.tr_Q.row(kk).cwiseAbs2());
    const double inter = pc.p_d * detail::downlink_interference(st, pc.mu, k);
    double contamination = 0.0;
    for (std::size_t i : pilots.sharing_set(k)) {
      if (i == k) continue;
      contamination += pc.mu.row(static_cast<Eigen::Index>(i)).dot(st.tr_Qbar(k, i).cwiseAbs2().transpose());
    }
    for (int lag = 0; lag < frame.data_instants(); ++lag) {
      const double r2 = aging.rho2(k, lag);
      r.sinr[k][static_cast<std::size_t>(lag)] =
          r2 * pc.p_d * sig / (inter + r2 * pc.p_d * contamination + st.sigma2);
    }
  }
  finalize_se(r);
  return r;
}

/// Coherent SINR for spatially uncorrelated fading in terms of gamma and beta.
inline SEResult downlink_coherent_uncorrelated(const EstimationStatistics& st,
                                               const LargeScaleFading& lsf,
                                               const PilotAssignment& pilots,
                                               const AgingProfile& aging,
                                               const DownlinkPowerControl& pc,
                                               const FrameConfig& frame) {
  if (!st.uncorrelated) {
    throw std::invalid_argument("uncorrelated SINR requested for correlated fading");
  }
  detail::check_downlink(st, pc);
  SEResult r;
  r.scheme = Scheme::dl_coherent;
  r.tau_c = frame.tau_c;
  r.lambda = frame.lambda();
  r.sinr.assign(st.K, std::vector<double>(static_cast<std::size_t>(frame.data_instants())));
  const double N = static_cast<double>(st.N);
  const RMatrix smu = pc.mu.cwiseSqrt();
  for (std::size_t k = 0; k < st.K; ++k) {
    const auto kk = static_cast<Eigen::Index>(k);
    const double coh = std::pow(smu.row(kk).dot(st.gamma.row(kk)), 2);
    double inter = 0.0;
    for (std::size_t i = 0; i < st.K; ++i) {
      const auto ii = static_cast<Eigen::Index>(i);
      inter += pc.mu.row(ii).dot(st.gamma.row(ii).cwiseProduct(lsf.beta.row(kk)));
    }
    double contamination = 0.0;
    for (std::size_t i : pilots.sharing_set(k)) {
      if (i == k) continue;
      const auto ii = static_cast<Eigen::Index>(i);
      contamination += std::pow(
          smu.row(ii).dot(st.gamma.row(kk).cwiseProduct(st.gamma.row(ii)).cwiseSqrt()), 2);
    }
    for (int lag = 0; lag < frame.data_instants(); ++lag) {
      const double r2 = aging.rho2(k, lag);
      r.sinr[k][static_cast<std::size_t>(lag)] =
          r2 * pc.p_d * N * N * coh /
          (pc.p_d * N * inter + r2 * pc.p_d * N * N * contamination + st.sigma2);
    }
  }
  finalize_se(r);
  return r;
}

}  // namespace cfmimo
