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
#include "cfmimo/linalg.hpp"

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace cfmimo {

enum class Scheme { lsfd, mf, sc, dl_coherent, dl_noncoherent };
enum class PowerMode { full, sccpc };

inline std::string to_string(Scheme s) {
  switch (s) {
    case Scheme::lsfd: return "lsfd";
    case Scheme::mf: return "mf";
    case Scheme::sc: return "sc";
    case Scheme::dl_coherent: return "coherent";
    case Scheme::dl_noncoherent: return "noncoherent";
  }
  return "?";
}

inline std::string to_string(PowerMode m) {
  return m == PowerMode::full ? "full" : "sccpc";
}

/// Per-UE SINR trajectory and SE. sinr[k][j] belongs to instant n = lambda + j.
struct SEResult {
  Scheme scheme = Scheme::lsfd;
  PowerMode power = PowerMode::full;
  int tau_c = 0;
  int lambda = 0;
  std::vector<std::vector<double>> sinr;
  std::vector<double> se;
  std::vector<std::size_t> serving_ap;  // small-cell only
  std::uint64_t drop_seed = 0;
  std::string config_hash;

  std::size_t num_ues() const { return se.size(); }
  double sinr_at(std::size_t k, int n) const {
    return sinr[k].at(static_cast<std::size_t>(n - lambda));
  }
};

/// SE = (1/tau_c) sum_n log2(1 + sinr[n]) over the data instants.
inline double se_from_sinr(const std::vector<double>& sinr, int tau_c) {
  double s = 0.0;
  for (double v : sinr) s += std::log2(1.0 + v);
  return s / tau_c;
}

inline void finalize_se(SEResult& r) {
  r.se.resize(r.sinr.size());
  for (std::size_t k = 0; k < r.sinr.size(); ++k) r.se[k] = se_from_sinr(r.sinr[k], r.tau_c);
}

struct UplinkPowerControl {
  std::vector<double> eta;
  double p_u = 0.0;

  static UplinkPowerControl full(std::size_t K, double p_u) {
    return {std::vector<double>(K, 1.0), p_u};
  }
};

/// Statistics seen by the CPU when combining UE k:
/// b = [tr Q_kl]_l, Gamma_ki = diag(tr(Q_kl R_il)), c_ki = [tr Qbar_kil]_l
/// for pilot mates, Lambda = diag(b).
struct UplinkCombinerStats {
  RVector b;
  RMatrix gamma_diag;  // row i holds the diagonal of Gamma_ki
  std::vector<std::size_t> mates;  // P_k without k
  std::vector<CVector> c;          // aligned with mates
  RVector lambda_diag;
};

inline UplinkCombinerStats combiner_stats(const EstimationStatistics& st,
                                          const PilotAssignment& pilots, std::size_t k) {
  UplinkCombinerStats cs;
  cs.b = st.tr_Q.row(static_cast<Eigen::Index>(k)).transpose();
  cs.lambda_diag = cs.b;
  cs.gamma_diag = st.tr_QR[k];
  for (std::size_t i : pilots.sharing_set(k)) {
    if (i == k) continue;
    cs.mates.push_back(i);
    cs.c.push_back(st.tr_Qbar(k, i));
  }
  return cs;
}

using WeightFn = std::function<CVector(std::size_t k, int n)>;

namespace detail {

inline void check_power_control(const UplinkPowerControl& pc, std::size_t K) {
  if (pc.eta.size() != K) throw std::invalid_argument("one eta per UE is required");
  for (double e : pc.eta) {
    if (!(e >= 0.0 && e <= 1.0)) throw std::invalid_argument("eta must lie in [0, 1]");
  }
  if (!(pc.p_u > 0.0)) throw std::invalid_argument("p_u must be positive");
}

// sum_i eta_i tr(Q_kl R_il) per AP.
inline RVector interference_diag(const UplinkCombinerStats& cs, const UplinkPowerControl& pc) {
  RVector g = RVector::Zero(cs.b.size());
  for (Eigen::Index i = 0; i < cs.gamma_diag.rows(); ++i) {
    g += pc.eta[static_cast<std::size_t>(i)] * cs.gamma_diag.row(i).transpose();
  }
  return g;
}

}  // namespace detail

/// Additive decomposition of the uplink SINR denominator for fixed weights.
/// ds / (bu + ca + sum(ui) + ns) equals the closed-form SINR.
struct UplinkSinrTerms {
  double ds = 0.0;
  double bu = 0.0;
  double ca = 0.0;
  std::vector<double> ui;  // ui[k] = 0
  double ns = 0.0;

  double denominator() const {
    double s = bu + ca + ns;
    for (double v : ui) s += v;
    return s;
  }
  double sinr() const { return ds / denominator(); }
};

inline UplinkSinrTerms uplink_sinr_terms(const EstimationStatistics& st,
                                         const PilotAssignment& pilots,
                                         const AgingProfile& aging,
                                         const UplinkPowerControl& pc, const FrameConfig& frame,
                                         std::size_t k, int n, const CVector& a) {
  detail::check_power_control(pc, st.K);
  const int lag = n - frame.lambda();
  if (lag < 0 || n > frame.tau_c) throw std::invalid_argument("instant outside the data phase");
  const auto kk = static_cast<Eigen::Index>(k);
  const RVector a2 = a.cwiseAbs2();
  const RVector b = st.tr_Q.row(kk).transpose();
  UplinkSinrTerms t;
  const double p = pc.p_u;
  t.ds = aging.rho2(k, lag) * p * pc.eta[k] * std::norm(a.dot(b.cast<cd>()));
  const double self = a2.dot(st.tr_QR[k].row(kk).transpose());
  t.bu = aging.rho2(k, lag) * p * pc.eta[k] * self;
  t.ca = aging.rho_bar(k, lag) * aging.rho_bar(k, lag) * p * pc.eta[k] * self;
  t.ui.assign(st.K, 0.0);
  for (std::size_t i = 0; i < st.K; ++i) {
    if (i == k) continue;
    double v = a2.dot(st.tr_QR[k].row(static_cast<Eigen::Index>(i)).transpose());
    if (pilots.shares_pilot(k, i)) v += aging.rho2(i, lag) * std::norm(a.dot(st.tr_Qbar(k, i)));
    t.ui[i] = p * pc.eta[i] * v;
  }
  t.ns = st.sigma2 * a2.dot(b);
  return t;
}

/// Cell-free uplink SINR for arbitrary CPU weights a_k[n].
inline SEResult uplink_sinr_cf(const EstimationStatistics& st, const PilotAssignment& pilots,
                               const AgingProfile& aging, const UplinkPowerControl& pc,
                               const FrameConfig& frame, const WeightFn& weights,
                               Scheme scheme = Scheme::mf) {
  detail::check_power_control(pc, st.K);
  SEResult r;
  r.scheme = scheme;
  r.tau_c = frame.tau_c;
  r.lambda = frame.lambda();
  r.sinr.assign(st.K, std::vector<double>(static_cast<std::size_t>(frame.data_instants())));
  const double p = pc.p_u;
  for (std::size_t k = 0; k < st.K; ++k) {
    const UplinkCombinerStats cs = combiner_stats(st, pilots, k);
    const RVector g = detail::interference_diag(cs, pc);
    for (int n = r.lambda; n <= frame.tau_c; ++n) {
      const int lag = n - r.lambda;
      const CVector a = weights(k, n);
      if (a.size() != cs.b.size() || !a.allFinite()) {
        throw std::invalid_argument("weights must be finite and of length L");
      }
      const RVector a2 = a.cwiseAbs2();
      if (a2.sum() == 0.0) {
        throw std::invalid_argument("all-zero weight vector for UE " + std::to_string(k));
      }
      const double num = aging.rho2(k, lag) * p * pc.eta[k] * std::norm(a.dot(cs.b.cast<cd>()));
      double den = p * a2.dot(g) + st.sigma2 * a2.dot(cs.lambda_diag);
      for (std::size_t m = 0; m < cs.mates.size(); ++m) {
        const std::size_t i = cs.mates[m];
        den += p * aging.rho2(i, lag) * pc.eta[i] * std::norm(a.dot(cs.c[m]));
      }
      r.sinr[k][static_cast<std::size_t>(lag)] = num / den;
    }
  }
  finalize_se(r);
  return r;
}

inline CVector mf_weights(std::size_t L) {
  if (L < 1) throw std::invalid_argument("L must be >= 1");
  return CVector::Constant(static_cast<Eigen::Index>(L), cd(1.0 / static_cast<double>(L)));
}

namespace detail {

// M = diag(D) + V V^H; returns M^{-1} b via the Woodbury identity.
inline CVector diag_plus_lowrank_solve(const RVector& D, const CMatrix& V, const CVector& b) {
  const RVector Dinv = D.cwiseInverse();
  CVector x = Dinv.cast<cd>().cwiseProduct(b);
  if (V.cols() == 0) return x;
  const CMatrix DV = Dinv.cast<cd>().asDiagonal() * V;
  CMatrix S = CMatrix::Identity(V.cols(), V.cols()) + V.adjoint() * DV;
  const CVector y = S.ldlt().solve(V.adjoint() * x);
  return x - DV * y;
}

}  // namespace detail

/// Weight vector maximizing the SINR of UE k at instant n.
inline CVector lsfd_weights(const EstimationStatistics& st, const PilotAssignment& pilots,
                            const AgingProfile& aging, const UplinkPowerControl& pc,
                            const FrameConfig& frame, std::size_t k, int n) {
  detail::check_power_control(pc, st.K);
  const UplinkCombinerStats cs = combiner_stats(st, pilots, k);
  const int lag = n - frame.lambda();
  const RVector D = pc.p_u * detail::interference_diag(cs, pc) + st.sigma2 * cs.lambda_diag;
  if (!(D.minCoeff() > 0.0)) {
    throw ModelError("LSFD matrix is singular for UE " + std::to_string(k));
  }
  CMatrix V(cs.b.size(), static_cast<Eigen::Index>(cs.mates.size()));
  for (std::size_t m = 0; m < cs.mates.size(); ++m) {
    const std::size_t i = cs.mates[m];
    V.col(static_cast<Eigen::Index>(m)) =
        std::sqrt(pc.p_u * aging.rho2(i, lag) * pc.eta[i]) * cs.c[m];
  }
  return detail::diag_plus_lowrank_solve(D, V, cs.b.cast<cd>());
}

/// LSFD SINR from the maximized quadratic form rho^2 p eta b^H M^{-1} b.
inline SEResult lsfd_sinr(const EstimationStatistics& st, const PilotAssignment& pilots,
                          const AgingProfile& aging, const UplinkPowerControl& pc,
                          const FrameConfig& frame) {
  detail::check_power_control(pc, st.K);
  SEResult r;
  r.scheme = Scheme::lsfd;
  r.tau_c = frame.tau_c;
  r.lambda = frame.lambda();
  r.sinr.assign(st.K, std::vector<double>(static_cast<std::size_t>(frame.data_instants())));
  for (std::size_t k = 0; k < st.K; ++k) {
    const UplinkCombinerStats cs = combiner_stats(st, pilots, k);
    const RVector D = pc.p_u * detail::interference_diag(cs, pc) + st.sigma2 * cs.lambda_diag;
    if (!(D.minCoeff() > 0.0)) {
      throw ModelError("LSFD matrix is singular for UE " + std::to_string(k));
    }
    const CVector b = cs.b.cast<cd>();
    CMatrix V(cs.b.size(), static_cast<Eigen::Index>(cs.mates.size()));
    for (int n = r.lambda; n <= frame.tau_c; ++n) {
      const int lag = n - r.lambda;
      for (std::size_t m = 0; m < cs.mates.size(); ++m) {
        const std::size_t i = cs.mates[m];
        V.col(static_cast<Eigen::Index>(m)) =
            std::sqrt(pc.p_u * aging.rho2(i, lag) * pc.eta[i]) * cs.c[m];
      }
      const CVector a = detail::diag_plus_lowrank_solve(D, V, b);
      r.sinr[k][static_cast<std::size_t>(lag)] =
          aging.rho2(k, lag) * pc.p_u * pc.eta[k] * b.dot(a).real();
    }
  }
  finalize_se(r);
  return r;
}

inline SEResult mf_sinr(const EstimationStatistics& st, const PilotAssignment& pilots,
                        const AgingProfile& aging, const UplinkPowerControl& pc,
                        const FrameConfig& frame) {
  const CVector a = mf_weights(st.L);
  return uplink_sinr_cf(st, pilots, aging, pc, frame,
                        [&a](std::size_t, int) { return a; }, Scheme::mf);
}

/// Uplink SINR for spatially uncorrelated fading, written in terms of
/// gamma_kl and beta_kl only.
inline SEResult uplink_sinr_uncorrelated(const EstimationStatistics& st,
                                         const LargeScaleFading& lsf,
                                         const PilotAssignment& pilots,
                                         const AgingProfile& aging,
                                         const UplinkPowerControl& pc, const FrameConfig& frame,
                                         const WeightFn& weights, Scheme scheme = Scheme::mf) {
  if (!st.uncorrelated) {
    throw std::invalid_argument("uncorrelated SINR requested for correlated fading");
  }
  detail::check_power_control(pc, st.K);
  SEResult r;
  r.scheme = scheme;
  r.tau_c = frame.tau_c;
  r.lambda = frame.lambda();
  r.sinr.assign(st.K, std::vector<double>(static_cast<std::size_t>(frame.data_instants())));
  const double N = static_cast<double>(st.N);
  const double p = pc.p_u;
  const auto L = static_cast<Eigen::Index>(st.L);
  for (std::size_t k = 0; k < st.K; ++k) {
    const auto kk = static_cast<Eigen::Index>(k);
    const RVector gk = st.gamma.row(kk).transpose();
    for (int n = r.lambda; n <= frame.tau_c; ++n) {
      const int lag = n - r.lambda;
      const CVector a = weights(k, n);
      if (a.size() != L) throw std::invalid_argument("weights must have length L");
      const RVector a2 = a.cwiseAbs2();
      const double num = aging.rho2(k, lag) * p * pc.eta[k] * N * std::norm(a.dot(gk.cast<cd>()));
      double den = 0.0;
      for (std::size_t i = 0; i < st.K; ++i) {
        den += p * pc.eta[i] *
               a2.dot(gk.cwiseProduct(lsf.beta.row(static_cast<Eigen::Index>(i)).transpose()));
      }
      for (std::size_t i : pilots.sharing_set(k)) {
        if (i == k) continue;
        const RVector cross =
            gk.cwiseProduct(st.gamma.row(static_cast<Eigen::Index>(i)).transpose()).cwiseSqrt();
        den += p * N * aging.rho2(i, lag) * pc.eta[i] * std::norm(a.dot(cross.cast<cd>()));
      }
      den += st.sigma2 * a2.dot(gk);
      r.sinr[k][static_cast<std::size_t>(lag)] = num / den;
    }
  }
  finalize_se(r);
  return r;
}

/// eta_k = min_i beta_i / beta_k with beta_k = sum_l beta_kl.
inline std::vector<double> uplink_sccpc_cf(const RMatrix& beta) {
  const RVector bk = beta.rowwise().sum();
  if (!(bk.minCoeff() > 0.0)) throw std::invalid_argument("beta must be positive");
  const double mn = bk.minCoeff();
  std::vector<double> eta(static_cast<std::size_t>(bk.size()));
  for (Eigen::Index k = 0; k < bk.size(); ++k) eta[static_cast<std::size_t>(k)] = mn / bk(k);
  return eta;
}

/// eta_k = min_i beta_{i,l_i} / beta_{k,l_k} for serving APs l_k.
inline std::vector<double> uplink_sccpc_sc(const RMatrix& beta,
                                           const std::vector<std::size_t>& serving) {
  if (serving.size() != static_cast<std::size_t>(beta.rows())) {
    throw std::invalid_argument("one serving AP per UE is required");
  }
  std::vector<double> b(serving.size());
  for (std::size_t k = 0; k < serving.size(); ++k) {
    b[k] = beta(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(serving[k]));
    if (!(b[k] > 0.0)) throw std::invalid_argument("beta must be positive");
  }
  const double mn = *std::min_element(b.begin(), b.end());
  std::vector<double> eta(b.size());
  for (std::size_t k = 0; k < b.size(); ++k) eta[k] = mn / b[k];
  return eta;
}

}  // namespace cfmimo
