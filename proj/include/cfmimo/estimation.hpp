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
#include "cfmimo/linalg.hpp"
#include "cfmimo/random.hpp"
#include "cfmimo/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <span>
#include <stdexcept>
#include <vector>

namespace cfmimo {

/// Time-multiplexed pilots: UE k transmits its pilot only at instant
/// t_k in {1..tau_p}; UEs with the same t_k share a pilot.
struct PilotAssignment {
  int tau_p = 1;
  std::vector<int> pilot;     // t_k, 1-based
  std::vector<double> power;  // p_k (W)
  std::vector<std::vector<std::size_t>> members;  // members[t - 1]

  std::size_t num_ues() const { return pilot.size(); }
  const std::vector<std::size_t>& sharing_set(std::size_t k) const {
    return members[static_cast<std::size_t>(pilot[k] - 1)];
  }
  bool shares_pilot(std::size_t k, std::size_t i) const {
    return pilot[k] == pilot[i];
  }
};

/// Builds the assignment from explicit pilot indices (1-based).
inline PilotAssignment make_pilot_assignment(int tau_p, std::vector<int> pilot,
                                             std::vector<double> power) {
  if (tau_p < 1) throw std::invalid_argument("tau_p must be >= 1");
  if (power.size() != pilot.size()) {
    throw std::invalid_argument("one pilot power per UE is required");
  }
  PilotAssignment pa;
  pa.tau_p = tau_p;
  pa.pilot = std::move(pilot);
  pa.power = std::move(power);
  pa.members.assign(static_cast<std::size_t>(tau_p), {});
  for (std::size_t k = 0; k < pa.pilot.size(); ++k) {
    if (pa.pilot[k] < 1 || pa.pilot[k] > tau_p) {
      throw std::invalid_argument("pilot index out of range");
    }
    if (!(pa.power[k] >= 0.0)) throw std::invalid_argument("pilot power must be >= 0");
    pa.members[static_cast<std::size_t>(pa.pilot[k] - 1)].push_back(k);
  }
  return pa;
}

/// Random balanced assignment: shuffle the UEs, then deal pilots
/// round-robin, so pilot-set sizes differ by at most one.
inline PilotAssignment assign_pilots(std::size_t K, int tau_p, std::uint64_t rng_seed,
                                     std::span<const double> powers) {
  if (tau_p < 1) throw std::invalid_argument("tau_p must be >= 1");
  if (powers.size() != K) throw std::invalid_argument("one pilot power per UE is required");
  std::vector<std::size_t> order(K);
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng(derive_seed(rng_seed, Stream::pilots));
  std::shuffle(order.begin(), order.end(), rng.engine());
  std::vector<int> pilot(K);
  for (std::size_t j = 0; j < K; ++j) {
    pilot[order[j]] = static_cast<int>(j % static_cast<std::size_t>(tau_p)) + 1;
  }
  return make_pilot_assignment(tau_p, std::move(pilot),
                               std::vector<double>(powers.begin(), powers.end()));
}

inline PilotAssignment assign_pilots(std::size_t K, int tau_p, std::uint64_t rng_seed,
                                     double power) {
  const std::vector<double> p(K, power);
  return assign_pilots(K, tau_p, rng_seed, std::span<const double>(p));
}

/// Second-order statistics of the MMSE estimates of h_kl[lambda].
struct EstimationStatistics {
  std::size_t K = 0;
  std::size_t L = 0;
  std::size_t N = 0;
  double sigma2 = 0.0;
  bool uncorrelated = false;

  std::vector<double> pilot_scale;  // rho_k[lambda - t_k] sqrt(p_k)
  Grid<CMatrix> psi;                // (sum_{i in P_k} p_i R_il + sigma2 I)^{-1}
  Grid<CMatrix> estimator;          // pilot_scale_k R_kl Psi_kl
  Grid<CMatrix> Q;                  // estimate covariance
  RMatrix tr_Q;                     // K x L
  std::vector<RMatrix> tr_QR;       // tr_QR[k](i, l) = tr(Q_kl R_il)
  Grid<CVector> tr_Qbar;            // (k, i) -> [tr(Qbar_kil)]_l, only i in P_k
  RMatrix gamma;                    // K x L, set when uncorrelated

  const CVector& c(std::size_t k, std::size_t i) const { return tr_Qbar(k, i); }
};

/// Psi_kl, Q_kl, tr(Qbar_kil) and friends for every (k, l).
///
/// The pilot covariance is Hermitian positive definite for sigma2 > 0, so
/// it is factored once per (pilot, AP) with a Cholesky decomposition and
/// Psi is obtained by solving against that factor.
inline EstimationStatistics estimation_stats(const SpatialCorrelation& corr,
                                             const LargeScaleFading& lsf,
                                             const PilotAssignment& pilots,
                                             const AgingProfile& aging,
                                             const FrameConfig& frame, double sigma2) {
  frame.validate();
  if (!(sigma2 > 0.0)) throw std::invalid_argument("noise power must be positive");
  EstimationStatistics st;
  st.K = corr.R.rows();
  st.L = corr.R.cols();
  st.N = corr.N;
  st.sigma2 = sigma2;
  st.uncorrelated = corr.uncorrelated;
  if (pilots.num_ues() != st.K || aging.num_ues() != st.K) {
    throw std::invalid_argument("pilot assignment / aging profile size mismatch");
  }
  const auto n = static_cast<Eigen::Index>(st.N);
  const int lambda = frame.lambda();

  st.pilot_scale.resize(st.K);
  for (std::size_t k = 0; k < st.K; ++k) {
    st.pilot_scale[k] = aging.rho(k, lambda - pilots.pilot[k]) * std::sqrt(pilots.power[k]);
  }

  st.psi = Grid<CMatrix>(st.K, st.L);
  st.estimator = Grid<CMatrix>(st.K, st.L);
  st.Q = Grid<CMatrix>(st.K, st.L);
  st.tr_Q = RMatrix::Zero(static_cast<Eigen::Index>(st.K), static_cast<Eigen::Index>(st.L));
  st.tr_Qbar = Grid<CVector>(st.K, st.K);
  for (std::size_t k = 0; k < st.K; ++k) {
    for (std::size_t i : pilots.sharing_set(k)) {
      st.tr_Qbar(k, i) = CVector::Zero(static_cast<Eigen::Index>(st.L));
    }
  }

  const CMatrix I = CMatrix::Identity(n, n);
  for (const auto& group : pilots.members) {
    if (group.empty()) continue;
    for (std::size_t l = 0; l < st.L; ++l) {
      CMatrix S = sigma2 * I;
      for (std::size_t i : group) S += pilots.power[i] * corr.R(i, l);
      Eigen::LLT<CMatrix> llt(S);
      if (llt.info() != Eigen::Success) {
        throw ModelError("pilot covariance is not positive definite at AP " +
                         std::to_string(l));
      }
      CMatrix psi = llt.solve(I);
      psi = (psi + psi.adjoint()) / 2.0;
      for (std::size_t k : group) {
        const CMatrix RPsi = corr.R(k, l) * psi;
        const double sk = st.pilot_scale[k];
        CMatrix Q = sk * sk * RPsi * corr.R(k, l);
        Q = (Q + Q.adjoint()) / 2.0;
        st.psi(k, l) = psi;
        st.estimator(k, l) = sk * RPsi;
        st.tr_Q(k, l) = Q.trace().real();
        st.Q(k, l) = std::move(Q);
        for (std::size_t i : group) {
          st.tr_Qbar(k, i)(static_cast<Eigen::Index>(l)) =
              sk * st.pilot_scale[i] * trace_product(corr.R(i, l) * psi, corr.R(k, l));
        }
      }
    }
  }

  st.tr_QR.assign(st.K, RMatrix(static_cast<Eigen::Index>(st.K),
                                static_cast<Eigen::Index>(st.L)));
  for (std::size_t k = 0; k < st.K; ++k) {
    for (std::size_t i = 0; i < st.K; ++i) {
      for (std::size_t l = 0; l < st.L; ++l) {
        st.tr_QR[k](static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(l)) =
            trace_product(st.Q(k, l), corr.R(i, l)).real();
      }
    }
  }

  if (corr.uncorrelated) {
    st.gamma.resize(static_cast<Eigen::Index>(st.K), static_cast<Eigen::Index>(st.L));
    for (std::size_t k = 0; k < st.K; ++k) {
      for (std::size_t l = 0; l < st.L; ++l) {
        double denom = sigma2;
        for (std::size_t i : pilots.sharing_set(k)) denom += pilots.power[i] * lsf.beta(i, l);
        const double sk = st.pilot_scale[k];
        st.gamma(k, l) = sk * sk * lsf.beta(k, l) * lsf.beta(k, l) / denom;
      }
    }
  }

  for (std::size_t k = 0; k < st.K; ++k) {
    if (!st.tr_Q.row(static_cast<Eigen::Index>(k)).allFinite() ||
        !st.tr_QR[k].allFinite()) {
      throw ModelError("non-finite estimation statistic for UE " + std::to_string(k));
    }
  }
  return st;
}

/// Qbar_kil = rho_k[lambda-t_k] sqrt(p_k) rho_i[lambda-t_i] sqrt(p_i) R_il Psi_kl R_kl,
/// defined for i in P_k.
inline CMatrix qbar_matrix(const EstimationStatistics& st, const SpatialCorrelation& corr,
                           const PilotAssignment& pilots, std::size_t k, std::size_t i,
                           std::size_t l) {
  if (!pilots.shares_pilot(k, i)) {
    throw std::invalid_argument("Qbar_kil is only defined for pilot-sharing UEs");
  }
  return st.pilot_scale[k] * st.pilot_scale[i] * corr.R(i, l) * st.psi(k, l) * corr.R(k, l);
}

/// F_kl with F F^H = R_kl, for drawing CN(0, R_kl).
inline Grid<CMatrix> correlation_factors(const SpatialCorrelation& corr) {
  Grid<CMatrix> F(corr.R.rows(), corr.R.cols());
  for (std::size_t k = 0; k < corr.R.rows(); ++k) {
    for (std::size_t l = 0; l < corr.R.cols(); ++l) {
      const CMatrix& R = corr.R(k, l);
      const double scale = R.cwiseAbs().maxCoeff();
      F(k, l) = psd_factor(R, 1e-9 * scale);
    }
  }
  return F;
}

/// Channels at instant lambda and their estimates for every UE at one AP.
struct ApEstimateSample {
  std::vector<CVector> h;        // h_kl[lambda]
  std::vector<CVector> h_pilot;  // h_kl[t_k]
  std::vector<CVector> h_hat;    // MMSE estimate of h_kl[lambda]
};

/// Draws h_il[lambda] ~ CN(0, R_il), pilot-instant innovations f_il[t_i] and
/// pilot noise at AP l, forms the received pilot signals z_l[t] and applies
/// the MMSE estimator.
inline ApEstimateSample sample_estimate_at_ap(const EstimationStatistics& st,
                                              const Grid<CMatrix>& factors,
                                              const PilotAssignment& pilots,
                                              const AgingProfile& aging,
                                              const FrameConfig& frame, std::size_t l,
                                              Rng& rng) {
  const auto n = static_cast<Eigen::Index>(st.N);
  const int lambda = frame.lambda();
  const double noise_std = std::sqrt(st.sigma2);
  ApEstimateSample s;
  s.h.resize(st.K);
  s.h_pilot.resize(st.K);
  s.h_hat.resize(st.K);
  for (std::size_t k = 0; k < st.K; ++k) s.h[k] = rng.complex_normal_vector(factors(k, l));
  for (const auto& group : pilots.members) {
    if (group.empty()) continue;
    CVector z = noise_std * rng.complex_normal_vector(n);
    for (std::size_t i : group) {
      const int lag = lambda - pilots.pilot[i];
      const CVector f = rng.complex_normal_vector(factors(i, l));
      s.h_pilot[i] = aging.rho(i, lag) * s.h[i] + aging.rho_bar(i, lag) * f;
      z += std::sqrt(pilots.power[i]) * s.h_pilot[i];
    }
    for (std::size_t k : group) s.h_hat[k] = st.estimator(k, l) * z;
  }
  return s;
}

/// One joint draw over all APs.
struct EstimateSample {
  Grid<CVector> h;
  Grid<CVector> h_hat;
};

inline EstimateSample sample_estimate(const EstimationStatistics& st,
                                      const Grid<CMatrix>& factors,
                                      const PilotAssignment& pilots,
                                      const AgingProfile& aging, const FrameConfig& frame,
                                      Rng& rng) {
  EstimateSample s;
  s.h = Grid<CVector>(st.K, st.L);
  s.h_hat = Grid<CVector>(st.K, st.L);
  for (std::size_t l = 0; l < st.L; ++l) {
    ApEstimateSample a = sample_estimate_at_ap(st, factors, pilots, aging, frame, l, rng);
    for (std::size_t k = 0; k < st.K; ++k) {
      s.h(k, l) = std::move(a.h[k]);
      s.h_hat(k, l) = std::move(a.h_hat[k]);
    }
  }
  return s;
}

}  // namespace cfmimo
