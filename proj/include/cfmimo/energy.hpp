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

#include <numeric>
#include <stdexcept>
#include <vector>

namespace cfmimo {

/// Hardware power model. Powers in W, bandwidth in Hz, P_bt in W per bit/s.
struct PowerModelParams {
  double pa_efficiency_ue = 0.4;
  double pa_efficiency_ap = 0.4;
  double P_ap = 0.2;      // per AP antenna
  double P_ue = 0.1;
  double P_0 = 0.825;     // fixed fronthaul power per AP
  double P_bt = 0.25e-9;  // traffic-dependent fronthaul power
  double bandwidth = 20e6;
  // When false the transmit terms use p * sigma^2 as written in the power
  // model; when true they use the radiated power p directly.
  bool normalized_snr = false;

  void validate() const {
    if (!(pa_efficiency_ue > 0.0 && pa_efficiency_ue <= 1.0) ||
        !(pa_efficiency_ap > 0.0 && pa_efficiency_ap <= 1.0)) {
      throw std::invalid_argument("PA efficiency must lie in (0, 1]");
    }
    if (P_ap < 0.0 || P_ue < 0.0 || P_0 < 0.0 || P_bt < 0.0) {
      throw std::invalid_argument("power model entries must be non-negative");
    }
    if (!(bandwidth > 0.0)) throw std::invalid_argument("bandwidth must be positive");
  }
};

struct PowerBreakdown {
  double tx_ul = 0.0;
  double tx_dl = 0.0;
  double circuit = 0.0;
  double fronthaul_traffic = 0.0;  // part of circuit that scales with SE_sum
  double total = 0.0;
};

/// SE_sum = sum_k (SE_lsfd[k] + SE_coh[k]) / 2.
inline double sum_se(const std::vector<double>& se_lsfd, const std::vector<double>& se_coh) {
  if (se_lsfd.size() != se_coh.size()) throw std::invalid_argument("SE vectors differ in size");
  double s = 0.0;
  for (std::size_t k = 0; k < se_lsfd.size(); ++k) s += 0.5 * (se_lsfd[k] + se_coh[k]);
  return s;
}

inline double circuit_power(const PowerModelParams& pm, std::size_t K, std::size_t L,
                            std::size_t N, double se_sum) {
  pm.validate();
  const double Ld = static_cast<double>(L);
  return static_cast<double>(K) * pm.P_ue + Ld * static_cast<double>(N) * pm.P_ap +
         Ld * pm.P_0 + Ld * pm.bandwidth * se_sum * pm.P_bt;
}

/// Total power of one uplink + downlink resource block.
inline PowerBreakdown total_power(const PowerModelParams& pm, const FrameConfig& frame,
                                  const std::vector<double>& eta, double p_u, const RMatrix& mu,
                                  const RMatrix& tr_Q, double p_d, double sigma2, std::size_t N,
                                  double se_sum) {
  pm.validate();
  frame.validate();
  const double su = pm.normalized_snr ? p_u : p_u * sigma2;
  const double sd = pm.normalized_snr ? p_d : p_d * sigma2;
  PowerBreakdown b;
  b.tx_ul = su * std::accumulate(eta.begin(), eta.end(), 0.0) / pm.pa_efficiency_ue;
  b.tx_dl = sd * mu.cwiseProduct(tr_Q).sum() / pm.pa_efficiency_ap;
  const auto L = static_cast<std::size_t>(tr_Q.cols());
  b.circuit = circuit_power(pm, eta.size(), L, N, se_sum);
  b.fronthaul_traffic = static_cast<double>(L) * pm.bandwidth * se_sum * pm.P_bt;
  const double tc = frame.tau_c;
  const double tp = frame.tau_p;
  b.total = (tc + tp) / (2.0 * tc) * b.tx_ul + (tc - tp) / (2.0 * tc) * b.tx_dl + b.circuit;
  return b;
}

/// Energy efficiency in bit/J.
inline double energy_efficiency(const PowerModelParams& pm, double se_sum, double p_total) {
  if (!(p_total > 0.0)) throw std::invalid_argument("total power must be positive");
  return pm.bandwidth * se_sum / p_total;
}

}  // namespace cfmimo
