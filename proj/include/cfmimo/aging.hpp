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

#include "cfmimo/special_functions.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <span>
#include <stdexcept>
#include <vector>

namespace cfmimo {

inline constexpr double kSpeedOfLight = 299792458.0;

/// Resource block layout. Instants are numbered 1..tau_c; pilots occupy
/// 1..tau_p and data runs from lambda = tau_p + 1 to tau_c.
struct FrameConfig {
  int tau_c = 200;
  int tau_p = 10;
  double T_s = 1e-5;  // seconds per instant

  int lambda() const { return tau_p + 1; }
  int data_instants() const { return tau_c - tau_p; }

  void validate() const {
    if (tau_p < 1 || tau_p >= tau_c) {
      throw std::invalid_argument("frame requires 1 <= tau_p < tau_c");
    }
    if (!(T_s > 0.0)) throw std::invalid_argument("T_s must be positive");
  }
};

/// Temporal correlation rho[n] = J0(2 pi f_D T_s n).
inline double rho(double f_D_Ts, int n) {
  if (n < 0) throw std::invalid_argument("rho lag must be non-negative");
  if (n == 0 || f_D_Ts == 0.0) return 1.0;
  return bessel_j0(2.0 * std::numbers::pi * std::fabs(f_D_Ts) * n);
}

/// Longest block whose last instant does not pass the first zero of rho
/// for the fastest UE.
inline int design_tau_c(double f_D_Ts_max) {
  if (!(f_D_Ts_max > 0.0)) {
    throw std::invalid_argument("unbounded block length: f_D_Ts_max must be > 0");
  }
  return static_cast<int>(
      std::floor(bessel_j0_first_zero() / (2.0 * std::numbers::pi * f_D_Ts_max)));
}

/// f_D T_s for a UE moving at speed_mps.
inline double normalized_doppler(double speed_mps, double carrier_hz, double T_s,
                                 double c = kSpeedOfLight) {
  return speed_mps * carrier_hz / c * T_s;
}

/// Per-UE tables rho_k[n] and rho_bar_k[n] = sqrt(1 - rho_k[n]^2) for
/// n = 0..tau_c.
struct AgingProfile {
  std::vector<double> f_D_Ts;
  std::vector<std::vector<double>> rho_table;
  std::vector<std::vector<double>> rho_bar_table;

  std::size_t num_ues() const { return f_D_Ts.size(); }
  double rho(std::size_t k, int lag) const { return rho_table[k].at(lag); }
  double rho_bar(std::size_t k, int lag) const { return rho_bar_table[k].at(lag); }
  double rho2(std::size_t k, int lag) const {
    const double r = rho(k, lag);
    return r * r;
  }
};

inline AgingProfile aging_profile(const FrameConfig& frame,
                                  std::span<const double> f_D_Ts) {
  frame.validate();
  AgingProfile p;
  p.f_D_Ts.assign(f_D_Ts.begin(), f_D_Ts.end());
  p.rho_table.resize(p.f_D_Ts.size());
  p.rho_bar_table.resize(p.f_D_Ts.size());
  for (std::size_t k = 0; k < p.f_D_Ts.size(); ++k) {
    if (!std::isfinite(p.f_D_Ts[k])) {
      throw std::invalid_argument("f_D_Ts must be finite");
    }
    auto& r = p.rho_table[k];
    auto& rb = p.rho_bar_table[k];
    r.resize(static_cast<std::size_t>(frame.tau_c) + 1);
    rb.resize(r.size());
    for (int n = 0; n <= frame.tau_c; ++n) {
      r[n] = cfmimo::rho(p.f_D_Ts[k], n);
      rb[n] = std::sqrt(std::max(0.0, 1.0 - r[n] * r[n]));
    }
  }
  return p;
}

inline AgingProfile aging_profile(const FrameConfig& frame, std::size_t K,
                                  double f_D_Ts) {
  const std::vector<double> v(K, f_D_Ts);
  return aging_profile(frame, std::span<const double>(v));
}

}  // namespace cfmimo
