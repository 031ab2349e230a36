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

#include "cfmimo/linalg.hpp"
#include "cfmimo/random.hpp"

#include <cmath>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <utility>
#include <vector>

namespace cfmimo {

struct SystemDims {
  std::size_t L = 1;  // APs
  std::size_t K = 1;  // UEs
  std::size_t N = 1;  // antennas per AP

  void validate() const {
    if (L == 0 || K == 0 || N == 0) {
      throw std::invalid_argument("system dimensions L, K, N must all be >= 1");
    }
  }
};

struct Point {
  double x = 0.0;
  double y = 0.0;
};

inline double distance(const Point& a, const Point& b) {
  return std::hypot(a.x - b.x, a.y - b.y);
}

struct ScenarioGeometry {
  std::vector<Point> ap_positions;
  std::vector<Point> ue_positions;
  RMatrix d;        // K x L, UE-AP horizontal distance (m)
  RMatrix delta;    // K x K, UE-UE distance (m)
  RMatrix upsilon;  // L x L, AP-AP distance (m)
  double area_side = 0.0;

  std::size_t num_aps() const { return ap_positions.size(); }
  std::size_t num_ues() const { return ue_positions.size(); }
};

struct LargeScaleFading {
  RMatrix beta;          // K x L, linear power gain
  RMatrix shadowing_db;  // K x L, zero where the pair is closer than 50 m

  RMatrix beta_db() const {
    return beta.unaryExpr([](double b) { return linear_to_db(b); });
  }
};

struct Drop {
  ScenarioGeometry geometry;
  LargeScaleFading fading;
};

inline constexpr double kShadowingStdDb = 8.0;
inline constexpr double kShadowingDecorrelationM = 100.0;
inline constexpr double kShadowingMinDistanceM = 50.0;

/// Three-slope pathloss in dB, without the shadowing term.
inline double pathloss_db(double d_m) {
  if (d_m < 10.0) return -81.2;
  if (d_m < 50.0) return -61.2 - 20.0 * std::log10(d_m);
  return -35.7 - 35.0 * std::log10(d_m);
}

/// Covariance E{F_kl F_ij} in dB^2 for UE distance delta and AP distance
/// upsilon.
inline double shadowing_covariance_entry(double delta_m, double upsilon_m) {
  const double var = kShadowingStdDb * kShadowingStdDb;
  return var / 2.0 *
         (std::exp2(-delta_m / kShadowingDecorrelationM) +
          std::exp2(-upsilon_m / kShadowingDecorrelationM));
}

/// Builds all pairwise distances from explicit positions.
inline ScenarioGeometry make_geometry(std::vector<Point> aps, std::vector<Point> ues,
                                      double area_side) {
  ScenarioGeometry g;
  g.ap_positions = std::move(aps);
  g.ue_positions = std::move(ues);
  g.area_side = area_side;
  const auto L = static_cast<Eigen::Index>(g.ap_positions.size());
  const auto K = static_cast<Eigen::Index>(g.ue_positions.size());
  g.d.resize(K, L);
  g.delta.resize(K, K);
  g.upsilon.resize(L, L);
  for (Eigen::Index k = 0; k < K; ++k) {
    for (Eigen::Index l = 0; l < L; ++l) {
      g.d(k, l) = distance(g.ue_positions[k], g.ap_positions[l]);
    }
    for (Eigen::Index i = 0; i < K; ++i) {
      g.delta(k, i) = distance(g.ue_positions[k], g.ue_positions[i]);
    }
  }
  for (Eigen::Index l = 0; l < L; ++l) {
    for (Eigen::Index j = 0; j < L; ++j) {
      g.upsilon(l, j) = distance(g.ap_positions[l], g.ap_positions[j]);
    }
  }
  return g;
}

/// Joint covariance of the shadowing terms that are actually applied, i.e.
/// over the (k, l) pairs with d_kl >= 50 m, listed k-major.
struct ShadowingCovariance {
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  RMatrix cov;
};

inline ShadowingCovariance shadowing_covariance(const ScenarioGeometry& g) {
  ShadowingCovariance out;
  for (std::size_t k = 0; k < g.num_ues(); ++k) {
    for (std::size_t l = 0; l < g.num_aps(); ++l) {
      if (g.d(k, l) >= kShadowingMinDistanceM) out.pairs.emplace_back(k, l);
    }
  }
  const auto n = static_cast<Eigen::Index>(out.pairs.size());
  out.cov.resize(n, n);
  for (Eigen::Index a = 0; a < n; ++a) {
    const auto [k, l] = out.pairs[a];
    for (Eigen::Index b = a; b < n; ++b) {
      const auto [i, j] = out.pairs[b];
      const double c = shadowing_covariance_entry(g.delta(k, i), g.upsilon(l, j));
      out.cov(a, b) = c;
      out.cov(b, a) = c;
    }
  }
  return out;
}

/// Checks that the assembled covariance is PSD up to the repair tolerance
/// and returns its symmetric square root.
inline RMatrix shadowing_covariance_sqrt(const ShadowingCovariance& sc) {
  return symmetric_sqrt(sc.cov, 1e-6);
}

/// Draws F_kl (dB) for every pair with d_kl >= 50 m.
///
/// The covariance 32 (2^{-delta_ki/100} + 2^{-upsilon_lj/100}) is the sum of
/// a UE-indexed and an AP-indexed kernel, so F_kl = a_k + b_l with
/// independent a ~ N(0, A), b ~ N(0, B) has exactly that covariance. This
/// needs square roots of a K x K and an L x L matrix instead of one of order
/// K L.
inline RMatrix sample_shadowing(const ScenarioGeometry& g, Rng& rng) {
  const auto K = static_cast<Eigen::Index>(g.num_ues());
  const auto L = static_cast<Eigen::Index>(g.num_aps());
  const double half_var = kShadowingStdDb * kShadowingStdDb / 2.0;
  RMatrix A(K, K);
  RMatrix B(L, L);
  for (Eigen::Index k = 0; k < K; ++k) {
    for (Eigen::Index i = 0; i < K; ++i) {
      A(k, i) = half_var * std::exp2(-g.delta(k, i) / kShadowingDecorrelationM);
    }
  }
  for (Eigen::Index l = 0; l < L; ++l) {
    for (Eigen::Index j = 0; j < L; ++j) {
      B(l, j) = half_var * std::exp2(-g.upsilon(l, j) / kShadowingDecorrelationM);
    }
  }
  RVector za(K);
  RVector zb(L);
  for (Eigen::Index k = 0; k < K; ++k) za(k) = rng.normal();
  for (Eigen::Index l = 0; l < L; ++l) zb(l) = rng.normal();
  const RVector a = symmetric_sqrt(A, 1e-6) * za;
  const RVector b = symmetric_sqrt(B, 1e-6) * zb;

  RMatrix F = RMatrix::Zero(K, L);
  for (Eigen::Index k = 0; k < K; ++k) {
    for (Eigen::Index l = 0; l < L; ++l) {
      if (g.d(k, l) >= kShadowingMinDistanceM) F(k, l) = a(k) + b(l);
    }
  }
  return F;
}

inline LargeScaleFading large_scale_fading(const ScenarioGeometry& g,
                                           const RMatrix& shadowing_db) {
  LargeScaleFading f;
  f.shadowing_db = shadowing_db;
  f.beta.resize(g.d.rows(), g.d.cols());
  for (Eigen::Index k = 0; k < g.d.rows(); ++k) {
    for (Eigen::Index l = 0; l < g.d.cols(); ++l) {
      f.beta(k, l) = db_to_linear(pathloss_db(g.d(k, l)) + shadowing_db(k, l));
    }
  }
  return f;
}

/// One random network realization: APs and UEs i.i.d. uniform in the
/// square [0, area_side]^2, three-slope pathloss and (optionally) correlated
/// shadowing. Deterministic in rng_seed.
inline Drop generate_drop(const SystemDims& dims, double area_side,
                          std::uint64_t rng_seed, bool shadowing) {
  dims.validate();
  if (!(area_side > 0.0) || !std::isfinite(area_side)) {
    throw std::invalid_argument("area side must be positive");
  }
  Rng rng(derive_seed(rng_seed, Stream::geometry));
  std::vector<Point> aps(dims.L);
  std::vector<Point> ues(dims.K);
  for (auto& p : aps) {
    p.x = rng.uniform(0.0, area_side);
    p.y = rng.uniform(0.0, area_side);
  }
  for (auto& p : ues) {
    p.x = rng.uniform(0.0, area_side);
    p.y = rng.uniform(0.0, area_side);
  }
  Drop drop;
  drop.geometry = make_geometry(std::move(aps), std::move(ues), area_side);
  RMatrix F = RMatrix::Zero(static_cast<Eigen::Index>(dims.K),
                            static_cast<Eigen::Index>(dims.L));
  if (shadowing) {
    Rng srng(derive_seed(rng_seed, Stream::shadowing));
    F = sample_shadowing(drop.geometry, srng);
  }
  drop.fading = large_scale_fading(drop.geometry, F);
  return drop;
}

// ---------------------------------------------------------------------------
// Spatial correlation

/// Angular spread selector: a finite ASD in degrees, or spatially
/// uncorrelated fading (R = beta I exactly).
struct AngularSpread {
  bool uncorrelated = false;
  double asd_deg = 0.0;

  static AngularSpread uncorrelated_fading() { return {true, 0.0}; }
  static AngularSpread degrees(double asd) { return {false, asd}; }
};

struct SpatialCorrelation {
  std::size_t N = 1;
  bool uncorrelated = false;
  double asd_deg = 0.0;
  Grid<CMatrix> R;        // K x L of N x N
  RMatrix nominal_angle;  // K x L, radians
};

/// Gaussian local scattering model for a half-wavelength ULA:
/// [R]_{m,n} = beta e^{j pi (m-n) sin phi} e^{-(sigma pi (m-n) cos phi)^2 / 2}.
/// Diagonal entries equal beta, so tr(R) = N beta.
inline CMatrix local_scattering_ula(std::size_t N, double beta, double angle,
                                    double asd_rad) {
  if (!std::isfinite(angle)) {
    throw std::invalid_argument("nominal angle must be finite");
  }
  const auto n = static_cast<Eigen::Index>(N);
  CMatrix R(n, n);
  const double s = std::sin(angle);
  const double c = std::cos(angle);
  for (Eigen::Index m = 0; m < n; ++m) {
    R(m, m) = beta;
    for (Eigen::Index q = m + 1; q < n; ++q) {
      const double dist = static_cast<double>(m - q);
      const double phase = std::numbers::pi * dist * s;
      const double spread = asd_rad * std::numbers::pi * dist * c;
      const cd v = beta * std::exp(-spread * spread / 2.0) *
                   cd(std::cos(phase), std::sin(phase));
      R(m, q) = v;
      R(q, m) = std::conj(v);
    }
  }
  return R;
}

/// Per-pair spatial correlation matrices. The nominal angle is measured from
/// the array broadside, which points along +x for every AP.
inline SpatialCorrelation build_correlation(const SystemDims& dims,
                                            const ScenarioGeometry& g,
                                            const LargeScaleFading& lsf,
                                            const AngularSpread& spread) {
  dims.validate();
  if (!spread.uncorrelated && !(spread.asd_deg > 0.0)) {
    throw std::invalid_argument("ASD must be positive unless uncorrelated");
  }
  SpatialCorrelation sc;
  sc.N = dims.N;
  sc.uncorrelated = spread.uncorrelated;
  sc.asd_deg = spread.asd_deg;
  sc.R = Grid<CMatrix>(dims.K, dims.L);
  sc.nominal_angle = RMatrix::Zero(static_cast<Eigen::Index>(dims.K),
                                   static_cast<Eigen::Index>(dims.L));
  const auto n = static_cast<Eigen::Index>(dims.N);
  const double asd_rad = spread.asd_deg * std::numbers::pi / 180.0;
  for (std::size_t k = 0; k < dims.K; ++k) {
    for (std::size_t l = 0; l < dims.L; ++l) {
      const double beta = lsf.beta(k, l);
      const Point& ue = g.ue_positions[k];
      const Point& ap = g.ap_positions[l];
      const double angle = std::atan2(ue.y - ap.y, ue.x - ap.x);
      sc.nominal_angle(k, l) = angle;
      if (spread.uncorrelated) {
        sc.R(k, l) = beta * CMatrix::Identity(n, n);
      } else {
        sc.R(k, l) = local_scattering_ula(dims.N, beta, angle, asd_rad);
      }
    }
  }
  return sc;
}

}  // namespace cfmimo
