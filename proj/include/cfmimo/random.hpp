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

#include <cstdint>
#include <initializer_list>
#include <random>

namespace cfmimo {

/// Purpose tags mixed into derived seeds so that geometry, shadowing, pilot
/// assignment and Monte Carlo trials never share a stream.
enum class Stream : std::uint64_t {
  geometry = 0x67656f,
  shadowing = 0x736864,
  pilots = 0x706c74,
  trial = 0x74726c,
  smallcell = 0x736d63,
  drop = 0x64726f,
  bootstrap = 0x627374,
};

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Seed for the stream identified by (seed, tag, path...). Every (drop,
/// trial) pair gets its own generator, so results never depend on which
/// worker ran which trial.
inline std::uint64_t derive_seed(std::uint64_t seed, Stream tag,
                                 std::initializer_list<std::uint64_t> path = {}) {
  std::uint64_t h = splitmix64(seed ^ splitmix64(static_cast<std::uint64_t>(tag)));
  for (std::uint64_t p : path) {
    h = splitmix64(h ^ splitmix64(p + 0x632be59bd9b4e019ULL));
  }
  return h;
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double normal() { return normal_(engine_); }
  double uniform() { return uniform_(engine_); }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Circularly symmetric complex Gaussian with the given variance.
  cd complex_normal(double variance = 1.0) {
    const double s = std::sqrt(variance / 2.0);
    const double re = normal();
    const double im = normal();
    return {s * re, s * im};
  }

  /// CN(0, I_n) vector.
  CVector complex_normal_vector(Eigen::Index n) {
    CVector v(n);
    for (Eigen::Index i = 0; i < n; ++i) v(i) = complex_normal();
    return v;
  }

  /// CN(0, F F^H) vector from a precomputed factor.
  CVector complex_normal_vector(const CMatrix& factor) {
    return factor * complex_normal_vector(factor.cols());
  }

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
  std::uniform_real_distribution<double> uniform_{0.0, 1.0};
};

}  // namespace cfmimo
