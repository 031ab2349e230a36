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

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace cfmimo {

namespace detail {

// Power series sum_m (-1)^m (x/2)^{2m} / (m!)^2, accumulated in long double.
// The largest term near x = 17 is about 2e5; long double absorbs the
// cancellation.
inline double j0_series(double x) {
  const long double q = static_cast<long double>(x) * x / 4.0L;
  long double term = 1.0L;
  long double sum = 1.0L;
  for (int m = 1; m < 200; ++m) {
    term *= -q / (static_cast<long double>(m) * m);
    sum += term;
    if (std::fabs(term) < 1e-22L) break;
  }
  return static_cast<double>(sum);
}

// Hankel asymptotic expansion, truncated at the smallest term.
inline double j0_asymptotic(double x) {
  const double eight_x = 8.0 * x;
  double p = 1.0;
  double q = 0.0;
  double u = 1.0;
  double prev = std::numeric_limits<double>::infinity();
  for (int k = 1; k < 60; ++k) {
    const double odd = 2.0 * k - 1.0;
    u *= -(odd * odd) / (k * eight_x);
    if (std::fabs(u) >= prev) break;
    prev = std::fabs(u);
    // u_k enters P for even k and Q for odd k with alternating signs.
    switch (k % 4) {
      case 0: p += u; break;
      case 1: q += u; break;
      case 2: p -= u; break;
      case 3: q -= u; break;
    }
    if (std::fabs(u) < 1e-17) break;
  }
  const double chi = x - std::numbers::pi / 4.0;
  return std::sqrt(2.0 / (std::numbers::pi * x)) *
         (p * std::cos(chi) - q * std::sin(chi));
}

}  // namespace detail

/// Zeroth-order Bessel function of the first kind.
inline double bessel_j0(double x) {
  x = std::fabs(x);
  if (x < 17.0) return detail::j0_series(x);
  return detail::j0_asymptotic(x);
}

/// First positive root of J0, located by bisection on bessel_j0.
inline double bessel_j0_first_zero() {
  static const double root = [] {
    double lo = 2.0;
    double hi = 3.0;
    for (int i = 0; i < 200 && hi - lo > 1e-15; ++i) {
      const double mid = 0.5 * (lo + hi);
      if (bessel_j0(mid) > 0.0) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    return 0.5 * (lo + hi);
  }();
  return root;
}

namespace detail {

// E1(x) = -gamma - ln x - sum_k (-x)^k / (k k!), used for 0 < x < 1.
inline double e1_series(double x) {
  constexpr double euler_gamma = 0.57721566490153286060651209;
  double sum = 0.0;
  double term = 1.0;
  for (int k = 1; k < 100; ++k) {
    term *= -x / k;
    const double add = -term / k;
    sum += add;
    if (std::fabs(add) < 1e-18 * std::fabs(sum)) break;
  }
  return -euler_gamma - std::log(x) + sum;
}

// Modified Lentz on e^x E1(x) = 1/(x+1- 1/(x+3- 4/(x+5- ...))), x >= 1.
inline double scaled_e1_fraction(double x) {
  constexpr double tiny = 1e-300;
  double b = x + 1.0;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < 1000; ++i) {
    const double an = -static_cast<double>(i) * i;
    b += 2.0;
    d = 1.0 / (an * d + b);
    c = b + an / c;
    const double del = c * d;
    h *= del;
    if (std::fabs(del - 1.0) < 1e-16) break;
  }
  return h;
}

}  // namespace detail

/// e^x E1(x) for x > 0.
///
/// For x >= 1 the continued fraction is evaluated directly in scaled form,
/// so the product stays finite where e^x overflows and E1(x) underflows.
inline double scaled_expint_e1(double x) {
  if (!(x > 0.0)) {
    throw std::domain_error("scaled_expint_e1 requires x > 0");
  }
  if (std::isinf(x)) return 0.0;
  if (x < 1.0) return std::exp(x) * detail::e1_series(x);
  return detail::scaled_e1_fraction(x);
}

/// Exponential integral E1(x) = int_1^inf e^{-xu}/u du, x > 0.
inline double expint_e1(double x) {
  if (!(x > 0.0)) {
    throw std::domain_error("expint_e1 requires x > 0");
  }
  if (x < 1.0) return detail::e1_series(x);
  return detail::scaled_e1_fraction(x) * std::exp(-x);
}

}  // namespace cfmimo
