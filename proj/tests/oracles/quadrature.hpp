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

// Reference values by direct numerical integration. Nothing here calls the
// library's special functions.

#include <cmath>
#include <functional>
#include <numbers>

namespace cfmimo::oracle {

namespace detail {

inline long double simpson(const std::function<long double(long double)>& f, long double a,
                           long double fa, long double b, long double fb, long double m,
                           long double fm, long double whole, long double tol, int depth) {
  const long double lm = 0.5L * (a + m);
  const long double rm = 0.5L * (m + b);
  const long double flm = f(lm);
  const long double frm = f(rm);
  const long double left = (m - a) / 6.0L * (fa + 4.0L * flm + fm);
  const long double right = (b - m) / 6.0L * (fm + 4.0L * frm + fb);
  const long double delta = left + right - whole;
  if (depth <= 0 || std::fabs(delta) <= 15.0L * tol) return left + right + delta / 15.0L;
  return simpson(f, a, fa, m, fm, lm, flm, left, 0.5L * tol, depth - 1) +
         simpson(f, m, fm, b, fb, rm, frm, right, 0.5L * tol, depth - 1);
}

}  // namespace detail

/// Adaptive Simpson on [a, b] with absolute tolerance tol.
inline long double integrate(const std::function<long double(long double)>& f, long double a,
                             long double b, long double tol, int max_depth = 48) {
  const long double m = 0.5L * (a + b);
  const long double fa = f(a), fb = f(b), fm = f(m);
  const long double whole = (b - a) / 6.0L * (fa + 4.0L * fm + fb);
  return detail::simpson(f, a, fa, b, fb, m, fm, whole, tol, max_depth);
}

/// J0(x) = (1/pi) int_0^pi cos(x sin t) dt, summed over half-periods of the
/// integrand so each panel is smooth.
inline double j0(double x) {
  const long double pi = std::numbers::pi_v<long double>;
  const int panels = 8 + static_cast<int>(std::fabs(x));
  long double s = 0.0L;
  for (int i = 0; i < panels; ++i) {
    const long double a = pi * i / panels;
    const long double b = pi * (i + 1) / panels;
    s += integrate([x](long double t) { return std::cos(static_cast<long double>(x) * std::sin(t)); },
                   a, b, 1e-17L);
  }
  return static_cast<double>(s / pi);
}

/// e^x E1(x) = int_0^inf e^{-u} / (x + u) du, mapped to t in [0, 1) with
/// u = t / (1 - t). The range is split at t = x / (1 + x) where the
/// integrand turns over.
inline double scaled_e1(double x) {
  const long double xl = x;
  auto f = [xl](long double t) -> long double {
    if (t >= 1.0L) return 0.0L;
    const long double om = 1.0L - t;
    const long double u = t / om;
    return std::exp(-u) / ((xl + u) * om * om);
  };
  const long double split = xl / (1.0L + xl);
  const long double scale = 1.0L / (1.0L + xl);
  const long double tol = 1e-16L * scale;
  long double s = 0.0L;
  // Geometric panels near zero resolve the 1/(x + u) peak for small x.
  long double lo = 0.0L;
  for (long double hi = std::min(split, 1e-12L); hi < split; hi *= 4.0L) {
    s += integrate(f, lo, hi, tol);
    lo = hi;
  }
  s += integrate(f, lo, split, tol);
  s += integrate(f, split, 1.0L, tol);
  return static_cast<double>(s);
}

/// First positive zero of the quadrature J0, by bisection on [2, 3].
inline double j0_first_zero() {
  double a = 2.0, b = 3.0;
  for (int i = 0; i < 80; ++i) {
    const double m = 0.5 * (a + b);
    if (j0(m) > 0.0) a = m; else b = m;
  }
  return 0.5 * (a + b);
}

}  // namespace cfmimo::oracle
