/*
 * Copyright 2026 The mggp Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 *
 */

#pragma once

#include <cmath>

#include "mggp/bessel.hpp"

namespace mggp::detail {

/// Forward-mode dual number carrying one directional derivative.
struct Dual {
  double v = 0.0;
  double d = 0.0;

  Dual() = default;
  Dual(double value) : v(value) {}  // NOLINT: implicit lift of constants
  Dual(double value, double deriv) : v(value), d(deriv) {}
};

inline Dual operator-(Dual x) { return {-x.v, -x.d}; }
inline Dual operator+(Dual x, Dual y) { return {x.v + y.v, x.d + y.d}; }
inline Dual operator-(Dual x, Dual y) { return {x.v - y.v, x.d - y.d}; }
inline Dual operator*(Dual x, Dual y) { return {x.v * y.v, x.d * y.v + x.v * y.d}; }
inline Dual operator/(Dual x, Dual y) { return {x.v / y.v, (x.d * y.v - x.v * y.d) / (y.v * y.v)}; }
inline Dual operator+(Dual x, double y) { return {x.v + y, x.d}; }
inline Dual operator+(double x, Dual y) { return {x + y.v, y.d}; }
inline Dual operator-(Dual x, double y) { return {x.v - y, x.d}; }
inline Dual operator-(double x, Dual y) { return {x - y.v, -y.d}; }
inline Dual operator*(Dual x, double y) { return {x.v * y, x.d * y}; }
inline Dual operator*(double x, Dual y) { return {x * y.v, x * y.d}; }
inline Dual operator/(Dual x, double y) { return {x.v / y, x.d / y}; }
inline Dual operator/(double x, Dual y) { return {x / y.v, -x * y.d / (y.v * y.v)}; }

inline Dual exp(Dual x) {
  const double e = std::exp(x.v);
  return {e, e * x.d};
}
inline Dual log(Dual x) { return {std::log(x.v), x.d / x.v}; }
inline Dual log1p(Dual x) { return {std::log1p(x.v), x.d / (1.0 + x.v)}; }
inline Dual sqrt(Dual x) {
  const double s = std::sqrt(x.v);
  return {s, s > 0.0 ? 0.5 * x.d / s : 0.0};
}
inline Dual pow(Dual x, double e) {
  const double p = std::pow(x.v, e);
  if (x.d == 0.0) return {p, 0.0};
  return {p, e * std::pow(x.v, e - 1.0) * x.d};
}
inline Dual besselK(double nu, Dual z) {
  return {mggp::besselK(nu, z.v), mggp::besselKDerivative(nu, z.v) * z.d};
}

inline double value(double x) { return x; }
inline double value(const Dual& x) { return x.v; }

}  // namespace mggp::detail
