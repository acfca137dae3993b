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

#include "mggp/bessel.hpp"

#include <cmath>
#include <string>

#include "mggp/errors.hpp"

namespace mggp {

double besselK(double nu, double z) {
  if (!(nu >= 0.0) || !(z > 0.0)) {
    throw ValidationError("besselK needs nu >= 0 and z > 0 (nu=" + std::to_string(nu) + ", z=" + std::to_string(z) + ")");
  }
  // libstdc++ evaluates with Temme's series for small z and Steed's
  // continued fraction above, accurate to a few ulps.
  return std::cyl_bessel_k(nu, z);
}

double besselKDerivative(double nu, double z) {
  return -besselK(std::abs(nu - 1.0), z) - nu / z * besselK(nu, z);
}

}  // namespace mggp
