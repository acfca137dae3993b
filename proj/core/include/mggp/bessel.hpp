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

namespace mggp {

/// Modified Bessel function of the second kind K_nu(z) for nu >= 0, z > 0.
double besselK(double nu, double z);

/// dK_nu/dz = -K_{nu-1}(z) - (nu / z) K_nu(z), with K_{-v} = K_v.
double besselKDerivative(double nu, double z);

}  // namespace mggp
