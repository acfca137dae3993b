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

#include <cstdint>
#include <optional>
#include <random>

#include <Eigen/Core>

namespace mggp {

/// Seeded 64-bit generator with platform-independent variate transforms.
///
/// std::mt19937_64 output is fixed by the standard, but the standard
/// distributions are not, so uniforms and normals are derived here directly.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform on [0, 1) with 53 random bits.
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  /// Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n);
  /// Standard normal (Marsaglia polar method).
  double normal();
  Eigen::VectorXd normalVector(Eigen::Index n);

 private:
  std::mt19937_64 engine_;
  std::optional<double> spare_;
};

/// Seed for the index-th replicate, trial, or chain derived from a master seed.
inline std::uint64_t deriveSeed(std::uint64_t seed, std::uint64_t index) { return seed + index; }

}  // namespace mggp
