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
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "mggp/kernels.hpp"

namespace mggp {

enum class Verdict { kCertifiedPD, kCertifiedNotPD, kProbePassed, kProbeFailed };

std::string_view verdictName(Verdict verdict);
Verdict parseVerdict(std::string_view name);

struct PDReport {
  Verdict verdict = Verdict::kProbePassed;
  std::string evidence;
  double tolerance = 0.0;
  /// Offending eigenvalue (categorical and Monte-Carlo checks).
  std::optional<double> witnessEigenvalue;
  /// Frequency at which a spectral condition fails.
  std::optional<Eigen::VectorXd> witnessFrequency;
  /// Seed of the failing Monte-Carlo trial.
  std::optional<std::uint64_t> witnessSeed;

  bool positive() const noexcept {
    return verdict == Verdict::kCertifiedPD || verdict == Verdict::kProbePassed;
  }
};

/// Eigenvalue certificate for a k x k categorical covariance matrix.
PDReport checkCategoricalMatrix(const Eigen::MatrixXd& C);

/// (1 - b) I + b 1 1^T on k groups is PD iff -1/(k-1) <= b <= 1.
PDReport checkHomogeneousBound(int k, double b);

/// The k x k homogeneous matrix with unit diagonal and off-diagonal b.
Eigen::MatrixXd homogeneousMatrix(int k, double b);

using SpectralDensity = std::function<double(const Eigen::VectorXd&)>;

/// Grid probe of rhoW >= rhoC for a two-group stationary kernel.
PDReport checkTwoGroupSpectral(const SpectralDensity& rhoW, const SpectralDensity& rhoC,
                               const std::vector<Eigen::VectorXd>& grid);

/// Grid probe of rho0 rho1 >= rhoC^2.
PDReport checkSemiStationarySpectral(const SpectralDensity& rho0, const SpectralDensity& rhoC,
                                     const SpectralDensity& rho1, const std::vector<Eigen::VectorXd>& grid);

/// 201 log-spaced norms in [1e-3, 1e2] along each of the p coordinate axes.
std::vector<Eigen::VectorXd> defaultSpectralGrid(int p, int points = 201, double lo = 1e-3, double hi = 1e2);

/// Spectral densities of the MG-RBF kernel on two groups at unit distance.
SpectralDensity rbfWithinDensity(double sigma2, double b, int p);
SpectralDensity rbfCrossDensity(double sigma2, double a, double b, int p);

/// Randomized eigenvalue probe: each trial draws X uniform on [0, 1]^{n x p}
/// and uniform group labels, using seed + trial.
PDReport monteCarloPD(const KernelSpec& spec, int trials, int n, std::uint64_t seed);

}  // namespace mggp
