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
#include <iosfwd>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Cholesky>
#include <Eigen/Core>

#include "mggp/groups.hpp"
#include "mggp/kernels.hpp"

namespace mggp {

/// Inputs, group indices, responses, and an optional block-diagonal design.
struct GroupedDataset {
  Eigen::MatrixXd X;
  std::vector<int> groups;
  Eigen::VectorXd y;
  /// n x q design F. Column j belongs to group designGroups[j].
  std::optional<Eigen::MatrixXd> design;
  std::vector<int> designGroups;

  Eigen::Index size() const noexcept { return y.size(); }
  int p() const noexcept { return static_cast<int>(X.cols()); }
  Eigen::Index designColumns() const noexcept { return design ? design->cols() : 0; }
  std::vector<int> groupSizes(int k) const;

  /// Throws ValidationError on shape mismatch, out-of-range groups, or design
  /// entries outside their row's column block.
  void validate(int k) const;

  /// The listed rows, in the given order. Design columns are kept as is.
  GroupedDataset subset(const std::vector<Eigen::Index>& rows) const;
};

/// One indicator column per group present in the data (group intercepts).
void attachInterceptDesign(GroupedDataset& data, int k);

struct NoiseSpec {
  enum class Mode { kShared, kPerGroup };
  Mode mode = Mode::kShared;
  std::vector<double> values{1.0};

  static NoiseSpec shared(double tau2) { return {Mode::kShared, {tau2}}; }
  static NoiseSpec perGroup(std::vector<double> tau2) { return {Mode::kPerGroup, std::move(tau2)}; }

  double variance(int group) const { return mode == Mode::kShared ? values.front() : values.at(group); }
  void validate(int k, bool allowZero = false) const;
  std::vector<std::string> parameterNames(const GroupSpace& space) const;

  friend bool operator==(const NoiseSpec&, const NoiseSpec&) = default;
};

struct CholeskyResult {
  Eigen::LLT<Eigen::MatrixXd> llt;
  double jitter = 0.0;
  int ladderStep = 0;
};

/// Factorizes M + jitter I, escalating jitter through
/// {0, 1e-10, 1e-8, 1e-6, 1e-4} * mean(diag M).
CholeskyResult choleskyWithJitter(const Eigen::MatrixXd& M);

struct ProfiledBeta {};
/// Either profile beta by generalized least squares or fix it.
using BetaChoice = std::variant<ProfiledBeta, Eigen::VectorXd>;

struct LikelihoodResult {
  double value = 0.0;
  Eigen::VectorXd beta;
  double jitter = 0.0;
};

/// log N(y | F beta, K + D_tau).
LikelihoodResult logMarginalLikelihood(const KernelSpec& spec, const GroupedDataset& data, const NoiseSpec& noise,
                                       const BetaChoice& beta = ProfiledBeta{});

struct LikelihoodGradient {
  double value = 0.0;
  Eigen::VectorXd beta;
  /// Kernel parameter names followed by noise parameter names.
  std::vector<std::string> names;
  /// Derivatives with respect to the logarithm of each named parameter.
  Eigen::VectorXd gradient;
};

LikelihoodGradient logMarginalLikelihoodGradient(const KernelSpec& spec, const GroupedDataset& data,
                                                 const NoiseSpec& noise, const BetaChoice& beta = ProfiledBeta{});

enum class PredictMode { kResponse, kLatent };

struct PredictOptions {
  bool covariance = false;
  PredictMode mode = PredictMode::kResponse;
  /// Subtract per-group training means before fitting and add them back after.
  bool centerByGroup = false;

  /// Centered kriging mean K_*X (K_XX + D)^{-1} y with latent variances.
  static PredictOptions benchmark() { return {false, PredictMode::kLatent, true}; }
};

struct QuerySet {
  Eigen::MatrixXd X;
  std::vector<int> groups;
  /// Required when the training data carries a design.
  std::optional<Eigen::MatrixXd> design;
};

struct PredictiveDistribution {
  Eigen::VectorXd mean;
  Eigen::VectorXd variance;
  std::optional<Eigen::MatrixXd> covariance;
  std::vector<int> queryGroups;
  /// True when some variance was clamped at zero by more than 1e-8.
  bool clamped = false;
};

PredictiveDistribution predict(const KernelSpec& spec, const GroupedDataset& data, const NoiseSpec& noise,
                               const BetaChoice& beta, const QuerySet& queries,
                               const PredictOptions& options = {});

/// Design rows of group-intercept indicators for queries, matching the
/// training design's column ownership.
Eigen::MatrixXd interceptQueryDesign(const GroupedDataset& data, const std::vector<int>& queryGroups);

struct LatentConditional {
  Eigen::VectorXd mean;
  Eigen::MatrixXd covariance;
};

/// Z | y ~ N(K (K + D)^{-1} m, K - K (K + D)^{-1} K) with m = y - F beta.
LatentConditional latentConditional(const KernelSpec& spec, const GroupedDataset& data, const NoiseSpec& noise,
                                    const BetaChoice& beta);

/// One draw of Z from latentConditional using Rng(seed).
Eigen::VectorXd recoverLatent(const KernelSpec& spec, const GroupedDataset& data, const NoiseSpec& noise,
                              const BetaChoice& beta, std::uint64_t seed);

/// Header group,y,x1..xp[,f1..fq]; labels resolve against the space.
GroupedDataset readDatasetCsv(std::istream& in, const GroupSpace& space);
void writeDatasetCsv(std::ostream& out, const GroupedDataset& data, const GroupSpace& space);

}  // namespace mggp
