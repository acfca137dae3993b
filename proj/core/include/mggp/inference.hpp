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
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "mggp/gp.hpp"
#include "mggp/kernels.hpp"

namespace mggp {

/// A kernel and noise template. Names in `fixed` keep their template values.
struct ModelTemplate {
  KernelSpec kernel;
  NoiseSpec noise;
  std::vector<std::string> fixed;
};

/// Maps between an unconstrained vector (log of each free positive parameter,
/// then optionally beta) and concrete kernel, noise, and beta values.
class ParameterMap {
 public:
  ParameterMap(const ModelTemplate& model, Eigen::Index betaSize = 0);

  Eigen::Index size() const noexcept { return static_cast<Eigen::Index>(names_.size()) + betaSize_; }
  Eigen::Index logSize() const noexcept { return static_cast<Eigen::Index>(names_.size()); }
  Eigen::Index betaSize() const noexcept { return betaSize_; }
  /// Names of the log-scale coordinates, then beta1..betaq.
  std::vector<std::string> coordinateNames() const;
  const std::vector<std::string>& logNames() const noexcept { return names_; }

  KernelSpec kernel(const Eigen::VectorXd& point) const;
  NoiseSpec noise(const Eigen::VectorXd& point) const;
  Eigen::VectorXd beta(const Eigen::VectorXd& point) const;
  Eigen::VectorXd pack(const KernelSpec& kernel, const NoiseSpec& noise, const Eigen::VectorXd& beta = {}) const;

  /// Positions of the log coordinates inside the full gradient returned by
  /// logMarginalLikelihoodGradient.
  const std::vector<Eigen::Index>& gradientIndex() const noexcept { return gradientIndex_; }

 private:
  ModelTemplate model_;
  std::vector<std::string> names_;
  std::vector<bool> isNoise_;
  std::vector<int> noiseSlot_;
  std::vector<Eigen::Index> gradientIndex_;
  Eigen::Index betaSize_ = 0;
};

struct FitOptions {
  int restarts = 5;
  int maxIter = 500;
  double gradTol = 1e-6;
  std::uint64_t seed = 0;
  /// Initial log parameters are log(heuristic) + U(initLow, initHigh).
  double initLow = -3.0;
  double initHigh = 1.0;
  /// Box on every log parameter.
  double logLower = -18.420680743952367;  // log 1e-8
  double logUpper = 18.420680743952367;   // log 1e8
};

struct RestartRecord {
  std::uint64_t seed = 0;
  double initialLogLik = 0.0;
  double logLik = 0.0;
  int iterations = 0;
  bool converged = false;
  double gradientNorm = 0.0;
  bool failed = false;
  std::string message;
};

struct FitResult {
  KernelSpec kernel;
  NoiseSpec noise;
  Eigen::VectorXd beta;
  double logLik = 0.0;
  int iterations = 0;
  bool converged = false;
  double gradientNorm = 0.0;
  std::vector<RestartRecord> restarts;
};

/// Multi-start maximization of the profiled log marginal likelihood over the
/// log of every free parameter. Throws FitFailedError if every restart fails.
FitResult fitMLE(const ModelTemplate& model, const GroupedDataset& data, const FitOptions& options = {});

/// Per-parameter starting values derived from the data scale.
double initialHeuristic(const std::string& name, const GroupedDataset& data);

struct InverseGamma {
  double shape = 1.0;
  double rate = 1.0;
  double logDensity(double x) const;
};

struct PriorSpec {
  /// Keyed by parameter name; unlisted parameters use `fallback`.
  std::map<std::string, InverseGamma> inverseGamma;
  InverseGamma fallback{1.0, 1.0};
  Eigen::VectorXd betaMean;
  Eigen::MatrixXd betaPrecision;

  const InverseGamma& forParameter(const std::string& name) const;
  void validate(Eigen::Index q) const;
  /// IG(1, 1) everywhere and N(0, I) on q coefficients.
  static PriorSpec standard(Eigen::Index q);
};

/// Log prior at an unconstrained point, including the log-transform Jacobian.
double logPrior(const ParameterMap& map, const PriorSpec& priors, const Eigen::VectorXd& point);

/// logPrior plus the collapsed log likelihood at the point's beta; -inf when
/// the covariance cannot be factorized.
double logPosterior(const ParameterMap& map, const GroupedDataset& data, const PriorSpec& priors,
                    const Eigen::VectorXd& point);

struct McmcOptions {
  int chains = 4;
  int warmup = 1000;
  int draws = 1000;
  double targetAccept = 0.3;
  std::uint64_t seed = 0;
  /// Half-width of the uniform perturbation for dispersed starting points.
  double dispersion = 1.0;
};

struct McmcChain {
  std::vector<std::string> names;
  /// draws x D, post-warmup only.
  Eigen::MatrixXd samples;
  Eigen::VectorXd logPosterior;
  double acceptanceRate = 0.0;
  std::uint64_t seed = 0;
  Eigen::VectorXd proposalScale;
};

using LogDensity = std::function<double(const Eigen::VectorXd&)>;

/// Adaptive random-walk Metropolis on an arbitrary log density.
McmcChain sampleMetropolis(const LogDensity& logDensity, const Eigen::VectorXd& start, const McmcOptions& options,
                           std::uint64_t chainSeed, std::vector<std::string> names = {});

std::vector<McmcChain> sampleMCMC(const ModelTemplate& model, const GroupedDataset& data, const PriorSpec& priors,
                                  const McmcOptions& options = {});

/// Split-chain potential scale reduction for one coordinate.
double splitRhat(const std::vector<McmcChain>& chains, Eigen::Index coordinate);

struct PosteriorPredictive {
  /// retained draws x queries.
  Eigen::MatrixXd samples;
  Eigen::VectorXd mean;
  Eigen::VectorXd q025;
  Eigen::VectorXd q50;
  Eigen::VectorXd q975;
};

/// One latent and one response draw per retained posterior draw.
PosteriorPredictive posteriorPredictiveSamples(const std::vector<McmcChain>& chains, const ModelTemplate& model,
                                               const GroupedDataset& data, const QuerySet& queries, int thin,
                                               std::uint64_t seed);

struct PairwiseResult {
  std::vector<std::string> labels;
  /// k x k estimates of a; zero diagonal, NaN where missing.
  Eigen::MatrixXd a;
  std::vector<std::vector<bool>> missing;
};

/// Fits a two-group model to every pair of groups and records the estimate of
/// a. The template kernel must carry a free parameter "a".
PairwiseResult pairwiseDistanceLearning(const GroupedDataset& data, const GroupSpace& space,
                                        const ModelTemplate& model, const FitOptions& options = {});

}  // namespace mggp
