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
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "mggp/gp.hpp"
#include "mggp/groups.hpp"
#include "mggp/inference.hpp"
#include "mggp/kernels.hpp"

namespace mggp {

/// The four competing models of the benchmarks.
enum class ModelKind { kMggp, kSgp, kUgp, kHgp };

std::string_view modelName(ModelKind model);
ModelKind parseModel(std::string_view name);
const std::vector<ModelKind>& allModels();

/// RBF-based kernel for a model: MG-RBF for MGGP, RBF within groups for SGP,
/// group-blind RBF for UGP, and UGP + SGP for HGP, each with the same sigma2
/// and b (and a for MGGP).
KernelSpec modelKernel(ModelKind model, int p, const GroupSpace& space, double sigma2, double b, double a = 1.0);

struct SweepConfig {
  std::vector<double> aGrid{1e-5, 1e-4, 1e-3, 1e-2, 1e-1, 1.0, 1e1, 1e2};
  double sigma2 = 1.0;
  double b = 1.0;
  double tau2 = 0.1;
  /// Re-fit sigma2, b, and tau2 at every grid point (and for each competitor)
  /// instead of holding them at the values above.
  bool profile = false;
  FitOptions fit;
};

struct SweepResult {
  std::vector<double> a;
  std::vector<double> mggp;
  double sgp = 0.0;
  double ugp = 0.0;
  double hgp = 0.0;

  /// Index into `a` of the largest MGGP log likelihood.
  std::size_t argmax() const;
};

SweepResult likelihoodSweep(const GroupedDataset& data, const GroupSpace& space, const SweepConfig& config);
/// Columns a,loglik_MGGP,loglik_SGP,loglik_UGP,loglik_HGP.
void writeSweepCsv(std::ostream& out, const SweepResult& sweep);

struct Split {
  std::vector<Eigen::Index> train;
  std::vector<Eigen::Index> test;
};

/// Per-group shuffle; each group with at least two rows lands in both halves.
Split stratifiedSplit(const std::vector<int>& groups, int k, double trainFraction, std::uint64_t seed);

struct ModelScore {
  ModelKind model = ModelKind::kMggp;
  double mse = 0.0;
  /// NaN for groups without test rows.
  Eigen::VectorXd groupMse;
  double trainLogLik = 0.0;
  std::optional<FitResult> fit;
};

struct BenchmarkResult {
  std::vector<ModelScore> scores;
  std::vector<int> trainSizes;
  std::vector<int> testSizes;
  /// Groups with test rows but no training rows (predicted through the
  /// new-group path).
  std::vector<int> unseenGroups;

  const ModelScore& score(ModelKind model) const;
};

struct BenchmarkConfig {
  std::vector<ModelKind> models{ModelKind::kSgp, ModelKind::kUgp, ModelKind::kHgp, ModelKind::kMggp};
  double trainFraction = 0.5;
  std::uint64_t seed = 0;
  FitOptions fit;
};

/// Stratified split, per-group centering, MLE fit of every model on the
/// training half, and squared error of the centered kriging mean on the test
/// half.
BenchmarkResult predictBenchmark(const GroupedDataset& data, const GroupSpace& space, const BenchmarkConfig& config);

/// Header group,<labels>; log10 of each estimate, empty diagonal, NA when
/// missing.
void writePairwiseCsv(std::ostream& out, const PairwiseResult& result);

}  // namespace mggp
