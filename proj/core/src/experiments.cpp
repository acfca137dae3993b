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

#include "mggp/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include "csv.hpp"
#include "mggp/errors.hpp"
#include "mggp/rng.hpp"

namespace mggp {

namespace {

double fixedOrProfiled(const KernelSpec& kernel, const GroupedDataset& data, double tau2, bool profile,
                       std::vector<std::string> fixed, const FitOptions& fit) {
  ModelTemplate model{kernel, NoiseSpec::shared(tau2), std::move(fixed)};
  if (!profile) return logMarginalLikelihood(kernel, data, model.noise, ProfiledBeta{}).value;
  return fitMLE(model, data, fit).logLik;
}

GroupedDataset centered(const GroupedDataset& data, int k, Eigen::VectorXd& means) {
  GroupedDataset out = data;
  out.design.reset();
  out.designGroups.clear();
  const auto sizes = data.groupSizes(k);
  means = Eigen::VectorXd::Zero(k);
  for (Eigen::Index i = 0; i < data.size(); ++i) means[data.groups[i]] += data.y[i];
  const double pooled = data.size() > 0 ? data.y.mean() : 0.0;
  for (int g = 0; g < k; ++g) means[g] = sizes[g] > 0 ? means[g] / sizes[g] : pooled;
  for (Eigen::Index i = 0; i < data.size(); ++i) out.y[i] -= means[data.groups[i]];
  return out;
}

}  // namespace

std::string_view modelName(ModelKind model) {
  switch (model) {
    case ModelKind::kMggp: return "MGGP";
    case ModelKind::kSgp: return "SGP";
    case ModelKind::kUgp: return "UGP";
    case ModelKind::kHgp: return "HGP";
  }
  return "unknown";
}

ModelKind parseModel(std::string_view name) {
  for (ModelKind m : allModels())
    if (modelName(m) == name) return m;
  throw ValidationError("unknown model '" + std::string(name) + "' (expected MGGP, SGP, UGP, or HGP)");
}

const std::vector<ModelKind>& allModels() {
  static const std::vector<ModelKind> models{ModelKind::kMggp, ModelKind::kSgp, ModelKind::kUgp, ModelKind::kHgp};
  return models;
}

KernelSpec modelKernel(ModelKind model, int p, const GroupSpace& space, double sigma2, double b, double a) {
  switch (model) {
    case ModelKind::kMggp: {
      HyperParams hp;
      hp.sigma2 = sigma2;
      hp.a = a;
      hp.b = b;
      return KernelSpec(Family::kMgRbf, p, hp, space);
    }
    case ModelKind::kSgp: return rbfKernel(Family::kSgp, p, sigma2, b, space);
    case ModelKind::kUgp: return rbfKernel(Family::kUgp, p, sigma2, b, space);
    case ModelKind::kHgp:
      return KernelSpec::hierarchical(rbfKernel(Family::kUgp, p, sigma2, b, space),
                                      rbfKernel(Family::kSgp, p, sigma2, b, space));
  }
  throw ValidationError("unknown model");
}

std::size_t SweepResult::argmax() const {
  if (mggp.empty()) throw ValidationError("empty sweep");
  return static_cast<std::size_t>(std::max_element(mggp.begin(), mggp.end()) - mggp.begin());
}

SweepResult likelihoodSweep(const GroupedDataset& data, const GroupSpace& space, const SweepConfig& config) {
  if (config.aGrid.empty()) throw ValidationError("a grid must be nonempty");
  data.validate(space.size());
  const int p = data.p();
  SweepResult out;
  out.a = config.aGrid;
  for (double a : config.aGrid) {
    if (!(a >= 0.0) || !std::isfinite(a)) throw ValidationError("a grid values must be nonnegative and finite");
    const KernelSpec kernel = modelKernel(ModelKind::kMggp, p, space, config.sigma2, config.b, a);
    out.mggp.push_back(fixedOrProfiled(kernel, data, config.tau2, config.profile, {"a"}, config.fit));
  }
  out.sgp = fixedOrProfiled(modelKernel(ModelKind::kSgp, p, space, config.sigma2, config.b), data, config.tau2,
                            config.profile, {}, config.fit);
  out.ugp = fixedOrProfiled(modelKernel(ModelKind::kUgp, p, space, config.sigma2, config.b), data, config.tau2,
                            config.profile, {}, config.fit);
  out.hgp = fixedOrProfiled(modelKernel(ModelKind::kHgp, p, space, config.sigma2, config.b), data, config.tau2,
                            config.profile, {}, config.fit);
  return out;
}

void writeSweepCsv(std::ostream& out, const SweepResult& sweep) {
  out << "a,loglik_MGGP,loglik_SGP,loglik_UGP,loglik_HGP\n";
  for (std::size_t i = 0; i < sweep.a.size(); ++i) {
    out << csv::formatReal(sweep.a[i]) << ',' << csv::formatReal(sweep.mggp[i]) << ',' << csv::formatReal(sweep.sgp)
        << ',' << csv::formatReal(sweep.ugp) << ',' << csv::formatReal(sweep.hgp) << '\n';
  }
}

Split stratifiedSplit(const std::vector<int>& groups, int k, double trainFraction, std::uint64_t seed) {
  if (!(trainFraction > 0.0 && trainFraction < 1.0)) throw ValidationError("split fraction must lie in (0, 1)");
  std::vector<std::vector<Eigen::Index>> byGroup(k);
  for (std::size_t i = 0; i < groups.size(); ++i) {
    if (groups[i] < 0 || groups[i] >= k) throw ValidationError("group index out of range");
    byGroup[groups[i]].push_back(static_cast<Eigen::Index>(i));
  }
  Rng rng(seed);
  Split split;
  for (auto& rows : byGroup) {
    for (std::size_t i = rows.size(); i > 1; --i) std::swap(rows[i - 1], rows[rng.below(i)]);
    const auto n = static_cast<long>(rows.size());
    long nTrain = std::lround(trainFraction * static_cast<double>(n));
    if (n >= 2) nTrain = std::clamp(nTrain, 1L, n - 1);
    for (long i = 0; i < n; ++i) (i < nTrain ? split.train : split.test).push_back(rows[i]);
  }
  std::sort(split.train.begin(), split.train.end());
  std::sort(split.test.begin(), split.test.end());
  return split;
}

const ModelScore& BenchmarkResult::score(ModelKind model) const {
  for (const auto& s : scores)
    if (s.model == model) return s;
  throw ValidationError("model " + std::string(modelName(model)) + " was not benchmarked");
}

BenchmarkResult predictBenchmark(const GroupedDataset& data, const GroupSpace& space, const BenchmarkConfig& config) {
  const int k = space.size();
  data.validate(k);
  if (config.models.empty()) throw ValidationError("no models to benchmark");
  const Split split = stratifiedSplit(data.groups, k, config.trainFraction, config.seed);
  if (split.train.empty() || split.test.empty()) throw ValidationError("split leaves an empty half");
  GroupedDataset train = data.subset(split.train);
  const GroupedDataset test = data.subset(split.test);

  BenchmarkResult out;
  out.trainSizes = train.groupSizes(k);
  out.testSizes = test.groupSizes(k);
  for (int g = 0; g < k; ++g)
    if (out.testSizes[g] > 0 && out.trainSizes[g] == 0) out.unseenGroups.push_back(g);

  Eigen::VectorXd means;
  const GroupedDataset centeredTrain = centered(train, k, means);
  train.design.reset();
  train.designGroups.clear();
  const QuerySet queries{test.X, test.groups, std::nullopt};

  for (ModelKind model : config.models) {
    // Starting values come from the data scale, so the template values only
    // fix the family.
    const ModelTemplate tmpl{modelKernel(model, data.p(), space, 1.0, 1.0), NoiseSpec::shared(0.1), {}};
    FitResult fit = fitMLE(tmpl, centeredTrain, config.fit);
    // predict re-centers the raw training responses itself.
    const PredictiveDistribution pd =
        predict(fit.kernel, train, fit.noise, Eigen::VectorXd(), queries, PredictOptions::benchmark());
    ModelScore s;
    s.model = model;
    s.groupMse = Eigen::VectorXd::Zero(k);
    const Eigen::VectorXd err2 = (pd.mean - test.y).array().square();
    s.mse = err2.mean();
    for (Eigen::Index i = 0; i < test.size(); ++i) s.groupMse[test.groups[i]] += err2[i];
    for (int g = 0; g < k; ++g) {
      s.groupMse[g] = out.testSizes[g] > 0 ? s.groupMse[g] / out.testSizes[g] : std::numeric_limits<double>::quiet_NaN();
    }
    s.trainLogLik = fit.logLik;
    s.fit = std::move(fit);
    out.scores.push_back(std::move(s));
  }
  return out;
}

void writePairwiseCsv(std::ostream& out, const PairwiseResult& result) {
  const auto k = static_cast<int>(result.labels.size());
  out << "group";
  for (const auto& l : result.labels) out << ',' << l;
  out << '\n';
  for (int i = 0; i < k; ++i) {
    out << result.labels[i];
    for (int j = 0; j < k; ++j) {
      out << ',';
      if (i == j) continue;
      if (result.missing[i][j]) {
        out << "NA";
      } else {
        out << csv::formatReal(std::log10(result.a(i, j)));
      }
    }
    out << '\n';
  }
}

}  // namespace mggp
