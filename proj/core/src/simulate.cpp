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

#include "mggp/simulate.hpp"

#include <cmath>
#include <numeric>
#include <vector>

#include "mggp/errors.hpp"
#include "mggp/rng.hpp"

namespace mggp {

namespace {

// Draws the latent values. Rows that repeat an earlier (x, group) pair copy
// its value, so coincident inputs agree exactly instead of through a
// jittered factor.
Eigen::VectorXd drawLatent(const KernelSpec& spec, const GroupedDataset& data, Rng& rng) {
  const Eigen::Index n = data.X.rows();
  std::vector<Eigen::Index> source(static_cast<std::size_t>(n));
  std::vector<Eigen::Index> unique;
  for (Eigen::Index i = 0; i < n; ++i) {
    source[i] = static_cast<Eigen::Index>(unique.size());
    for (std::size_t u = 0; u < unique.size(); ++u) {
      const Eigen::Index j = unique[u];
      if (data.groups[j] == data.groups[i] && data.X.row(j) == data.X.row(i)) {
        source[i] = static_cast<Eigen::Index>(u);
        break;
      }
    }
    if (source[i] == static_cast<Eigen::Index>(unique.size())) unique.push_back(i);
  }
  Eigen::MatrixXd Xu(static_cast<Eigen::Index>(unique.size()), data.p());
  std::vector<int> gu(unique.size());
  for (std::size_t u = 0; u < unique.size(); ++u) {
    Xu.row(static_cast<Eigen::Index>(u)) = data.X.row(unique[u]);
    gu[u] = data.groups[unique[u]];
  }
  const CholeskyResult chol = choleskyWithJitter(spec.gram(Xu, gu));
  const Eigen::VectorXd zu = chol.llt.matrixL() * rng.normalVector(Xu.rows());
  Eigen::VectorXd z(n);
  for (Eigen::Index i = 0; i < n; ++i) z[i] = zu[source[i]];
  return z;
}

}  // namespace

std::string_view generatorName(Generator generator) {
  switch (generator) {
    case Generator::kSgp: return "SGP";
    case Generator::kUgp: return "UGP";
    case Generator::kHgp: return "HGP";
    case Generator::kMggp: return "MGGP";
  }
  return "unknown";
}

Generator parseGenerator(std::string_view name) {
  for (Generator g : {Generator::kSgp, Generator::kUgp, Generator::kHgp, Generator::kMggp})
    if (generatorName(g) == name) return g;
  throw ValidationError("unknown generator '" + std::string(name) + "' (expected SGP, UGP, HGP, or MGGP)");
}

GroupSpace ScenarioSpec::groupSpace() const {
  if (space) return *space;
  return discreteMetric(k);
}

KernelSpec ScenarioSpec::kernel() const {
  const GroupSpace s = groupSpace();
  auto need = [](const std::optional<double>& v, const char* what) {
    if (!v) throw ValidationError(std::string("scenario is missing parameter ") + what);
    return *v;
  };
  switch (generator) {
    case Generator::kSgp:
      return rbfKernel(Family::kSgp, p, params.sigma2, need(params.b, "b"), s);
    case Generator::kUgp:
      return rbfKernel(Family::kUgp, p, params.sigma2, need(params.b, "b"), s);
    case Generator::kHgp:
      return KernelSpec::hierarchical(rbfKernel(Family::kUgp, p, hgpGlobal.sigma2, need(hgpGlobal.b, "hgp global b"), s),
                                      rbfKernel(Family::kSgp, p, hgpGroup.sigma2, need(hgpGroup.b, "hgp group b"), s));
    case Generator::kMggp: {
      HyperParams hp;
      hp.sigma2 = params.sigma2;
      hp.a = need(params.a, "a");
      hp.b = need(params.b, "b");
      return KernelSpec(Family::kMgRbf, p, hp, s);
    }
  }
  throw ValidationError("unknown generator");
}

void ScenarioSpec::validate() const {
  if (k < 1) throw ValidationError("scenario k must be >= 1");
  if (p < 1) throw ValidationError("scenario p must be >= 1");
  if (static_cast<int>(groupSizes.size()) != k) throw ValidationError("groupSizes must list one size per group");
  for (int n : groupSizes)
    if (n < 1) throw ValidationError("group sizes must be positive");
  if (space && space->size() != k) throw ValidationError("scenario space must have k groups");
  if (!(xHigh > xLow) || !std::isfinite(xLow) || !std::isfinite(xHigh)) {
    throw ValidationError("x box must satisfy low < high");
  }
  noise.validate(k, /*allowZero=*/true);
  if (beta && beta->size() != k) throw ValidationError("beta must hold one intercept per group");
  (void)kernel();
}

Simulation simulate(const ScenarioSpec& scenario) {
  scenario.validate();
  const KernelSpec spec = scenario.kernel();
  const int n = std::accumulate(scenario.groupSizes.begin(), scenario.groupSizes.end(), 0);
  Rng rng(scenario.seed);

  Simulation out;
  GroupedDataset& data = out.data;
  data.X.resize(n, scenario.p);
  data.groups.reserve(n);
  for (int g = 0; g < scenario.k; ++g)
    for (int i = 0; i < scenario.groupSizes[g]; ++i) data.groups.push_back(g);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < scenario.p; ++j) data.X(i, j) = rng.uniform(scenario.xLow, scenario.xHigh);

  out.latent = drawLatent(spec, data, rng);

  data.y = out.latent;
  for (int i = 0; i < n; ++i) data.y[i] += std::sqrt(scenario.noise.variance(data.groups[i])) * rng.normal();
  if (scenario.beta) {
    attachInterceptDesign(data, scenario.k);
    for (int i = 0; i < n; ++i) data.y[i] += (*scenario.beta)[data.groups[i]];
  }
  return out;
}

GroupedDataset generate(const ScenarioSpec& scenario) { return simulate(scenario).data; }

ScenarioSpec imbalancedScenarioSpec(int n1, std::uint64_t seed) {
  if (n1 < 2) throw ValidationError("imbalanced scenario needs n1 >= 2");
  Eigen::MatrixXd d(3, 3);
  d << 0.0, 0.1, 10.0,
       0.1, 0.0, 10.0,
       10.0, 10.0, 0.0;
  ScenarioSpec s;
  s.generator = Generator::kMggp;
  s.k = 3;
  s.groupSizes = {n1, 50, 50};
  s.space = GroupSpace(defaultLabels(3), d);
  s.seed = seed;
  return s;
}

GroupedDataset imbalancedScenario(int n1, std::uint64_t seed) { return generate(imbalancedScenarioSpec(n1, seed)); }

}  // namespace mggp
