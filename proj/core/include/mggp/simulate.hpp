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
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "mggp/gp.hpp"
#include "mggp/groups.hpp"
#include "mggp/kernels.hpp"

namespace mggp {

enum class Generator { kSgp, kUgp, kHgp, kMggp };

std::string_view generatorName(Generator generator);
Generator parseGenerator(std::string_view name);

struct ScenarioSpec {
  Generator generator = Generator::kMggp;
  int k = 2;
  std::vector<int> groupSizes{100, 100};
  int p = 1;
  /// sigma2 and b for every generator, a for MGGP.
  HyperParams params{1.0, 1.0, 1.0, std::nullopt, std::nullopt};
  /// sigma2 and b of the HGP global and group-specific kernels.
  HyperParams hgpGlobal{1.0, std::nullopt, 1.0, std::nullopt, std::nullopt};
  HyperParams hgpGroup{1.0, std::nullopt, 1.0, std::nullopt, std::nullopt};
  NoiseSpec noise = NoiseSpec::shared(0.1);
  /// Group intercepts; when set, the dataset carries the intercept design.
  std::optional<Eigen::VectorXd> beta;
  double xLow = 0.0;
  double xHigh = 10.0;
  std::uint64_t seed = 0;
  /// Defaults to the discrete metric on k groups.
  std::optional<GroupSpace> space;

  GroupSpace groupSpace() const;
  /// The covariance the latent process is drawn from.
  KernelSpec kernel() const;
  void validate() const;
};

struct Simulation {
  GroupedDataset data;
  Eigen::VectorXd latent;
};

/// Draws X uniform on the box (row by row, groups in order), then Z = L xi,
/// then the noise, all from one Rng(seed).
Simulation simulate(const ScenarioSpec& scenario);
GroupedDataset generate(const ScenarioSpec& scenario);

/// Three MG-RBF groups with d12 = 0.1 and d13 = d23 = 10, a = b = sigma2 = 1,
/// tau2 = 0.1, and group sizes (n1, 50, 50).
ScenarioSpec imbalancedScenarioSpec(int n1, std::uint64_t seed);
GroupedDataset imbalancedScenario(int n1, std::uint64_t seed);

}  // namespace mggp
