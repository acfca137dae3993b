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
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace mggp::cli {

struct GlobalOptions {
  std::optional<std::uint64_t> seed;
  std::filesystem::path outDir = ".";
  int threads = 1;
  bool reportTiming = false;

  std::uint64_t seedOr(std::uint64_t fallback) const { return seed.value_or(fallback); }
};

struct SimulateArgs {
  std::filesystem::path config;
  std::string datasetName = "dataset.csv";
};

struct SweepArgs {
  std::filesystem::path data;
  std::filesystem::path model;
  std::optional<std::filesystem::path> space;
  std::vector<double> aGrid{1e-5, 1e-4, 1e-3, 1e-2, 1e-1, 1.0, 1e1, 1e2};
  bool profile = false;
  int restarts = 5;
};

struct FitArgs {
  std::filesystem::path data;
  std::filesystem::path model;
  std::optional<std::filesystem::path> space;
  bool perGroupNoise = false;
  bool intercepts = false;
  int restarts = 5;
  int maxIter = 500;
};

struct BenchmarkArgs {
  std::optional<std::filesystem::path> data;
  std::optional<std::filesystem::path> scenario;
  std::optional<std::filesystem::path> space;
  double split = 0.5;
  std::vector<std::string> models{"SGP", "UGP", "HGP", "MGGP"};
  int restarts = 5;
};

struct PairwiseArgs {
  std::filesystem::path data;
  std::filesystem::path model;
  std::optional<std::filesystem::path> space;
  int restarts = 5;
};

struct ValidateArgs {
  std::filesystem::path kernel;
  std::string mode = "monte-carlo";
  int trials = 10;
  int n = 50;
};

struct McmcArgs {
  std::filesystem::path data;
  std::filesystem::path model;
  std::optional<std::filesystem::path> space;
  bool intercepts = false;
  int chains = 4;
  int warmup = 1000;
  int draws = 1000;
  double targetAccept = 0.3;
};

void runSimulate(const GlobalOptions& global, const SimulateArgs& args);
void runSweep(const GlobalOptions& global, const SweepArgs& args);
void runFit(const GlobalOptions& global, const FitArgs& args);
void runBenchmark(const GlobalOptions& global, const BenchmarkArgs& args);
void runPairwise(const GlobalOptions& global, const PairwiseArgs& args);
void runValidate(const GlobalOptions& global, const ValidateArgs& args);
void runMcmc(const GlobalOptions& global, const McmcArgs& args);

}  // namespace mggp::cli
