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

#include <exception>
#include <iostream>

#include <CLI11.hpp>

#include "commands.hpp"
#include "mggp/errors.hpp"

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitNumerical = 2;

}  // namespace

int main(int argc, char** argv) {
  using namespace mggp::cli;
  CLI::App app{"Multi-group Gaussian process toolkit"};
  app.require_subcommand(1);

  GlobalOptions global;
  std::uint64_t seed = 0;
  auto* seedOpt = app.add_option("--seed", seed, "Master seed for every random step")->capture_default_str();
  std::string outDir = ".";
  app.add_option("--out-dir", outDir, "Directory for outputs")->capture_default_str();
  app.add_option("--threads", global.threads, "Worker threads (the library runs single-threaded)")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app.add_flag("--report-timing", global.reportTiming, "Add wall time to reports (breaks byte-identical reruns)");

  SimulateArgs simulate;
  auto* simulateCmd = app.add_subcommand("simulate", "Draw a synthetic dataset from a scenario config");
  simulateCmd->add_option("--config", simulate.config, "Scenario JSON")->required()->check(CLI::ExistingFile);
  simulateCmd->add_option("--name", simulate.datasetName, "Dataset file name")->capture_default_str();

  SweepArgs sweep;
  auto* sweepCmd = app.add_subcommand("sweep", "Log marginal likelihood over a grid of a");
  sweepCmd->add_option("--data", sweep.data, "Dataset CSV")->required()->check(CLI::ExistingFile);
  sweepCmd->add_option("--model", sweep.model, "Model JSON")->required()->check(CLI::ExistingFile);
  sweepCmd->add_option("--space", sweep.space, "Group space JSON or distance CSV")->check(CLI::ExistingFile);
  sweepCmd->add_option("--a-grid", sweep.aGrid, "Values of a")->delimiter(',');
  sweepCmd->add_flag("--profile", sweep.profile, "Re-fit the other parameters at each grid point");
  sweepCmd->add_option("--restarts", sweep.restarts, "Restarts per fit")->check(CLI::PositiveNumber);

  FitArgs fit;
  auto* fitCmd = app.add_subcommand("fit", "Maximum likelihood fit");
  fitCmd->add_option("--data", fit.data, "Dataset CSV")->required()->check(CLI::ExistingFile);
  fitCmd->add_option("--model", fit.model, "Model JSON")->required()->check(CLI::ExistingFile);
  fitCmd->add_option("--space", fit.space, "Group space JSON or distance CSV")->check(CLI::ExistingFile);
  fitCmd->add_flag("--per-group-noise", fit.perGroupNoise, "One noise variance per group");
  fitCmd->add_flag("--intercepts", fit.intercepts, "Add group intercepts to the mean");
  fitCmd->add_option("--restarts", fit.restarts, "Random restarts")->check(CLI::PositiveNumber);
  fitCmd->add_option("--max-iter", fit.maxIter, "Iterations per restart")->check(CLI::NonNegativeNumber);

  BenchmarkArgs bench;
  auto* benchCmd = app.add_subcommand("predict-benchmark", "Held-out prediction error of competing models");
  benchCmd->add_option("--data", bench.data, "Dataset CSV")->check(CLI::ExistingFile);
  benchCmd->add_option("--scenario", bench.scenario, "Scenario JSON to simulate from")->check(CLI::ExistingFile);
  benchCmd->add_option("--space", bench.space, "Group space JSON or distance CSV")->check(CLI::ExistingFile);
  benchCmd->add_option("--split", bench.split, "Training fraction")->check(CLI::Range(0.0, 1.0));
  benchCmd->add_option("--models", bench.models, "Subset of SGP,UGP,HGP,MGGP")->delimiter(',');
  benchCmd->add_option("--restarts", bench.restarts, "Restarts per fit")->check(CLI::PositiveNumber);

  PairwiseArgs pairwise;
  auto* pairwiseCmd = app.add_subcommand("pairwise-a", "Estimate a for every pair of groups");
  pairwiseCmd->add_option("--data", pairwise.data, "Dataset CSV")->required()->check(CLI::ExistingFile);
  pairwiseCmd->add_option("--model", pairwise.model, "Model JSON")->required()->check(CLI::ExistingFile);
  pairwiseCmd->add_option("--space", pairwise.space, "Group space JSON or distance CSV")->check(CLI::ExistingFile);
  pairwiseCmd->add_option("--restarts", pairwise.restarts, "Restarts per fit")->check(CLI::PositiveNumber);

  ValidateArgs validate;
  auto* validateCmd = app.add_subcommand("validate", "Positive-definiteness checks for a kernel");
  validateCmd->add_option("--kernel", validate.kernel, "Kernel or model JSON")->required()->check(CLI::ExistingFile);
  validateCmd->add_option("--mode", validate.mode, "categorical, spectral, or monte-carlo")
      ->check(CLI::IsMember({"categorical", "spectral", "monte-carlo"}))
      ->capture_default_str();
  validateCmd->add_option("--trials", validate.trials, "Monte-Carlo trials")->check(CLI::PositiveNumber);
  validateCmd->add_option("--n", validate.n, "Points per trial")->check(CLI::Range(2, 100000));

  McmcArgs mcmc;
  auto* mcmcCmd = app.add_subcommand("mcmc", "Adaptive random-walk Metropolis on the collapsed posterior");
  mcmcCmd->add_option("--data", mcmc.data, "Dataset CSV")->required()->check(CLI::ExistingFile);
  mcmcCmd->add_option("--model", mcmc.model, "Model JSON")->required()->check(CLI::ExistingFile);
  mcmcCmd->add_option("--space", mcmc.space, "Group space JSON or distance CSV")->check(CLI::ExistingFile);
  mcmcCmd->add_flag("--intercepts", mcmc.intercepts, "Add group intercepts with a N(0, I) prior");
  mcmcCmd->add_option("--chains", mcmc.chains, "Chains")->check(CLI::PositiveNumber);
  mcmcCmd->add_option("--warmup", mcmc.warmup, "Adaptation iterations per chain")->check(CLI::PositiveNumber);
  mcmcCmd->add_option("--draws", mcmc.draws, "Retained draws per chain")->check(CLI::PositiveNumber);
  mcmcCmd->add_option("--target-accept", mcmc.targetAccept, "Acceptance rate targeted during warmup")
      ->check(CLI::Range(0.01, 0.99));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }
  if (*seedOpt) global.seed = seed;
  global.outDir = outDir;

  try {
    if (*simulateCmd) runSimulate(global, simulate);
    if (*sweepCmd) runSweep(global, sweep);
    if (*fitCmd) runFit(global, fit);
    if (*benchCmd) runBenchmark(global, bench);
    if (*pairwiseCmd) runPairwise(global, pairwise);
    if (*validateCmd) runValidate(global, validate);
    if (*mcmcCmd) runMcmc(global, mcmc);
  } catch (const mggp::NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const mggp::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return 0;
}
