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

#include <algorithm>
#include <cmath>
#include <limits>

#include "mggp/errors.hpp"
#include "mggp/inference.hpp"
#include "mggp/rng.hpp"

namespace mggp {

namespace {

constexpr double kInitialVariance = 0.01;
constexpr int kMinVarianceSamples = 50;
constexpr double kAdaptExponent = 0.6;
constexpr int kMaxStartAttempts = 100;

}  // namespace

McmcChain sampleMetropolis(const LogDensity& logDensity, const Eigen::VectorXd& start, const McmcOptions& options,
                           std::uint64_t chainSeed, std::vector<std::string> names) {
  if (options.warmup < 1 || options.draws < 1) throw ValidationError("warmup and draws must be >= 1");
  if (!(options.targetAccept > 0.0 && options.targetAccept < 1.0)) {
    throw ValidationError("target acceptance must lie in (0, 1)");
  }
  const Eigen::Index D = start.size();
  if (D == 0) throw ValidationError("cannot sample a zero-dimensional target");
  if (!names.empty() && static_cast<Eigen::Index>(names.size()) != D) {
    throw ValidationError("names must match the target dimension");
  }
  Rng rng(chainSeed);
  Eigen::VectorXd x = start;
  double lp = logDensity(x);
  if (!std::isfinite(lp)) throw ValidationError("starting point has zero density");

  const double baseScale = 2.38 * 2.38 / static_cast<double>(D);
  double logLambda = 0.0;
  Eigen::VectorXd variance = Eigen::VectorXd::Constant(D, kInitialVariance);
  Eigen::VectorXd runMean = Eigen::VectorXd::Zero(D);
  Eigen::VectorXd runM2 = Eigen::VectorXd::Zero(D);
  int runCount = 0;
  // Early warmup is dominated by the transient from the starting point, so
  // the variance estimate restarts halfway through.
  const int resetAt = options.warmup >= 200 ? options.warmup / 2 : -1;

  auto proposalSd = [&] { return (std::exp(logLambda) * (baseScale * variance.array()).sqrt()).matrix().eval(); };
  Eigen::VectorXd sd = proposalSd();

  McmcChain chain;
  chain.names = std::move(names);
  chain.seed = chainSeed;
  chain.samples.resize(options.draws, D);
  chain.logPosterior.resize(options.draws);
  int accepted = 0;

  const int total = options.warmup + options.draws;
  for (int t = 0; t < total; ++t) {
    const bool warm = t < options.warmup;
    const Eigen::VectorXd proposal = x + sd.cwiseProduct(rng.normalVector(D));
    const double lpNew = logDensity(proposal);
    const double logU = std::log(rng.uniform());
    const bool accept = std::isfinite(lpNew) && logU < lpNew - lp;
    if (accept) {
      x = proposal;
      lp = lpNew;
    }
    if (warm) {
      logLambda += ((accept ? 1.0 : 0.0) - options.targetAccept) / std::pow(t + 1.0, kAdaptExponent);
      if (t == resetAt) {
        runMean.setZero();
        runM2.setZero();
        runCount = 0;
      }
      ++runCount;
      const Eigen::VectorXd delta = x - runMean;
      runMean += delta / runCount;
      runM2 += delta.cwiseProduct(x - runMean);
      if (runCount >= kMinVarianceSamples) variance = (runM2 / (runCount - 1)).cwiseMax(1e-12);
      sd = proposalSd();
    } else {
      const int s = t - options.warmup;
      chain.samples.row(s) = x.transpose();
      chain.logPosterior[s] = lp;
      if (accept) ++accepted;
    }
  }
  chain.acceptanceRate = static_cast<double>(accepted) / options.draws;
  chain.proposalScale = sd;
  return chain;
}

std::vector<McmcChain> sampleMCMC(const ModelTemplate& model, const GroupedDataset& data, const PriorSpec& priors,
                                  const McmcOptions& options) {
  if (options.chains < 1) throw ValidationError("need at least one chain");
  data.validate(model.kernel.groupCount());
  const ParameterMap map(model, data.designColumns());
  priors.validate(map.betaSize());
  const LogDensity target = [&](const Eigen::VectorXd& point) { return logPosterior(map, data, priors, point); };

  Eigen::VectorXd betaCenter = Eigen::VectorXd::Zero(map.betaSize());
  if (map.betaSize() > 0) {
    try {
      betaCenter = logMarginalLikelihood(model.kernel, data, model.noise, ProfiledBeta{}).beta;
    } catch (const NumericalError&) {
      betaCenter = priors.betaMean;
    }
  }

  std::vector<McmcChain> chains;
  for (int c = 0; c < options.chains; ++c) {
    const std::uint64_t chainSeed = deriveSeed(options.seed, static_cast<std::uint64_t>(c));
    Rng init(deriveSeed(options.seed, static_cast<std::uint64_t>(options.chains + c)));
    Eigen::VectorXd start(map.size());
    bool found = false;
    for (int attempt = 0; attempt < kMaxStartAttempts && !found; ++attempt) {
      for (Eigen::Index i = 0; i < map.logSize(); ++i) {
        start[i] = std::log(initialHeuristic(map.logNames()[static_cast<std::size_t>(i)], data)) +
                   init.uniform(-options.dispersion, options.dispersion);
      }
      for (Eigen::Index j = 0; j < map.betaSize(); ++j) {
        start[map.logSize() + j] = betaCenter[j] + init.uniform(-options.dispersion, options.dispersion);
      }
      found = std::isfinite(target(start));
    }
    if (!found) throw NumericalError("no starting point with finite posterior density");
    chains.push_back(sampleMetropolis(target, start, options, chainSeed, map.coordinateNames()));
  }
  return chains;
}

double splitRhat(const std::vector<McmcChain>& chains, Eigen::Index coordinate) {
  std::vector<Eigen::VectorXd> halves;
  for (const auto& chain : chains) {
    const Eigen::Index n = chain.samples.rows() / 2;
    if (n < 2) throw ValidationError("split R-hat needs at least 4 draws per chain");
    if (coordinate < 0 || coordinate >= chain.samples.cols()) throw ValidationError("coordinate out of range");
    halves.emplace_back(chain.samples.col(coordinate).head(n));
    halves.emplace_back(chain.samples.col(coordinate).segment(n, n));
  }
  const Eigen::Index n = std::min_element(halves.begin(), halves.end(), [](const auto& a, const auto& b) {
                           return a.size() < b.size();
                         })->size();
  const auto m = static_cast<double>(halves.size());
  Eigen::VectorXd means(halves.size());
  double within = 0.0;
  for (std::size_t h = 0; h < halves.size(); ++h) {
    const Eigen::VectorXd v = halves[h].head(n);
    means[static_cast<Eigen::Index>(h)] = v.mean();
    within += (v.array() - v.mean()).square().sum() / static_cast<double>(n - 1);
  }
  within /= m;
  const double between = static_cast<double>(n) * (means.array() - means.mean()).square().sum() / (m - 1.0);
  if (!(within > 0.0)) return between > 0.0 ? std::numeric_limits<double>::infinity() : 1.0;
  const double varPlus = (static_cast<double>(n - 1) / n) * within + between / n;
  return std::sqrt(varPlus / within);
}

}  // namespace mggp
