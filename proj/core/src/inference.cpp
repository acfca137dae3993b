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

#include "mggp/inference.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <numbers>

#include <Eigen/Cholesky>

#include "mggp/errors.hpp"
#include "mggp/rng.hpp"

namespace mggp {

namespace {

constexpr double kArmijo = 1e-4;
constexpr double kMaxLogStep = 3.0;
constexpr int kMaxBacktracks = 40;
constexpr std::size_t kMemory = 8;

bool contains(const std::vector<std::string>& names, const std::string& name) {
  return std::find(names.begin(), names.end(), name) != names.end();
}

double sampleVariance(const Eigen::VectorXd& v) {
  if (v.size() < 2) return 1.0;
  const double mean = v.mean();
  return (v.array() - mean).square().sum() / static_cast<double>(v.size() - 1);
}

struct Objective {
  const ParameterMap& map;
  const GroupedDataset& data;

  // Returns the log likelihood and fills the log-space gradient.
  double operator()(const Eigen::VectorXd& x, Eigen::VectorXd& grad, Eigen::VectorXd* beta = nullptr) const {
    const LikelihoodGradient g = logMarginalLikelihoodGradient(map.kernel(x), data, map.noise(x), ProfiledBeta{});
    grad.resize(x.size());
    for (Eigen::Index i = 0; i < x.size(); ++i) grad[i] = g.gradient[map.gradientIndex()[i]];
    if (beta) *beta = g.beta;
    if (!std::isfinite(g.value) || !grad.allFinite()) throw NumericalError("non-finite likelihood or gradient");
    return g.value;
  }
};

// Projected gradient of the minimization objective -loglik on the box.
Eigen::VectorXd projectedGradient(const Eigen::VectorXd& x, const Eigen::VectorXd& G, double lo, double hi) {
  Eigen::VectorXd pg = G;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if ((x[i] <= lo && G[i] > 0.0) || (x[i] >= hi && G[i] < 0.0)) pg[i] = 0.0;
  }
  return pg;
}

struct Ascent {
  Eigen::VectorXd x;
  double logLik = -std::numeric_limits<double>::infinity();
  int iterations = 0;
  bool converged = false;
  double gradientNorm = std::numeric_limits<double>::infinity();
};

// Limited-memory quasi-Newton ascent with projection onto the box and Armijo
// backtracking.
Ascent ascend(const Objective& f, Eigen::VectorXd x, const FitOptions& opt) {
  const double lo = opt.logLower;
  const double hi = opt.logUpper;
  x = x.cwiseMax(lo).cwiseMin(hi);
  Eigen::VectorXd grad;
  double F = -f(x, grad);
  Eigen::VectorXd G = -grad;
  std::deque<std::pair<Eigen::VectorXd, Eigen::VectorXd>> memory;

  Ascent out;
  for (int iter = 0;; ++iter) {
    const Eigen::VectorXd pg = projectedGradient(x, G, lo, hi);
    out.gradientNorm = pg.size() ? pg.cwiseAbs().maxCoeff() : 0.0;
    out.iterations = iter;
    if (out.gradientNorm < opt.gradTol) {
      out.converged = true;
      break;
    }
    if (iter >= opt.maxIter) break;

    // Two-loop recursion restricted to coordinates not pinned at a bound.
    const Eigen::VectorXd mask = (pg.array() != 0.0).cast<double>();
    Eigen::VectorXd q = pg;
    std::vector<double> alphas(memory.size());
    for (std::size_t m = memory.size(); m-- > 0;) {
      const auto& [s, y] = memory[m];
      const double rho = 1.0 / y.cwiseProduct(mask).dot(s.cwiseProduct(mask));
      alphas[m] = rho * s.cwiseProduct(mask).dot(q);
      q -= alphas[m] * y.cwiseProduct(mask);
    }
    if (!memory.empty()) {
      const auto& [s, y] = memory.back();
      const double yy = y.cwiseProduct(mask).squaredNorm();
      if (yy > 0.0) q *= y.cwiseProduct(mask).dot(s.cwiseProduct(mask)) / yy;
    }
    for (std::size_t m = 0; m < memory.size(); ++m) {
      const auto& [s, y] = memory[m];
      const double rho = 1.0 / y.cwiseProduct(mask).dot(s.cwiseProduct(mask));
      const double beta = rho * y.cwiseProduct(mask).dot(q);
      q += (alphas[m] - beta) * s.cwiseProduct(mask);
    }
    Eigen::VectorXd d = -q.cwiseProduct(mask);
    if (!(G.dot(d) < 0.0) || !d.allFinite()) {
      memory.clear();
      d = -pg;
    }
    const double longest = d.cwiseAbs().maxCoeff();
    if (longest > kMaxLogStep) d *= kMaxLogStep / longest;

    bool accepted = false;
    Eigen::VectorXd xNew, GNew;
    double FNew = 0.0;
    double t = 1.0;
    for (int bt = 0; bt < kMaxBacktracks; ++bt, t *= 0.5) {
      xNew = (x + t * d).cwiseMax(lo).cwiseMin(hi);
      if (xNew == x) break;
      try {
        FNew = -f(xNew, grad);
      } catch (const NumericalError&) {
        continue;
      }
      if (FNew <= F + kArmijo * G.dot(xNew - x)) {
        GNew = -grad;
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      if (!memory.empty()) {
        memory.clear();
        continue;
      }
      break;
    }
    const Eigen::VectorXd s = xNew - x;
    const Eigen::VectorXd y = GNew - G;
    if (s.dot(y) > 1e-10 * s.norm() * y.norm()) {
      memory.emplace_back(s, y);
      if (memory.size() > kMemory) memory.pop_front();
    }
    x = xNew;
    F = FNew;
    G = GNew;
  }
  out.x = x;
  out.logLik = -F;
  return out;
}

double normalLogDensity(const Eigen::VectorXd& beta, const Eigen::VectorXd& mean, const Eigen::MatrixXd& precision) {
  const Eigen::LLT<Eigen::MatrixXd> llt(precision);
  const Eigen::VectorXd r = beta - mean;
  const double logDet = 2.0 * llt.matrixLLT().diagonal().array().log().sum();
  return -0.5 * r.dot(precision * r) + 0.5 * logDet -
         0.5 * static_cast<double>(beta.size()) * std::log(2.0 * std::numbers::pi);
}

double quantile(std::vector<double> v, double prob) {
  std::sort(v.begin(), v.end());
  const double pos = prob * static_cast<double>(v.size() - 1);
  const auto lower = static_cast<std::size_t>(std::floor(pos));
  const std::size_t upper = std::min(lower + 1, v.size() - 1);
  return v[lower] + (pos - static_cast<double>(lower)) * (v[upper] - v[lower]);
}

}  // namespace

ParameterMap::ParameterMap(const ModelTemplate& model, Eigen::Index betaSize) : model_(model), betaSize_(betaSize) {
  if (betaSize < 0) throw ValidationError("beta size must be nonnegative");
  model_.noise.validate(model_.kernel.groupCount());
  const auto kernelNames = model_.kernel.parameterNames();
  const auto noiseNames = model_.noise.parameterNames(model_.kernel.space());
  for (const auto& name : model_.fixed) {
    if (!contains(kernelNames, name) && !contains(noiseNames, name)) {
      throw ValidationError("cannot fix unknown parameter '" + name + "'");
    }
  }
  Eigen::Index idx = 0;
  for (const auto& name : kernelNames) {
    if (!contains(model_.fixed, name)) {
      names_.push_back(name);
      isNoise_.push_back(false);
      noiseSlot_.push_back(-1);
      gradientIndex_.push_back(idx);
    }
    ++idx;
  }
  for (std::size_t j = 0; j < noiseNames.size(); ++j, ++idx) {
    if (!contains(model_.fixed, noiseNames[j])) {
      names_.push_back(noiseNames[j]);
      isNoise_.push_back(true);
      noiseSlot_.push_back(static_cast<int>(j));
      gradientIndex_.push_back(idx);
    }
  }
}

std::vector<std::string> ParameterMap::coordinateNames() const {
  std::vector<std::string> out;
  for (const auto& n : names_) out.push_back("log_" + n);
  for (Eigen::Index j = 0; j < betaSize_; ++j) out.push_back("beta" + std::to_string(j + 1));
  return out;
}

KernelSpec ParameterMap::kernel(const Eigen::VectorXd& point) const {
  if (point.size() < logSize()) throw ValidationError("parameter vector is too short");
  KernelSpec spec = model_.kernel;
  for (std::size_t i = 0; i < names_.size(); ++i)
    if (!isNoise_[i]) spec = spec.withParameter(names_[i], std::exp(point[static_cast<Eigen::Index>(i)]));
  return spec;
}

NoiseSpec ParameterMap::noise(const Eigen::VectorXd& point) const {
  if (point.size() < logSize()) throw ValidationError("parameter vector is too short");
  NoiseSpec noise = model_.noise;
  for (std::size_t i = 0; i < names_.size(); ++i)
    if (isNoise_[i]) noise.values[noiseSlot_[i]] = std::exp(point[static_cast<Eigen::Index>(i)]);
  return noise;
}

Eigen::VectorXd ParameterMap::beta(const Eigen::VectorXd& point) const {
  if (point.size() != size()) throw ValidationError("parameter vector has the wrong length");
  return point.tail(betaSize_);
}

Eigen::VectorXd ParameterMap::pack(const KernelSpec& kernel, const NoiseSpec& noise, const Eigen::VectorXd& beta) const {
  if (beta.size() != betaSize_) throw ValidationError("beta has the wrong length");
  Eigen::VectorXd out(size());
  for (std::size_t i = 0; i < names_.size(); ++i) {
    const double v = isNoise_[i] ? noise.values.at(noiseSlot_[i]) : kernel.parameter(names_[i]);
    if (!(v > 0.0)) throw ValidationError("parameter '" + names_[i] + "' must be positive to take its logarithm");
    out[static_cast<Eigen::Index>(i)] = std::log(v);
  }
  out.tail(betaSize_) = beta;
  return out;
}

double initialHeuristic(const std::string& name, const GroupedDataset& data) {
  const double var = std::max(sampleVariance(data.y), 1e-6);
  std::string base = name;
  const bool hierarchical = name.starts_with("g.") || name.starts_with("z.");
  if (hierarchical) base = name.substr(2);
  if (base.starts_with("tau2")) return 0.1 * var;
  if (base == "sigma2") return hierarchical ? 0.5 * var : var;
  if (base == "b") {
    double sd = 0.0;
    for (Eigen::Index j = 0; j < data.X.cols(); ++j) sd += std::sqrt(sampleVariance(data.X.col(j)));
    sd /= std::max<Eigen::Index>(data.X.cols(), 1);
    return sd > 0.0 ? 1.0 / sd : 1.0;
  }
  return 1.0;
}

FitResult fitMLE(const ModelTemplate& model, const GroupedDataset& data, const FitOptions& options) {
  if (data.size() == 0) throw ValidationError("cannot fit an empty dataset");
  if (options.restarts < 1 || options.maxIter < 0 || !(options.gradTol > 0.0)) {
    throw ValidationError("invalid fit options");
  }
  data.validate(model.kernel.groupCount());
  const ParameterMap map(model);
  const Objective f{map, data};

  std::optional<FitResult> best;
  std::vector<RestartRecord> records;
  std::string lastError;
  for (int r = 0; r < options.restarts; ++r) {
    RestartRecord rec;
    rec.seed = deriveSeed(options.seed, static_cast<std::uint64_t>(r));
    Rng rng(rec.seed);
    Eigen::VectorXd x0(map.logSize());
    for (Eigen::Index i = 0; i < x0.size(); ++i) {
      x0[i] = std::log(initialHeuristic(map.logNames()[i], data)) + rng.uniform(options.initLow, options.initHigh);
    }
    try {
      Eigen::VectorXd grad;
      rec.initialLogLik = f(x0.cwiseMax(options.logLower).cwiseMin(options.logUpper), grad);
      const Ascent a = ascend(f, x0, options);
      Eigen::VectorXd beta;
      rec.logLik = f(a.x, grad, &beta);
      rec.iterations = a.iterations;
      rec.converged = a.converged;
      rec.gradientNorm = a.gradientNorm;
      if (!best || rec.logLik > best->logLik) {
        best = FitResult{map.kernel(a.x), map.noise(a.x), beta, rec.logLik, a.iterations, a.converged,
                         a.gradientNorm, {}};
      }
    } catch (const NumericalError& e) {
      rec.failed = true;
      rec.message = e.what();
      lastError = e.what();
    }
    records.push_back(std::move(rec));
  }
  if (!best) throw FitFailedError("every restart failed; last error: " + lastError);
  best->restarts = std::move(records);
  return *best;
}

double InverseGamma::logDensity(double x) const {
  if (!(x > 0.0)) return -std::numeric_limits<double>::infinity();
  return shape * std::log(rate) - std::lgamma(shape) - (shape + 1.0) * std::log(x) - rate / x;
}

const InverseGamma& PriorSpec::forParameter(const std::string& name) const {
  const auto it = inverseGamma.find(name);
  return it == inverseGamma.end() ? fallback : it->second;
}

void PriorSpec::validate(Eigen::Index q) const {
  auto check = [](const InverseGamma& ig) {
    if (!(ig.shape > 0.0) || !(ig.rate > 0.0)) throw ValidationError("inverse-gamma shape and rate must be positive");
  };
  check(fallback);
  for (const auto& [name, ig] : inverseGamma) check(ig);
  if (betaMean.size() != q || betaPrecision.rows() != q || betaPrecision.cols() != q) {
    throw ValidationError("beta prior must match the " + std::to_string(q) + " design columns");
  }
  if (q > 0) {
    if ((betaPrecision - betaPrecision.transpose()).cwiseAbs().maxCoeff() > 1e-12) {
      throw ValidationError("beta prior precision must be symmetric");
    }
    if (Eigen::LLT<Eigen::MatrixXd>(betaPrecision).info() != Eigen::Success) {
      throw ValidationError("beta prior precision must be positive definite");
    }
  }
}

PriorSpec PriorSpec::standard(Eigen::Index q) {
  PriorSpec p;
  p.betaMean = Eigen::VectorXd::Zero(q);
  p.betaPrecision = Eigen::MatrixXd::Identity(q, q);
  return p;
}

double logPrior(const ParameterMap& map, const PriorSpec& priors, const Eigen::VectorXd& point) {
  if (point.size() != map.size()) throw ValidationError("parameter vector has the wrong length");
  double lp = 0.0;
  for (Eigen::Index i = 0; i < map.logSize(); ++i) {
    // The density of log(theta) is the density of theta times theta.
    lp += priors.forParameter(map.logNames()[static_cast<std::size_t>(i)]).logDensity(std::exp(point[i])) + point[i];
  }
  if (map.betaSize() > 0) lp += normalLogDensity(map.beta(point), priors.betaMean, priors.betaPrecision);
  return lp;
}

double logPosterior(const ParameterMap& map, const GroupedDataset& data, const PriorSpec& priors,
                    const Eigen::VectorXd& point) {
  if (!point.allFinite()) return -std::numeric_limits<double>::infinity();
  const double lp = logPrior(map, priors, point);
  if (!std::isfinite(lp)) return -std::numeric_limits<double>::infinity();
  try {
    const double ll = logMarginalLikelihood(map.kernel(point), data, map.noise(point), map.beta(point)).value;
    return std::isfinite(ll) ? lp + ll : -std::numeric_limits<double>::infinity();
  } catch (const NumericalError&) {
    return -std::numeric_limits<double>::infinity();
  } catch (const ValidationError&) {
    // Parameters that overflow to an invalid kernel (for example a = inf).
    return -std::numeric_limits<double>::infinity();
  }
}

PosteriorPredictive posteriorPredictiveSamples(const std::vector<McmcChain>& chains, const ModelTemplate& model,
                                               const GroupedDataset& data, const QuerySet& queries, int thin,
                                               std::uint64_t seed) {
  if (chains.empty()) throw ValidationError("posterior predictive needs at least one chain");
  if (thin < 1) throw ValidationError("thin must be >= 1");
  const ParameterMap map(model, data.designColumns());
  QuerySet q = queries;
  if (data.design && !q.design) q.design = interceptQueryDesign(data, q.groups);
  const auto m = static_cast<Eigen::Index>(q.groups.size());

  std::vector<Eigen::VectorXd> draws;
  Rng rng(seed);
  for (const auto& chain : chains) {
    if (chain.samples.cols() != map.size()) throw ValidationError("chain dimension does not match the model");
    for (Eigen::Index s = 0; s < chain.samples.rows(); s += thin) {
      const Eigen::VectorXd point = chain.samples.row(s).transpose();
      const NoiseSpec noise = map.noise(point);
      const BetaChoice beta = data.design ? BetaChoice{map.beta(point)} : BetaChoice{Eigen::VectorXd()};
      PredictOptions opts;
      opts.covariance = true;
      opts.mode = PredictMode::kLatent;
      const PredictiveDistribution pd = predict(map.kernel(point), data, noise, beta, q, opts);
      const CholeskyResult chol = choleskyWithJitter(*pd.covariance);
      Eigen::VectorXd y = pd.mean + chol.llt.matrixL() * rng.normalVector(m);
      for (Eigen::Index i = 0; i < m; ++i) y[i] += std::sqrt(noise.variance(q.groups[i])) * rng.normal();
      draws.push_back(std::move(y));
    }
  }
  PosteriorPredictive out;
  out.samples.resize(static_cast<Eigen::Index>(draws.size()), m);
  for (std::size_t s = 0; s < draws.size(); ++s) out.samples.row(static_cast<Eigen::Index>(s)) = draws[s].transpose();
  out.mean = out.samples.colwise().mean().transpose();
  out.q025.resize(m);
  out.q50.resize(m);
  out.q975.resize(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    std::vector<double> col(out.samples.col(i).data(), out.samples.col(i).data() + out.samples.rows());
    out.q025[i] = quantile(col, 0.025);
    out.q50[i] = quantile(col, 0.5);
    out.q975[i] = quantile(col, 0.975);
  }
  return out;
}

PairwiseResult pairwiseDistanceLearning(const GroupedDataset& data, const GroupSpace& space,
                                        const ModelTemplate& model, const FitOptions& options) {
  const int k = space.size();
  data.validate(k);
  if (!contains(model.kernel.parameterNames(), "a") || contains(model.fixed, "a")) {
    throw ValidationError("pairwise learning needs a kernel with a free parameter 'a'");
  }
  PairwiseResult out;
  out.labels = space.labels();
  out.a = Eigen::MatrixXd::Zero(k, k);
  out.missing.assign(k, std::vector<bool>(k, false));
  const auto sizes = data.groupSizes(k);
  for (int i = 0; i < k; ++i) {
    for (int j = i + 1; j < k; ++j) {
      if (sizes[i] < 2 || sizes[j] < 2) {
        out.a(i, j) = out.a(j, i) = std::numeric_limits<double>::quiet_NaN();
        out.missing[i][j] = out.missing[j][i] = true;
        continue;
      }
      std::vector<Eigen::Index> rows;
      for (Eigen::Index r = 0; r < data.size(); ++r)
        if (data.groups[r] == i || data.groups[r] == j) rows.push_back(r);
      GroupedDataset pair = data.subset(rows);
      for (int& g : pair.groups) g = g == i ? 0 : 1;
      const bool hadDesign = pair.design.has_value();
      pair.design.reset();
      pair.designGroups.clear();
      if (hadDesign) attachInterceptDesign(pair, 2);

      const GroupSpace pairSpace = discreteMetric(2, {space.labels()[i], space.labels()[j]});
      ModelTemplate pairModel = model;
      pairModel.kernel = model.kernel.withSpace(pairSpace);
      if (model.noise.mode == NoiseSpec::Mode::kPerGroup) {
        pairModel.noise = NoiseSpec::perGroup({model.noise.values.at(i), model.noise.values.at(j)});
      }
      const FitResult fit = fitMLE(pairModel, pair, options);
      out.a(i, j) = out.a(j, i) = fit.kernel.parameter("a");
    }
  }
  return out;
}

}  // namespace mggp
