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

#include "mggp/gp.hpp"

#include <array>
#include <cmath>
#include <istream>
#include <numbers>
#include <ostream>

#include <Eigen/QR>

#include "csv.hpp"
#include "mggp/errors.hpp"
#include "mggp/rng.hpp"

namespace mggp {

namespace {

constexpr std::array<double, 5> kJitterLadder{0.0, 1e-10, 1e-8, 1e-6, 1e-4};
constexpr double kClampReport = 1e-8;

Eigen::MatrixXd noiseCovariance(const KernelSpec& spec, const GroupedDataset& data, const NoiseSpec& noise) {
  Eigen::MatrixXd S = spec.gram(data.X, data.groups);
  for (Eigen::Index i = 0; i < data.size(); ++i) S(i, i) += noise.variance(data.groups[i]);
  return S;
}

void checkInputs(const KernelSpec& spec, const GroupedDataset& data, const NoiseSpec& noise) {
  data.validate(spec.groupCount());
  noise.validate(spec.groupCount());
  if (data.p() != spec.p()) throw ValidationError("dataset dimension does not match kernel p");
  if (data.size() == 0) throw ValidationError("dataset is empty");
}

// Shared state of one likelihood evaluation.
struct Solved {
  CholeskyResult chol;
  Eigen::VectorXd beta;
  Eigen::VectorXd residual;  // y - F beta
  Eigen::VectorXd alpha;     // Sigma^{-1} residual
  double logLik = 0.0;
};

Solved solve(const Eigen::MatrixXd& Sigma, const GroupedDataset& data, const BetaChoice& choice) {
  Solved s;
  s.chol = choleskyWithJitter(Sigma);
  const auto L = s.chol.llt.matrixL();
  const Eigen::Index n = data.size();
  const Eigen::Index q = data.designColumns();

  if (const auto* fixed = std::get_if<Eigen::VectorXd>(&choice)) {
    if (fixed->size() != q) {
      throw ValidationError("beta has " + std::to_string(fixed->size()) + " entries, design has " +
                            std::to_string(q) + " columns");
    }
    s.beta = *fixed;
  } else if (q > 0) {
    const Eigen::MatrixXd A = L.solve(*data.design);
    const Eigen::VectorXd c = L.solve(data.y);
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(A);
    if (qr.rank() < q) throw DesignSingularError("design is rank deficient under the GLS metric");
    s.beta = qr.solve(c);
  } else {
    s.beta.resize(0);
  }

  s.residual = data.y;
  if (q > 0) s.residual -= *data.design * s.beta;
  const Eigen::VectorXd w = L.solve(s.residual);
  s.alpha = s.chol.llt.matrixU().solve(w);
  const double logDet = 2.0 * L.nestedExpression().diagonal().array().log().sum();
  s.logLik = -0.5 * w.squaredNorm() - 0.5 * logDet - 0.5 * static_cast<double>(n) * std::log(2.0 * std::numbers::pi);
  return s;
}

Eigen::VectorXd groupMeans(const GroupedDataset& data, int k, double& pooled) {
  Eigen::VectorXd sum = Eigen::VectorXd::Zero(k);
  Eigen::VectorXd count = Eigen::VectorXd::Zero(k);
  for (Eigen::Index i = 0; i < data.size(); ++i) {
    sum[data.groups[i]] += data.y[i];
    count[data.groups[i]] += 1.0;
  }
  pooled = data.y.mean();
  Eigen::VectorXd mean(k);
  for (int g = 0; g < k; ++g) mean[g] = count[g] > 0.0 ? sum[g] / count[g] : pooled;
  return mean;
}

}  // namespace

std::vector<int> GroupedDataset::groupSizes(int k) const {
  std::vector<int> sizes(k, 0);
  for (int g : groups)
    if (g >= 0 && g < k) ++sizes[g];
  return sizes;
}

void GroupedDataset::validate(int k) const {
  const Eigen::Index n = y.size();
  if (X.rows() != n) throw ValidationError("X has " + std::to_string(X.rows()) + " rows, y has " + std::to_string(n));
  if (static_cast<Eigen::Index>(groups.size()) != n) throw ValidationError("groups length must equal the number of rows");
  for (int g : groups)
    if (g < 0 || g >= k) throw ValidationError("group index " + std::to_string(g) + " out of range");
  if (!X.allFinite() || !y.allFinite()) throw ValidationError("dataset has non-finite values");
  if (design) {
    if (design->rows() != n) throw ValidationError("design must have one row per sample");
    if (static_cast<Eigen::Index>(designGroups.size()) != design->cols()) {
      throw ValidationError("designGroups must name the owning group of every design column");
    }
    for (Eigen::Index j = 0; j < design->cols(); ++j) {
      if (designGroups[j] < 0 || designGroups[j] >= k) throw ValidationError("design column group out of range");
      for (Eigen::Index i = 0; i < n; ++i) {
        if ((*design)(i, j) != 0.0 && groups[i] != designGroups[j]) {
          throw ValidationError("design row " + std::to_string(i) + " has an entry outside its group's column block");
        }
      }
    }
  } else if (!designGroups.empty()) {
    throw ValidationError("designGroups given without a design");
  }
}

GroupedDataset GroupedDataset::subset(const std::vector<Eigen::Index>& rows) const {
  GroupedDataset out;
  const auto m = static_cast<Eigen::Index>(rows.size());
  out.X.resize(m, X.cols());
  out.y.resize(m);
  out.groups.resize(rows.size());
  if (design) out.design = Eigen::MatrixXd(m, design->cols());
  out.designGroups = designGroups;
  for (Eigen::Index i = 0; i < m; ++i) {
    const Eigen::Index r = rows[i];
    if (r < 0 || r >= y.size()) throw ValidationError("subset row out of range");
    out.X.row(i) = X.row(r);
    out.y[i] = y[r];
    out.groups[i] = groups[r];
    if (design) out.design->row(i) = design->row(r);
  }
  return out;
}

void attachInterceptDesign(GroupedDataset& data, int k) {
  const auto sizes = data.groupSizes(k);
  std::vector<int> owners;
  for (int g = 0; g < k; ++g)
    if (sizes[g] > 0) owners.push_back(g);
  Eigen::MatrixXd F = Eigen::MatrixXd::Zero(data.size(), static_cast<Eigen::Index>(owners.size()));
  for (Eigen::Index i = 0; i < data.size(); ++i)
    for (std::size_t j = 0; j < owners.size(); ++j)
      if (data.groups[i] == owners[j]) F(i, static_cast<Eigen::Index>(j)) = 1.0;
  data.design = std::move(F);
  data.designGroups = std::move(owners);
}

Eigen::MatrixXd interceptQueryDesign(const GroupedDataset& data, const std::vector<int>& queryGroups) {
  Eigen::MatrixXd F = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(queryGroups.size()),
                                            static_cast<Eigen::Index>(data.designGroups.size()));
  for (std::size_t i = 0; i < queryGroups.size(); ++i)
    for (std::size_t j = 0; j < data.designGroups.size(); ++j)
      if (data.designGroups[j] == queryGroups[i]) F(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = 1.0;
  return F;
}

void NoiseSpec::validate(int k, bool allowZero) const {
  if (mode == Mode::kShared && values.size() != 1) throw ValidationError("shared noise takes exactly one variance");
  if (mode == Mode::kPerGroup && static_cast<int>(values.size()) != k) {
    throw ValidationError("per-group noise needs " + std::to_string(k) + " variances");
  }
  for (double v : values) {
    if (allowZero && v == 0.0) continue;
    if (!(v > 0.0) || !std::isfinite(v)) throw ValidationError("noise variances must be positive and finite");
  }
}

std::vector<std::string> NoiseSpec::parameterNames(const GroupSpace& space) const {
  if (mode == Mode::kShared) return {"tau2"};
  std::vector<std::string> names;
  for (const auto& label : space.labels()) names.push_back("tau2." + label);
  return names;
}

CholeskyResult choleskyWithJitter(const Eigen::MatrixXd& M) {
  if (M.rows() != M.cols()) throw ValidationError("Cholesky input must be square");
  const double scale = M.rows() > 0 ? M.diagonal().mean() : 0.0;
  std::vector<double> tried;
  CholeskyResult out;
  if (M.allFinite()) {
    for (std::size_t step = 0; step < kJitterLadder.size(); ++step) {
      const double jitter = kJitterLadder[step] * scale;
      tried.push_back(jitter);
      Eigen::MatrixXd shifted = M;
      shifted.diagonal().array() += jitter;
      out.llt.compute(shifted);
      if (out.llt.info() == Eigen::Success && out.llt.matrixLLT().diagonal().allFinite()) {
        out.jitter = jitter;
        out.ladderStep = static_cast<int>(step);
        return out;
      }
    }
  }
  throw NotPositiveDefiniteError("Cholesky factorization failed at every jitter level", std::move(tried));
}

LikelihoodResult logMarginalLikelihood(const KernelSpec& spec, const GroupedDataset& data, const NoiseSpec& noise,
                                       const BetaChoice& beta) {
  checkInputs(spec, data, noise);
  Solved s = solve(noiseCovariance(spec, data, noise), data, beta);
  return {s.logLik, std::move(s.beta), s.chol.jitter};
}

LikelihoodGradient logMarginalLikelihoodGradient(const KernelSpec& spec, const GroupedDataset& data,
                                                 const NoiseSpec& noise, const BetaChoice& beta) {
  checkInputs(spec, data, noise);
  Solved s = solve(noiseCovariance(spec, data, noise), data, beta);
  const Eigen::Index n = data.size();
  // W = alpha alpha^T - Sigma^{-1}; each derivative is tr(W dSigma) / 2.
  Eigen::MatrixXd W = -s.chol.llt.solve(Eigen::MatrixXd::Identity(n, n));
  W.noalias() += s.alpha * s.alpha.transpose();

  LikelihoodGradient out;
  out.value = s.logLik;
  out.beta = s.beta;
  out.names = spec.parameterNames();
  const auto noiseNames = noise.parameterNames(spec.space());
  out.gradient.resize(static_cast<Eigen::Index>(out.names.size() + noiseNames.size()));
  Eigen::Index idx = 0;
  for (const auto& name : out.names) {
    const Eigen::MatrixXd G = spec.gramGradient(data.X, data.groups, name);
    out.gradient[idx++] = 0.5 * W.cwiseProduct(G).sum() * spec.parameter(name);
  }
  for (std::size_t j = 0; j < noiseNames.size(); ++j) {
    double tr = 0.0;
    for (Eigen::Index i = 0; i < n; ++i)
      if (noise.mode == NoiseSpec::Mode::kShared || data.groups[i] == static_cast<int>(j)) tr += W(i, i);
    out.gradient[idx++] = 0.5 * tr * noise.values[j];
  }
  out.names.insert(out.names.end(), noiseNames.begin(), noiseNames.end());
  return out;
}

PredictiveDistribution predict(const KernelSpec& spec, const GroupedDataset& data, const NoiseSpec& noise,
                               const BetaChoice& beta, const QuerySet& queries, const PredictOptions& options) {
  checkInputs(spec, data, noise);
  const int k = spec.groupCount();
  const auto m = static_cast<Eigen::Index>(queries.groups.size());
  if (queries.X.rows() != m) throw ValidationError("query X rows must match query groups");
  if (queries.X.cols() != spec.p()) throw ValidationError("query dimension does not match kernel p");
  for (int g : queries.groups)
    if (g < 0 || g >= k) throw ValidationError("query group index out of range");
  if (data.design && (!queries.design || queries.design->rows() != m || queries.design->cols() != data.design->cols())) {
    throw ValidationError("queries need a design matching the training design");
  }

  GroupedDataset train = data;
  Eigen::VectorXd means;
  if (options.centerByGroup) {
    double pooled = 0.0;
    means = groupMeans(data, k, pooled);
    for (Eigen::Index i = 0; i < train.size(); ++i) train.y[i] -= means[train.groups[i]];
  }

  const Solved s = solve(noiseCovariance(spec, train, noise), train, beta);
  const Eigen::MatrixXd Kq = spec.crossGram(queries.X, queries.groups, train.X, train.groups);

  PredictiveDistribution out;
  out.queryGroups = queries.groups;
  out.mean = Kq * s.alpha;
  if (data.design) out.mean += *queries.design * s.beta;
  if (options.centerByGroup)
    for (Eigen::Index i = 0; i < m; ++i) out.mean[i] += means[queries.groups[i]];

  const Eigen::MatrixXd V = s.chol.llt.matrixL().solve(Kq.transpose());
  out.variance.resize(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    double v = spec.variance(queries.groups[i]) - V.col(i).squaredNorm();
    if (v < 0.0) {
      if (v < -kClampReport) out.clamped = true;
      v = 0.0;
    }
    if (options.mode == PredictMode::kResponse) v += noise.variance(queries.groups[i]);
    out.variance[i] = v;
  }
  if (options.covariance) {
    Eigen::MatrixXd C = spec.gram(queries.X, queries.groups);
    C.noalias() -= V.transpose() * V;
    if (options.mode == PredictMode::kResponse)
      for (Eigen::Index i = 0; i < m; ++i) C(i, i) += noise.variance(queries.groups[i]);
    out.covariance = std::move(C);
  }
  return out;
}

LatentConditional latentConditional(const KernelSpec& spec, const GroupedDataset& data, const NoiseSpec& noise,
                                    const BetaChoice& beta) {
  checkInputs(spec, data, noise);
  const Eigen::MatrixXd K = spec.gram(data.X, data.groups);
  Eigen::MatrixXd Sigma = K;
  for (Eigen::Index i = 0; i < data.size(); ++i) Sigma(i, i) += noise.variance(data.groups[i]);
  const Solved s = solve(Sigma, data, beta);
  LatentConditional out;
  out.mean = K * s.alpha;
  const Eigen::MatrixXd V = s.chol.llt.matrixL().solve(K);
  out.covariance = K;
  out.covariance.noalias() -= V.transpose() * V;
  out.covariance = 0.5 * (out.covariance + out.covariance.transpose()).eval();
  return out;
}

Eigen::VectorXd recoverLatent(const KernelSpec& spec, const GroupedDataset& data, const NoiseSpec& noise,
                              const BetaChoice& beta, std::uint64_t seed) {
  const LatentConditional cond = latentConditional(spec, data, noise, beta);
  const CholeskyResult chol = choleskyWithJitter(cond.covariance);
  Rng rng(seed);
  return cond.mean + chol.llt.matrixL() * rng.normalVector(cond.mean.size());
}

GroupedDataset readDatasetCsv(std::istream& in, const GroupSpace& space) {
  std::vector<std::string> header;
  if (!csv::nextRow(in, header)) throw ValidationError("dataset CSV is empty");
  if (header.size() < 3 || header[0] != "group" || header[1] != "y") {
    throw ValidationError("dataset CSV header must start with group,y,x1");
  }
  int p = 0;
  int q = 0;
  for (std::size_t j = 2; j < header.size(); ++j) {
    const std::string expectX = "x" + std::to_string(p + 1);
    const std::string expectF = "f" + std::to_string(q + 1);
    if (q == 0 && header[j] == expectX) {
      ++p;
    } else if (header[j] == expectF) {
      ++q;
    } else {
      throw ValidationError("dataset CSV: unexpected column '" + header[j] + "'");
    }
  }
  if (p == 0) throw ValidationError("dataset CSV needs at least one x column");

  std::vector<int> groups;
  std::vector<double> ys, xs, fs;
  std::vector<std::string> row;
  while (csv::nextRow(in, row)) {
    const std::string where = "dataset CSV row " + std::to_string(groups.size() + 1);
    if (row.size() != header.size()) throw ValidationError(where + ": expected " + std::to_string(header.size()) + " fields");
    groups.push_back(space.indexOf(row[0]));
    ys.push_back(csv::parseReal(row[1], where));
    for (int j = 0; j < p; ++j) xs.push_back(csv::parseReal(row[2 + j], where));
    for (int j = 0; j < q; ++j) fs.push_back(csv::parseReal(row[2 + p + j], where));
  }
  const auto n = static_cast<Eigen::Index>(groups.size());
  GroupedDataset data;
  data.groups = std::move(groups);
  data.y = Eigen::Map<Eigen::VectorXd>(ys.data(), n);
  data.X = Eigen::Map<Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(xs.data(), n, p);
  if (q > 0) {
    data.design = Eigen::Map<Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(fs.data(), n, q);
    data.designGroups.assign(q, 0);
    for (int j = 0; j < q; ++j) {
      Eigen::Index i = 0;
      while (i < n && (*data.design)(i, j) == 0.0) ++i;
      if (i == n) throw ValidationError("design column f" + std::to_string(j + 1) + " is identically zero");
      data.designGroups[j] = data.groups[i];
    }
  }
  data.validate(space.size());
  return data;
}

void writeDatasetCsv(std::ostream& out, const GroupedDataset& data, const GroupSpace& space) {
  data.validate(space.size());
  out << "group,y";
  for (int j = 0; j < data.p(); ++j) out << ",x" << j + 1;
  for (Eigen::Index j = 0; j < data.designColumns(); ++j) out << ",f" << j + 1;
  out << '\n';
  for (Eigen::Index i = 0; i < data.size(); ++i) {
    out << space.labels()[data.groups[i]] << ',' << csv::formatReal(data.y[i]);
    for (int j = 0; j < data.p(); ++j) out << ',' << csv::formatReal(data.X(i, j));
    for (Eigen::Index j = 0; j < data.designColumns(); ++j) out << ',' << csv::formatReal((*data.design)(i, j));
    out << '\n';
  }
}

}  // namespace mggp
