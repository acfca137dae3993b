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

#include "mggp/groups.hpp"

#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <set>

#include <Eigen/Eigenvalues>

#include "csv.hpp"
#include "mggp/errors.hpp"

namespace mggp {

GroupSpace::GroupSpace(std::vector<std::string> labels, Eigen::MatrixXd distances)
    : labels_(std::move(labels)), distances_(std::move(distances)) {
  const auto k = static_cast<Eigen::Index>(labels_.size());
  if (k < 1) throw ValidationError("group space needs at least one group");
  if (distances_.rows() != k || distances_.cols() != k) {
    throw ValidationError("distance matrix must be " + std::to_string(k) + "x" + std::to_string(k));
  }
  std::set<std::string> seen;
  for (const auto& label : labels_) {
    if (label.empty()) throw ValidationError("group labels must be nonempty");
    if (!seen.insert(label).second) throw ValidationError("duplicate group label '" + label + "'");
  }
  for (Eigen::Index i = 0; i < k; ++i) {
    if (distances_(i, i) != 0.0) throw ValidationError("distance diagonal must be zero");
    for (Eigen::Index j = 0; j < k; ++j) {
      const double d = distances_(i, j);
      if (!std::isfinite(d) || d < 0.0) throw ValidationError("distances must be finite and nonnegative");
      if (d != distances_(j, i)) throw ValidationError("distance matrix must be symmetric");
    }
  }
}

int GroupSpace::indexOf(std::string_view label) const {
  for (int i = 0; i < size(); ++i) {
    if (labels_[i] == label) return i;
  }
  throw ValidationError("unknown group label '" + std::string(label) + "'");
}

bool GroupSpace::isDiscrete() const noexcept {
  for (int i = 0; i < size(); ++i) {
    for (int j = 0; j < size(); ++j) {
      if (i != j && distances_(i, j) != 1.0) return false;
    }
  }
  return true;
}

bool GroupSpace::satisfiesTriangleInequality(double tol) const noexcept {
  const int k = size();
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j)
      for (int m = 0; m < k; ++m)
        if (distances_(i, j) > distances_(i, m) + distances_(m, j) + tol) return false;
  return true;
}

GroupSpace GroupSpace::subspace(std::span<const int> groups) const {
  const auto m = static_cast<Eigen::Index>(groups.size());
  std::vector<std::string> labels;
  Eigen::MatrixXd d(m, m);
  for (Eigen::Index i = 0; i < m; ++i) {
    const int gi = groups[i];
    if (gi < 0 || gi >= size()) throw ValidationError("subspace group index out of range");
    labels.push_back(labels_[gi]);
    for (Eigen::Index j = 0; j < m; ++j) d(i, j) = distances_(gi, groups[j]);
  }
  return GroupSpace(std::move(labels), std::move(d));
}

std::vector<std::string> defaultLabels(int k) {
  std::vector<std::string> labels;
  for (int i = 1; i <= k; ++i) labels.push_back("c" + std::to_string(i));
  return labels;
}

GroupSpace discreteMetric(int k, std::vector<std::string> labels) {
  if (k < 1) throw ValidationError("discrete metric needs k >= 1");
  if (static_cast<int>(labels.size()) != k) throw ValidationError("expected " + std::to_string(k) + " labels");
  Eigen::MatrixXd d = Eigen::MatrixXd::Ones(k, k);
  d.diagonal().setZero();
  return GroupSpace(std::move(labels), std::move(d));
}

GramFacts gramFacts(const GroupSpace& space) {
  const int k = space.size();
  const Eigen::MatrixXd sq = space.distances().array().square().matrix();
  GramFacts facts;
  facts.gram.resize(k, k);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) facts.gram(i, j) = 0.5 * (sq(0, i) + sq(0, j) - sq(i, j));

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(facts.gram, Eigen::EigenvaluesOnly);
  const Eigen::VectorXd& values = eig.eigenvalues();
  facts.minEigenvalue = values.minCoeff();
  // Singular values of a symmetric matrix are the absolute eigenvalues.
  const double sigmaMax = values.cwiseAbs().maxCoeff();
  const double threshold = k * std::numeric_limits<double>::epsilon() * sigmaMax;
  facts.rank = sigmaMax > 0.0 ? static_cast<int>((values.cwiseAbs().array() > threshold).count()) : 0;
  facts.isPSD = facts.minEigenvalue >= -1e-10 * k;
  return facts;
}

std::vector<Eigen::VectorXd> simplexEmbedding(const GroupSpace& space) {
  const int k = space.size();
  if (k < 2) throw ValidationError("simplex embedding needs k >= 2");
  if (!space.isDiscrete()) throw UnsupportedError("simplex embedding is only defined for the discrete metric");
  const int dim = k - 1;
  const double shift = (1.0 + 1.0 / std::sqrt(static_cast<double>(k))) / (dim * std::sqrt(2.0));
  std::vector<Eigen::VectorXd> points;
  points.reserve(k);
  for (int i = 0; i < dim; ++i) {
    Eigen::VectorXd v = Eigen::VectorXd::Constant(dim, -shift);
    v(i) += 1.0 / std::sqrt(2.0);
    points.push_back(std::move(v));
  }
  // Centroid of the simplex sits at the origin.
  points.push_back(Eigen::VectorXd::Constant(dim, 1.0 / std::sqrt(2.0 * k)));
  return points;
}

GroupSpace readDistanceCsv(std::istream& in) {
  std::vector<std::string> header;
  if (!csv::nextRow(in, header)) throw ValidationError("distance CSV is empty");
  const auto k = static_cast<Eigen::Index>(header.size());
  Eigen::MatrixXd d(k, k);
  std::vector<std::string> row;
  for (Eigen::Index i = 0; i < k; ++i) {
    if (!csv::nextRow(in, row)) throw ValidationError("distance CSV: expected " + std::to_string(k) + " rows");
    if (static_cast<Eigen::Index>(row.size()) != k) {
      throw ValidationError("distance CSV row " + std::to_string(i + 1) + ": expected " + std::to_string(k) + " fields");
    }
    for (Eigen::Index j = 0; j < k; ++j) d(i, j) = csv::parseReal(row[j], "distance CSV");
  }
  if (csv::nextRow(in, row)) throw ValidationError("distance CSV has trailing rows");
  return GroupSpace(std::move(header), std::move(d));
}

void writeDistanceCsv(std::ostream& out, const GroupSpace& space) {
  const int k = space.size();
  for (int i = 0; i < k; ++i) out << (i ? "," : "") << space.labels()[i];
  out << '\n';
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < k; ++j) out << (j ? "," : "") << csv::formatReal(space.distance(i, j));
    out << '\n';
  }
}

}  // namespace mggp
