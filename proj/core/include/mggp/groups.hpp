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

#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

namespace mggp {

/// A finite set of labelled groups with a symmetric distance matrix.
///
/// Distances need not satisfy the triangle inequality; kernels only consume
/// the d_ij values. Use satisfiesTriangleInequality() to surface the warning.
class GroupSpace {
 public:
  /// Throws ValidationError on duplicate labels, shape mismatch, asymmetric
  /// or negative distances, or a nonzero diagonal.
  GroupSpace(std::vector<std::string> labels, Eigen::MatrixXd distances);

  int size() const noexcept { return static_cast<int>(labels_.size()); }
  const std::vector<std::string>& labels() const noexcept { return labels_; }
  const Eigen::MatrixXd& distances() const noexcept { return distances_; }
  double distance(int i, int j) const { return distances_(i, j); }

  /// Index of a label; throws ValidationError if absent.
  int indexOf(std::string_view label) const;

  /// True when every off-diagonal distance is exactly 1.
  bool isDiscrete() const noexcept;
  bool satisfiesTriangleInequality(double tol = 1e-12) const noexcept;

  /// The space restricted to the listed groups, in the given order.
  GroupSpace subspace(std::span<const int> groups) const;

  friend bool operator==(const GroupSpace&, const GroupSpace&) = default;

 private:
  std::vector<std::string> labels_;
  Eigen::MatrixXd distances_;
};

/// Labels "c1", ..., "ck".
std::vector<std::string> defaultLabels(int k);

/// The noninformative metric d_ij = 1 - delta_ij.
GroupSpace discreteMetric(int k, std::vector<std::string> labels);
inline GroupSpace discreteMetric(int k) { return discreteMetric(k, defaultLabels(k)); }

struct GramFacts {
  Eigen::MatrixXd gram;
  int rank = 0;
  bool isPSD = true;
  double minEigenvalue = 0.0;
};

/// Gram matrix anchored at the first group,
/// G_ij = (d_1i^2 + d_1j^2 - d_ij^2) / 2. An isometric embedding into R^rank
/// exists iff G is positive semi-definite.
GramFacts gramFacts(const GroupSpace& space);

/// Vertices of the regular (k-1)-simplex with unit edges, one per group.
/// Requires the discrete metric and k >= 2.
std::vector<Eigen::VectorXd> simplexEmbedding(const GroupSpace& space);

/// CSV with a header row of labels followed by k rows of k distances.
GroupSpace readDistanceCsv(std::istream& in);
void writeDistanceCsv(std::ostream& out, const GroupSpace& space);

}  // namespace mggp
