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

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "mggp/groups.hpp"

namespace mggp {

/// Covariance families on R^p x C. Below A = a^2 d_ij^2 and r = ||x - x'||.
enum class Family {
  kMgRbf,                 ///< s2 (A+1)^{-p/2} exp(-b^2 r^2 / (A+1))
  kMgRbfPrime,            ///< as kMgRbf with a d_ij in place of A
  kMgMatern,              ///< Matern analogue with dependency scale c and smoothness nu
  kMgExponential,         ///< kMgMatern at nu = 1/2
  kAppendix1,             ///< s2 (A+1) / ((A+1)^2 + b^2 r^2)^{(p+1)/2}
  kAppendix2,             ///< as kAppendix1 with a d_ij in place of A
  kAppendix3,             ///< s2 exp(-A - b^2 r^2 - c d^2 r^2)
  kAppendix4,             ///< s2 exp(-a d - b^2 r^2 - c d r^2)
  kSeparableHomogeneous,  ///< s2 exp(-b^2 r^2) * (1 if same group else b_cat)
  kSgp,                   ///< s2 exp(-b^2 r^2) within groups, 0 across
  kUgp,                   ///< s2 exp(-b^2 r^2), group-blind
  kHgp,                   ///< K_g + 1{same group} K_z
  kGneitingComposite,     ///< s2 psi(d^2)^{-p/2} phi(r^2 / psi(d^2))
};

std::string_view familyName(Family family);
/// Inverse of familyName; throws ValidationError.
Family parseFamily(std::string_view name);
const std::vector<Family>& allFamilies();

/// Hyperparameters. Only the ones a family uses are present.
struct HyperParams {
  double sigma2 = 1.0;
  std::optional<double> a;
  std::optional<double> b;
  std::optional<double> c;
  std::optional<double> nu;

  friend bool operator==(const HyperParams&, const HyperParams&) = default;
};

/// Completely monotone candidates for the Gneiting composition. The scale c
/// lives in HyperParams::c.
enum class PhiKind {
  kPowerExponential,  ///< exp(-c t^gamma)
  kMatern,            ///< (2^{nu-1} Gamma(nu))^{-1} (c t^{1/2})^nu K_nu(c t^{1/2})
  kCauchy,            ///< (1 + c t^gamma)^{-nu}
  kHyperbolicSecant,  ///< 2^nu (exp(c t^{1/2}) + exp(-c t^{1/2}))^{-nu}
};

/// Positive functions with completely monotone derivative. The scale a
/// lives in HyperParams::a.
enum class PsiKind {
  kPower,        ///< (a t^alpha + 1)^beta
  kLogarithmic,  ///< log(a t^alpha + base) / log(base)
  kRational,     ///< (a t^alpha + beta) / (beta (a t^alpha + 1))
};

struct PhiSelection {
  PhiKind kind = PhiKind::kPowerExponential;
  double gamma = 1.0;
  double nu = 0.5;

  friend bool operator==(const PhiSelection&, const PhiSelection&) = default;
};

struct PsiSelection {
  PsiKind kind = PsiKind::kPower;
  double alpha = 1.0;
  double beta = 1.0;
  double base = 2.0;

  friend bool operator==(const PsiSelection&, const PsiSelection&) = default;
};

std::string_view phiKindName(PhiKind kind);
PhiKind parsePhiKind(std::string_view name);
std::string_view psiKindName(PsiKind kind);
PsiKind parsePsiKind(std::string_view name);

/// An immutable, validated covariance function on R^p x C.
///
/// Free parameters (parameterNames) are the positive scales an optimizer may
/// move in log space. Shape parameters (nu, b_cat, the Gneiting exponents)
/// are fixed by the spec. HGP exposes its sub-kernels' parameters as "g.<name>"
/// and "z.<name>".
class KernelSpec {
 public:
  /// Families parameterized by HyperParams alone (everything except
  /// separable-homogeneous, HGP, and Gneiting composites).
  KernelSpec(Family family, int p, HyperParams params, GroupSpace space);

  /// Throws ValidationError unless -1/(k-1) <= bCat <= 1.
  static KernelSpec separableHomogeneous(int p, double sigma2, double b, double bCat, GroupSpace space);
  /// Skips the categorical bound. For tests of the PD probes only.
  static KernelSpec separableHomogeneousUnchecked(int p, double sigma2, double b, double bCat, GroupSpace space);
  /// K_g + 1{i=j} K_z. Both sub-kernels must share p and the group space.
  static KernelSpec hierarchical(KernelSpec global, KernelSpec group);

  Family family() const noexcept { return family_; }
  int p() const noexcept { return p_; }
  const HyperParams& params() const noexcept { return params_; }
  const GroupSpace& space() const noexcept { return space_; }
  int groupCount() const noexcept { return space_.size(); }
  std::optional<double> categoricalOffDiagonal() const noexcept { return bCat_; }
  const PhiSelection& phi() const noexcept { return phi_; }
  const PsiSelection& psi() const noexcept { return psi_; }
  /// HGP sub-kernels; throw ValidationError for other families.
  const KernelSpec& globalKernel() const;
  const KernelSpec& groupKernel() const;

  std::vector<std::string> parameterNames() const;
  double parameter(std::string_view name) const;
  KernelSpec withParameter(std::string_view name, double value) const;
  /// Same family and parameters over a different group space.
  KernelSpec withSpace(GroupSpace space) const;

  double evaluate(const Eigen::Ref<const Eigen::VectorXd>& x, int gi,
                  const Eigen::Ref<const Eigen::VectorXd>& xp, int gj) const;
  /// K((x, g), (x, g)).
  double variance(int group) const;

  /// Rows of X are points; groups[i] is the group of row i.
  Eigen::MatrixXd gram(const Eigen::Ref<const Eigen::MatrixXd>& X, std::span<const int> groups) const;
  Eigen::MatrixXd crossGram(const Eigen::Ref<const Eigen::MatrixXd>& Xa, std::span<const int> groupsA,
                            const Eigen::Ref<const Eigen::MatrixXd>& Xb, std::span<const int> groupsB) const;
  /// Entrywise dK/d(param) at the current value. Throws ValidationError on an
  /// unknown or fixed parameter.
  Eigen::MatrixXd gramGradient(const Eigen::Ref<const Eigen::MatrixXd>& X, std::span<const int> groups,
                               std::string_view param) const;

  /// The k x k cross-covariance M_ij = K((x, c_i), (x', c_j)) of the
  /// equivalent k-variate process.
  Eigen::MatrixXd crossCovariance(const Eigen::Ref<const Eigen::VectorXd>& x,
                                  const Eigen::Ref<const Eigen::VectorXd>& xp) const;

 private:
  KernelSpec() = default;
  friend KernelSpec gneitingCompose(PhiSelection, PsiSelection, double, double, double, GroupSpace, int);

  void validate() const;
  void checkShapes(const Eigen::Ref<const Eigen::MatrixXd>& X, std::span<const int> groups) const;
  double evaluateSquared(double r2, int gi, int gj) const;

  Family family_ = Family::kUgp;
  int p_ = 1;
  HyperParams params_;
  GroupSpace space_{{"c1"}, Eigen::MatrixXd::Zero(1, 1)};
  std::optional<double> bCat_;
  PhiSelection phi_;
  PsiSelection psi_;
  std::shared_ptr<const KernelSpec> global_;
  std::shared_ptr<const KernelSpec> group_;
};

/// Gneiting-type composition with t = d_ij^2. a scales psi, c scales phi.
/// Shape parameters are checked against the admissible ranges
/// (c, nu > 0, base > 1, 0 < alpha, beta, gamma <= 1); a >= 0.
KernelSpec gneitingCompose(PhiSelection phi, PsiSelection psi, double sigma2, double a, double c,
                           GroupSpace space, int p);

/// Parameters of the RBF base kernel used by SGP/UGP/HGP.
KernelSpec rbfKernel(Family family, int p, double sigma2, double b, GroupSpace space);

}  // namespace mggp
