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

#include "mggp/kernels.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <utility>

#include "dual.hpp"
#include "mggp/errors.hpp"

namespace mggp {

namespace {

using detail::Dual;

constexpr double kMaternCoincidentRadius = 1e-12;
constexpr double kMaxSmoothness = 10.0;

struct FamilyInfo {
  Family family;
  std::string_view name;
};

constexpr std::array<FamilyInfo, 13> kFamilies{{
    {Family::kMgRbf, "mg-rbf"},
    {Family::kMgRbfPrime, "mg-rbf-prime"},
    {Family::kMgMatern, "mg-matern"},
    {Family::kMgExponential, "mg-exponential"},
    {Family::kAppendix1, "appendix-1"},
    {Family::kAppendix2, "appendix-2"},
    {Family::kAppendix3, "appendix-3"},
    {Family::kAppendix4, "appendix-4"},
    {Family::kSeparableHomogeneous, "separable-homogeneous"},
    {Family::kSgp, "sgp"},
    {Family::kUgp, "ugp"},
    {Family::kHgp, "hgp"},
    {Family::kGneitingComposite, "gneiting-composite"},
}};

// Which of a, b, c, nu a family carries (sigma2 is always present).
struct Usage {
  bool a, b, c, nu;
};

Usage usage(Family family) {
  switch (family) {
    case Family::kMgRbf:
    case Family::kMgRbfPrime:
    case Family::kAppendix1:
    case Family::kAppendix2:
      return {true, true, false, false};
    case Family::kMgMatern:
      return {true, true, true, true};
    case Family::kMgExponential:
    case Family::kAppendix3:
    case Family::kAppendix4:
      return {true, true, true, false};
    case Family::kSeparableHomogeneous:
    case Family::kSgp:
    case Family::kUgp:
      return {false, true, false, false};
    case Family::kGneitingComposite:
      return {true, false, true, false};
    case Family::kHgp:
      return {false, false, false, false};
  }
  return {false, false, false, false};
}

template <class T>
struct Pack {
  T sigma2, a, b, c;
};

template <class T>
Pack<T> lift(const HyperParams& hp) {
  return {T(hp.sigma2), T(hp.a.value_or(0.0)), T(hp.b.value_or(0.0)), T(hp.c.value_or(0.0))};
}

// (z/2)^nu K_nu(z) scaled by 2 / Gamma(nu); equals 1 at z = 0.
template <class T>
T maternShape(double nu, const T& z) {
  using std::pow;
  using detail::pow;
  using detail::besselK;
  const double zv = detail::value(z);
  if (zv <= 0.0) return T(1.0);
  if (nu >= 1.0 && zv < 1e-8) return T(1.0);
  if constexpr (std::is_same_v<T, double>) {
    return 2.0 / std::tgamma(nu) * std::pow(0.5 * z, nu) * mggp::besselK(nu, z);
  } else {
    return 2.0 / std::tgamma(nu) * pow(0.5 * z, nu) * besselK(nu, z);
  }
}

template <class T>
T psiValue(const PsiSelection& psi, const T& a, double t) {
  using std::log;
  using std::pow;
  using detail::log;
  using detail::pow;
  const double ta = t > 0.0 ? std::pow(t, psi.alpha) : 0.0;
  switch (psi.kind) {
    case PsiKind::kPower:
      return pow(a * ta + 1.0, psi.beta);
    case PsiKind::kLogarithmic:
      return log(a * ta + psi.base) / std::log(psi.base);
    case PsiKind::kRational:
      return (a * ta + psi.beta) / (psi.beta * (a * ta + 1.0));
  }
  return T(1.0);
}

template <class T>
T phiValue(const PhiSelection& phi, const T& c, const T& u) {
  using std::exp;
  using std::log1p;
  using std::pow;
  using std::sqrt;
  using detail::exp;
  using detail::log1p;
  using detail::pow;
  using detail::sqrt;
  if (detail::value(u) <= 0.0) return T(1.0);
  switch (phi.kind) {
    case PhiKind::kPowerExponential:
      return exp(-(c * pow(u, phi.gamma)));
    case PhiKind::kMatern: {
      // (2^{nu-1} Gamma(nu))^{-1} w^nu K_nu(w) = 2/Gamma(nu) (w/2)^nu K_nu(w).
      return maternShape(phi.nu, c * sqrt(u));
    }
    case PhiKind::kCauchy:
      return pow(1.0 + c * pow(u, phi.gamma), -phi.nu);
    case PhiKind::kHyperbolicSecant: {
      const T w = c * sqrt(u);
      return exp(-phi.nu * (w + log1p(exp(-2.0 * w)) - std::numbers::ln2));
    }
  }
  return T(1.0);
}

// Kernel value for a non-hierarchical family at squared feature distance r2
// and group distance d.
template <class T>
T familyValue(Family family, int p, const Pack<T>& k, const HyperParams& hp, std::optional<double> bCat,
              const PhiSelection& phi, const PsiSelection& psi, double r2, double d, bool same) {
  using std::exp;
  using std::pow;
  using std::sqrt;
  using detail::exp;
  using detail::pow;
  using detail::sqrt;
  const double halfP = 0.5 * p;
  switch (family) {
    case Family::kMgRbf: {
      const T scale = k.a * k.a * (d * d) + 1.0;
      return k.sigma2 * pow(scale, -halfP) * exp(-(k.b * k.b * r2) / scale);
    }
    case Family::kMgRbfPrime: {
      const T scale = k.a * d + 1.0;
      return k.sigma2 * pow(scale, -halfP) * exp(-(k.b * k.b * r2) / scale);
    }
    case Family::kMgMatern:
    case Family::kMgExponential: {
      const double nu = family == Family::kMgMatern ? *hp.nu : 0.5;
      const T A = k.a * k.a * (d * d);
      const T pre = k.sigma2 * pow(k.c, halfP) / (pow(A + 1.0, nu) * pow(A + k.c, halfP));
      const double r = std::sqrt(r2);
      if (r < kMaternCoincidentRadius) return pre;
      const T z = k.b * sqrt((A + 1.0) / (A + k.c)) * r;
      if (family == Family::kMgExponential) return pre * exp(-z);
      return pre * maternShape(nu, z);
    }
    case Family::kAppendix1:
    case Family::kAppendix2: {
      const T scale = family == Family::kAppendix1 ? k.a * k.a * (d * d) + 1.0 : k.a * d + 1.0;
      return k.sigma2 * scale / pow(scale * scale + k.b * k.b * r2, 0.5 * (p + 1));
    }
    case Family::kAppendix3:
      return k.sigma2 * exp(-(k.a * k.a * (d * d)) - k.b * k.b * r2 - k.c * (d * d * r2));
    case Family::kAppendix4:
      return k.sigma2 * exp(-(k.a * d) - k.b * k.b * r2 - k.c * (d * r2));
    case Family::kSeparableHomogeneous: {
      const T base = k.sigma2 * exp(-(k.b * k.b * r2));
      return same ? base : base * *bCat;
    }
    case Family::kSgp:
      return same ? k.sigma2 * exp(-(k.b * k.b * r2)) : T(0.0);
    case Family::kUgp:
      return k.sigma2 * exp(-(k.b * k.b * r2));
    case Family::kGneitingComposite: {
      const T psiAt = psiValue(psi, k.a, d * d);
      return k.sigma2 * pow(psiAt, -halfP) * phiValue(phi, k.c, r2 / psiAt);
    }
    case Family::kHgp:
      break;
  }
  throw ValidationError("familyValue: hierarchical kernels are evaluated through their sub-kernels");
}

double squaredDistance(const Eigen::Ref<const Eigen::VectorXd>& x, const Eigen::Ref<const Eigen::VectorXd>& y) {
  return (x - y).squaredNorm();
}

void requirePositive(std::string_view what, double v) {
  if (!(v > 0.0) || !std::isfinite(v)) throw ValidationError(std::string(what) + " must be positive and finite");
}

}  // namespace

std::string_view familyName(Family family) {
  for (const auto& info : kFamilies)
    if (info.family == family) return info.name;
  return "unknown";
}

Family parseFamily(std::string_view name) {
  for (const auto& info : kFamilies)
    if (info.name == name) return info.family;
  throw ValidationError("unknown kernel family '" + std::string(name) + "'");
}

const std::vector<Family>& allFamilies() {
  static const std::vector<Family> families = [] {
    std::vector<Family> out;
    for (const auto& info : kFamilies) out.push_back(info.family);
    return out;
  }();
  return families;
}

std::string_view phiKindName(PhiKind kind) {
  switch (kind) {
    case PhiKind::kPowerExponential: return "exp";
    case PhiKind::kMatern: return "matern";
    case PhiKind::kCauchy: return "cauchy";
    case PhiKind::kHyperbolicSecant: return "sech";
  }
  return "unknown";
}

PhiKind parsePhiKind(std::string_view name) {
  for (PhiKind kind : {PhiKind::kPowerExponential, PhiKind::kMatern, PhiKind::kCauchy, PhiKind::kHyperbolicSecant})
    if (phiKindName(kind) == name) return kind;
  throw ValidationError("unknown phi kind '" + std::string(name) + "'");
}

std::string_view psiKindName(PsiKind kind) {
  switch (kind) {
    case PsiKind::kPower: return "power";
    case PsiKind::kLogarithmic: return "log";
    case PsiKind::kRational: return "rational";
  }
  return "unknown";
}

PsiKind parsePsiKind(std::string_view name) {
  for (PsiKind kind : {PsiKind::kPower, PsiKind::kLogarithmic, PsiKind::kRational})
    if (psiKindName(kind) == name) return kind;
  throw ValidationError("unknown psi kind '" + std::string(name) + "'");
}

KernelSpec::KernelSpec(Family family, int p, HyperParams params, GroupSpace space)
    : family_(family), p_(p), params_(std::move(params)), space_(std::move(space)) {
  if (family == Family::kSeparableHomogeneous || family == Family::kHgp || family == Family::kGneitingComposite) {
    throw ValidationError(std::string(familyName(family)) + " kernels are built with their dedicated factory");
  }
  validate();
}

KernelSpec KernelSpec::separableHomogeneousUnchecked(int p, double sigma2, double b, double bCat, GroupSpace space) {
  KernelSpec spec;
  spec.family_ = Family::kSeparableHomogeneous;
  spec.p_ = p;
  spec.params_.sigma2 = sigma2;
  spec.params_.b = b;
  spec.space_ = std::move(space);
  spec.bCat_ = bCat;
  if (p < 1) throw ValidationError("input dimension p must be >= 1");
  requirePositive("sigma2", sigma2);
  requirePositive("b", b);
  return spec;
}

KernelSpec KernelSpec::separableHomogeneous(int p, double sigma2, double b, double bCat, GroupSpace space) {
  KernelSpec spec = separableHomogeneousUnchecked(p, sigma2, b, bCat, std::move(space));
  spec.validate();
  return spec;
}

KernelSpec KernelSpec::hierarchical(KernelSpec global, KernelSpec group) {
  if (global.p_ != group.p_) throw ValidationError("HGP sub-kernels must share the input dimension");
  if (!(global.space_ == group.space_)) throw ValidationError("HGP sub-kernels must share the group space");
  if (global.family_ == Family::kHgp || group.family_ == Family::kHgp) {
    throw ValidationError("HGP sub-kernels cannot themselves be hierarchical");
  }
  KernelSpec spec;
  spec.family_ = Family::kHgp;
  spec.p_ = global.p_;
  spec.space_ = global.space_;
  spec.params_.sigma2 = global.params_.sigma2 + group.params_.sigma2;
  spec.global_ = std::make_shared<const KernelSpec>(std::move(global));
  spec.group_ = std::make_shared<const KernelSpec>(std::move(group));
  return spec;
}

KernelSpec gneitingCompose(PhiSelection phi, PsiSelection psi, double sigma2, double a, double c, GroupSpace space,
                           int p) {
  KernelSpec spec;
  spec.family_ = Family::kGneitingComposite;
  spec.p_ = p;
  spec.params_.sigma2 = sigma2;
  spec.params_.a = a;
  spec.params_.c = c;
  spec.space_ = std::move(space);
  spec.phi_ = phi;
  spec.psi_ = psi;
  spec.validate();
  return spec;
}

KernelSpec rbfKernel(Family family, int p, double sigma2, double b, GroupSpace space) {
  HyperParams hp;
  hp.sigma2 = sigma2;
  hp.b = b;
  return KernelSpec(family, p, hp, std::move(space));
}

void KernelSpec::validate() const {
  if (p_ < 1) throw ValidationError("input dimension p must be >= 1");
  if (family_ == Family::kHgp) return;
  requirePositive("sigma2", params_.sigma2);
  const Usage use = usage(family_);
  auto check = [&](std::string_view name, const std::optional<double>& v, bool used) {
    if (used && !v) throw ValidationError(std::string(familyName(family_)) + " requires parameter " + std::string(name));
    if (!used && v) throw ValidationError(std::string(familyName(family_)) + " does not use parameter " + std::string(name));
  };
  check("a", params_.a, use.a);
  check("b", params_.b, use.b);
  check("c", params_.c, use.c);
  check("nu", params_.nu, use.nu);
  if (params_.a && (!(*params_.a >= 0.0) || !std::isfinite(*params_.a))) {
    throw ValidationError("a must be nonnegative and finite");
  }
  if (params_.b) requirePositive("b", *params_.b);
  if (params_.c) requirePositive("c", *params_.c);
  if (params_.nu) {
    requirePositive("nu", *params_.nu);
    if (*params_.nu > kMaxSmoothness) throw UnsupportedError("Matern smoothness nu must lie in (0, 10]");
  }
  if (family_ == Family::kSeparableHomogeneous) {
    const int k = space_.size();
    const double b = bCat_.value_or(0.0);
    const double lower = k > 1 ? -1.0 / (k - 1) : -1.0;
    if (!(b >= lower && b <= 1.0)) {
      throw ValidationError("categorical off-diagonal b_cat must lie in [-1/(k-1), 1]");
    }
  }
  if (family_ == Family::kGneitingComposite) {
    auto unit = [](std::string_view name, double v) {
      if (!(v > 0.0 && v <= 1.0)) throw ValidationError(std::string(name) + " must lie in (0, 1]");
    };
    if (phi_.kind == PhiKind::kPowerExponential || phi_.kind == PhiKind::kCauchy) unit("phi gamma", phi_.gamma);
    if (phi_.kind != PhiKind::kPowerExponential) requirePositive("phi nu", phi_.nu);
    if (phi_.kind == PhiKind::kMatern && phi_.nu > kMaxSmoothness) {
      throw UnsupportedError("Matern smoothness nu must lie in (0, 10]");
    }
    unit("psi alpha", psi_.alpha);
    if (psi_.kind != PsiKind::kLogarithmic) unit("psi beta", psi_.beta);
    if (psi_.kind == PsiKind::kLogarithmic && !(psi_.base > 1.0)) throw ValidationError("psi base must exceed 1");
  }
}

const KernelSpec& KernelSpec::globalKernel() const {
  if (!global_) throw ValidationError("not a hierarchical kernel");
  return *global_;
}

const KernelSpec& KernelSpec::groupKernel() const {
  if (!group_) throw ValidationError("not a hierarchical kernel");
  return *group_;
}

std::vector<std::string> KernelSpec::parameterNames() const {
  if (family_ == Family::kHgp) {
    std::vector<std::string> names;
    for (const auto& n : global_->parameterNames()) names.push_back("g." + n);
    for (const auto& n : group_->parameterNames()) names.push_back("z." + n);
    return names;
  }
  const Usage use = usage(family_);
  std::vector<std::string> names{"sigma2"};
  if (use.a) names.emplace_back("a");
  if (use.b) names.emplace_back("b");
  if (use.c) names.emplace_back("c");
  return names;
}

double KernelSpec::parameter(std::string_view name) const {
  if (family_ == Family::kHgp) {
    if (name.starts_with("g.")) return global_->parameter(name.substr(2));
    if (name.starts_with("z.")) return group_->parameter(name.substr(2));
    throw ValidationError("unknown HGP parameter '" + std::string(name) + "'");
  }
  auto get = [&](const std::optional<double>& v) {
    if (!v) throw ValidationError(std::string(familyName(family_)) + " has no parameter '" + std::string(name) + "'");
    return *v;
  };
  if (name == "sigma2") return params_.sigma2;
  if (name == "a") return get(params_.a);
  if (name == "b") return get(params_.b);
  if (name == "c") return get(params_.c);
  if (name == "nu") return get(params_.nu);
  if (name == "b_cat" && bCat_) return *bCat_;
  throw ValidationError(std::string(familyName(family_)) + " has no parameter '" + std::string(name) + "'");
}

KernelSpec KernelSpec::withParameter(std::string_view name, double value) const {
  KernelSpec out = *this;
  if (family_ == Family::kHgp) {
    if (name.starts_with("g.")) {
      return hierarchical(global_->withParameter(name.substr(2), value), *group_);
    }
    if (name.starts_with("z.")) {
      return hierarchical(*global_, group_->withParameter(name.substr(2), value));
    }
    throw ValidationError("unknown HGP parameter '" + std::string(name) + "'");
  }
  auto set = [&](std::optional<double>& slot) {
    if (!slot) throw ValidationError(std::string(familyName(family_)) + " has no parameter '" + std::string(name) + "'");
    slot = value;
  };
  if (name == "sigma2") {
    out.params_.sigma2 = value;
  } else if (name == "a") {
    set(out.params_.a);
  } else if (name == "b") {
    set(out.params_.b);
  } else if (name == "c") {
    set(out.params_.c);
  } else if (name == "nu") {
    set(out.params_.nu);
  } else if (name == "b_cat" && bCat_) {
    out.bCat_ = value;
  } else {
    throw ValidationError(std::string(familyName(family_)) + " has no parameter '" + std::string(name) + "'");
  }
  out.validate();
  return out;
}

KernelSpec KernelSpec::withSpace(GroupSpace space) const {
  if (family_ == Family::kHgp) {
    return hierarchical(global_->withSpace(space), group_->withSpace(space));
  }
  KernelSpec out = *this;
  out.space_ = std::move(space);
  out.validate();
  return out;
}

double KernelSpec::evaluateSquared(double r2, int gi, int gj) const {
  const bool same = gi == gj;
  if (family_ == Family::kHgp) {
    const double g = global_->evaluateSquared(r2, gi, gj);
    return same ? g + group_->evaluateSquared(r2, gi, gj) : g;
  }
  return familyValue<double>(family_, p_, lift<double>(params_), params_, bCat_, phi_, psi_, r2,
                             space_.distance(gi, gj), same);
}

double KernelSpec::evaluate(const Eigen::Ref<const Eigen::VectorXd>& x, int gi,
                            const Eigen::Ref<const Eigen::VectorXd>& xp, int gj) const {
  if (x.size() != p_ || xp.size() != p_) throw ValidationError("point dimension does not match kernel p");
  const int k = space_.size();
  if (gi < 0 || gi >= k || gj < 0 || gj >= k) throw ValidationError("group index out of range");
  return evaluateSquared(squaredDistance(x, xp), gi, gj);
}

double KernelSpec::variance(int group) const {
  if (group < 0 || group >= space_.size()) throw ValidationError("group index out of range");
  return evaluateSquared(0.0, group, group);
}

void KernelSpec::checkShapes(const Eigen::Ref<const Eigen::MatrixXd>& X, std::span<const int> groups) const {
  if (X.cols() != p_) throw ValidationError("input matrix has " + std::to_string(X.cols()) + " columns, kernel p is " +
                                            std::to_string(p_));
  if (static_cast<Eigen::Index>(groups.size()) != X.rows()) throw ValidationError("groups length must equal rows of X");
  const int k = space_.size();
  for (int g : groups)
    if (g < 0 || g >= k) throw ValidationError("group index out of range");
}

Eigen::MatrixXd KernelSpec::gram(const Eigen::Ref<const Eigen::MatrixXd>& X, std::span<const int> groups) const {
  checkShapes(X, groups);
  const Eigen::Index n = X.rows();
  Eigen::MatrixXd K(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = j; i < n; ++i) {
      const double v = evaluateSquared((X.row(i) - X.row(j)).squaredNorm(), groups[i], groups[j]);
      K(i, j) = v;
      K(j, i) = v;
    }
  }
  return K;
}

Eigen::MatrixXd KernelSpec::crossGram(const Eigen::Ref<const Eigen::MatrixXd>& Xa, std::span<const int> groupsA,
                                      const Eigen::Ref<const Eigen::MatrixXd>& Xb,
                                      std::span<const int> groupsB) const {
  checkShapes(Xa, groupsA);
  checkShapes(Xb, groupsB);
  Eigen::MatrixXd K(Xa.rows(), Xb.rows());
  for (Eigen::Index j = 0; j < Xb.rows(); ++j)
    for (Eigen::Index i = 0; i < Xa.rows(); ++i)
      K(i, j) = evaluateSquared((Xa.row(i) - Xb.row(j)).squaredNorm(), groupsA[i], groupsB[j]);
  return K;
}

Eigen::MatrixXd KernelSpec::gramGradient(const Eigen::Ref<const Eigen::MatrixXd>& X, std::span<const int> groups,
                                         std::string_view param) const {
  checkShapes(X, groups);
  if (family_ == Family::kHgp) {
    if (param.starts_with("g.")) return global_->gramGradient(X, groups, param.substr(2));
    if (param.starts_with("z.")) {
      Eigen::MatrixXd G = group_->gramGradient(X, groups, param.substr(2));
      for (Eigen::Index j = 0; j < G.cols(); ++j)
        for (Eigen::Index i = 0; i < G.rows(); ++i)
          if (groups[i] != groups[j]) G(i, j) = 0.0;
      return G;
    }
    throw ValidationError("unknown HGP parameter '" + std::string(param) + "'");
  }
  const auto names = parameterNames();
  if (std::find(names.begin(), names.end(), param) == names.end()) {
    throw ValidationError(std::string(familyName(family_)) + " has no free parameter '" + std::string(param) + "'");
  }
  Pack<Dual> pack = lift<Dual>(params_);
  if (param == "sigma2") pack.sigma2.d = 1.0;
  if (param == "a") pack.a.d = 1.0;
  if (param == "b") pack.b.d = 1.0;
  if (param == "c") pack.c.d = 1.0;

  const Eigen::Index n = X.rows();
  Eigen::MatrixXd G(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = j; i < n; ++i) {
      const Dual v = familyValue<Dual>(family_, p_, pack, params_, bCat_, phi_, psi_,
                                       (X.row(i) - X.row(j)).squaredNorm(),
                                       space_.distance(groups[i], groups[j]), groups[i] == groups[j]);
      G(i, j) = v.d;
      G(j, i) = v.d;
    }
  }
  return G;
}

Eigen::MatrixXd KernelSpec::crossCovariance(const Eigen::Ref<const Eigen::VectorXd>& x,
                                            const Eigen::Ref<const Eigen::VectorXd>& xp) const {
  if (x.size() != p_ || xp.size() != p_) throw ValidationError("point dimension does not match kernel p");
  const int k = space_.size();
  const double r2 = squaredDistance(x, xp);
  Eigen::MatrixXd M(k, k);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) M(i, j) = evaluateSquared(r2, i, j);
  return M;
}

}  // namespace mggp
