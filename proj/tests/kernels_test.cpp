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


#include <cmath>
#include <numbers>

#include <boost/math/special_functions/bessel.hpp>
#include <Eigen/Eigenvalues>
#include <gtest/gtest.h>

#include "families.hpp"
#include "mggp/bessel.hpp"
#include "mggp/errors.hpp"
#include "mggp/kernels.hpp"
#include "mggp/rng.hpp"
#include "oracles.hpp"

namespace mggp {
namespace {

using testing::mgRbfGram;
using testing::mgRbfValue;
using testing::randomKernel;

Eigen::MatrixXd randomInputs(Rng& rng, int n, int p, double hi = 3.0) {
  Eigen::MatrixXd X(n, p);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < p; ++j) X(i, j) = rng.uniform(0.0, hi);
  return X;
}

std::vector<int> randomGroups(Rng& rng, int n, int k) {
  std::vector<int> g(n);
  for (auto& v : g) v = static_cast<int>(rng.below(k));
  return g;
}

Eigen::VectorXd vec1(double x) { return Eigen::VectorXd::Constant(1, x); }

KernelSpec mgRbf(double sigma2, double a, double b, int p, GroupSpace space) {
  return KernelSpec(Family::kMgRbf, p, {sigma2, a, b, std::nullopt, std::nullopt}, std::move(space));
}

TEST(Evaluate, SameGroupCoincidentPoint) {
  const KernelSpec k = mgRbf(1, 1, 1, 1, discreteMetric(2));
  EXPECT_DOUBLE_EQ(k.evaluate(vec1(0.3), 0, vec1(0.3), 0), 1.0);
}

TEST(Evaluate, CrossGroupCoincidentPoint) {
  const KernelSpec k = mgRbf(1, 1, 1, 1, discreteMetric(2));
  EXPECT_NEAR(k.evaluate(vec1(0.3), 0, vec1(0.3), 1), 1.0 / std::sqrt(2.0), 1e-15);
}

TEST(Evaluate, ZeroSimilarityScaleIsGroupBlind) {
  Rng rng(7);
  const KernelSpec k = mgRbf(1.7, 0.0, 0.8, 2, discreteMetric(3));
  for (int t = 0; t < 20; ++t) {
    const Eigen::VectorXd x = randomInputs(rng, 1, 2).row(0), y = randomInputs(rng, 1, 2).row(0);
    const double want = 1.7 * std::exp(-0.64 * (x - y).squaredNorm());
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) EXPECT_NEAR(k.evaluate(x, i, y, j), want, 1e-15);
  }
}

TEST(Evaluate, MaternAtOneHalfIsExponential) {
  Rng rng(11);
  const GroupSpace space = discreteMetric(3);
  for (int t = 0; t < 20; ++t) {
    const int p = 1 + static_cast<int>(rng.below(3));
    double a = 0.0, c = 0.0;
    do {
      a = rng.uniform(0.0, 2.0);
      c = rng.uniform(0.1, 3.0);
    } while (!testing::maternValid(a, c, 0.5, p));
    const double s2 = rng.uniform(0.5, 2.0), b = rng.uniform(0.3, 2.0);
    const KernelSpec m(Family::kMgMatern, p, {s2, a, b, c, 0.5}, space);
    const KernelSpec e(Family::kMgExponential, p, {s2, a, b, c, std::nullopt}, space);
    const Eigen::VectorXd x = randomInputs(rng, 1, p).row(0), y = randomInputs(rng, 1, p).row(0);
    const int gi = static_cast<int>(rng.below(3)), gj = static_cast<int>(rng.below(3));
    EXPECT_NEAR(m.evaluate(x, gi, y, gj), e.evaluate(x, gi, y, gj), 1e-9 * std::abs(e.evaluate(x, gi, y, gj)));
  }
}

// Matern written out from the formula with boost's K_nu.
double maternOracle(double s2, double a, double b, double c, double nu, int p, double d, double r) {
  const double A = a * a * d * d;
  const double pre = s2 * std::pow(c, 0.5 * p) / (std::pow(A + 1.0, nu) * std::pow(A + c, 0.5 * p));
  if (r < 1e-12) return pre;
  const double z = b * std::sqrt((A + 1.0) / (A + c)) * r;
  return pre * std::pow(2.0, 1.0 - nu) / std::tgamma(nu) * std::pow(z, nu) * boost::math::cyl_bessel_k(nu, z);
}

TEST(Evaluate, MaternMatchesBoostOracle) {
  Rng rng(13);
  const GroupSpace space = discreteMetric(2);
  for (double nu : {0.3, 0.7, 1.5, 2.5, 4.2, 9.5}) {
    for (int t = 0; t < 10; ++t) {
      const int p = 1 + static_cast<int>(rng.below(3));
      double a = 0.0, c = 0.0;
      do {
        a = rng.uniform(0.0, 2.0);
        c = rng.uniform(0.1, 3.0);
      } while (!testing::maternValid(a, c, nu, p));
      const double s2 = rng.uniform(0.5, 2.0), b = rng.uniform(0.3, 2.0);
      const KernelSpec m(Family::kMgMatern, p, {s2, a, b, c, nu}, space);
      const Eigen::VectorXd x = randomInputs(rng, 1, p).row(0), y = randomInputs(rng, 1, p).row(0);
      for (int gj = 0; gj < 2; ++gj) {
        const double want = maternOracle(s2, a, b, c, nu, p, gj == 0 ? 0.0 : 1.0, (x - y).norm());
        EXPECT_NEAR(m.evaluate(x, 0, y, gj), want, 1e-10 * want) << "nu=" << nu;
      }
    }
  }
}

TEST(Bessel, MatchesBoostOverEnvelope) {
  for (double nu : {0.1, 0.5, 1.0, 1.5, 2.0, 3.7, 6.0, 10.0}) {
    for (double z : {1e-6, 1e-3, 0.05, 0.5, 1.0, 2.5, 7.0, 20.0, 49.0}) {
      const double want = boost::math::cyl_bessel_k(nu, z);
      EXPECT_NEAR(besselK(nu, z), want, 1e-10 * want) << nu << " " << z;
    }
  }
}

TEST(Bessel, HalfIntegerClosedForm) {
  for (double z : {0.1, 1.0, 4.0}) {
    const double k12 = std::sqrt(std::numbers::pi / (2 * z)) * std::exp(-z);
    EXPECT_NEAR(besselK(0.5, z), k12, 1e-13 * k12);
    EXPECT_NEAR(besselK(1.5, z), k12 * (1 + 1 / z), 1e-13 * k12 * (1 + 1 / z));
  }
}

TEST(Evaluate, AppendixFamiliesFollowTheirFormulas) {
  const GroupSpace space = discreteMetric(2);
  const double s2 = 1.3, a = 0.7, b = 0.9, c = 0.4;
  const int p = 2;
  const Eigen::Vector2d x(0.1, 0.5), y(1.2, -0.3);
  const double r2 = (x - y).squaredNorm();
  for (double d : {0.0, 1.0}) {
    const int gj = static_cast<int>(d);
    const double A = a * a * d * d + 1.0, B = a * d + 1.0;
    EXPECT_NEAR(KernelSpec(Family::kAppendix1, p, {s2, a, b, {}, {}}, space).evaluate(x, 0, y, gj),
                s2 * A / std::pow(A * A + b * b * r2, 1.5), 1e-14);
    EXPECT_NEAR(KernelSpec(Family::kAppendix2, p, {s2, a, b, {}, {}}, space).evaluate(x, 0, y, gj),
                s2 * B / std::pow(B * B + b * b * r2, 1.5), 1e-14);
    EXPECT_NEAR(KernelSpec(Family::kAppendix3, p, {s2, a, b, c, {}}, space).evaluate(x, 0, y, gj),
                s2 * std::exp(-a * a * d * d - b * b * r2 - c * d * d * r2), 1e-14);
    EXPECT_NEAR(KernelSpec(Family::kAppendix4, p, {s2, a, b, c, {}}, space).evaluate(x, 0, y, gj),
                s2 * std::exp(-a * d - b * b * r2 - c * d * r2), 1e-14);
    EXPECT_NEAR(KernelSpec(Family::kMgRbfPrime, p, {s2, a, b, {}, {}}, space).evaluate(x, 0, y, gj),
                s2 / B * std::exp(-b * b * r2 / B), 1e-14);
  }
}

TEST(Evaluate, RejectsBadShapes) {
  const KernelSpec k = mgRbf(1, 1, 1, 2, discreteMetric(2));
  EXPECT_THROW(k.evaluate(vec1(0), 0, vec1(0), 0), ValidationError);
  EXPECT_THROW(k.evaluate(Eigen::Vector2d::Zero(), 0, Eigen::Vector2d::Zero(), 2), ValidationError);
}

TEST(KernelSpec, ValidatesParameters) {
  const GroupSpace s = discreteMetric(3);
  EXPECT_THROW(KernelSpec(Family::kMgRbf, 1, {1, std::nullopt, 1, std::nullopt, std::nullopt}, s), ValidationError);
  EXPECT_THROW(KernelSpec(Family::kMgRbf, 1, {1, 1, 1, 1, std::nullopt}, s), ValidationError);
  EXPECT_THROW(KernelSpec(Family::kMgRbf, 1, {0, 1, 1, std::nullopt, std::nullopt}, s), ValidationError);
  EXPECT_THROW(KernelSpec(Family::kMgRbf, 1, {1, -1, 1, std::nullopt, std::nullopt}, s), ValidationError);
  EXPECT_THROW(KernelSpec(Family::kMgMatern, 1, {1, 1, 1, 1, 10.5}, s), UnsupportedError);
  EXPECT_THROW(KernelSpec::separableHomogeneous(1, 1, 1, -0.6, s), ValidationError);
  EXPECT_NO_THROW(KernelSpec::separableHomogeneous(1, 1, 1, -0.5, s));
  EXPECT_THROW(KernelSpec(Family::kHgp, 1, {}, s), ValidationError);
  EXPECT_THROW(parseFamily("mg-nothing"), ValidationError);
  for (Family f : allFamilies()) EXPECT_EQ(parseFamily(familyName(f)), f);
}

TEST(Gram, SingletonIsVariance) {
  Rng rng(3);
  for (Family f : testing::probeFamilies()) {
    const KernelSpec k = randomKernel(f, 2, discreteMetric(2), rng);
    const Eigen::MatrixXd X = randomInputs(rng, 1, 2);
    const std::vector<int> g{1};
    const Eigen::MatrixXd G = k.gram(X, g);
    ASSERT_EQ(G.rows(), 1);
    EXPECT_DOUBLE_EQ(G(0, 0), k.variance(1)) << familyName(f);
  }
}

TEST(Gram, MatchesPointwiseEvaluationAndIsSymmetric) {
  Rng rng(5);
  const GroupSpace space = discreteMetric(3);
  for (Family f : allFamilies()) {
    const KernelSpec k = randomKernel(f, 2, space, rng);
    const Eigen::MatrixXd X = randomInputs(rng, 12, 2);
    const auto g = randomGroups(rng, 12, 3);
    const Eigen::MatrixXd G = k.gram(X, g);
    for (int i = 0; i < 12; ++i) {
      for (int j = 0; j < 12; ++j) {
        EXPECT_EQ(G(i, j), G(j, i));
        EXPECT_DOUBLE_EQ(G(i, j), k.evaluate(X.row(i).transpose(), g[i], X.row(j).transpose(), g[j]));
        EXPECT_DOUBLE_EQ(k.evaluate(X.row(i).transpose(), g[i], X.row(j).transpose(), g[j]),
                         k.evaluate(X.row(j).transpose(), g[j], X.row(i).transpose(), g[i]));
      }
      EXPECT_DOUBLE_EQ(G(i, i), k.variance(g[i])) << familyName(f);
    }
  }
}

TEST(Gram, MgRbfMatchesFormulaOracle) {
  Rng rng(17);
  Eigen::Matrix3d d;
  d << 0, 0.1, 10, 0.1, 0, 10, 10, 10, 0;
  const GroupSpace space({"a", "b", "c"}, d);
  const KernelSpec k = mgRbf(1.4, 0.6, 0.9, 2, space);
  const Eigen::MatrixXd X = randomInputs(rng, 15, 2);
  const auto g = randomGroups(rng, 15, 3);
  EXPECT_LT((k.gram(X, g) - mgRbfGram(1.4, 0.6, 0.9, space, X, g)).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(Gram, SeparatedHasNoCrossGroupCovariance) {
  Rng rng(19);
  const KernelSpec k = rbfKernel(Family::kSgp, 1, 1.0, 1.0, discreteMetric(3));
  const Eigen::MatrixXd X = randomInputs(rng, 20, 1);
  const auto g = randomGroups(rng, 20, 3);
  const Eigen::MatrixXd G = k.gram(X, g);
  for (int i = 0; i < 20; ++i)
    for (int j = 0; j < 20; ++j)
      if (g[i] != g[j]) {
        EXPECT_EQ(G(i, j), 0.0);
      }
}

TEST(Gram, HierarchicalIsGlobalPlusMaskedGroup) {
  Rng rng(23);
  const GroupSpace space = discreteMetric(3);
  const KernelSpec kg = rbfKernel(Family::kUgp, 1, 0.8, 1.2, space);
  const KernelSpec kz = rbfKernel(Family::kUgp, 1, 0.5, 0.7, space);
  const KernelSpec h = KernelSpec::hierarchical(kg, kz);
  const Eigen::MatrixXd X = randomInputs(rng, 20, 1);
  const auto g = randomGroups(rng, 20, 3);
  Eigen::MatrixXd want = kg.gram(X, g);
  const Eigen::MatrixXd Z = kz.gram(X, g);
  for (int i = 0; i < 20; ++i)
    for (int j = 0; j < 20; ++j)
      if (g[i] == g[j]) want(i, j) += Z(i, j);
  EXPECT_LT((h.gram(X, g) - want).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_EQ(h.parameterNames(), (std::vector<std::string>{"g.sigma2", "g.b", "z.sigma2", "z.b"}));
}

TEST(Gram, ReductionLimits) {
  Rng rng(29);
  const GroupSpace space = discreteMetric(3);
  const Eigen::MatrixXd X = randomInputs(rng, 40, 2);
  const auto g = randomGroups(rng, 40, 3);
  const Eigen::MatrixXd rbf = rbfKernel(Family::kUgp, 2, 1.0, 1.0, space).gram(X, g);
  EXPECT_LT((mgRbf(1, 1e-8, 1, 2, space).gram(X, g) - rbf).cwiseAbs().maxCoeff(), 1e-10);
  const Eigen::MatrixXd far = mgRbf(1, 1e6, 1, 2, space).gram(X, g);
  for (int i = 0; i < 40; ++i)
    for (int j = 0; j < 40; ++j) {
      if (g[i] == g[j]) EXPECT_NEAR(far(i, j), rbf(i, j), 1e-12);
      else EXPECT_LT(far(i, j), 1e-12);
    }
}

TEST(GramGradient, SigmaDerivativeIsGramOverSigma) {
  Rng rng(31);
  const KernelSpec k = mgRbf(1.7, 0.4, 1.1, 1, discreteMetric(2));
  const Eigen::MatrixXd X = randomInputs(rng, 8, 1);
  const auto g = randomGroups(rng, 8, 2);
  EXPECT_TRUE(k.gramGradient(X, g, "sigma2").isApprox(k.gram(X, g) / 1.7, 1e-14));
}

TEST(GramGradient, SimilarityDerivativeVanishesAtZero) {
  Rng rng(37);
  const KernelSpec k = mgRbf(1, 0, 1, 1, discreteMetric(2));
  const Eigen::MatrixXd X = randomInputs(rng, 8, 1);
  const auto g = randomGroups(rng, 8, 2);
  const Eigen::MatrixXd G = k.gramGradient(X, g, "a");
  for (int i = 0; i < 8; ++i)
    for (int j = 0; j < 8; ++j)
      if (g[i] == g[j]) {
        EXPECT_EQ(G(i, j), 0.0);
      }
}

TEST(GramGradient, LengthScaleMatchesFiniteDifference) {
  Rng rng(41);
  const KernelSpec k = mgRbf(1, 0.5, 1.3, 1, discreteMetric(2));
  const Eigen::MatrixXd X = randomInputs(rng, 6, 1);
  const auto g = randomGroups(rng, 6, 2);
  const double h = 1e-5;
  const Eigen::MatrixXd fd =
      (k.withParameter("b", 1.3 + h).gram(X, g) - k.withParameter("b", 1.3 - h).gram(X, g)) / (2 * h);
  const Eigen::MatrixXd G = k.gramGradient(X, g, "b");
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j) EXPECT_LT(testing::relativeError(G(i, j), fd(i, j), 1e-3), 1e-5);
}

TEST(GramGradient, EveryFamilyMatchesFiniteDifferencesInLogSpace) {
  Rng rng(43);
  const GroupSpace space = discreteMetric(3);
  std::vector<Family> families = testing::probeFamilies();
  families.push_back(Family::kSgp);
  families.push_back(Family::kUgp);
  families.push_back(Family::kHgp);
  for (Family f : families) {
    const KernelSpec k = randomKernel(f, 2, space, rng);
    const Eigen::MatrixXd X = randomInputs(rng, 8, 2);
    const auto g = randomGroups(rng, 8, 3);
    for (const auto& name : k.parameterNames()) {
      const double v = k.parameter(name), h = 1e-5;
      KernelSpec up = k, down = k;
      try {
        up = k.withParameter(name, v * std::exp(h));
        down = k.withParameter(name, v * std::exp(-h));
      } catch (const ValidationError&) {
        continue;  // a step across a validity boundary, e.g. a = 0
      }
      const Eigen::MatrixXd fd = (up.gram(X, g) - down.gram(X, g)) / (2 * h);
      const Eigen::MatrixXd G = k.gramGradient(X, g, name) * v;
      const double scale = std::max(1e-3, fd.cwiseAbs().maxCoeff());
      EXPECT_LT((G - fd).cwiseAbs().maxCoeff() / scale, 1e-5) << familyName(f) << " " << name;
    }
  }
}

TEST(GramGradient, UnknownParameterIsRejected) {
  Rng rng(47);
  const KernelSpec k = mgRbf(1, 1, 1, 1, discreteMetric(2));
  const Eigen::MatrixXd X = randomInputs(rng, 3, 1);
  const std::vector<int> g{0, 1, 0};
  EXPECT_THROW(k.gramGradient(X, g, "c"), ValidationError);
  EXPECT_THROW(k.gramGradient(X, g, "nu"), ValidationError);
}

TEST(Gneiting, ExponentialPowerPairReproducesMgRbf) {
  Rng rng(53);
  const GroupSpace space = discreteMetric(3);
  for (int t = 0; t < 10; ++t) {
    const double s2 = rng.uniform(0.5, 2), a = rng.uniform(0.1, 2), b = rng.uniform(0.3, 2);
    const int p = 1 + static_cast<int>(rng.below(3));
    const KernelSpec gc = gneitingCompose({PhiKind::kPowerExponential, 1.0, 0.5}, {PsiKind::kPower, 1.0, 1.0, 2.0},
                                          s2, a * a, b * b, space, p);
    const KernelSpec ref = mgRbf(s2, a, b, p, space);
    const Eigen::MatrixXd X = randomInputs(rng, 10, p);
    const auto g = randomGroups(rng, 10, 3);
    const Eigen::MatrixXd want = ref.gram(X, g);
    EXPECT_LT(((gc.gram(X, g) - want).array() / want.array()).abs().maxCoeff(), 1e-12);
  }
}

TEST(Gneiting, ConstantPsiGivesSeparableKernel) {
  Rng rng(59);
  const GroupSpace space = discreteMetric(3);
  const KernelSpec gc = gneitingCompose({PhiKind::kCauchy, 0.8, 1.5}, {PsiKind::kPower, 0.5, 0.5, 2.0}, 1.2, 0.0, 0.7,
                                        space, 2);
  const Eigen::Vector2d x(0.2, 0.4), y(1.0, 2.0);
  const double t = 0.7 * std::pow((x - y).squaredNorm(), 0.8);
  const double want = 1.2 * std::pow(1.0 + t, -1.5);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) EXPECT_NEAR(gc.evaluate(x, i, y, j), want, 1e-14);
}

TEST(Gneiting, CompositeGramIsPositiveSemidefinite) {
  Rng rng(61);
  const GroupSpace space = discreteMetric(3);
  for (PhiKind phi : {PhiKind::kPowerExponential, PhiKind::kMatern, PhiKind::kCauchy, PhiKind::kHyperbolicSecant}) {
    for (PsiKind psi : {PsiKind::kPower, PsiKind::kLogarithmic, PsiKind::kRational}) {
      const KernelSpec gc = gneitingCompose({phi, 0.9, 1.5}, {psi, 0.7, 0.6, 3.0}, 1.0, 1.5, 0.8, space, 2);
      const Eigen::MatrixXd X = randomInputs(rng, 40, 2, 1.0);
      const auto g = randomGroups(rng, 40, 3);
      const double minEig = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(gc.gram(X, g)).eigenvalues().minCoeff();
      EXPECT_GE(minEig, -1e-8) << phiKindName(phi) << "/" << psiKindName(psi);
    }
  }
}

TEST(Gneiting, RejectsOutOfRangeShapes) {
  const GroupSpace space = discreteMetric(2);
  EXPECT_THROW(gneitingCompose({PhiKind::kPowerExponential, 1.5, 0.5}, {}, 1, 1, 1, space, 1), ValidationError);
  EXPECT_THROW(gneitingCompose({}, {PsiKind::kPower, 1.0, 0.0, 2.0}, 1, 1, 1, space, 1), ValidationError);
  EXPECT_THROW(gneitingCompose({}, {PsiKind::kLogarithmic, 1.0, 1.0, 1.0}, 1, 1, 1, space, 1), ValidationError);
  EXPECT_THROW(gneitingCompose({}, {}, 1, 1, 0.0, space, 1), ValidationError);
}

TEST(CrossCovariance, GroupBlindLimitIsConstant) {
  const KernelSpec k = mgRbf(2.5, 0.0, 1.0, 1, discreteMetric(4));
  const Eigen::MatrixXd M = k.crossCovariance(vec1(0.3), vec1(0.3));
  EXPECT_TRUE(M.isApprox(Eigen::MatrixXd::Constant(4, 4, 2.5)));
}

TEST(CrossCovariance, SeparatedIsDiagonal) {
  const KernelSpec k = rbfKernel(Family::kSgp, 1, 1.0, 1.0, discreteMetric(3));
  const Eigen::MatrixXd M = k.crossCovariance(vec1(0.1), vec1(0.9));
  EXPECT_TRUE(M.isDiagonal());
  EXPECT_GT(M(0, 0), 0.0);
}

TEST(CrossCovariance, StackingReproducesGram) {
  Rng rng(67);
  const int k = 3, m = 5;
  const KernelSpec spec = mgRbf(1.1, 0.8, 0.6, 1, discreteMetric(k));
  const Eigen::MatrixXd pts = randomInputs(rng, m, 1);
  Eigen::MatrixXd X(m * k, 1);
  std::vector<int> g(m * k);
  for (int i = 0; i < m; ++i)
    for (int c = 0; c < k; ++c) {
      X(i * k + c, 0) = pts(i, 0);
      g[i * k + c] = c;
    }
  const Eigen::MatrixXd G = spec.gram(X, g);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      const Eigen::MatrixXd M = spec.crossCovariance(pts.row(i).transpose(), pts.row(j).transpose());
      EXPECT_EQ(G.block(i * k, j * k, k, k), M);
    }
}

TEST(MonteCarlo, RandomFamiliesStayPositiveSemidefinite) {
  Rng rng(71);
  for (Family f : testing::probeFamilies()) {
    if (f == Family::kAppendix3 || f == Family::kAppendix4) continue;
    for (int k : {2, 4}) {
      const KernelSpec spec = randomKernel(f, 1, discreteMetric(k), rng);
      const Eigen::MatrixXd X = randomInputs(rng, 30, 1, 1.0);
      const auto g = randomGroups(rng, 30, k);
      const double minEig = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(spec.gram(X, g)).eigenvalues().minCoeff();
      EXPECT_GE(minEig, -1e-8 * 30) << familyName(f) << " k=" << k;
    }
  }
}

}  // namespace
}  // namespace mggp
