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

#include "mggp/validation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <vector>

#include <Eigen/Eigenvalues>

#include "csv.hpp"
#include "mggp/errors.hpp"
#include "mggp/rng.hpp"

namespace mggp {

namespace {

constexpr double kSpectralSlack = 1e-12;

std::string describeFrequency(const Eigen::VectorXd& w) {
  std::ostringstream out;
  out << '(';
  for (Eigen::Index i = 0; i < w.size(); ++i) out << (i ? ", " : "") << csv::formatReal(w[i]);
  out << ')';
  return out.str();
}

double densityAt(const SpectralDensity& rho, const Eigen::VectorXd& w, std::string_view name) {
  const double v = rho(w);
  if (!(v >= 0.0)) {
    throw ValidationError("invalid spectral density " + std::string(name) + ": value " + csv::formatReal(v) +
                          " at frequency " + describeFrequency(w));
  }
  return v;
}

PDReport spectralProbe(const std::vector<Eigen::VectorXd>& grid,
                       const std::function<double(const Eigen::VectorXd&)>& margin, std::string_view condition) {
  if (grid.empty()) throw ValidationError("spectral grid must be nonempty");
  PDReport report;
  report.tolerance = kSpectralSlack;
  double worst = std::numeric_limits<double>::infinity();
  for (const auto& w : grid) {
    const double m = margin(w);
    worst = std::min(worst, m);
    if (m < -kSpectralSlack) {
      report.verdict = Verdict::kProbeFailed;
      report.witnessFrequency = w;
      report.evidence = std::string(condition) + " violated at omega = " + describeFrequency(w) + " (margin " +
                        csv::formatReal(m) + ")";
      return report;
    }
  }
  report.verdict = Verdict::kProbePassed;
  report.evidence = std::string(condition) + " holds at all " + std::to_string(grid.size()) +
                    " grid frequencies (smallest margin " + csv::formatReal(worst) + ")";
  return report;
}

}  // namespace

std::string_view verdictName(Verdict verdict) {
  switch (verdict) {
    case Verdict::kCertifiedPD: return "certified-PD";
    case Verdict::kCertifiedNotPD: return "certified-not-PD";
    case Verdict::kProbePassed: return "probe-passed";
    case Verdict::kProbeFailed: return "probe-failed";
  }
  return "unknown";
}

Verdict parseVerdict(std::string_view name) {
  for (Verdict v : {Verdict::kCertifiedPD, Verdict::kCertifiedNotPD, Verdict::kProbePassed, Verdict::kProbeFailed})
    if (verdictName(v) == name) return v;
  throw ValidationError("unknown verdict '" + std::string(name) + "'");
}

Eigen::MatrixXd homogeneousMatrix(int k, double b) {
  if (k < 1) throw ValidationError("k must be >= 1");
  Eigen::MatrixXd C = Eigen::MatrixXd::Constant(k, k, b);
  C.diagonal().setOnes();
  return C;
}

PDReport checkCategoricalMatrix(const Eigen::MatrixXd& C) {
  if (C.rows() != C.cols() || C.rows() == 0) throw ValidationError("categorical matrix must be square and nonempty");
  if (!C.allFinite()) throw ValidationError("categorical matrix has non-finite entries");
  const double scale = std::max(1.0, C.cwiseAbs().maxCoeff());
  if ((C - C.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
    throw ValidationError("categorical matrix must be symmetric");
  }
  const auto k = static_cast<double>(C.rows());
  const double tol = 1e-10 * k;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(C, Eigen::EigenvaluesOnly);
  const double minEig = eig.eigenvalues().minCoeff();
  PDReport report;
  report.tolerance = tol;
  report.witnessEigenvalue = minEig;
  if (minEig > -tol) {
    report.verdict = Verdict::kCertifiedPD;
    report.evidence = "minimum eigenvalue " + csv::formatReal(minEig) + " exceeds -" + csv::formatReal(tol);
  } else {
    report.verdict = Verdict::kCertifiedNotPD;
    report.evidence = "negative eigenvalue " + csv::formatReal(minEig);
  }
  return report;
}

PDReport checkHomogeneousBound(int k, double b) {
  if (k < 2) throw ValidationError("homogeneous bound requires k >= 2");
  if (!std::isfinite(b)) throw ValidationError("b must be finite");
  const double lower = -1.0 / (k - 1);
  PDReport report;
  report.tolerance = 0.0;
  // The spectrum of (1 - b) I + b 1 1^T is {1 + (k - 1) b, 1 - b}.
  const double top = 1.0 + (k - 1) * b;
  const double rest = 1.0 - b;
  if (b >= lower && b <= 1.0) {
    report.verdict = Verdict::kCertifiedPD;
    report.evidence = "b = " + csv::formatReal(b) + " lies in [" + csv::formatReal(lower) + ", 1]";
  } else {
    report.verdict = Verdict::kCertifiedNotPD;
    report.witnessEigenvalue = std::min(top, rest);
    report.evidence = "b = " + csv::formatReal(b) + " lies outside [" + csv::formatReal(lower) +
                      ", 1]; eigenvalue " + csv::formatReal(*report.witnessEigenvalue);
  }
  return report;
}

PDReport checkTwoGroupSpectral(const SpectralDensity& rhoW, const SpectralDensity& rhoC,
                               const std::vector<Eigen::VectorXd>& grid) {
  return spectralProbe(
      grid, [&](const Eigen::VectorXd& w) { return densityAt(rhoW, w, "rho_w") - densityAt(rhoC, w, "rho_c"); },
      "rho_w >= rho_c");
}

PDReport checkSemiStationarySpectral(const SpectralDensity& rho0, const SpectralDensity& rhoC,
                                     const SpectralDensity& rho1, const std::vector<Eigen::VectorXd>& grid) {
  return spectralProbe(
      grid,
      [&](const Eigen::VectorXd& w) {
        const double c = densityAt(rhoC, w, "rho_c");
        return densityAt(rho0, w, "rho_0") * densityAt(rho1, w, "rho_1") - c * c;
      },
      "rho_0 rho_1 >= rho_c^2");
}

std::vector<Eigen::VectorXd> defaultSpectralGrid(int p, int points, double lo, double hi) {
  if (p < 1 || points < 2 || !(lo > 0.0) || !(hi > lo)) throw ValidationError("invalid spectral grid request");
  std::vector<Eigen::VectorXd> grid;
  grid.reserve(static_cast<std::size_t>(p) * points);
  const double step = (std::log10(hi) - std::log10(lo)) / (points - 1);
  for (int axis = 0; axis < p; ++axis) {
    for (int i = 0; i < points; ++i) {
      Eigen::VectorXd w = Eigen::VectorXd::Zero(p);
      w[axis] = std::pow(10.0, std::log10(lo) + step * i);
      grid.push_back(std::move(w));
    }
  }
  return grid;
}

SpectralDensity rbfWithinDensity(double sigma2, double b, int p) {
  return [=](const Eigen::VectorXd& w) {
    const double pi = std::numbers::pi;
    return sigma2 * std::pow(pi / (b * b), 0.5 * p) * std::exp(-pi * pi * w.squaredNorm() / (b * b));
  };
}

SpectralDensity rbfCrossDensity(double sigma2, double a, double b, int p) {
  return [=](const Eigen::VectorXd& w) {
    const double pi = std::numbers::pi;
    return sigma2 * std::pow(pi / (b * b), 0.5 * p) * std::exp(-pi * pi * (a * a + 1.0) * w.squaredNorm() / (b * b));
  };
}

PDReport monteCarloPD(const KernelSpec& spec, int trials, int n, std::uint64_t seed) {
  if (trials < 1 || n < 2) throw ValidationError("monteCarloPD requires trials >= 1 and n >= 2");
  const double tol = 1e-8 * n;
  const int p = spec.p();
  const int k = spec.groupCount();
  PDReport report;
  report.tolerance = tol;
  double worst = std::numeric_limits<double>::infinity();
  for (int t = 0; t < trials; ++t) {
    const std::uint64_t trialSeed = deriveSeed(seed, static_cast<std::uint64_t>(t));
    Rng rng(trialSeed);
    Eigen::MatrixXd X(n, p);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < p; ++j) X(i, j) = rng.uniform();
    std::vector<int> groups(n);
    for (int i = 0; i < n; ++i) groups[i] = static_cast<int>(rng.below(static_cast<std::uint64_t>(k)));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(spec.gram(X, groups), Eigen::EigenvaluesOnly);
    const double minEig = eig.eigenvalues().minCoeff();
    worst = std::min(worst, minEig);
    if (!(minEig >= -tol)) {
      report.verdict = Verdict::kProbeFailed;
      report.witnessEigenvalue = minEig;
      report.witnessSeed = trialSeed;
      report.evidence = "trial " + std::to_string(t) + " (seed " + std::to_string(trialSeed) +
                        ") has eigenvalue " + csv::formatReal(minEig);
      return report;
    }
  }
  report.verdict = Verdict::kProbePassed;
  report.witnessEigenvalue = worst;
  report.evidence = std::to_string(trials) + " trials of n = " + std::to_string(n) +
                    " passed; smallest eigenvalue " + csv::formatReal(worst);
  return report;
}

}  // namespace mggp
