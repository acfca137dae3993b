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

#include "mggp/serialization.hpp"

#include <algorithm>
#include <ostream>

#include "csv.hpp"
#include "mggp/errors.hpp"

namespace mggp {

namespace {

const Json& field(const Json& j, const char* key, const std::string& path) {
  if (!j.is_object()) throw ValidationError(path + ": expected an object");
  const auto it = j.find(key);
  if (it == j.end()) throw ValidationError(path + ": missing field '" + key + "'");
  return *it;
}

double number(const Json& j, const std::string& path) {
  if (!j.is_number()) throw ValidationError(path + ": expected a number");
  return j.get<double>();
}

int integer(const Json& j, const std::string& path) {
  if (!j.is_number_integer()) throw ValidationError(path + ": expected an integer");
  return j.get<int>();
}

std::string text(const Json& j, const std::string& path) {
  if (!j.is_string()) throw ValidationError(path + ": expected a string");
  return j.get<std::string>();
}

double numberOr(const Json& j, const char* key, double fallback, const std::string& path) {
  const auto it = j.find(key);
  return it == j.end() ? fallback : number(*it, path + "." + key);
}

Json vectorJson(const Eigen::VectorXd& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v[i]);
  return out;
}

Eigen::VectorXd vectorFromJson(const Json& j, const std::string& path) {
  if (!j.is_array()) throw ValidationError(path + ": expected an array");
  Eigen::VectorXd v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v[static_cast<Eigen::Index>(i)] = number(j[i], path);
  return v;
}

HyperParams paramsFromJson(const Json& j, const std::string& path, std::initializer_list<const char*> allowed) {
  if (!j.is_object()) throw ValidationError(path + ": expected an object");
  for (const auto& [key, value] : j.items()) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || key == a;
    if (!ok) throw ValidationError(path + ": unexpected parameter '" + key + "'");
  }
  HyperParams hp;
  hp.sigma2 = number(field(j, "sigma2", path), path + ".sigma2");
  auto opt = [&](const char* key) -> std::optional<double> {
    const auto it = j.find(key);
    if (it == j.end()) return std::nullopt;
    return number(*it, path + "." + key);
  };
  hp.a = opt("a");
  hp.b = opt("b");
  hp.c = opt("c");
  hp.nu = opt("nu");
  return hp;
}

KernelSpec kernelFromJsonAt(const Json& j, const std::string& path, const std::optional<int>& parentP,
                            const std::optional<GroupSpace>& parentSpace) {
  if (!j.is_object()) throw ValidationError(path + ": expected an object");
  const Family family = parseFamily(text(field(j, "family", path), path + ".family"));
  int p = 0;
  if (j.contains("p")) {
    p = integer(j["p"], path + ".p");
  } else if (parentP) {
    p = *parentP;
  } else {
    throw ValidationError(path + ": missing field 'p'");
  }
  std::optional<GroupSpace> space;
  if (j.contains("space")) {
    space = groupSpaceFromJson(j["space"]);
  } else if (j.contains("k")) {
    space = discreteMetric(integer(j["k"], path + ".k"));
  } else if (parentSpace) {
    space = parentSpace;
  } else {
    throw ValidationError(path + ": missing field 'space' (or 'k' for the discrete metric)");
  }
  const Json empty = Json::object();
  const Json& extra = j.contains("extra") ? j["extra"] : empty;
  const std::string pp = path + ".params";

  switch (family) {
    case Family::kHgp:
      return KernelSpec::hierarchical(kernelFromJsonAt(field(extra, "global", path + ".extra"), path + ".extra.global", p, space),
                                      kernelFromJsonAt(field(extra, "group", path + ".extra"), path + ".extra.group", p, space));
    case Family::kSeparableHomogeneous: {
      const HyperParams hp = paramsFromJson(field(j, "params", path), pp, {"sigma2", "b"});
      if (!hp.b) throw ValidationError(pp + ": missing field 'b'");
      return KernelSpec::separableHomogeneous(p, hp.sigma2, *hp.b,
                                              number(field(extra, "b_cat", path + ".extra"), path + ".extra.b_cat"), *space);
    }
    case Family::kGneitingComposite: {
      const HyperParams hp = paramsFromJson(field(j, "params", path), pp, {"sigma2", "a", "c"});
      if (!hp.a || !hp.c) throw ValidationError(pp + ": gneiting-composite needs 'a' and 'c'");
      const Json& phiJ = field(extra, "phi", path + ".extra");
      const Json& psiJ = field(extra, "psi", path + ".extra");
      const std::string phiPath = path + ".extra.phi";
      const std::string psiPath = path + ".extra.psi";
      PhiSelection phi;
      phi.kind = parsePhiKind(text(field(phiJ, "kind", phiPath), phiPath + ".kind"));
      phi.gamma = numberOr(phiJ, "gamma", phi.gamma, phiPath);
      phi.nu = numberOr(phiJ, "nu", phi.nu, phiPath);
      PsiSelection psi;
      psi.kind = parsePsiKind(text(field(psiJ, "kind", psiPath), psiPath + ".kind"));
      psi.alpha = numberOr(psiJ, "alpha", psi.alpha, psiPath);
      psi.beta = numberOr(psiJ, "beta", psi.beta, psiPath);
      psi.base = numberOr(psiJ, "base", psi.base, psiPath);
      return gneitingCompose(phi, psi, hp.sigma2, *hp.a, *hp.c, *space, p);
    }
    default:
      return KernelSpec(family, p, paramsFromJson(field(j, "params", path), pp, {"sigma2", "a", "b", "c", "nu"}), *space);
  }
}

}  // namespace

Json parseJson(const std::string& contents, const std::string& source) {
  try {
    return Json::parse(contents);
  } catch (const Json::parse_error& e) {
    throw ValidationError(source + ": " + e.what());
  }
}

Json toJson(const GroupSpace& space) {
  Json d = Json::array();
  for (int i = 0; i < space.size(); ++i) {
    Json row = Json::array();
    for (int j = 0; j < space.size(); ++j) row.push_back(space.distance(i, j));
    d.push_back(std::move(row));
  }
  return Json{{"labels", space.labels()}, {"distances", std::move(d)}};
}

GroupSpace groupSpaceFromJson(const Json& j) {
  const std::string path = "space";
  const Json& labels = field(j, "labels", path);
  const Json& d = field(j, "distances", path);
  if (!labels.is_array() || !d.is_array()) throw ValidationError("space: labels and distances must be arrays");
  std::vector<std::string> names;
  for (const auto& l : labels) names.push_back(text(l, "space.labels"));
  const auto k = static_cast<Eigen::Index>(names.size());
  if (static_cast<Eigen::Index>(d.size()) != k) throw ValidationError("space.distances must have one row per label");
  Eigen::MatrixXd m(k, k);
  for (Eigen::Index i = 0; i < k; ++i) {
    const Json& row = d[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != k) {
      throw ValidationError("space.distances row " + std::to_string(i) + " must have " + std::to_string(k) + " entries");
    }
    for (Eigen::Index c = 0; c < k; ++c) m(i, c) = number(row[static_cast<std::size_t>(c)], "space.distances");
  }
  return GroupSpace(std::move(names), std::move(m));
}

Json toJson(const KernelSpec& spec) {
  Json j;
  j["family"] = std::string(familyName(spec.family()));
  j["p"] = spec.p();
  Json params = Json::object();
  Json extra = Json::object();
  if (spec.family() == Family::kHgp) {
    extra["global"] = toJson(spec.globalKernel());
    extra["group"] = toJson(spec.groupKernel());
  } else {
    for (const auto& name : spec.parameterNames()) params[name] = spec.parameter(name);
    if (spec.params().nu) params["nu"] = *spec.params().nu;
  }
  if (spec.family() == Family::kSeparableHomogeneous) extra["b_cat"] = *spec.categoricalOffDiagonal();
  if (spec.family() == Family::kGneitingComposite) {
    extra["phi"] = {{"kind", std::string(phiKindName(spec.phi().kind))}, {"gamma", spec.phi().gamma}, {"nu", spec.phi().nu}};
    extra["psi"] = {{"kind", std::string(psiKindName(spec.psi().kind))},
                    {"alpha", spec.psi().alpha},
                    {"beta", spec.psi().beta},
                    {"base", spec.psi().base}};
  }
  j["params"] = std::move(params);
  j["space"] = toJson(spec.space());
  j["extra"] = std::move(extra);
  return j;
}

KernelSpec kernelFromJson(const Json& j) { return kernelFromJsonAt(j, "kernel", std::nullopt, std::nullopt); }

Json toJson(const NoiseSpec& noise) {
  return Json{{"mode", noise.mode == NoiseSpec::Mode::kShared ? "shared" : "per-group"}, {"values", noise.values}};
}

NoiseSpec noiseFromJson(const Json& j) {
  const std::string mode = text(field(j, "mode", "noise"), "noise.mode");
  const Eigen::VectorXd v = vectorFromJson(field(j, "values", "noise"), "noise.values");
  std::vector<double> values(v.data(), v.data() + v.size());
  if (mode == "shared") return {NoiseSpec::Mode::kShared, values};
  if (mode == "per-group") return {NoiseSpec::Mode::kPerGroup, values};
  throw ValidationError("noise.mode must be 'shared' or 'per-group'");
}

Json toJson(const PDReport& report) {
  Json j{{"verdict", std::string(verdictName(report.verdict))},
         {"evidence", report.evidence},
         {"tolerance", report.tolerance}};
  Json witness = Json::object();
  if (report.witnessEigenvalue) witness["eigenvalue"] = *report.witnessEigenvalue;
  if (report.witnessFrequency) witness["frequency"] = vectorJson(*report.witnessFrequency);
  if (report.witnessSeed) witness["seed"] = *report.witnessSeed;
  j["witness"] = std::move(witness);
  return j;
}

Json toJson(const FitResult& fit) {
  Json restarts = Json::array();
  for (const auto& r : fit.restarts) {
    Json rj{{"seed", r.seed},
            {"initialLogLik", r.initialLogLik},
            {"logLik", r.logLik},
            {"iterations", r.iterations},
            {"converged", r.converged},
            {"gradientNorm", r.gradientNorm},
            {"failed", r.failed}};
    if (r.failed) rj["message"] = r.message;
    restarts.push_back(std::move(rj));
  }
  return Json{{"kernel", toJson(fit.kernel)},
              {"noise", toJson(fit.noise)},
              {"beta", vectorJson(fit.beta)},
              {"logLik", fit.logLik},
              {"iterations", fit.iterations},
              {"converged", fit.converged},
              {"gradientNorm", fit.gradientNorm},
              {"restarts", std::move(restarts)}};
}

Json toJson(const McmcChain& chain) {
  Json samples = Json::array();
  for (Eigen::Index s = 0; s < chain.samples.rows(); ++s) samples.push_back(vectorJson(chain.samples.row(s).transpose()));
  return Json{{"seed", chain.seed},
              {"names", chain.names},
              {"acceptanceRate", chain.acceptanceRate},
              {"proposalScale", vectorJson(chain.proposalScale)},
              {"logPosterior", vectorJson(chain.logPosterior)},
              {"samples", std::move(samples)}};
}

Json toJson(const ScenarioSpec& s) {
  auto hp = [](const HyperParams& h) {
    Json j{{"sigma2", h.sigma2}};
    if (h.a) j["a"] = *h.a;
    if (h.b) j["b"] = *h.b;
    return j;
  };
  Json j{{"generator", std::string(generatorName(s.generator))},
         {"k", s.k},
         {"groupSizes", s.groupSizes},
         {"p", s.p},
         {"params", hp(s.params)}};
  if (s.generator == Generator::kHgp) j["hgp"] = {{"global", hp(s.hgpGlobal)}, {"group", hp(s.hgpGroup)}};
  j["noise"] = toJson(s.noise);
  if (s.beta) j["beta"] = vectorJson(*s.beta);
  j["xBox"] = {s.xLow, s.xHigh};
  j["seed"] = s.seed;
  if (s.space) j["space"] = toJson(*s.space);
  return j;
}

ScenarioSpec scenarioFromJson(const Json& j, std::vector<std::string>* warnings) {
  const std::string path = "scenario";
  if (!j.is_object()) throw ValidationError(path + ": expected an object");
  static const std::vector<std::string> known{"generator", "k", "groupSizes", "p", "params", "hgp",
                                              "noise", "beta", "xBox", "seed", "space"};
  for (const auto& [key, value] : j.items()) {
    if (std::find(known.begin(), known.end(), key) == known.end()) {
      throw ValidationError(path + ": unexpected field '" + key + "'");
    }
  }
  ScenarioSpec s;
  s.generator = parseGenerator(text(field(j, "generator", path), path + ".generator"));
  if (j.contains("space")) {
    s.space = groupSpaceFromJson(j["space"]);
    s.k = s.space->size();
  }
  if (j.contains("k")) s.k = integer(j["k"], path + ".k");
  if (j.contains("groupSizes")) {
    s.groupSizes.clear();
    if (!j["groupSizes"].is_array()) throw ValidationError(path + ".groupSizes: expected an array");
    for (const auto& n : j["groupSizes"]) s.groupSizes.push_back(integer(n, path + ".groupSizes"));
  } else {
    s.groupSizes.assign(static_cast<std::size_t>(std::max(s.k, 0)), 100);
  }
  if (j.contains("p")) s.p = integer(j["p"], path + ".p");
  auto hp = [&](const Json& src, const std::string& where, HyperParams base) {
    base.sigma2 = numberOr(src, "sigma2", base.sigma2, where);
    if (src.contains("a")) base.a = number(src["a"], where + ".a");
    if (src.contains("b")) base.b = number(src["b"], where + ".b");
    return base;
  };
  if (j.contains("params")) s.params = hp(j["params"], path + ".params", s.params);
  if (j.contains("hgp")) {
    const Json& h = j["hgp"];
    if (h.contains("global")) s.hgpGlobal = hp(h["global"], path + ".hgp.global", s.hgpGlobal);
    if (h.contains("group")) s.hgpGroup = hp(h["group"], path + ".hgp.group", s.hgpGroup);
  }
  if (j.contains("noise")) s.noise = noiseFromJson(j["noise"]);
  if (j.contains("beta")) s.beta = vectorFromJson(j["beta"], path + ".beta");
  if (j.contains("xBox")) {
    const Eigen::VectorXd box = vectorFromJson(j["xBox"], path + ".xBox");
    if (box.size() != 2) throw ValidationError(path + ".xBox: expected [low, high]");
    s.xLow = box[0];
    s.xHigh = box[1];
  }
  if (j.contains("seed")) {
    if (!j["seed"].is_number_unsigned()) throw ValidationError(path + ".seed: expected a nonnegative integer");
    s.seed = j["seed"].get<std::uint64_t>();
  } else if (warnings) {
    warnings->push_back("no seed given; using seed 0");
  }
  s.validate();
  return s;
}

void writeChainCsv(std::ostream& out, const McmcChain& chain) {
  out << "draw,logPosterior";
  for (Eigen::Index c = 0; c < chain.samples.cols(); ++c) {
    out << ',' << (static_cast<std::size_t>(c) < chain.names.size() ? chain.names[c] : "theta" + std::to_string(c + 1));
  }
  out << '\n';
  for (Eigen::Index s = 0; s < chain.samples.rows(); ++s) {
    out << s << ',' << csv::formatReal(chain.logPosterior[s]);
    for (Eigen::Index c = 0; c < chain.samples.cols(); ++c) out << ',' << csv::formatReal(chain.samples(s, c));
    out << '\n';
  }
}

}  // namespace mggp
