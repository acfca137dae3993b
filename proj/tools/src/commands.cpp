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

#include "commands.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <sstream>

#include "io.hpp"
#include "mggp/errors.hpp"
#include "mggp/experiments.hpp"
#include "mggp/inference.hpp"
#include "mggp/serialization.hpp"
#include "mggp/simulate.hpp"
#include "mggp/validation.hpp"

namespace mggp::cli {

namespace {

using Clock = std::chrono::steady_clock;

class Report {
 public:
  Report(std::string name, const GlobalOptions& global, std::uint64_t seed) : global_(global), start_(Clock::now()) {
    json_["name"] = std::move(name);
    json_["config"] = Json::object();
    json_["metrics"] = Json::object();
    json_["artifacts"] = Json::array();
    json_["seed"] = seed;
  }

  Json& config() { return json_["config"]; }
  Json& metrics() { return json_["metrics"]; }
  void artifact(const std::string& name) { json_["artifacts"].push_back(name); }
  void warning(const std::string& text) { json_["warnings"].push_back(text); }

  Json finish() {
    if (global_.reportTiming) {
      json_["wall_time_seconds"] = std::chrono::duration<double>(Clock::now() - start_).count();
    }
    return json_;
  }

 private:
  Json json_;
  const GlobalOptions& global_;
  Clock::time_point start_;
};

Json optionalPath(const std::optional<std::filesystem::path>& p) { return p ? Json(p->string()) : Json(nullptr); }

Json groupValues(const Eigen::VectorXd& v, const GroupSpace& space) {
  Json j = Json::object();
  for (int g = 0; g < space.size(); ++g) j[space.labels()[g]] = std::isfinite(v[g]) ? Json(v[g]) : Json(nullptr);
  return j;
}

FitOptions fitOptions(const GlobalOptions& global, int restarts, int maxIter = 500) {
  FitOptions opt;
  opt.seed = global.seedOr(0);
  opt.restarts = restarts;
  opt.maxIter = maxIter;
  return opt;
}

double requireParameter(const KernelSpec& spec, const char* name) {
  try {
    return spec.parameter(name);
  } catch (const ValidationError&) {
    throw ValidationError(std::string("sweep needs a kernel with parameter '") + name + "'");
  }
}

struct LoadedData {
  GroupSpace space;
  GroupedDataset data;
};

LoadedData load(const std::filesystem::path& data, const std::optional<std::filesystem::path>& spaceFile) {
  GroupSpace space = loadSpace(spaceFile, data);
  GroupedDataset dataset = loadDataset(data, space);
  return {std::move(space), std::move(dataset)};
}

}  // namespace

void runSimulate(const GlobalOptions& global, const SimulateArgs& args) {
  std::vector<std::string> warnings;
  ScenarioSpec scenario = scenarioFromJson(readJsonFile(args.config), global.seed ? nullptr : &warnings);
  if (global.seed) scenario.seed = *global.seed;
  const GroupedDataset data = generate(scenario);

  OutputSet out(global.outDir);
  std::ostringstream csv;
  writeDatasetCsv(csv, data, scenario.groupSpace());
  out.add(args.datasetName, csv.str());

  Report report("simulate", global, scenario.seed);
  report.config() = toJson(scenario);
  report.metrics()["rows"] = data.size();
  report.metrics()["groupSizes"] = data.groupSizes(scenario.k);
  for (const auto& w : warnings) report.warning(w);
  report.artifact(args.datasetName);
  out.addJson("simulate_report.json", report.finish());
  out.commit();
}

void runSweep(const GlobalOptions& global, const SweepArgs& args) {
  const LoadedData in = load(args.data, args.space);
  const ModelTemplate model = loadModel(args.model, in.space);
  SweepConfig config;
  config.aGrid = args.aGrid;
  config.sigma2 = requireParameter(model.kernel, "sigma2");
  config.b = requireParameter(model.kernel, "b");
  config.tau2 = model.noise.values.front();
  config.profile = args.profile;
  config.fit = fitOptions(global, args.restarts);
  const SweepResult sweep = likelihoodSweep(in.data, in.space, config);

  OutputSet out(global.outDir);
  std::ostringstream csv;
  writeSweepCsv(csv, sweep);
  out.add("sweep.csv", csv.str());

  Report report("sweep", global, config.fit.seed);
  report.config() = {{"data", args.data.string()},
                     {"model", args.model.string()},
                     {"space", optionalPath(args.space)},
                     {"aGrid", args.aGrid},
                     {"sigma2", config.sigma2},
                     {"b", config.b},
                     {"tau2", config.tau2},
                     {"profile", args.profile}};
  report.metrics()["argmax_a"] = sweep.a[sweep.argmax()];
  report.metrics()["max_loglik_MGGP"] = sweep.mggp[sweep.argmax()];
  report.metrics()["loglik_SGP"] = sweep.sgp;
  report.metrics()["loglik_UGP"] = sweep.ugp;
  report.metrics()["loglik_HGP"] = sweep.hgp;
  report.artifact("sweep.csv");
  out.addJson("sweep_report.json", report.finish());
  out.commit();
}

void runFit(const GlobalOptions& global, const FitArgs& args) {
  LoadedData in = load(args.data, args.space);
  ModelTemplate model = loadModel(args.model, in.space);
  if (args.perGroupNoise && model.noise.mode == NoiseSpec::Mode::kShared) {
    model.noise = NoiseSpec::perGroup(std::vector<double>(in.space.size(), model.noise.values.front()));
  }
  if (args.intercepts && !in.data.design) attachInterceptDesign(in.data, in.space.size());
  const FitOptions opt = fitOptions(global, args.restarts, args.maxIter);
  const FitResult fit = fitMLE(model, in.data, opt);

  OutputSet out(global.outDir);
  Report report("fit", global, opt.seed);
  report.config() = {{"data", args.data.string()},
                     {"model", args.model.string()},
                     {"space", optionalPath(args.space)},
                     {"perGroupNoise", args.perGroupNoise},
                     {"intercepts", args.intercepts},
                     {"restarts", args.restarts},
                     {"maxIter", args.maxIter}};
  report.metrics() = toJson(fit);
  report.artifact("fit.json");
  out.addJson("fit.json", report.finish());
  out.commit();
}

void runBenchmark(const GlobalOptions& global, const BenchmarkArgs& args) {
  if (args.data.has_value() == args.scenario.has_value()) {
    throw ValidationError("predict-benchmark needs exactly one of --data or --scenario");
  }
  std::optional<GroupSpace> space;
  std::optional<GroupedDataset> data;
  std::vector<std::string> warnings;
  Report report("predict-benchmark", global, global.seedOr(0));
  if (args.scenario) {
    ScenarioSpec scenario = scenarioFromJson(readJsonFile(*args.scenario), global.seed ? nullptr : &warnings);
    if (global.seed) scenario.seed = *global.seed;
    space = scenario.groupSpace();
    data = generate(scenario);
    report.config()["scenario"] = toJson(scenario);
  } else {
    LoadedData in = load(*args.data, args.space);
    space = std::move(in.space);
    data = std::move(in.data);
    report.config()["data"] = args.data->string();
    report.config()["space"] = optionalPath(args.space);
  }
  BenchmarkConfig config;
  config.models.clear();
  for (const auto& m : args.models) config.models.push_back(parseModel(m));
  config.trainFraction = args.split;
  config.seed = global.seedOr(0);
  config.fit = fitOptions(global, args.restarts);
  const BenchmarkResult result = predictBenchmark(*data, *space, config);

  report.config()["split"] = args.split;
  report.config()["models"] = args.models;
  report.config()["restarts"] = args.restarts;
  Json models = Json::object();
  for (const auto& s : result.scores) {
    models[std::string(modelName(s.model))] = {{"mse", s.mse},
                                               {"groupMse", groupValues(s.groupMse, *space)},
                                               {"trainLogLik", s.trainLogLik},
                                               {"kernel", toJson(s.fit->kernel)},
                                               {"noise", toJson(s.fit->noise)}};
  }
  report.metrics()["models"] = std::move(models);
  report.metrics()["trainSizes"] = result.trainSizes;
  report.metrics()["testSizes"] = result.testSizes;
  Json unseen = Json::array();
  for (int g : result.unseenGroups) unseen.push_back(space->labels()[g]);
  report.metrics()["groupsAbsentFromTraining"] = std::move(unseen);
  for (const auto& w : warnings) report.warning(w);
  report.artifact("benchmark.json");

  OutputSet out(global.outDir);
  out.addJson("benchmark.json", report.finish());
  out.commit();
}

void runPairwise(const GlobalOptions& global, const PairwiseArgs& args) {
  const LoadedData in = load(args.data, args.space);
  const ModelTemplate model = loadModel(args.model, in.space);
  const FitOptions opt = fitOptions(global, args.restarts);
  const PairwiseResult result = pairwiseDistanceLearning(in.data, in.space, model, opt);

  OutputSet out(global.outDir);
  std::ostringstream csv;
  writePairwiseCsv(csv, result);
  out.add("pairwise.csv", csv.str());

  Report report("pairwise-a", global, opt.seed);
  report.config() = {{"data", args.data.string()},
                     {"model", args.model.string()},
                     {"space", optionalPath(args.space)},
                     {"restarts", args.restarts}};
  Json a = Json::array();
  for (Eigen::Index i = 0; i < result.a.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index j = 0; j < result.a.cols(); ++j) {
      row.push_back(std::isfinite(result.a(i, j)) ? Json(result.a(i, j)) : Json(nullptr));
    }
    a.push_back(std::move(row));
  }
  report.metrics()["labels"] = result.labels;
  report.metrics()["a"] = std::move(a);
  report.artifact("pairwise.csv");
  out.addJson("pairwise_report.json", report.finish());
  out.commit();
}

void runValidate(const GlobalOptions& global, const ValidateArgs& args) {
  Json j = readJsonFile(args.kernel);
  if (j.is_object() && j.contains("kernel")) j = j["kernel"];
  const KernelSpec spec = kernelFromJson(j);
  PDReport result;
  if (args.mode == "categorical") {
    if (spec.family() == Family::kSeparableHomogeneous) {
      result = checkHomogeneousBound(spec.groupCount(), *spec.categoricalOffDiagonal());
    } else {
      const Eigen::VectorXd x = Eigen::VectorXd::Zero(spec.p());
      result = checkCategoricalMatrix(spec.crossCovariance(x, x));
    }
  } else if (args.mode == "spectral") {
    if (spec.family() != Family::kMgRbf || spec.groupCount() != 2) {
      throw UnsupportedError("spectral mode covers the two-group mg-rbf kernel");
    }
    const double sigma2 = spec.parameter("sigma2");
    const double b = spec.parameter("b");
    const double a = spec.parameter("a") * spec.space().distance(0, 1);
    result = checkTwoGroupSpectral(rbfWithinDensity(sigma2, b, spec.p()), rbfCrossDensity(sigma2, a, b, spec.p()),
                                   defaultSpectralGrid(spec.p()));
  } else if (args.mode == "monte-carlo") {
    result = monteCarloPD(spec, args.trials, args.n, global.seedOr(0));
  } else {
    throw ValidationError("mode must be categorical, spectral, or monte-carlo");
  }

  Report report("validate", global, global.seedOr(0));
  report.config() = {{"kernel", toJson(spec)}, {"mode", args.mode}, {"trials", args.trials}, {"n", args.n}};
  report.metrics() = toJson(result);
  report.artifact("validate.json");
  OutputSet out(global.outDir);
  out.addJson("validate.json", report.finish());
  out.commit();
}

void runMcmc(const GlobalOptions& global, const McmcArgs& args) {
  LoadedData in = load(args.data, args.space);
  const ModelTemplate model = loadModel(args.model, in.space);
  if (args.intercepts && !in.data.design) attachInterceptDesign(in.data, in.space.size());
  McmcOptions opt;
  opt.chains = args.chains;
  opt.warmup = args.warmup;
  opt.draws = args.draws;
  opt.targetAccept = args.targetAccept;
  opt.seed = global.seedOr(0);
  const PriorSpec priors = PriorSpec::standard(in.data.designColumns());
  const std::vector<McmcChain> chains = sampleMCMC(model, in.data, priors, opt);

  OutputSet out(global.outDir);
  Report report("mcmc", global, opt.seed);
  report.config() = {{"data", args.data.string()},       {"model", args.model.string()},
                     {"space", optionalPath(args.space)}, {"intercepts", args.intercepts},
                     {"chains", args.chains},            {"warmup", args.warmup},
                     {"draws", args.draws},              {"targetAccept", args.targetAccept}};
  Json summary = Json::object();
  const auto& names = chains.front().names;
  for (std::size_t c = 0; c < names.size(); ++c) {
    std::vector<double> all;
    for (const auto& chain : chains)
      for (Eigen::Index s = 0; s < chain.samples.rows(); ++s) all.push_back(chain.samples(s, static_cast<Eigen::Index>(c)));
    std::sort(all.begin(), all.end());
    auto q = [&](double prob) {
      const double pos = prob * static_cast<double>(all.size() - 1);
      const auto lo = static_cast<std::size_t>(pos);
      const std::size_t hi = std::min(lo + 1, all.size() - 1);
      return all[lo] + (pos - static_cast<double>(lo)) * (all[hi] - all[lo]);
    };
    summary[names[c]] = {{"q025", q(0.025)}, {"median", q(0.5)}, {"q975", q(0.975)},
                         {"rhat", splitRhat(chains, static_cast<Eigen::Index>(c))}};
  }
  Json acceptance = Json::array();
  for (std::size_t c = 0; c < chains.size(); ++c) {
    acceptance.push_back(chains[c].acceptanceRate);
    std::ostringstream csv;
    writeChainCsv(csv, chains[c]);
    const std::string name = "chain_" + std::to_string(c + 1) + ".csv";
    out.add(name, csv.str());
    report.artifact(name);
  }
  report.metrics()["parameters"] = std::move(summary);
  report.metrics()["acceptanceRate"] = std::move(acceptance);
  report.artifact("mcmc.json");
  out.addJson("mcmc.json", report.finish());
  out.commit();
}

}  // namespace mggp::cli
