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

#include "io.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "mggp/errors.hpp"

namespace mggp::cli {

void OutputSet::add(const std::string& name, std::string contents) { files_.emplace_back(name, std::move(contents)); }

void OutputSet::addJson(const std::string& name, const Json& json) { add(name, json.dump(2) + "\n"); }

void OutputSet::commit() const {
  std::filesystem::create_directories(dir_);
  std::vector<std::pair<std::filesystem::path, std::filesystem::path>> staged;
  for (const auto& [name, contents] : files_) {
    const std::filesystem::path target = dir_ / name;
    const std::filesystem::path tmp = dir_ / ("." + name + ".tmp");
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    out << contents;
    out.close();
    if (!out) {
      for (const auto& [t, _] : staged) std::filesystem::remove(t);
      std::filesystem::remove(tmp);
      throw ValidationError("cannot write " + target.string());
    }
    staged.emplace_back(tmp, target);
  }
  for (const auto& [tmp, target] : staged) std::filesystem::rename(tmp, target);
}

std::string readFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

Json readJsonFile(const std::filesystem::path& path) { return parseJson(readFile(path), path.string()); }

GroupSpace loadSpace(const std::optional<std::filesystem::path>& spaceFile,
                     const std::optional<std::filesystem::path>& dataFile) {
  if (spaceFile) {
    if (spaceFile->extension() == ".csv") {
      std::istringstream in(readFile(*spaceFile));
      return readDistanceCsv(in);
    }
    return groupSpaceFromJson(readJsonFile(*spaceFile));
  }
  if (!dataFile) throw ValidationError("a group space or a dataset is required");
  std::istringstream in(readFile(*dataFile));
  std::string line;
  std::vector<std::string> labels;
  bool header = true;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    if (header) {
      header = false;
      continue;
    }
    std::string label = line.substr(0, line.find(','));
    const auto first = label.find_first_not_of(" \t");
    const auto last = label.find_last_not_of(" \t\r");
    label = first == std::string::npos ? "" : label.substr(first, last - first + 1);
    if (std::find(labels.begin(), labels.end(), label) == labels.end()) labels.push_back(label);
  }
  if (labels.empty()) throw ValidationError(dataFile->string() + " has no data rows");
  return discreteMetric(static_cast<int>(labels.size()), labels);
}

GroupedDataset loadDataset(const std::filesystem::path& path, const GroupSpace& space) {
  std::istringstream in(readFile(path));
  try {
    return readDatasetCsv(in, space);
  } catch (const ValidationError& e) {
    throw ValidationError(path.string() + ": " + e.what());
  }
}

ModelTemplate loadModel(const std::filesystem::path& path, const std::optional<GroupSpace>& space) {
  const Json j = readJsonFile(path);
  if (!j.is_object() || !j.contains("kernel")) throw ValidationError(path.string() + ": missing field 'kernel'");
  Json kernelJson = j["kernel"];
  if (space && kernelJson.is_object()) {
    kernelJson.erase("k");
    kernelJson["space"] = toJson(*space);
  }
  KernelSpec kernel = kernelFromJson(kernelJson);
  NoiseSpec noise = j.contains("noise") ? noiseFromJson(j["noise"]) : NoiseSpec::shared(0.1);
  std::vector<std::string> fixed;
  if (j.contains("fixed")) {
    if (!j["fixed"].is_array()) throw ValidationError(path.string() + ": 'fixed' must be an array of names");
    for (const auto& f : j["fixed"]) {
      if (!f.is_string()) throw ValidationError(path.string() + ": 'fixed' must be an array of names");
      fixed.push_back(f.get<std::string>());
    }
  }
  noise.validate(kernel.groupCount());
  return ModelTemplate{std::move(kernel), std::move(noise), std::move(fixed)};
}

}  // namespace mggp::cli
