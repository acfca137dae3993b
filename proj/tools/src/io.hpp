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

#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mggp/gp.hpp"
#include "mggp/groups.hpp"
#include "mggp/inference.hpp"
#include "mggp/serialization.hpp"

namespace mggp::cli {

/// Collects outputs in memory and publishes them only when every command step
/// has succeeded: each file is written to a temporary sibling and renamed.
class OutputSet {
 public:
  explicit OutputSet(std::filesystem::path dir) : dir_(std::move(dir)) {}

  void add(const std::string& name, std::string contents);
  void addJson(const std::string& name, const Json& json);
  void commit() const;
  const std::filesystem::path& dir() const noexcept { return dir_; }

 private:
  std::filesystem::path dir_;
  std::vector<std::pair<std::string, std::string>> files_;
};

std::string readFile(const std::filesystem::path& path);
Json readJsonFile(const std::filesystem::path& path);

/// Group space from a JSON or distance-CSV file, or the discrete metric over
/// the labels of a dataset in order of first appearance.
GroupSpace loadSpace(const std::optional<std::filesystem::path>& spaceFile,
                     const std::optional<std::filesystem::path>& dataFile);
GroupedDataset loadDataset(const std::filesystem::path& path, const GroupSpace& space);

/// {"kernel": {...}, "noise": {...}, "fixed": [...]}. A missing noise block
/// means a shared tau2 of 0.1. When `space` is given it replaces the
/// kernel's own space.
ModelTemplate loadModel(const std::filesystem::path& path, const std::optional<GroupSpace>& space);

}  // namespace mggp::cli
