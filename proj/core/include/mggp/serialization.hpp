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
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "mggp/gp.hpp"
#include "mggp/groups.hpp"
#include "mggp/inference.hpp"
#include "mggp/kernels.hpp"
#include "mggp/simulate.hpp"
#include "mggp/validation.hpp"

namespace mggp {

using Json = nlohmann::ordered_json;

/// Parses text, rethrowing syntax errors as ValidationError with the
/// position reported by the parser.
Json parseJson(const std::string& text, const std::string& source);

Json toJson(const GroupSpace& space);
GroupSpace groupSpaceFromJson(const Json& j);

/// {"family", "p", "params", "space", "extra"}. "space" may be replaced by
/// "k" for the discrete metric.
Json toJson(const KernelSpec& spec);
KernelSpec kernelFromJson(const Json& j);

/// {"mode": "shared" | "per-group", "values": [...]}.
Json toJson(const NoiseSpec& noise);
NoiseSpec noiseFromJson(const Json& j);

Json toJson(const PDReport& report);
Json toJson(const FitResult& fit);
Json toJson(const McmcChain& chain);

Json toJson(const ScenarioSpec& scenario);
/// Missing optional fields take their defaults; a missing seed defaults to 0
/// and appends a note to `warnings`.
ScenarioSpec scenarioFromJson(const Json& j, std::vector<std::string>* warnings = nullptr);

/// One row per draw: draw, logPosterior, then one column per coordinate.
void writeChainCsv(std::ostream& out, const McmcChain& chain);

}  // namespace mggp
