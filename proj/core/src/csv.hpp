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
#include <string_view>
#include <vector>

namespace mggp::csv {

/// Split one line on commas and trim surrounding whitespace. No quoting.
std::vector<std::string> splitLine(std::string_view line);

/// Read the next non-empty line; false at end of input.
bool nextRow(std::istream& in, std::vector<std::string>& fields);

/// Parse a full-precision real; throws ValidationError naming the context.
double parseReal(const std::string& field, std::string_view context);

/// Shortest text that reads back to the same double.
std::string formatReal(double value);

}  // namespace mggp::csv
