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

#include <stdexcept>
#include <string>
#include <vector>

namespace mggp {

/// Base class of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input: shapes, ranges, labels, config fields.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// A parameter combination the implementation does not cover.
class UnsupportedError : public Error {
 public:
  using Error::Error;
};

/// Numerical failures. The command-line tool maps these to exit code 2.
class NumericalError : public Error {
 public:
  using Error::Error;
};

class NotPositiveDefiniteError : public NumericalError {
 public:
  NotPositiveDefiniteError(const std::string& what, std::vector<double> ladder)
      : NumericalError(what), ladder_(std::move(ladder)) {}

  /// Jitter values that were tried, in order.
  const std::vector<double>& ladder() const noexcept { return ladder_; }

 private:
  std::vector<double> ladder_;
};

class DesignSingularError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class FitFailedError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

}  // namespace mggp
