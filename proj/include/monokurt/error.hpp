/*
 * Copyright 2026 The monokurt Authors
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
 */

#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace monokurt {

/// Base class for every error raised by the library. The stage names the
/// pipeline step that failed ("ingest", "validation", "estimation", ...), which
/// the CLI prints alongside the message.
class Error : public std::runtime_error {
 public:
  Error(std::string stage, const std::string& message)
      : std::runtime_error(message), stage_(std::move(stage)) {}

  const std::string& stage() const noexcept { return stage_; }

 private:
  std::string stage_;
};

/// Malformed or inconsistent input data.
class DataError : public Error {
 public:
  using Error::Error;
};

/// Numerical failure: singular or non positive definite matrices, non-finite
/// moments, negative variances.
class NumericError : public Error {
 public:
  using Error::Error;
};

/// Raised when a matrix that must be inverted is singular or not positive
/// definite. `matrix()` carries the name of the offending matrix.
class SingularMatrixError : public NumericError {
 public:
  SingularMatrixError(std::string stage, std::string matrix,
                      const std::string& message)
      : NumericError(std::move(stage), message), matrix_(std::move(matrix)) {}

  const std::string& matrix() const noexcept { return matrix_; }

 private:
  std::string matrix_;
};

}  // namespace monokurt
