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

#include "monokurt/sample.hpp"

#include <Eigen/Cholesky>

#include <string>

namespace monokurt {

/// Reciprocal condition estimate below which a matrix is treated as singular.
inline constexpr double kSingularRcond = 1e-12;
/// Relative asymmetry tolerated before a matrix is rejected as non-symmetric.
inline constexpr double kSymmetryTol = 1e-10;

/// Cholesky factor of a symmetric positive definite matrix.
///
/// The input is checked for symmetry, averaged with its transpose and then
/// factored. Failure raises SingularMatrixError naming `what` and the failing
/// pivot.
class SpdFactor {
 public:
  SpdFactor(const Matrix& m, std::string what, std::string stage = "linalg");

  Matrix solve(const Matrix& rhs) const { return llt_.solve(rhs); }
  Vector solve(const Vector& rhs) const { return llt_.solve(rhs); }
  Matrix inverse() const;
  double rcond() const { return rcond_; }
  Index size() const { return size_; }

  /// x' M^{-1} x for every row x of `rows`.
  Vector row_quadratic_forms(const Matrix& rows) const;

 private:
  Eigen::LLT<Matrix> llt_;
  double rcond_ = 0.0;
  Index size_ = 0;
};

/// Solves m * X = rhs for symmetric positive definite m.
Matrix spd_solve(const Matrix& m, const Matrix& rhs);

/// Symmetric inverse square root of a symmetric positive definite matrix.
Matrix spd_inv_sqrt(const Matrix& m);

/// Returns (m + m') / 2 after checking the asymmetry is within kSymmetryTol.
Matrix symmetrized(const Matrix& m, const std::string& what, const std::string& stage);

}  // namespace monokurt
