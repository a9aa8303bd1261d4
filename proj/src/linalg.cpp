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


#include "monokurt/linalg.hpp"

#include "monokurt/error.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <utility>

namespace monokurt {

Matrix symmetrized(const Matrix& m, const std::string& what, const std::string& stage) {
  if (m.rows() != m.cols()) {
    throw NumericError(stage, what + " is not square");
  }
  if (!m.allFinite()) {
    throw NumericError(stage, what + " has non-finite entries");
  }
  const double scale = m.cwiseAbs().maxCoeff();
  const double asym = (m - m.transpose()).cwiseAbs().maxCoeff();
  if (asym > kSymmetryTol * std::max(scale, 1e-300)) {
    throw NumericError(stage, what + " is not symmetric");
  }
  return 0.5 * (m + m.transpose());
}

SpdFactor::SpdFactor(const Matrix& m, std::string what, std::string stage)
    : size_(m.rows()) {
  const Matrix s = symmetrized(m, what, stage);
  if (size_ == 0) {
    throw SingularMatrixError(stage, what, what + " is empty");
  }
  llt_.compute(s);
  if (llt_.info() != Eigen::Success) {
    // Locate the first non-positive pivot for the message.
    Index pivot = 0;
    for (Index k = 1; k <= size_; ++k) {
      Eigen::LLT<Matrix> lead(s.topLeftCorner(k, k));
      if (lead.info() != Eigen::Success) {
        pivot = k;
        break;
      }
    }
    throw SingularMatrixError(stage, what,
                              what + " is not positive definite (pivot " +
                                  std::to_string(pivot) + ")");
  }
  rcond_ = llt_.rcond();
  if (!(rcond_ >= kSingularRcond)) {
    throw SingularMatrixError(stage, what,
                              what + " is numerically singular (reciprocal "
                                     "condition estimate " +
                                  std::to_string(rcond_) + ")");
  }
}

Matrix SpdFactor::inverse() const {
  Matrix inv = llt_.solve(Matrix::Identity(size_, size_));
  return 0.5 * (inv + inv.transpose());
}

Vector SpdFactor::row_quadratic_forms(const Matrix& rows) const {
  // With M = L L', x' M^{-1} x = |L^{-1} x|^2.
  const Matrix w = llt_.matrixL().solve(rows.transpose());
  return w.colwise().squaredNorm().transpose();
}

Matrix spd_solve(const Matrix& m, const Matrix& rhs) {
  if (rhs.rows() != m.rows()) {
    throw NumericError("linalg", "spd_solve: dimension mismatch");
  }
  return SpdFactor(m, "matrix").solve(rhs);
}

Matrix spd_inv_sqrt(const Matrix& m) {
  const Matrix s = symmetrized(m, "matrix", "linalg");
  Eigen::SelfAdjointEigenSolver<Matrix> eig(s);
  if (eig.info() != Eigen::Success) {
    throw NumericError("linalg", "eigendecomposition failed");
  }
  const Vector& ev = eig.eigenvalues();
  const double top = ev.cwiseAbs().maxCoeff();
  for (Index i = 0; i < ev.size(); ++i) {
    if (!(ev(i) > kSingularRcond * top)) {
      throw SingularMatrixError("linalg", "matrix",
                                "matrix is not positive definite (eigenvalue " +
                                    std::to_string(i) + " = " +
                                    std::to_string(ev(i)) + ")");
    }
  }
  const Matrix& v = eig.eigenvectors();
  Matrix r = v * ev.cwiseSqrt().cwiseInverse().asDiagonal() * v.transpose();
  return 0.5 * (r + r.transpose());
}

}  // namespace monokurt
