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

#include "monokurt/estimation.hpp"
#include "monokurt/sample.hpp"

#include <string>
#include <vector>

namespace monokurt {

/// b = (c1 * b1 + c2 * b2) / N, where b1 sums the squared Mahalanobis forms of
/// the complete rows in the metric of sigma_hat and b2 sums those of the
/// Y-only rows in the metric of the Y block of sigma_hat.
struct KurtosisValue {
  double b1 = 0.0;
  double b2 = 0.0;
  double b = 0.0;
  KurtosisWeights weights;
  std::vector<std::string> warnings;
};

KurtosisValue kurtosis_statistic(const MonotoneSample& sample, const MleEstimate& est,
                                 const KurtosisWeights& w);
/// Convenience overload that estimates first.
KurtosisValue kurtosis_statistic(const MonotoneSample& sample, const KurtosisWeights& w);

/// Per complete row: the full form (Z - mu)' S^{-1} (Z - mu) evaluated with the
/// dense block inverse, and its two parts r' D11^{-1} r and
/// (Y - mu2)' D22^{-1} (Y - mu2), where r = X - mu1 - D12 (Y - mu2).
struct QuadraticSplit {
  Vector full;
  Vector residual_part;
  Vector y_part;
};
QuadraticSplit complete_row_split(const MonotoneSample& sample, const MleEstimate& est);

/// N x (p+q) data with every missing X replaced by its regression prediction
/// mu1 + S12 S22^{-1} (Y - mu2). Complete rows are copied unchanged.
Matrix impute(const MonotoneSample& sample, const MleEstimate& est);

/// The statistic recomputed on the imputed data with the dense inverse of
/// sigma_hat. Agrees with kurtosis_statistic up to rounding.
KurtosisValue kurtosis_statistic_imputed(const MonotoneSample& sample,
                                         const MleEstimate& est,
                                         const KurtosisWeights& w);

/// The vector (D12 (ybar1 - ybar2); ybar1 - ybar2). For every complete row,
/// Z - mu_hat = Z - Zbar1 + tau_bar * offset.
Vector centering_offset(const CrossProducts& cp, const MleEstimate& est);

/// Element of the block-triangular affine group acting on monotone samples:
///   complete row (x, y) -> (L11 (x + L12 y) + nu1, L22 y + nu2),
///   Y-only row y        -> L22 y + nu2.
/// In matrix form the complete rows map to Lambda C z + nu with
/// Lambda = diag(L11, L22) and C = [I L12; 0 I].
struct AffineElement {
  Matrix lambda11;  // p x p, symmetric positive definite
  Matrix lambda22;  // q x q, symmetric positive definite
  Matrix lambda12;  // p x q
  Vector nu1;
  Vector nu2;

  Index p() const { return lambda11.rows(); }
  Index q() const { return lambda22.rows(); }

  static AffineElement identity(Index p, Index q);
  /// The (p+q) x (p+q) matrix Lambda C.
  Matrix linear() const;
  Vector nu() const;
  AffineElement inverse() const;
  /// Applies the element to a single (p+q)-vector.
  Vector apply(const Vector& z) const;
};

MonotoneSample transform(const MonotoneSample& sample, const AffineElement& g);

/// Group element mapping a population with mean mu and covariance sigma to
/// mean 0 and identity covariance:
///   L11 = S11.2^{-1/2}, L22 = S22^{-1/2}, L12 = -S12 S22^{-1}, nu = -Lambda C mu.
AffineElement canonicalizer(const Vector& mu, const Matrix& sigma, Index p);

/// Classical complete-data kurtosis sum: sum_j [(z_j - zbar)' S^{-1} (z_j - zbar)]^2
/// with S the maximum likelihood covariance of the rows.
double mardia_sum(const Matrix& rows);

}  // namespace monokurt
