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

#include <optional>

namespace monokurt {

/// Sample means and centered cross-product matrices of a monotone sample.
struct CrossProducts {
  Vector x_bar;                 // mean of X over the n complete rows
  Vector y_bar1;                // mean of Y over the n complete rows
  std::optional<Vector> y_bar2; // mean of Y over the N - n incomplete rows
  Vector y_bar;                 // mean of Y over all N rows
  Matrix a11;                   // sum (X - x_bar)(X - x_bar)'
  Matrix a12;                   // sum (X - x_bar)(Y - y_bar1)'
  Matrix a22n;                  // sum over complete rows (Y - y_bar1)(Y - y_bar1)'
  Matrix a22N;                  // sum over all rows (Y - y_bar)(Y - y_bar)'
  Matrix a11_dot2;              // a11 - a12 a22n^{-1} a21

  /// y_bar1 - y_bar2, or zero when there are no incomplete rows.
  Vector y_gap() const;
};

/// Maximum likelihood estimates under multivariate normality, with the
/// partial Iwasawa coordinates (delta11, delta12, delta22) of sigma_hat:
///
///   sigma_hat = [I delta12; 0 I] diag(delta11, delta22) [I 0; delta12' I].
struct MleEstimate {
  Index p = 0;
  Index q = 0;
  Vector mu_hat;
  Matrix sigma_hat;
  Matrix delta11;
  Matrix delta12;
  Matrix delta22;
  /// Block inverse built from the Iwasawa coordinates.
  Matrix sigma_hat_inv;

  Vector mu1() const { return mu_hat.head(p); }
  Vector mu2() const { return mu_hat.tail(q); }
  Matrix sigma11() const { return sigma_hat.topLeftCorner(p, p); }
  Matrix sigma12() const { return sigma_hat.topRightCorner(p, q); }
  Matrix sigma22() const { return sigma_hat.bottomRightCorner(q, q); }
};

CrossProducts cross_products(const MonotoneSample& sample);

MleEstimate mle(const MonotoneSample& sample);
MleEstimate mle(const MonotoneSample& sample, const CrossProducts& cp);

/// Rebuilds sigma_hat from the Iwasawa coordinates of `est`.
Matrix iwasawa_product(const MleEstimate& est);

}  // namespace monokurt
