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


#include "monokurt/estimation.hpp"

#include "monokurt/error.hpp"
#include "monokurt/linalg.hpp"

namespace monokurt {

namespace {

Matrix centered_cross(const Matrix& a, const Vector& a_mean, const Matrix& b,
                      const Vector& b_mean) {
  const Matrix ac = a.rowwise() - a_mean.transpose();
  const Matrix bc = b.rowwise() - b_mean.transpose();
  return ac.transpose() * bc;
}

Matrix sym(const Matrix& m) { return 0.5 * (m + m.transpose()); }

}  // namespace

Vector CrossProducts::y_gap() const {
  if (!y_bar2) return Vector::Zero(y_bar1.size());
  return y_bar1 - *y_bar2;
}

CrossProducts cross_products(const MonotoneSample& s) {
  require_valid(s);
  const Index n = s.n();
  const Index N = s.N();
  const Matrix y_complete = s.y_block.topRows(n);

  CrossProducts cp;
  cp.x_bar = s.x_block.colwise().mean().transpose();
  cp.y_bar1 = y_complete.colwise().mean().transpose();
  if (n < N) {
    cp.y_bar2 = s.incomplete_y().colwise().mean().transpose();
    cp.y_bar = s.tau() * cp.y_bar1 + s.tau_bar() * *cp.y_bar2;
  } else {
    cp.y_bar = cp.y_bar1;
  }
  cp.a11 = sym(centered_cross(s.x_block, cp.x_bar, s.x_block, cp.x_bar));
  cp.a12 = centered_cross(s.x_block, cp.x_bar, y_complete, cp.y_bar1);
  cp.a22n = sym(centered_cross(y_complete, cp.y_bar1, y_complete, cp.y_bar1));
  cp.a22N = sym(centered_cross(s.y_block, cp.y_bar, s.y_block, cp.y_bar));

  const SpdFactor a22n(cp.a22n, "A22n", "estimation");
  cp.a11_dot2 = sym(cp.a11 - cp.a12 * a22n.solve(Matrix(cp.a12.transpose())));
  return cp;
}

MleEstimate mle(const MonotoneSample& s) { return mle(s, cross_products(s)); }

MleEstimate mle(const MonotoneSample& s, const CrossProducts& cp) {
  const Index p = s.p;
  const Index q = s.q;
  const double n = static_cast<double>(s.n());
  const double N = static_cast<double>(s.N());

  const SpdFactor a22n(cp.a22n, "A22n", "estimation");
  const SpdFactor a22N(cp.a22N, "A22N", "estimation");
  (void)a22N;

  MleEstimate e;
  e.p = p;
  e.q = q;
  // delta12 = A12 A22n^{-1}, computed as (A22n^{-1} A21)'.
  e.delta12 = a22n.solve(Matrix(cp.a12.transpose())).transpose();
  e.delta11 = cp.a11_dot2 / n;
  e.delta22 = cp.a22N / N;

  e.mu_hat.resize(p + q);
  e.mu_hat.head(p) = cp.x_bar - s.tau_bar() * (e.delta12 * cp.y_gap());
  e.mu_hat.tail(q) = cp.y_bar;

  e.sigma_hat = iwasawa_product(e);

  const SpdFactor d11(e.delta11, "A11.2n", "estimation");
  const SpdFactor d22(e.delta22, "A22N", "estimation");
  const Matrix d11_inv = d11.inverse();
  const Matrix d22_inv = d22.inverse();
  const Matrix top_right = -d11_inv * e.delta12;
  e.sigma_hat_inv.resize(p + q, p + q);
  e.sigma_hat_inv.topLeftCorner(p, p) = d11_inv;
  e.sigma_hat_inv.topRightCorner(p, q) = top_right;
  e.sigma_hat_inv.bottomLeftCorner(q, p) = top_right.transpose();
  e.sigma_hat_inv.bottomRightCorner(q, q) =
      sym(d22_inv + e.delta12.transpose() * d11_inv * e.delta12);
  return e;
}

Matrix iwasawa_product(const MleEstimate& e) {
  const Index p = e.p;
  const Index q = e.q;
  const Matrix s12 = e.delta12 * e.delta22;
  Matrix out(p + q, p + q);
  out.topLeftCorner(p, p) = sym(e.delta11 + s12 * e.delta12.transpose());
  out.topRightCorner(p, q) = s12;
  out.bottomLeftCorner(q, p) = s12.transpose();
  out.bottomRightCorner(q, q) = e.delta22;
  return out;
}

}  // namespace monokurt
