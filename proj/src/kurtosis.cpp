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


#include "monokurt/kurtosis.hpp"

#include "monokurt/error.hpp"
#include "monokurt/linalg.hpp"

namespace monokurt {

namespace {

KurtosisValue combine(double b1, double b2, const MonotoneSample& s,
                      const KurtosisWeights& w) {
  w.check(s.n(), s.N());
  KurtosisValue v;
  v.b1 = b1;
  v.b2 = b2;
  v.weights = w;
  v.b = (w.c1 * b1 + w.c2 * b2) / static_cast<double>(s.N());
  if (!s.has_incomplete() && w.c2 != 0.0) {
    v.warnings.push_back("no incomplete observations: weight c2 has no effect");
  }
  return v;
}

void check_dims(const MonotoneSample& s, const MleEstimate& est) {
  if (est.p != s.p || est.q != s.q) {
    throw DataError("kurtosis", "estimate dimensions do not match the sample");
  }
}

}  // namespace

QuadraticSplit complete_row_split(const MonotoneSample& s, const MleEstimate& est) {
  check_dims(s, est);
  const Index n = s.n();
  const Matrix yc = s.y_block.topRows(n).rowwise() - est.mu2().transpose();
  const Matrix xc = s.x_block.rowwise() - est.mu1().transpose();
  const Matrix resid = xc - yc * est.delta12.transpose();

  const SpdFactor d11(est.delta11, "A11.2n", "kurtosis");
  const SpdFactor d22(est.delta22, "A22N", "kurtosis");

  QuadraticSplit out;
  out.residual_part = d11.row_quadratic_forms(resid);
  out.y_part = d22.row_quadratic_forms(yc);

  Matrix zc(n, s.p + s.q);
  zc.leftCols(s.p) = xc;
  zc.rightCols(s.q) = yc;
  out.full = ((zc * est.sigma_hat_inv).cwiseProduct(zc)).rowwise().sum();
  return out;
}

KurtosisValue kurtosis_statistic(const MonotoneSample& s, const MleEstimate& est,
                                 const KurtosisWeights& w) {
  check_dims(s, est);
  const Index n = s.n();
  const SpdFactor d11(est.delta11, "A11.2n", "kurtosis");
  const SpdFactor d22(est.delta22, "A22N", "kurtosis");

  const Matrix yc = s.y_block.rowwise() - est.mu2().transpose();
  const Matrix xc = s.x_block.rowwise() - est.mu1().transpose();
  const Matrix resid = xc - yc.topRows(n) * est.delta12.transpose();

  const Vector y_forms = d22.row_quadratic_forms(yc);
  const Vector full = d11.row_quadratic_forms(resid) + y_forms.head(n);
  const double b1 = full.squaredNorm();
  const double b2 = y_forms.tail(s.N() - n).squaredNorm();
  return combine(b1, b2, s, w);
}

KurtosisValue kurtosis_statistic(const MonotoneSample& s, const KurtosisWeights& w) {
  return kurtosis_statistic(s, mle(s), w);
}

Matrix impute(const MonotoneSample& s, const MleEstimate& est) {
  check_dims(s, est);
  const Index n = s.n();
  Matrix z(s.N(), s.p + s.q);
  z.topLeftCorner(n, s.p) = s.x_block;
  z.rightCols(s.q) = s.y_block;
  if (s.has_incomplete()) {
    // S12 S22^{-1} equals delta12 by construction; it is recomputed here from
    // sigma_hat to keep the imputation independent of the Iwasawa split.
    const Matrix beta =
        spd_solve(est.sigma22(), Matrix(est.sigma12().transpose())).transpose();
    const Matrix yc = s.incomplete_y().rowwise() - est.mu2().transpose();
    z.bottomLeftCorner(s.N() - n, s.p) =
        (yc * beta.transpose()).rowwise() + est.mu1().transpose();
  }
  return z;
}

KurtosisValue kurtosis_statistic_imputed(const MonotoneSample& s,
                                         const MleEstimate& est,
                                         const KurtosisWeights& w) {
  const Matrix z = impute(s, est);
  const Matrix zc = z.rowwise() - est.mu_hat.transpose();
  const Vector forms = ((zc * est.sigma_hat_inv).cwiseProduct(zc)).rowwise().sum();
  const Index n = s.n();
  return combine(forms.head(n).squaredNorm(), forms.tail(s.N() - n).squaredNorm(), s,
                 w);
}

Vector centering_offset(const CrossProducts& cp, const MleEstimate& est) {
  const Vector gap = cp.y_gap();
  Vector out(est.p + est.q);
  out.head(est.p) = est.delta12 * gap;
  out.tail(est.q) = gap;
  return out;
}

AffineElement AffineElement::identity(Index p, Index q) {
  return {Matrix::Identity(p, p), Matrix::Identity(q, q), Matrix::Zero(p, q),
          Vector::Zero(p), Vector::Zero(q)};
}

Matrix AffineElement::linear() const {
  const Index p_ = p();
  const Index q_ = q();
  Matrix m = Matrix::Zero(p_ + q_, p_ + q_);
  m.topLeftCorner(p_, p_) = lambda11;
  m.topRightCorner(p_, q_) = lambda11 * lambda12;
  m.bottomRightCorner(q_, q_) = lambda22;
  return m;
}

Vector AffineElement::nu() const {
  Vector v(p() + q());
  v << nu1, nu2;
  return v;
}

AffineElement AffineElement::inverse() const {
  AffineElement g;
  g.lambda11 = SpdFactor(lambda11, "Lambda11", "transform").inverse();
  g.lambda22 = SpdFactor(lambda22, "Lambda22", "transform").inverse();
  g.lambda12 = -lambda11 * lambda12 * g.lambda22;
  // nu' = -(Lambda C)^{-1} nu, with (Lambda C)^{-1} = Lambda' C' for g^{-1}.
  const Vector v = -(g.linear() * nu());
  g.nu1 = v.head(p());
  g.nu2 = v.tail(q());
  return g;
}

Vector AffineElement::apply(const Vector& z) const { return linear() * z + nu(); }

MonotoneSample transform(const MonotoneSample& s, const AffineElement& g) {
  if (g.p() != s.p || g.q() != s.q || g.lambda11.cols() != s.p ||
      g.lambda22.cols() != s.q || g.lambda12.rows() != s.p ||
      g.lambda12.cols() != s.q || g.nu1.size() != s.p || g.nu2.size() != s.q) {
    throw DataError("transform", "group element dimensions do not match the sample");
  }
  const Index n = s.n();
  MonotoneSample out;
  out.p = s.p;
  out.q = s.q;
  out.x_block = ((s.x_block + s.y_block.topRows(n) * g.lambda12.transpose()) *
                 g.lambda11.transpose())
                    .rowwise() +
                g.nu1.transpose();
  out.y_block = (s.y_block * g.lambda22.transpose()).rowwise() + g.nu2.transpose();
  return out;
}

AffineElement canonicalizer(const Vector& mu, const Matrix& sigma, Index p) {
  const Index d = sigma.rows();
  if (p < 1 || p >= d || mu.size() != d || sigma.cols() != d) {
    throw DataError("canonicalizer", "dimension mismatch");
  }
  const Index q = d - p;
  const Matrix s = symmetrized(sigma, "Sigma", "canonicalizer");
  const Matrix s11 = s.topLeftCorner(p, p);
  const Matrix s12 = s.topRightCorner(p, q);
  const Matrix s22 = s.bottomRightCorner(q, q);
  const SpdFactor f22(s22, "Sigma22", "canonicalizer");
  const Matrix beta = f22.solve(Matrix(s12.transpose())).transpose();
  const Matrix s11_2 = s11 - beta * s12.transpose();

  AffineElement g;
  g.lambda11 = spd_inv_sqrt(s11_2);
  g.lambda22 = spd_inv_sqrt(s22);
  g.lambda12 = -beta;
  const Vector v = -(g.linear() * mu);
  g.nu1 = v.head(p);
  g.nu2 = v.tail(q);
  return g;
}

double mardia_sum(const Matrix& rows) {
  const Index m = rows.rows();
  const Vector mean = rows.colwise().mean().transpose();
  const Matrix c = rows.rowwise() - mean.transpose();
  const Matrix cov = (c.transpose() * c) / static_cast<double>(m);
  const SpdFactor f(cov, "S", "mardia");
  return f.row_quadratic_forms(c).squaredNorm();
}

}  // namespace monokurt
