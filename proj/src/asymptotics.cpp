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


#include "monokurt/asymptotics.hpp"

#include "monokurt/error.hpp"
#include "monokurt/kurtosis.hpp"
#include "monokurt/linalg.hpp"

#include <algorithm>
#include <cmath>

namespace monokurt {

namespace {

void check_tau(double tau) {
  if (!(tau > 0.0 && tau <= 1.0)) {
    throw DataError("asymptotics", "tau must lie in (0, 1]");
  }
}

void check_pq(Index p, Index q) {
  if (p < 1 || q < 1) throw DataError("asymptotics", "p and q must be at least 1");
}

double dd(Index v) { return static_cast<double>(v); }

}  // namespace

TildeFunctionals tilde_functionals(const MomentFunctionals& m, double tau,
                                   const KurtosisWeights& w) {
  const Index p = m.p;
  const Index q = m.q;
  if (m.xi.rows() != p + q || m.xi.cols() != p + q || m.xi_star.rows() != q ||
      m.xi_star.cols() != q || m.theta.size() != p + q || m.theta_star.size() != q) {
    throw DataError("asymptotics", "moment functional dimensions are inconsistent");
  }
  const double tb = 1.0 - tau;
  TildeFunctionals t;
  t.xi_tilde = w.c1 * m.xi;
  t.xi_tilde.bottomRightCorner(q, q) =
      w.c1 * tau * m.xi.bottomRightCorner(q, q) + w.c2 * tb * m.xi_star;
  t.theta_tilde = w.c1 * m.theta;
  t.theta_tilde.tail(q) = w.c1 * tau * m.theta.tail(q) + w.c2 * tb * m.theta_star;
  return t;
}

AsymptoticMoments null_moments(Index p, Index q, double tau, const KurtosisWeights& w) {
  check_pq(p, q);
  check_tau(tau);
  const double tb = 1.0 - tau;
  const double d = dd(p + q);
  const double pp = dd(p);
  const double qq = dd(q);
  const double c1 = w.c1;
  const double c2 = w.c2;
  const double k = c1 * tau * (d + 2.0) + c2 * tb * (qq + 2.0);

  AsymptoticMoments out;
  out.nu = c1 * tau * d * (d + 2.0) + c2 * tb * qq * (qq + 2.0);
  const double z_part = c1 * c1 * d * (d + 2.0) * (d + 3.0) +
                        c1 * c1 * pp * (d + 2.0) * (d + 2.0) + qq * k * k -
                        2.0 * c1 * (d + 2.0) * (pp * c1 * (d + 2.0) + qq * k);
  const double y_part = c2 * c2 * qq * (qq + 2.0) * (qq + 3.0) + qq * k * k -
                        2.0 * c2 * (qq + 2.0) * qq * k;
  out.sigma2 = 8.0 * tau * z_part + 8.0 * tb * y_part;
  return out;
}

AsymptoticMoments nonnull_sigma(const MomentFunctionals& m, double tau,
                                const KurtosisWeights& w) {
  check_tau(tau);
  if (m.tau != tau || m.weights.c1 != w.c1 || m.weights.c2 != w.c2) {
    throw DataError("asymptotics",
                    "moment functionals were computed for a different tau or "
                    "weight pair");
  }
  const Index q = m.q;
  const TildeFunctionals t = tilde_functionals(m, tau, w);
  if (m.v6_z.size() != m.p + q || m.w_z.size() != m.p + q || m.v6_y.size() != q ||
      m.w_y.size() != q) {
    throw DataError("asymptotics", "moment functional dimensions are inconsistent");
  }
  const double tb = 1.0 - tau;
  const Vector& th = t.theta_tilde;
  const Vector th2 = th.tail(q);

  const double z_part = w.c1 * w.c1 * m.var4_z + 4.0 * m.q_var_z + 16.0 * th.dot(th) -
                        4.0 * w.c1 * m.q_cov_z - 8.0 * w.c1 * m.v6_z.dot(th) +
                        16.0 * m.w_z.dot(th);
  const double y_part = w.c2 * w.c2 * m.var4_y + 4.0 * m.q_var_y +
                        16.0 * th2.dot(th2) - 4.0 * w.c2 * m.q_cov_y -
                        8.0 * w.c2 * m.v6_y.dot(th2) + 16.0 * m.w_y.dot(th2);

  AsymptoticMoments out;
  out.nu = w.c1 * tau * m.m4_z + w.c2 * tb * m.m4_y;
  out.sigma2 = tau * z_part + tb * y_part;
  if (!std::isfinite(out.sigma2) || out.sigma2 < 0.0) {
    throw NumericError("moments",
                       "moment estimation failed: computed asymptotic variance is "
                       "negative or non-finite");
  }
  return out;
}

MomentFunctionals normal_moments(Index p, Index q, double tau, const KurtosisWeights& w) {
  check_pq(p, q);
  check_tau(tau);
  const double d = dd(p + q);
  const double qq = dd(q);
  MomentFunctionals m;
  m.p = p;
  m.q = q;
  m.tau = tau;
  m.weights = w;
  m.xi = (d + 2.0) * Matrix::Identity(p + q, p + q);
  m.xi_star = (qq + 2.0) * Matrix::Identity(q, q);
  m.theta = Vector::Zero(p + q);
  m.theta_star = Vector::Zero(q);
  m.m4_z = d * (d + 2.0);
  m.m4_y = qq * (qq + 2.0);
  m.var4_z = 8.0 * d * (d + 2.0) * (d + 3.0);
  m.var4_y = 8.0 * qq * (qq + 2.0) * (qq + 3.0);

  const TildeFunctionals t = tilde_functionals(m, tau, w);
  const Matrix xt22 = t.xi_tilde.bottomRightCorner(q, q);
  m.q_var_z = 2.0 * (t.xi_tilde * t.xi_tilde).trace();
  m.q_var_y = 2.0 * (xt22 * xt22).trace();
  m.q_cov_z = 4.0 * (d + 2.0) * t.xi_tilde.trace();
  m.q_cov_y = 4.0 * (qq + 2.0) * xt22.trace();
  m.v6_z = Vector::Zero(p + q);
  m.v6_y = Vector::Zero(q);
  m.w_z = Vector::Zero(p + q);
  m.w_y = Vector::Zero(q);
  return m;
}

MomentFunctionals empirical_moments(const Matrix& reference, Index p, Index q,
                                    double tau, const KurtosisWeights& w) {
  check_pq(p, q);
  check_tau(tau);
  const Index d = p + q;
  const Index K = reference.rows();
  if (reference.cols() != d) {
    throw DataError("moments", "reference sample has the wrong number of columns");
  }
  if (K < d + 1) {
    throw DataError("moments", "reference sample needs at least p+q+1 rows");
  }
  if (!reference.allFinite()) {
    throw DataError("moments", "reference sample has non-finite entries");
  }
  const double k = static_cast<double>(K);

  // Standardize with the sample mean and maximum likelihood covariance.
  const Vector mean = reference.colwise().mean().transpose();
  const Matrix centered = reference.rowwise() - mean.transpose();
  const Matrix cov = (centered.transpose() * centered) / k;
  const AffineElement g = canonicalizer(mean, cov, p);
  const Matrix z = (reference * g.linear().transpose()).rowwise() + g.nu().transpose();
  const Matrix y = z.rightCols(q);

  const Vector r2 = z.rowwise().squaredNorm();
  const Vector s2 = y.rowwise().squaredNorm();
  const Vector r4 = r2.array().square();
  const Vector s4 = s2.array().square();

  auto mean_of = [k](const Vector& v) { return v.sum() / k; };
  auto var_of = [k](const Vector& v) {
    const double mu = v.sum() / k;
    return (v.array() - mu).square().sum() / k;
  };
  auto cov_of = [k](const Vector& a, const Vector& b) {
    const double ma = a.sum() / k;
    const double mb = b.sum() / k;
    return ((a.array() - ma) * (b.array() - mb)).sum() / k;
  };

  MomentFunctionals m;
  m.p = p;
  m.q = q;
  m.tau = tau;
  m.weights = w;
  m.xi = z.transpose() * (r2.asDiagonal() * z) / k;
  m.xi = 0.5 * (m.xi + m.xi.transpose()).eval();
  m.xi_star = y.transpose() * (s2.asDiagonal() * y) / k;
  m.xi_star = 0.5 * (m.xi_star + m.xi_star.transpose()).eval();
  m.theta = z.transpose() * r2 / k;
  m.theta_star = y.transpose() * s2 / k;
  m.m4_z = mean_of(r4);
  m.m4_y = mean_of(s4);
  m.var4_z = var_of(r4);
  m.var4_y = var_of(s4);
  m.v6_z = z.transpose() * r4 / k;
  m.v6_y = y.transpose() * s4 / k;

  const TildeFunctionals t = tilde_functionals(m, tau, w);
  const Matrix xt22 = t.xi_tilde.bottomRightCorner(q, q);
  const Vector qz = ((z * t.xi_tilde).cwiseProduct(z)).rowwise().sum();
  const Vector qy = ((y * xt22).cwiseProduct(y)).rowwise().sum();
  m.q_var_z = var_of(qz);
  m.q_var_y = var_of(qy);
  m.q_cov_z = cov_of(r4, qz);
  m.q_cov_y = cov_of(s4, qy);
  m.w_z = z.transpose() * qz / k;
  m.w_y = y.transpose() * qy / k;

  const bool finite = m.xi.allFinite() && m.xi_star.allFinite() &&
                      std::isfinite(m.var4_z) && std::isfinite(m.var4_y) &&
                      std::isfinite(m.q_var_z) && std::isfinite(m.q_var_y) &&
                      m.w_z.allFinite() && m.v6_z.allFinite();
  if (!finite) {
    throw NumericError("moments", "non-finite empirical moments (overflow)");
  }
  return m;
}

KurtosisWeights project_onto_constraint(Index p, Index q, double tau,
                                        const KurtosisWeights& w) {
  check_pq(p, q);
  check_tau(tau);
  const double d = dd(p + q);
  const double qq = dd(q);
  const double a1 = tau * d * (d + 2.0);
  const double a2 = (1.0 - tau) * qq * (qq + 2.0);
  const double lhs = a1 * w.c1 + a2 * w.c2;
  if (!(lhs > 0.0)) throw DataError("weights", "cannot rescale a zero weight pair");
  return w.scaled(d * (d + 2.0) / lhs);
}

OptimizedWeights optimize_weights(Index p, Index q, double tau) {
  check_pq(p, q);
  check_tau(tau);
  const double d = dd(p + q);
  const double qq = dd(q);
  const double K = d * (d + 2.0);
  const double a1 = tau * K;
  const double a2 = (1.0 - tau) * qq * (qq + 2.0);

  OptimizedWeights out;
  if (a2 == 0.0) {
    out.weights = {1.0, 0.0};
    out.sigma2 = null_moments(p, q, tau, out.weights).sigma2;
    return out;
  }
  const double c1_max = K / a1;
  auto on_line = [&](double c1) { return KurtosisWeights{c1, (K - a1 * c1) / a2}; };
  auto sigma2 = [&](double c1) { return null_moments(p, q, tau, on_line(c1)).sigma2; };

  // sigma2 is quadratic in c1 along the line: recover its coefficients exactly
  // from three evaluations.
  const double h = 0.5 * c1_max;
  const double f0 = sigma2(0.0);
  const double f1 = sigma2(h);
  const double f2 = sigma2(2.0 * h);
  const double A = (f2 - 2.0 * f1 + f0) / (2.0 * h * h);
  const double B = (4.0 * f1 - 3.0 * f0 - f2) / (2.0 * h);

  if (!(A > 0.0) || !std::isfinite(A) || !std::isfinite(B)) {
    out.fallback = true;
    out.weights = project_onto_constraint(p, q, tau, KurtosisWeights::tau_weighted(tau));
  } else {
    double c1 = std::clamp(-B / (2.0 * A), 0.0, c1_max);
    // Keep c2 strictly positive so that the pair stays admissible.
    if (c1 >= c1_max) c1 = c1_max * (1.0 - 1e-12);
    if (c1 <= 0.0) c1 = c1_max * 1e-12;
    out.weights = on_line(c1);
  }
  out.sigma2 = null_moments(p, q, tau, out.weights).sigma2;
  return out;
}

double null_sigma2_unit_display(Index p, Index q, double tau) {
  const double tb = 1.0 - tau;
  const double d = dd(p + q);
  const double qq = dd(q);
  const double pp = dd(p);
  return 8.0 * (tau * d * (d + 2.0) + tb * qq * (qq + 2.0) + tau * tb * pp * pp * qq);
}

double null_sigma2_tau_display(Index p, Index q, double tau) {
  const double tb = 1.0 - tau;
  const double d = dd(p + q);
  const double qq = dd(q);
  const double g = tau * (d + 2.0) - tb * (qq + 2.0);
  return 8.0 * (tau * tau * tau * d * (d + 2.0) + tb * tb * tb * qq * (qq + 2.0) +
                tau * tb * g * g);
}

double null_sigma2_reciprocal_variant(Index p, Index q, double tau,
                                      const KurtosisWeights& w) {
  const double tb = 1.0 - tau;
  const double d = dd(p + q);
  const double qq = dd(q);
  const double pp = dd(p);
  const double c1 = w.c1;
  const double c2 = w.c2;
  const double k = c1 * tau * (d + 2.0) + c2 * tb * (qq + 2.0);
  const double tr_x2 = pp * c1 * c1 * (d + 2.0) * (d + 2.0) + qq * k * k;
  const double tr_x = pp * c1 * (d + 2.0) + qq * k;
  double s = c1 * c1 / tau * 8.0 * d * (d + 2.0) * (d + 3.0) + 8.0 * tau * tr_x2 -
             16.0 * c1 * (d + 2.0) * tr_x;
  if (tb > 0.0) {
    s += c2 * c2 / tb * 8.0 * qq * (qq + 2.0) * (qq + 3.0) + 8.0 * tb * qq * k * k -
         16.0 * c2 * (qq + 2.0) * qq * k;
  }
  return s;
}

WeightScheme parse_weight_scheme(const std::string& name) {
  if (name == "tau-bar") return WeightScheme::tau_bar;
  if (name == "unit") return WeightScheme::unit;
  if (name == "custom") return WeightScheme::custom;
  if (name == "optimized") return WeightScheme::optimized;
  throw DataError("weights", "unknown weight scheme '" + name + "'");
}

std::string to_string(WeightScheme scheme) {
  switch (scheme) {
    case WeightScheme::tau_bar: return "tau-bar";
    case WeightScheme::unit: return "unit";
    case WeightScheme::custom: return "custom";
    case WeightScheme::optimized: return "optimized";
  }
  return "unknown";
}

KurtosisWeights resolve_weights(WeightScheme scheme, Index p, Index q, double tau,
                                const KurtosisWeights& custom) {
  switch (scheme) {
    case WeightScheme::tau_bar: return KurtosisWeights::tau_weighted(tau);
    case WeightScheme::unit: return KurtosisWeights::unit();
    case WeightScheme::custom: return custom;
    case WeightScheme::optimized: return optimize_weights(p, q, tau).weights;
  }
  return custom;
}

}  // namespace monokurt
