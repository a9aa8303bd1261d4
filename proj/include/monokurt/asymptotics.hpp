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

#include <string>

namespace monokurt {

/// Moment functionals of a population in canonical form (mean 0, identity
/// covariance), Z = (X, Y) with X p-dimensional and Y q-dimensional.
///
/// The fields marked "tilde" depend on the tilde matrix built from xi and
/// xi_star, and therefore on (tau, weights). `tau` and `weights` record the
/// values they were computed with.
struct MomentFunctionals {
  Index p = 0;
  Index q = 0;
  double tau = 1.0;
  KurtosisWeights weights;

  Matrix xi;          // E(|Z|^2 Z Z')
  Matrix xi_star;     // E(|Y|^2 Y Y')
  Vector theta;       // E(|Z|^2 Z)
  Vector theta_star;  // E(|Y|^2 Y)
  double m4_z = 0.0;  // E|Z|^4
  double m4_y = 0.0;  // E|Y|^4
  double var4_z = 0.0;  // Var |Z|^4
  double var4_y = 0.0;  // Var |Y|^4
  double q_var_z = 0.0;  // tilde: Var(Z' Xt Z)
  double q_var_y = 0.0;  // tilde: Var(Y' Xt22 Y)
  double q_cov_z = 0.0;  // tilde: Cov(|Z|^4, Z' Xt Z)
  double q_cov_y = 0.0;  // tilde: Cov(|Y|^4, Y' Xt22 Y)
  Vector v6_z;  // E(|Z|^4 Z)
  Vector v6_y;  // E(|Y|^4 Y)
  Vector w_z;   // tilde: E(Z' Xt Z Z)
  Vector w_y;   // tilde: E(Y' Xt22 Y Y)
};

struct TildeFunctionals {
  Matrix xi_tilde;     // (p+q) x (p+q)
  Vector theta_tilde;  // p+q
};

/// Xt = [c1 Xi11, c1 Xi12; c1 Xi21, c1 tau Xi22 + c2 (1-tau) Xi*] and
/// Tt = (c1 Theta1; c1 tau Theta2 + c2 (1-tau) Theta*).
TildeFunctionals tilde_functionals(const MomentFunctionals& m, double tau,
                                   const KurtosisWeights& w);

/// Asymptotic mean nu of b and variance sigma2 of sqrt(N) (b - nu).
struct AsymptoticMoments {
  double nu = 0.0;
  double sigma2 = 0.0;
};

/// Closed-form moments under multivariate normality.
AsymptoticMoments null_moments(Index p, Index q, double tau, const KurtosisWeights& w);

/// General moments for an arbitrary canonical population with finite eighth
/// moments. Throws DataError if `m` was built for a different (tau, w), and
/// NumericError if the resulting variance is negative.
AsymptoticMoments nonnull_sigma(const MomentFunctionals& m, double tau,
                                const KurtosisWeights& w);

/// Exact functionals of the standard normal population.
MomentFunctionals normal_moments(Index p, Index q, double tau, const KurtosisWeights& w);

/// Sample analogues computed from K i.i.d. draws (rows of `reference`). The
/// draws are first standardized with their own mean and covariance.
MomentFunctionals empirical_moments(const Matrix& reference, Index p, Index q,
                                    double tau, const KurtosisWeights& w);

/// Weights minimizing the null variance subject to
/// c1 tau d(d+2) + c2 (1-tau) q(q+2) = d(d+2), d = p+q, which pins nu to its
/// complete-data value. Falls back to (tau, 1-tau) scaled onto the same line
/// if the variance is not strictly convex along it.
struct OptimizedWeights {
  KurtosisWeights weights;
  double sigma2 = 0.0;
  bool fallback = false;
};
OptimizedWeights optimize_weights(Index p, Index q, double tau);

/// Rescales w onto the constraint line used by optimize_weights.
KurtosisWeights project_onto_constraint(Index p, Index q, double tau,
                                        const KurtosisWeights& w);

/// Alternative closed forms for the null variance, kept for comparison.
/// Unit weights (1, 1).
double null_sigma2_unit_display(Index p, Index q, double tau);
/// The (tau, 1-tau) display as it is commonly printed, without the factor q
/// on its last term. Differs from null_moments for q > 1.
double null_sigma2_tau_display(Index p, Index q, double tau);
/// Variant with c1^2 / tau and c2^2 / (1-tau) on the fourth-moment variance
/// terms and untempered covariance terms.
double null_sigma2_reciprocal_variant(Index p, Index q, double tau,
                                      const KurtosisWeights& w);

enum class WeightScheme { tau_bar, unit, custom, optimized };

WeightScheme parse_weight_scheme(const std::string& name);
std::string to_string(WeightScheme scheme);

/// Concrete weights for a scheme. `custom` is used only for WeightScheme::custom.
KurtosisWeights resolve_weights(WeightScheme scheme, Index p, Index q, double tau,
                                const KurtosisWeights& custom = {});

}  // namespace monokurt
