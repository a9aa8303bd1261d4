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

#include "monokurt/asymptotics.hpp"
#include "monokurt/inference.hpp"
#include "monokurt/json_output.hpp"
#include "monokurt/sample.hpp"

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace monokurt {

enum class Family { standard_normal, product_laplace, product_uniform, multivariate_t,
                    normal_mixture };

std::string to_string(Family f);
Family parse_family(const std::string& name);

/// Population of Z = (X, Y). Every family is scaled to mean 0 and identity
/// covariance.
struct AlternativeSpec {
  Family family = Family::standard_normal;
  double df = 10.0;     // multivariate_t; must exceed 8 for finite eighth moments
  double eps = 0.1;     // normal_mixture: contamination probability
  double scale = 3.0;   // normal_mixture: standard deviation of the contaminating part

  void check() const;
  Json to_json() const;
};

enum class MaskMode { deterministic, bernoulli };

struct SimConfig {
  AlternativeSpec alt;
  Index p = 1;
  Index q = 1;
  Index N = 100;
  double tau = 0.5;
  WeightScheme weight_scheme = WeightScheme::tau_bar;
  KurtosisWeights custom_weights;  // used when weight_scheme is custom
  Index replications = 1000;
  std::uint64_t seed = 1;
  double alpha = 0.05;
  Sidedness sidedness = Sidedness::two_sided;
  MaskMode mask = MaskMode::deterministic;
  unsigned threads = 0;  // 0 selects default_thread_count(); never serialized

  /// Number of complete rows under deterministic masking, floor(tau N).
  Index n_complete() const;
  void check() const;
  Json to_json() const;
};

/// Parses a flat key=value file. Blank lines and lines starting with '#' are
/// ignored. Keys: family, df, eps, scale, p, q, N, tau, weights, c1, c2,
/// replications, seed, alpha, sidedness, mask, threads. Missing keys keep the
/// values already in `base`.
SimConfig parse_sim_config(const std::string& text, SimConfig base = {});

/// Random engine for stream `stream` of replication `rep` under `seed`.
std::mt19937_64 make_engine(std::uint64_t seed, std::uint64_t rep, std::uint64_t stream);

/// One draw of a standardized (p+q)-vector from the family.
Vector draw_vector(const AlternativeSpec& alt, Index d, std::mt19937_64& rng);

/// K x d matrix of i.i.d. draws.
Matrix draw_matrix(const AlternativeSpec& alt, Index rows, Index d, std::mt19937_64& rng);

/// Replication `rep` of the configured design. Under deterministic masking the
/// first floor(tau N) draws are complete; under Bernoulli masking each row is
/// complete with probability tau and complete rows are moved first.
MonotoneSample draw_sample(const SimConfig& cfg, std::uint64_t rep);

/// Kolmogorov-Smirnov distance between `values` and the standard normal law.
double ks_distance_normal(std::vector<double> values);
/// Asymptotic p-value of a KS distance for a sample of size n.
double ks_p_value(double distance, std::size_t n);

struct NullSummary {
  Index replications = 0;
  double mean_z = 0.0;
  std::optional<double> var_z;  // not available when only one replication ran
  double ks_distance = 0.0;
  double ks_p_value = 1.0;
  double rejection_rate = 0.0;
  std::vector<double> z;
};

/// Runs the test on every replication and summarizes the standardized statistic.
NullSummary null_calibration(const SimConfig& cfg);
Json to_json(const NullSummary& s, const SimConfig& cfg);

struct VarianceSummary {
  Index replications = 0;
  Index n = 0;
  double tau = 0.0;  // realized n/N under deterministic masking
  KurtosisWeights weights;
  double mean_b = 0.0;
  double n_var_b = 0.0;       // N times the sample variance of b
  double jackknife_se = 0.0;  // standard error of n_var_b
  double null_nu = 0.0;       // normal-theory predictions at the realized tau
  double null_sigma2 = 0.0;
  std::vector<double> b;
};

/// Monte Carlo estimate of N Var(b) with its jackknife standard error.
VarianceSummary variance_oracle(const SimConfig& cfg);
Json to_json(const VarianceSummary& s, const SimConfig& cfg);

/// Jackknife standard error of the sample variance of `values`.
double jackknife_se_of_variance(const std::vector<double>& values);

/// Asymptotic moments predicted for the configured family from K reference draws
/// (normal family: exact closed form, K ignored).
AsymptoticMoments predicted_moments(const SimConfig& cfg, Index reference_size);

struct ExpansionSummary {
  std::vector<Index> n_grid;
  std::vector<double> median_norm;
  double slope = 0.0;
};

/// Median Frobenius norm of sigma_hat - I - N^{-1/2} Btilde over `replications`
/// canonical normal samples for each N in `n_grid`, and the least squares slope
/// of log median against log N. With drop_linear the Btilde term is omitted.
ExpansionSummary expansion_order_check(Index p, Index q, double tau, std::uint64_t seed,
                                       const std::vector<Index>& n_grid,
                                       Index replications = 200, bool drop_linear = false,
                                       unsigned threads = 0);
Json to_json(const ExpansionSummary& s);

/// The linear term Btilde for a canonical sample (complete rows first).
Matrix expansion_linear_term(const MonotoneSample& sample);

/// Least squares slope of y on x.
double ols_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace monokurt
