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


#include "monokurt/simulation.hpp"

#include "monokurt/error.hpp"
#include "monokurt/estimation.hpp"
#include "monokurt/kurtosis.hpp"
#include "monokurt/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace monokurt {

namespace {

// Stream tags keep the random streams of different purposes apart.
constexpr std::uint64_t kSampleStream = 1;
constexpr std::uint64_t kMaskStream = 2;
constexpr std::uint64_t kReferenceStream = 3;
constexpr std::uint64_t kExpansionStream = 4;

std::uint32_t lo(std::uint64_t v) { return static_cast<std::uint32_t>(v); }
std::uint32_t hi(std::uint64_t v) { return static_cast<std::uint32_t>(v >> 32); }

double sample_mean(const std::vector<double>& v) {
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double sample_variance(const std::vector<double>& v) {
  const double m = sample_mean(v);
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return s / static_cast<double>(v.size() - 1);
}

}  // namespace

std::string to_string(Family f) {
  switch (f) {
    case Family::standard_normal: return "standard_normal";
    case Family::product_laplace: return "product_laplace";
    case Family::product_uniform: return "product_uniform";
    case Family::multivariate_t: return "multivariate_t";
    case Family::normal_mixture: return "normal_mixture";
  }
  return "unknown";
}

Family parse_family(const std::string& name) {
  for (Family f : {Family::standard_normal, Family::product_laplace,
                   Family::product_uniform, Family::multivariate_t,
                   Family::normal_mixture}) {
    if (name == to_string(f)) return f;
  }
  throw DataError("simulation", "unknown family '" + name + "'");
}

void AlternativeSpec::check() const {
  if (family == Family::multivariate_t && !(df > 8.0)) {
    throw DataError("simulation",
                    "multivariate_t needs df > 8 for finite eighth moments");
  }
  if (family == Family::normal_mixture &&
      !(eps >= 0.0 && eps <= 1.0 && scale > 0.0)) {
    throw DataError("simulation", "normal_mixture needs eps in [0, 1] and scale > 0");
  }
}

Json AlternativeSpec::to_json() const {
  Json j;
  j["family"] = to_string(family);
  if (family == Family::multivariate_t) j["df"] = df;
  if (family == Family::normal_mixture) {
    j["eps"] = eps;
    j["scale"] = scale;
  }
  return j;
}

Index SimConfig::n_complete() const {
  return static_cast<Index>(std::floor(tau * static_cast<double>(N)));
}

void SimConfig::check() const {
  alt.check();
  if (p < 1 || q < 1) throw DataError("simulation", "p and q must be at least 1");
  if (!(tau > 0.0 && tau <= 1.0)) throw DataError("simulation", "tau must lie in (0, 1]");
  if (replications < 1) throw DataError("simulation", "replications must be at least 1");
  if (n_complete() < p + q + 1) {
    throw DataError("simulation", "floor(tau N) must be at least p+q+1");
  }
  if (!(alpha > 0.0 && alpha < 1.0)) throw DataError("simulation", "alpha must lie in (0, 1)");
}

Json SimConfig::to_json() const {
  Json j;
  j["alternative"] = alt.to_json();
  j["p"] = p;
  j["q"] = q;
  j["N"] = N;
  j["tau"] = tau;
  j["weights"] = monokurt::to_string(weight_scheme);
  if (weight_scheme == WeightScheme::custom) {
    j["c1"] = custom_weights.c1;
    j["c2"] = custom_weights.c2;
  }
  j["replications"] = replications;
  j["seed"] = seed;
  j["alpha"] = alpha;
  j["sidedness"] = monokurt::to_string(sidedness);
  j["mask"] = mask == MaskMode::deterministic ? "deterministic" : "bernoulli";
  return j;
}

SimConfig parse_sim_config(const std::string& text, SimConfig cfg) {
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw DataError("config", "line " + std::to_string(line_no) + ": expected key=value");
    }
    auto strip = [](std::string s) {
      const auto a = s.find_first_not_of(" \t\r");
      const auto b = s.find_last_not_of(" \t\r");
      return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
    };
    const std::string key = strip(line.substr(0, eq));
    const std::string value = strip(line.substr(eq + 1));
    try {
      if (key == "family") cfg.alt.family = parse_family(value);
      else if (key == "df") cfg.alt.df = std::stod(value);
      else if (key == "eps") cfg.alt.eps = std::stod(value);
      else if (key == "scale") cfg.alt.scale = std::stod(value);
      else if (key == "p") cfg.p = std::stoll(value);
      else if (key == "q") cfg.q = std::stoll(value);
      else if (key == "N") cfg.N = std::stoll(value);
      else if (key == "tau") cfg.tau = std::stod(value);
      else if (key == "weights") cfg.weight_scheme = parse_weight_scheme(value);
      else if (key == "c1") cfg.custom_weights.c1 = std::stod(value);
      else if (key == "c2") cfg.custom_weights.c2 = std::stod(value);
      else if (key == "replications" || key == "R") cfg.replications = std::stoll(value);
      else if (key == "seed") cfg.seed = std::stoull(value);
      else if (key == "alpha") cfg.alpha = std::stod(value);
      else if (key == "sidedness") cfg.sidedness = parse_sidedness(value);
      else if (key == "mask") {
        if (value == "deterministic") cfg.mask = MaskMode::deterministic;
        else if (value == "bernoulli") cfg.mask = MaskMode::bernoulli;
        else throw DataError("config", "unknown mask mode '" + value + "'");
      } else if (key == "threads") cfg.threads = static_cast<unsigned>(std::stoul(value));
      else throw DataError("config", "unknown key '" + key + "'");
    } catch (const std::logic_error&) {
      throw DataError("config", "line " + std::to_string(line_no) + ": bad value for '" +
                                    key + "'");
    }
  }
  return cfg;
}

std::mt19937_64 make_engine(std::uint64_t seed, std::uint64_t rep, std::uint64_t stream) {
  std::seed_seq seq{lo(seed), hi(seed), lo(rep), hi(rep), lo(stream), hi(stream)};
  return std::mt19937_64(seq);
}

Vector draw_vector(const AlternativeSpec& alt, Index d, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Vector z(d);
  switch (alt.family) {
    case Family::standard_normal:
      for (Index i = 0; i < d; ++i) z(i) = normal(rng);
      break;
    case Family::product_laplace: {
      // Inverse CDF of the Laplace law with unit scale (variance 2).
      std::uniform_real_distribution<double> u(-0.5, 0.5);
      for (Index i = 0; i < d; ++i) {
        const double v = u(rng);
        const double mag = -std::log1p(-2.0 * std::abs(v));
        z(i) = (v < 0.0 ? -mag : mag) / std::sqrt(2.0);
      }
      break;
    }
    case Family::product_uniform: {
      std::uniform_real_distribution<double> u(-1.0, 1.0);
      for (Index i = 0; i < d; ++i) z(i) = std::sqrt(3.0) * u(rng);
      break;
    }
    case Family::multivariate_t: {
      for (Index i = 0; i < d; ++i) z(i) = normal(rng);
      std::gamma_distribution<double> chi2(alt.df / 2.0, 2.0);
      const double w = chi2(rng);
      z *= std::sqrt((alt.df - 2.0) / w);
      break;
    }
    case Family::normal_mixture: {
      for (Index i = 0; i < d; ++i) z(i) = normal(rng);
      std::bernoulli_distribution pick(alt.eps);
      const double s = pick(rng) ? alt.scale : 1.0;
      z *= s / std::sqrt(1.0 - alt.eps + alt.eps * alt.scale * alt.scale);
      break;
    }
  }
  return z;
}

Matrix draw_matrix(const AlternativeSpec& alt, Index rows, Index d, std::mt19937_64& rng) {
  alt.check();
  Matrix m(rows, d);
  for (Index i = 0; i < rows; ++i) m.row(i) = draw_vector(alt, d, rng).transpose();
  return m;
}

MonotoneSample draw_sample(const SimConfig& cfg, std::uint64_t rep) {
  cfg.check();
  const Index d = cfg.p + cfg.q;
  auto rng = make_engine(cfg.seed, rep, kSampleStream);
  const Matrix z = draw_matrix(cfg.alt, cfg.N, d, rng);

  std::vector<Index> order(static_cast<std::size_t>(cfg.N));
  std::iota(order.begin(), order.end(), Index{0});
  Index n = cfg.n_complete();
  if (cfg.mask == MaskMode::bernoulli) {
    auto mask_rng = make_engine(cfg.seed, rep, kMaskStream);
    std::bernoulli_distribution keep(cfg.tau);
    std::vector<Index> complete;
    std::vector<Index> incomplete;
    for (Index i = 0; i < cfg.N; ++i) (keep(mask_rng) ? complete : incomplete).push_back(i);
    n = static_cast<Index>(complete.size());
    if (n < d + 1) {
      throw NumericError("simulation", "Bernoulli masking left fewer than p+q+1 complete rows");
    }
    order = complete;
    order.insert(order.end(), incomplete.begin(), incomplete.end());
  }

  MonotoneSample s;
  s.p = cfg.p;
  s.q = cfg.q;
  s.x_block.resize(n, cfg.p);
  s.y_block.resize(cfg.N, cfg.q);
  for (Index i = 0; i < cfg.N; ++i) {
    const Index src = order[static_cast<std::size_t>(i)];
    if (i < n) s.x_block.row(i) = z.row(src).head(cfg.p);
    s.y_block.row(i) = z.row(src).tail(cfg.q);
  }
  return s;
}

double ks_distance_normal(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  const double m = static_cast<double>(values.size());
  double d = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double f = std_normal_cdf(values[i]);
    d = std::max({d, f - static_cast<double>(i) / m, static_cast<double>(i + 1) / m - f});
  }
  return d;
}

double ks_p_value(double distance, std::size_t n) {
  const double rn = std::sqrt(static_cast<double>(n));
  const double lambda = (rn + 0.12 + 0.11 / rn) * distance;
  if (lambda < 0.2) return 1.0;
  double sum = 0.0;
  for (int k = 1; k <= 200; ++k) {
    const double term = std::exp(-2.0 * k * k * lambda * lambda);
    sum += (k % 2 == 1 ? term : -term);
    if (term < 1e-18) break;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

NullSummary null_calibration(const SimConfig& cfg) {
  cfg.check();
  const auto R = static_cast<std::size_t>(cfg.replications);
  std::vector<double> z(R);
  std::vector<char> rejected(R);
  TestOptions opts;
  opts.alpha = cfg.alpha;
  opts.sidedness = cfg.sidedness;
  opts.comparisons = false;
  parallel_for(R, cfg.threads, [&](std::size_t r) {
    const MonotoneSample s = draw_sample(cfg, r);
    const KurtosisWeights w =
        resolve_weights(cfg.weight_scheme, s.p, s.q, s.tau(), cfg.custom_weights);
    const TestReport rep = run_test(s, w, opts);
    z[r] = rep.z;
    rejected[r] = rep.reject ? 1 : 0;
  });

  NullSummary out;
  out.replications = cfg.replications;
  out.mean_z = sample_mean(z);
  if (R > 1) out.var_z = sample_variance(z);
  out.ks_distance = ks_distance_normal(z);
  out.ks_p_value = ks_p_value(out.ks_distance, R);
  out.rejection_rate =
      static_cast<double>(std::count(rejected.begin(), rejected.end(), 1)) /
      static_cast<double>(R);
  out.z = std::move(z);
  return out;
}

Json to_json(const NullSummary& s, const SimConfig& cfg) {
  Json j;
  j["experiment"] = "null_calibration";
  j["config"] = cfg.to_json();
  j["replications"] = s.replications;
  j["mean_z"] = s.mean_z;
  j["var_z"] = s.var_z ? Json(*s.var_z) : Json(nullptr);
  j["ks_distance"] = s.ks_distance;
  j["ks_p_value"] = s.ks_p_value;
  j["rejection_rate"] = s.rejection_rate;
  return j;
}

double jackknife_se_of_variance(const std::vector<double>& values) {
  const std::size_t R = values.size();
  if (R < 3) return std::nan("");
  const double m = sample_mean(values);
  // Centering first keeps the leave-one-out sums accurate.
  double s1 = 0.0;
  double s2 = 0.0;
  for (double v : values) {
    s1 += v - m;
    s2 += (v - m) * (v - m);
  }
  const double r = static_cast<double>(R);
  std::vector<double> loo(R);
  for (std::size_t i = 0; i < R; ++i) {
    const double x = values[i] - m;
    const double t1 = s1 - x;
    loo[i] = (s2 - x * x - t1 * t1 / (r - 1.0)) / (r - 2.0);
  }
  const double lm = sample_mean(loo);
  double acc = 0.0;
  for (double v : loo) acc += (v - lm) * (v - lm);
  return std::sqrt((r - 1.0) / r * acc);
}

VarianceSummary variance_oracle(const SimConfig& cfg) {
  cfg.check();
  if (cfg.replications < 3) {
    throw DataError("simulation", "the variance oracle needs at least 3 replications");
  }
  const auto R = static_cast<std::size_t>(cfg.replications);
  std::vector<double> b(R);
  parallel_for(R, cfg.threads, [&](std::size_t r) {
    const MonotoneSample s = draw_sample(cfg, r);
    const KurtosisWeights w =
        resolve_weights(cfg.weight_scheme, s.p, s.q, s.tau(), cfg.custom_weights);
    b[r] = kurtosis_statistic(s, w).b;
  });

  VarianceSummary out;
  out.replications = cfg.replications;
  out.n = cfg.n_complete();
  out.tau = static_cast<double>(out.n) / static_cast<double>(cfg.N);
  out.weights =
      resolve_weights(cfg.weight_scheme, cfg.p, cfg.q, out.tau, cfg.custom_weights);
  const double scale = static_cast<double>(cfg.N);
  out.mean_b = sample_mean(b);
  out.n_var_b = scale * sample_variance(b);
  out.jackknife_se = scale * jackknife_se_of_variance(b);
  const AsymptoticMoments am = null_moments(cfg.p, cfg.q, out.tau, out.weights);
  out.null_nu = am.nu;
  out.null_sigma2 = am.sigma2;
  out.b = std::move(b);
  return out;
}

Json to_json(const VarianceSummary& s, const SimConfig& cfg) {
  Json j;
  j["experiment"] = "variance_oracle";
  j["config"] = cfg.to_json();
  j["replications"] = s.replications;
  j["n"] = s.n;
  j["realized_tau"] = s.tau;
  j["weights"] = {{"c1", s.weights.c1}, {"c2", s.weights.c2}};
  j["mean_b"] = s.mean_b;
  j["n_var_b"] = s.n_var_b;
  j["jackknife_se"] = s.jackknife_se;
  j["null_nu"] = s.null_nu;
  j["null_sigma2"] = s.null_sigma2;
  return j;
}

AsymptoticMoments predicted_moments(const SimConfig& cfg, Index reference_size) {
  cfg.check();
  const double tau =
      static_cast<double>(cfg.n_complete()) / static_cast<double>(cfg.N);
  const KurtosisWeights w =
      resolve_weights(cfg.weight_scheme, cfg.p, cfg.q, tau, cfg.custom_weights);
  if (cfg.alt.family == Family::standard_normal) {
    return null_moments(cfg.p, cfg.q, tau, w);
  }
  auto rng = make_engine(cfg.seed, 0, kReferenceStream);
  const Matrix ref = draw_matrix(cfg.alt, reference_size, cfg.p + cfg.q, rng);
  return nonnull_sigma(empirical_moments(ref, cfg.p, cfg.q, tau, w), tau, w);
}

Matrix expansion_linear_term(const MonotoneSample& s) {
  const Index p = s.p;
  const Index q = s.q;
  const double n = static_cast<double>(s.n());
  const double N = static_cast<double>(s.N());
  const double rN = std::sqrt(N);
  const Matrix yc = s.y_block.topRows(s.n());
  Matrix b(p + q, p + q);
  b.topLeftCorner(p, p) =
      rN * (s.x_block.transpose() * s.x_block / n - Matrix::Identity(p, p));
  b.topRightCorner(p, q) = rN * (s.x_block.transpose() * yc / n);
  b.bottomLeftCorner(q, p) = b.topRightCorner(p, q).transpose();
  b.bottomRightCorner(q, q) =
      rN * (s.y_block.transpose() * s.y_block / N - Matrix::Identity(q, q));
  return b;
}

double ols_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const double mx = sample_mean(x);
  const double my = sample_mean(y);
  double sxy = 0.0;
  double sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  return sxy / sxx;
}

ExpansionSummary expansion_order_check(Index p, Index q, double tau, std::uint64_t seed,
                                       const std::vector<Index>& n_grid,
                                       Index replications, bool drop_linear,
                                       unsigned threads) {
  if (n_grid.size() < 2) throw DataError("simulation", "the N grid needs at least 2 sizes");
  if (replications < 1) throw DataError("simulation", "replications must be at least 1");
  ExpansionSummary out;
  out.n_grid = n_grid;
  std::vector<double> log_n;
  std::vector<double> log_med;
  const AlternativeSpec normal;
  for (std::size_t g = 0; g < n_grid.size(); ++g) {
    SimConfig cfg;
    cfg.p = p;
    cfg.q = q;
    cfg.N = n_grid[g];
    cfg.tau = tau;
    cfg.replications = replications;
    cfg.check();
    const Index n = cfg.n_complete();
    const auto R = static_cast<std::size_t>(replications);
    std::vector<double> norms(R);
    parallel_for(R, threads, [&](std::size_t r) {
      auto rng = make_engine(seed, (static_cast<std::uint64_t>(g) << 32) | r,
                             kExpansionStream);
      const Matrix z = draw_matrix(normal, cfg.N, p + q, rng);
      MonotoneSample s;
      s.p = p;
      s.q = q;
      s.x_block = z.topLeftCorner(n, p);
      s.y_block = z.rightCols(q);
      const MleEstimate est = mle(s);
      Matrix resid = est.sigma_hat - Matrix::Identity(p + q, p + q);
      if (!drop_linear) {
        resid -= expansion_linear_term(s) / std::sqrt(static_cast<double>(cfg.N));
      }
      norms[r] = resid.norm();
    });
    std::vector<double> sorted = norms;
    std::sort(sorted.begin(), sorted.end());
    const double med = R % 2 == 1 ? sorted[R / 2]
                                  : 0.5 * (sorted[R / 2 - 1] + sorted[R / 2]);
    out.median_norm.push_back(med);
    log_n.push_back(std::log(static_cast<double>(cfg.N)));
    log_med.push_back(std::log(med));
  }
  out.slope = ols_slope(log_n, log_med);
  return out;
}

Json to_json(const ExpansionSummary& s) {
  Json j;
  j["experiment"] = "expansion_order_check";
  j["n_grid"] = s.n_grid;
  j["median_norm"] = s.median_norm;
  j["slope"] = s.slope;
  return j;
}

}  // namespace monokurt
