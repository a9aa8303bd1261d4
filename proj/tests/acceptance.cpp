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


// Acceptance suite. Prints one PASS/FAIL line per criterion, preceded by
// indented detail lines, and exits nonzero if any criterion fails. Every
// tolerance, seed and size is pinned below; none of them may be tuned to turn
// a failing line green.

#include "oracle.hpp"

#include "monokurt/asymptotics.hpp"
#include "monokurt/estimation.hpp"
#include "monokurt/inference.hpp"
#include "monokurt/json_output.hpp"
#include "monokurt/kurtosis.hpp"
#include "monokurt/simulation.hpp"

#include <Eigen/Eigenvalues>

#include <chrono>
#include <limits>
#include <cstdio>
#include <algorithm>
#include <functional>
#include <string>
#include <thread>
#include <vector>

using namespace monokurt;
using namespace oracle;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

/// Collects the individual checks of one criterion.
class Criterion {
 public:
  Criterion(int id, std::string title) : id_(id), title_(std::move(title)) {
    std::printf("criterion %d: %s\n", id_, title_.c_str());
  }

  /// Records a check of |value - target| <= tol.
  bool near(const std::string& what, double value, double target, double tol) {
    const bool ok = std::abs(value - target) <= tol;
    std::printf("    [%s] %s = %.10g (target %.10g, tol %.3g)\n", ok ? "ok" : "MISS",
                what.c_str(), value, target, tol);
    ok_ = ok_ && ok;
    return ok;
  }

  /// Records a check of value <= bound.
  bool at_most(const std::string& what, double value, double bound) {
    const bool ok = value <= bound;
    std::printf("    [%s] %s = %.4g (bound %.4g)\n", ok ? "ok" : "MISS", what.c_str(),
                value, bound);
    ok_ = ok_ && ok;
    return ok;
  }

  bool within(const std::string& what, double value, double lo, double hi) {
    const bool ok = value >= lo && value <= hi;
    std::printf("    [%s] %s = %.6g (range [%.4g, %.4g])\n", ok ? "ok" : "MISS",
                what.c_str(), value, lo, hi);
    ok_ = ok_ && ok;
    return ok;
  }

  bool check(const std::string& what, bool ok) {
    std::printf("    [%s] %s\n", ok ? "ok" : "MISS", what.c_str());
    ok_ = ok_ && ok;
    return ok;
  }

  static void info(const std::string& line) { std::printf("    info: %s\n", line.c_str()); }

  bool finish() const {
    std::printf("CRITERION %d %s: %s\n\n", id_, ok_ ? "PASS" : "FAIL", title_.c_str());
    std::fflush(stdout);
    return ok_;
  }

 private:
  int id_;
  std::string title_;
  bool ok_ = true;
};

/// 2-norm condition number of a symmetric positive definite matrix.
double spd_condition(const Matrix& m) {
  const Eigen::SelfAdjointEigenSolver<Matrix> es(m, Eigen::EigenvaluesOnly);
  return es.eigenvalues().maxCoeff() / es.eigenvalues().minCoeff();
}

constexpr double kEps = std::numeric_limits<double>::epsilon();

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

// ---------------------------------------------------------------------------
// 1. Cholesterol regression.

bool criterion_1() {
  Criterion c(1, "cholesterol regression");
  const auto t0 = Clock::now();
  IngestOptions io;
  io.p = 1;
  io.q = 2;
  io.header = true;
  const MonotoneSample s = ingest_csv_file(MONOKURT_DATA_DIR "/cholesterol.csv", io);
  TestOptions opt;
  opt.weight_scheme = "tau-bar";
  const TestReport r = run_test(s, KurtosisWeights::tau_weighted(s.tau()), opt);
  const double elapsed = seconds_since(t0);

  c.near("b (monotone statistic)", r.b, 5.8623, 5e-4);
  c.near("nu", r.nu, 7.7334, 1e-4);
  if (c.check("complete-case comparison available", r.complete_case != nullptr)) {
    const TestReport& m = *r.complete_case;
    Criterion::info(fmt("complete-case Mardia uses %.0f rows of dimension %.0f", double(m.n),
                        double(m.p)));
    c.near("complete-case Mardia b", m.b, 7.8176, 5e-4);
    c.near("complete-case Mardia z", m.z, -0.1207, 5e-4);
    c.near("complete-case Mardia P", m.p_value, 0.9038, 5e-4);
  }
  c.at_most("runtime seconds", elapsed, 1.0);

  // Reference output, not gated.
  Criterion::info(fmt("implemented null variance sigma2 = %.6f, z = %.6f, P = %.6f", r.sigma2,
                      r.z, r.p_value));
  if (r.observed_y) {
    const TestReport& y = *r.observed_y;
    Criterion::info(fmt("Mardia on the Y block of all rows: b = %.6f, z = %.6f, P = %.6f", y.b,
                        y.z, y.p_value));
  }
  TestReport pinned = r;
  pinned.b = 5.8623;
  finish_report(pinned, 181.1658);
  Criterion::info(fmt("with b = 5.8623 and sigma2 pinned to 181.1658: z = %.4f, two-sided P = "
                      "%.4f, lower tail = %.4f",
                      pinned.z, pinned.p_value, std_normal_cdf(pinned.z)));
  Criterion::info(fmt("reciprocal-weight variance variant at this tau = %.4f",
                      null_sigma2_reciprocal_variant(1, 2, s.tau(), r.weights)));
  return c.finish();
}

// ---------------------------------------------------------------------------
// 2. Invariance under the block-triangular affine group.

bool criterion_2() {
  Criterion c(2, "invariance suite");
  const auto t0 = Clock::now();
  std::mt19937_64 rng(20240601);
  std::uniform_int_distribution<int> extra(0, 25);
  std::uniform_real_distribution<double> wdist(0.1, 2.0);
  double worst_inv = 0.0;
  double worst_imp = 0.0;
  double worst_imp_scaled = 0.0;  // error relative to the rounding floor cond * eps
  double worst_cond = 0.0;
  const int pairs = 1000;
  for (int i = 0; i < pairs; ++i) {
    const Index p = 1 + i % 3;
    const Index q = 1 + (i / 3) % 3;
    const Index n = p + q + 2 + extra(rng);
    const Index N = n + 1 + extra(rng);
    const MonotoneSample s = random_sample(rng, p, q, n, N);
    const AffineElement g = random_group_element(rng, p, q);
    const KurtosisWeights w{wdist(rng), wdist(rng)};
    const MonotoneSample t = transform(s, g);
    const MleEstimate es = mle(s);
    const MleEstimate et = mle(t);
    const double b = kurtosis_statistic(s, es, w).b;
    const double bt = kurtosis_statistic(t, et, w).b;
    worst_inv = std::max(worst_inv, rel(bt, b));
    const double imp_s = rel(kurtosis_statistic_imputed(s, es, w).b, b);
    const double imp_t = rel(kurtosis_statistic_imputed(t, et, w).b, bt);
    const double cond_s = spd_condition(es.sigma_hat);
    const double cond_t = spd_condition(et.sigma_hat);
    worst_imp = std::max({worst_imp, imp_s, imp_t});
    worst_imp_scaled = std::max({worst_imp_scaled, imp_s / (cond_s * kEps), imp_t / (cond_t * kEps)});
    worst_cond = std::max({worst_cond, cond_s, cond_t});
  }
  Criterion::info(fmt("%.0f random pairs, p and q in {1, 2, 3}", pairs));
  Criterion::info(fmt("largest condition number of sigma_hat = %.3g; largest imputation error "
                      "in units of cond * eps = %.3g",
                      worst_cond, worst_imp_scaled));
  c.at_most("max |b(gS) - b(S)| / |b(S)|", worst_inv, 1e-8);
  c.at_most("max imputation identity error", worst_imp, 1e-10);
  c.at_most("runtime seconds", seconds_since(t0), 30.0);
  return c.finish();
}

// ---------------------------------------------------------------------------
// 3. Algebraic identities.

bool criterion_3() {
  Criterion c(3, "algebraic identity suite");
  const auto t0 = Clock::now();
  std::mt19937_64 rng(20240602);
  double iwasawa = 0.0;
  double block_inverse = 0.0;
  double split = 0.0;
  double centering = 0.0;
  double mardia = 0.0;
  double mardia_scaled = 0.0;
  for (int i = 0; i < 300; ++i) {
    const Index p = 1 + i % 3;
    const Index q = 1 + (i / 3) % 3;
    const Index n = p + q + 3 + i % 17;
    const Index N = n + 1 + i % 23;
    const MonotoneSample s = random_sample(rng, p, q, n, N);
    const CrossProducts cp = cross_products(s);
    const MleEstimate e = mle(s, cp);
    const Index d = p + q;
    iwasawa = std::max(iwasawa, rel(iwasawa_product(e), e.sigma_hat));
    block_inverse = std::max(
        block_inverse, (e.sigma_hat * e.sigma_hat_inv - Matrix::Identity(d, d)).norm());

    const QuadraticSplit qs = complete_row_split(s, e);
    split = std::max(split, rel(Matrix(qs.residual_part + qs.y_part), Matrix(qs.full)));

    const Matrix z = s.complete_rows();
    const Vector zbar1 = z.colwise().mean().transpose();
    const Vector off = centering_offset(cp, e);
    const Matrix lhs = z.rowwise() - e.mu_hat.transpose();
    const Matrix rhs = (z.rowwise() - zbar1.transpose()).rowwise() +
                       (s.tau_bar() * off).transpose();
    centering = std::max(centering, rel(lhs, rhs));

    // Complete data with weights (1, 0): the statistic is the Mardia sum over N.
    MonotoneSample full;
    full.p = p;
    full.q = q;
    full.x_block = z.leftCols(p);
    full.y_block = z.rightCols(q);
    const double bm = kurtosis_statistic(full, KurtosisWeights{1.0, 0.0}).b;
    const double err = rel(bm, naive_mardia_sum(z) / double(n));
    mardia = std::max(mardia, err);
    const Matrix zc = z.rowwise() - z.colwise().mean();
    mardia_scaled =
        std::max(mardia_scaled, err / (spd_condition(zc.transpose() * zc) * kEps));
  }
  c.at_most("Iwasawa reconstruction relative residual", iwasawa, 1e-8);
  c.at_most("block inverse residual", block_inverse, 1e-8);
  c.at_most("quadratic split relative residual", split, 1e-10);
  c.at_most("centering identity relative residual", centering, 1e-10);

  double unit_display = 0.0;
  double tau_one = 0.0;  // nu and sigma2 at tau = 1 against d(d+2) and 8d(d+2)
  double normal_grid = 0.0;
  const std::vector<double> taus = {0.15, 0.3, 0.5, 0.678571, 0.85, 0.95};
  for (Index p = 1; p <= 3; ++p) {
    for (Index q = 1; q <= 3; ++q) {
      const double d = double(p + q);
      const AsymptoticMoments one = null_moments(p, q, 1.0, KurtosisWeights{1.0, 0.0});
      tau_one = std::max({tau_one, rel(one.nu, d * (d + 2.0)), rel(one.sigma2, 8.0 * d * (d + 2.0))});
      for (double tau : taus) {
        unit_display = std::max(unit_display,
                                rel(null_moments(p, q, tau, KurtosisWeights::unit()).sigma2,
                                    null_sigma2_unit_display(p, q, tau)));
        for (WeightScheme ws : {WeightScheme::tau_bar, WeightScheme::unit,
                                WeightScheme::optimized, WeightScheme::custom}) {
          const KurtosisWeights w = resolve_weights(ws, p, q, tau, KurtosisWeights{0.3, 1.7});
          const AsymptoticMoments a = null_moments(p, q, tau, w);
          const AsymptoticMoments b = nonnull_sigma(normal_moments(p, q, tau, w), tau, w);
          normal_grid = std::max({normal_grid, rel(b.nu, a.nu), rel(b.sigma2, a.sigma2)});
        }
      }
    }
  }
  c.at_most("null variance at (1,1) vs unit-weight closed form", unit_display, 1e-12);
  c.at_most("tau = 1 reduction of the null moments to the complete-data values", tau_one, 1e-12);
  c.at_most("tau = 1 reduction of the statistic to the complete-data sum", mardia, 1e-12);
  Criterion::info(fmt("largest statistic reduction error in units of cond * eps = %.3g",
                      mardia_scaled));
  c.at_most("general moments at the normal vs null moments", normal_grid, 1e-10);
  c.at_most("runtime seconds", seconds_since(t0), 10.0);
  return c.finish();
}

// ---------------------------------------------------------------------------
// 4 to 7 produce JSON summaries; criterion 8 recomputes them with other
// worker counts.

using Experiment = std::function<std::string(unsigned threads)>;

struct SimulationOutcome {
  bool pass = false;
  std::string json;
};

SimConfig null_clt_config() {
  SimConfig cfg;
  cfg.p = 2;
  cfg.q = 3;
  cfg.N = 2000;
  cfg.tau = 0.6;
  cfg.weight_scheme = WeightScheme::tau_bar;
  cfg.replications = 2000;
  cfg.seed = 4004;
  cfg.alpha = 0.05;
  return cfg;
}

std::string null_clt_json(unsigned threads) {
  SimConfig cfg = null_clt_config();
  cfg.threads = threads;
  return dump_json(to_json(null_calibration(cfg), cfg));
}

SimulationOutcome criterion_4(unsigned threads) {
  Criterion c(4, "null central limit calibration");
  const auto t0 = Clock::now();
  SimConfig cfg = null_clt_config();
  cfg.threads = threads;
  const NullSummary s = null_calibration(cfg);
  c.at_most("|mean z|", std::abs(s.mean_z), 0.1);
  c.at_most("|var z - 1|", s.var_z ? std::abs(*s.var_z - 1.0) : 1e300, 0.15);
  c.check(fmt("KS p-value %.4g > 0.01 (KS distance %.5f)", s.ks_p_value, s.ks_distance),
          s.ks_p_value > 0.01);
  c.within("rejection rate at alpha 0.05", s.rejection_rate, 0.03, 0.08);
  Criterion::info(fmt("runtime %.1f s", seconds_since(t0)));
  return {c.finish(), dump_json(to_json(s, cfg))};
}

SimConfig adjudication_config() {
  SimConfig cfg;
  cfg.p = 1;
  cfg.q = 2;
  cfg.N = 4000;
  cfg.tau = 19.0 / 28.0;
  cfg.weight_scheme = WeightScheme::tau_bar;
  cfg.replications = 4000;
  cfg.seed = 5005;
  return cfg;
}

std::string adjudication_json(unsigned threads) {
  SimConfig cfg = adjudication_config();
  cfg.threads = threads;
  return dump_json(to_json(variance_oracle(cfg), cfg));
}

SimulationOutcome criterion_5(unsigned threads) {
  Criterion c(5, "null variance adjudication");
  const auto t0 = Clock::now();
  SimConfig cfg = adjudication_config();
  cfg.threads = threads;
  const VarianceSummary v = variance_oracle(cfg);
  const double se = v.jackknife_se;
  const double implemented = null_moments(1, 2, v.tau, v.weights).sigma2;
  const double tau_display = null_sigma2_tau_display(1, 2, v.tau);
  Criterion::info(fmt("N Var(b) = %.4f, jackknife SE = %.4f, realized tau = %.6f", v.n_var_b, se,
                      v.tau));
  c.at_most("|N Var(b) - implemented sigma2| / SE", std::abs(v.n_var_b - implemented) / se, 3.0);
  Criterion::info(fmt("implemented sigma2 = %.4f", implemented));
  const double z_display = std::abs(v.n_var_b - tau_display) / se;
  const double z_reference = std::abs(v.n_var_b - 181.1658) / se;
  Criterion::info(fmt("printed tau-weight display %.4f is %.2f SE away", tau_display, z_display));
  Criterion::info(fmt("reference value 181.1658 is %.2f SE away", z_reference));
  c.check("at least one alternative candidate excluded at 3 SE",
          z_display > 3.0 || z_reference > 3.0);
  Criterion::info(fmt("runtime %.1f s", seconds_since(t0)));
  return {c.finish(), dump_json(to_json(v, cfg))};
}

SimConfig laplace_config() {
  SimConfig cfg;
  cfg.alt.family = Family::product_laplace;
  cfg.p = 1;
  cfg.q = 1;
  cfg.N = 5000;
  cfg.tau = 0.5;
  cfg.weight_scheme = WeightScheme::tau_bar;
  cfg.replications = 2000;
  cfg.seed = 6006;
  return cfg;
}

constexpr Index kReferenceDraws = 500000;

std::string laplace_json(unsigned threads) {
  SimConfig cfg = laplace_config();
  cfg.threads = threads;
  Json j = to_json(variance_oracle(cfg), cfg);
  const AsymptoticMoments m = predicted_moments(cfg, kReferenceDraws);
  j["predicted_nu"] = m.nu;
  j["predicted_sigma2"] = m.sigma2;
  return dump_json(j);
}

SimulationOutcome criterion_6(unsigned threads) {
  Criterion c(6, "non-null variance");
  const auto t0 = Clock::now();
  SimConfig cfg = laplace_config();
  cfg.threads = threads;
  const VarianceSummary v = variance_oracle(cfg);
  const AsymptoticMoments m = predicted_moments(cfg, kReferenceDraws);
  Criterion::info(fmt("N Var(b) = %.3f (jackknife SE %.3f), predicted sigma2 = %.3f", v.n_var_b,
                      v.jackknife_se, m.sigma2));
  Criterion::info(fmt("mean b = %.4f, predicted nu = %.4f", v.mean_b, m.nu));
  // Exact moments of the standardized Laplace law, for comparison only.
  const OracleMoments exact = product_asymptotics(laplace_product(), 1, 1, v.tau, v.weights.c1,
                                                  v.weights.c2);
  Criterion::info(fmt("exact product-moment sigma2 = %.3f; Monte Carlo differs by %.2f%%",
                      exact.sigma2, 100.0 * std::abs(v.n_var_b - exact.sigma2) / exact.sigma2));
  c.at_most("|N Var(b) - predicted| / predicted", std::abs(v.n_var_b - m.sigma2) / m.sigma2, 0.10);
  Criterion::info(fmt("runtime %.1f s", seconds_since(t0)));
  Json j = to_json(v, cfg);
  j["predicted_nu"] = m.nu;
  j["predicted_sigma2"] = m.sigma2;
  return {c.finish(), dump_json(j)};
}

const std::vector<Index> kExpansionGrid = {250, 500, 1000, 2000, 4000};
constexpr Index kExpansionReps = 400;
constexpr double kExpansionTau = 0.5;

std::string expansion_json(unsigned threads) {
  Json j;
  j["p1q1"] = to_json(expansion_order_check(1, 1, kExpansionTau, 7007, kExpansionGrid,
                                            kExpansionReps, false, threads));
  j["p2q2"] = to_json(expansion_order_check(2, 2, kExpansionTau, 7008, kExpansionGrid,
                                            kExpansionReps, false, threads));
  j["control_p1q1"] = to_json(expansion_order_check(1, 1, kExpansionTau, 7007, kExpansionGrid,
                                                    kExpansionReps, true, threads));
  j["control_p2q2"] = to_json(expansion_order_check(2, 2, kExpansionTau, 7008, kExpansionGrid,
                                                    kExpansionReps, true, threads));
  return dump_json(j);
}

SimulationOutcome criterion_7(unsigned threads) {
  Criterion c(7, "expansion order");
  const auto t0 = Clock::now();
  const std::string json = expansion_json(threads);
  const Json j = Json::parse(json);
  c.within("slope, p = q = 1", j["p1q1"]["slope"].get<double>(), -1.2, -0.8);
  c.within("slope, p = q = 2", j["p2q2"]["slope"].get<double>(), -1.2, -0.8);
  c.within("control slope without the linear term, p = q = 1",
           j["control_p1q1"]["slope"].get<double>(), -0.65, -0.35);
  c.within("control slope without the linear term, p = q = 2",
           j["control_p2q2"]["slope"].get<double>(), -0.65, -0.35);
  Criterion::info(fmt("runtime %.1f s", seconds_since(t0)));
  return {c.finish(), json};
}

// ---------------------------------------------------------------------------
// 8. Determinism across worker counts.

bool criterion_8(unsigned max_threads, const std::vector<std::string>& reference) {
  Criterion c(8, "determinism across worker counts");
  const std::vector<std::pair<std::string, Experiment>> experiments = {
      {"criterion 4 summary", null_clt_json},
      {"criterion 5 summary", adjudication_json},
      {"criterion 6 summary", laplace_json},
      {"criterion 7 summary", expansion_json},
  };
  // The reference runs used max_threads; repeat with every distinct count.
  std::vector<unsigned> counts = {1u, 2u};
  if (max_threads > 2) counts.push_back(max_threads);
  std::string counts_label;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    if (i) counts_label += i + 1 == counts.size() ? " and " : ", ";
    counts_label += std::to_string(counts[i]);
  }
  for (std::size_t e = 0; e < experiments.size(); ++e) {
    bool same = true;
    for (unsigned t : counts) same = same && experiments[e].second(t) == reference[e];
    c.check(experiments[e].first + ": reruns with " + counts_label +
                " workers match the reference run with " + std::to_string(max_threads) +
                " byte for byte",
            same);
  }
  return c.finish();
}

}  // namespace

int main() {
  const unsigned max_threads = std::max(1u, std::thread::hardware_concurrency());
  std::printf("acceptance suite (%u hardware threads)\n\n", max_threads);
  std::vector<bool> results;
  auto guarded = [&](int id, const std::function<bool()>& fn) {
    try {
      results.push_back(fn());
    } catch (const std::exception& ex) {
      std::printf("    error: %s\nCRITERION %d FAIL: raised an exception\n\n", ex.what(), id);
      results.push_back(false);
    }
  };
  guarded(1, criterion_1);
  guarded(2, criterion_2);
  guarded(3, criterion_3);

  std::vector<std::string> reference(4);
  guarded(4, [&] {
    auto o = criterion_4(max_threads);
    reference[0] = o.json;
    return o.pass;
  });
  guarded(5, [&] {
    auto o = criterion_5(max_threads);
    reference[1] = o.json;
    return o.pass;
  });
  guarded(6, [&] {
    auto o = criterion_6(max_threads);
    reference[2] = o.json;
    return o.pass;
  });
  guarded(7, [&] {
    auto o = criterion_7(max_threads);
    reference[3] = o.json;
    return o.pass;
  });
  guarded(8, [&] { return criterion_8(max_threads, reference); });

  int failed = 0;
  for (bool r : results) failed += r ? 0 : 1;
  std::printf("summary: %d of %zu criteria passed\n", int(results.size()) - failed,
              results.size());
  return failed == 0 ? 0 : 1;
}
