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
#include "monokurt/estimation.hpp"
#include "monokurt/inference.hpp"
#include "monokurt/json_output.hpp"
#include "monokurt/kurtosis.hpp"
#include "monokurt/sample.hpp"
#include "monokurt/simulation.hpp"

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
namespace mk = monokurt;

namespace {

mk::MonotoneSample make_sample(const mk::Matrix& x, const mk::Matrix& y) {
  mk::MonotoneSample s;
  s.p = x.cols();
  s.q = y.cols();
  s.x_block = x;
  s.y_block = y;
  mk::require_valid(s);
  return s;
}

py::dict sample_dict(const mk::MonotoneSample& s) {
  py::dict d;
  d["x"] = s.x_block;
  d["y"] = s.y_block;
  return d;
}

mk::SimConfig make_config(const std::string& family, long long p, long long q, long long N,
                          double tau, const std::string& weights, double c1, double c2,
                          long long replications, std::uint64_t seed, double alpha,
                          double df, double eps, double scale, const std::string& mask,
                          unsigned threads) {
  mk::SimConfig cfg;
  cfg.alt.family = mk::parse_family(family);
  cfg.alt.df = df;
  cfg.alt.eps = eps;
  cfg.alt.scale = scale;
  cfg.p = p;
  cfg.q = q;
  cfg.N = N;
  cfg.tau = tau;
  cfg.weight_scheme = mk::parse_weight_scheme(weights);
  cfg.custom_weights = {c1, c2};
  cfg.replications = replications;
  cfg.seed = seed;
  cfg.alpha = alpha;
  if (mask == "bernoulli") cfg.mask = mk::MaskMode::bernoulli;
  else if (mask != "deterministic") throw mk::DataError("config", "unknown mask mode '" + mask + "'");
  cfg.threads = threads;
  return cfg;
}

#define MK_SIM_ARGS                                                                   \
  py::arg("family") = "standard_normal", py::arg("p"), py::arg("q"), py::arg("N"),    \
      py::arg("tau"), py::arg("weights") = "tau-bar", py::arg("c1") = 1.0,            \
      py::arg("c2") = 1.0, py::arg("replications") = 1000, py::arg("seed") = 1,       \
      py::arg("alpha") = 0.05, py::arg("df") = 10.0, py::arg("eps") = 0.1,            \
      py::arg("scale") = 3.0, py::arg("mask") = "deterministic", py::arg("threads") = 0

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Kurtosis test of multivariate normality for two-step monotone incomplete data";

  static py::exception<mk::DataError> data_error(m, "DataError", PyExc_ValueError);
  static py::exception<mk::NumericError> numeric_error(m, "NumericError", PyExc_ArithmeticError);
  static py::exception<mk::SingularMatrixError> singular_error(m, "SingularMatrixError",
                                                               numeric_error.ptr());
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const mk::SingularMatrixError& e) {
      PyErr_SetString(singular_error.ptr(), ("[" + e.stage() + "] " + e.what()).c_str());
    } catch (const mk::NumericError& e) {
      PyErr_SetString(numeric_error.ptr(), ("[" + e.stage() + "] " + e.what()).c_str());
    } catch (const mk::DataError& e) {
      PyErr_SetString(data_error.ptr(), ("[" + e.stage() + "] " + e.what()).c_str());
    }
  });

  m.def("validate", [](const mk::Matrix& x, const mk::Matrix& y) {
        mk::MonotoneSample s;
        s.p = x.cols();
        s.q = y.cols();
        s.x_block = x;
        s.y_block = y;
        const mk::ValidationResult r = mk::validate(s);
        py::dict d;
        d["ok"] = r.ok();
        d["errors"] = r.errors;
        d["warnings"] = r.warnings;
        return d;
      },
      py::arg("x"), py::arg("y"), "Check the layout of a monotone sample.");

  m.def("read_csv", [](const std::string& path, long long p, long long q,
                       const std::string& missing, bool header) {
        mk::IngestOptions o{p, q, missing, header};
        return sample_dict(mk::ingest_csv_file(path, o));
      },
      py::arg("path"), py::arg("p"), py::arg("q"), py::arg("missing") = "NA",
      py::arg("header") = false, "Read a CSV file; returns {'x': n x p, 'y': N x q}.");

  m.def("mle", [](const mk::Matrix& x, const mk::Matrix& y) {
        const mk::MleEstimate e = mk::mle(make_sample(x, y));
        py::dict d;
        d["mu_hat"] = e.mu_hat;
        d["sigma_hat"] = e.sigma_hat;
        d["sigma_hat_inv"] = e.sigma_hat_inv;
        d["delta11"] = e.delta11;
        d["delta12"] = e.delta12;
        d["delta22"] = e.delta22;
        return d;
      },
      py::arg("x"), py::arg("y"), "Maximum likelihood estimates of mean and covariance.");

  m.def("kurtosis", [](const mk::Matrix& x, const mk::Matrix& y, double c1, double c2,
                       bool imputed) {
        const mk::MonotoneSample s = make_sample(x, y);
        const mk::MleEstimate e = mk::mle(s);
        const mk::KurtosisValue v = imputed
                                        ? mk::kurtosis_statistic_imputed(s, e, {c1, c2})
                                        : mk::kurtosis_statistic(s, e, {c1, c2});
        py::dict d;
        d["b1"] = v.b1;
        d["b2"] = v.b2;
        d["b"] = v.b;
        d["warnings"] = v.warnings;
        return d;
      },
      py::arg("x"), py::arg("y"), py::arg("c1"), py::arg("c2"), py::arg("imputed") = false,
      "Kurtosis statistic with weights (c1, c2).");

  m.def("impute", [](const mk::Matrix& x, const mk::Matrix& y) {
        const mk::MonotoneSample s = make_sample(x, y);
        return mk::impute(s, mk::mle(s));
      },
      py::arg("x"), py::arg("y"), "Regression-imputed N x (p+q) data.");

  m.def("transform", [](const mk::Matrix& x, const mk::Matrix& y, const mk::Matrix& l11,
                        const mk::Matrix& l22, const mk::Matrix& l12, const mk::Vector& nu1,
                        const mk::Vector& nu2) {
        const mk::AffineElement g{l11, l22, l12, nu1, nu2};
        return sample_dict(mk::transform(make_sample(x, y), g));
      },
      py::arg("x"), py::arg("y"), py::arg("lambda11"), py::arg("lambda22"),
      py::arg("lambda12"), py::arg("nu1"), py::arg("nu2"),
      "Apply a block-triangular affine group element to a sample.");

  m.def("canonicalizer", [](const mk::Vector& mu, const mk::Matrix& sigma, long long p) {
        const mk::AffineElement g = mk::canonicalizer(mu, sigma, p);
        py::dict d;
        d["lambda11"] = g.lambda11;
        d["lambda22"] = g.lambda22;
        d["lambda12"] = g.lambda12;
        d["nu1"] = g.nu1;
        d["nu2"] = g.nu2;
        return d;
      },
      py::arg("mu"), py::arg("sigma"), py::arg("p"),
      "Group element standardizing a population with moments (mu, sigma).");

  m.def("run_test_json", [](const mk::Matrix& x, const mk::Matrix& y, const std::string& weights,
                            double c1, double c2, double alpha, const std::string& sidedness) {
        const mk::MonotoneSample s = make_sample(x, y);
        const mk::WeightScheme scheme = mk::parse_weight_scheme(weights);
        const mk::KurtosisWeights w = mk::resolve_weights(scheme, s.p, s.q, s.tau(), {c1, c2});
        mk::TestOptions o;
        o.alpha = alpha;
        o.sidedness = mk::parse_sidedness(sidedness);
        o.weight_scheme = weights;
        return mk::dump_json(mk::to_json(mk::run_test(s, w, o)), -1);
      },
      py::arg("x"), py::arg("y"), py::arg("weights") = "tau-bar", py::arg("c1") = 1.0,
      py::arg("c2") = 1.0, py::arg("alpha") = 0.05, py::arg("sidedness") = "two-sided");

  m.def("mardia_json", [](const mk::Matrix& rows, double alpha) {
        return mk::dump_json(mk::to_json(mk::mardia_complete(rows, alpha)), -1);
      },
      py::arg("rows"), py::arg("alpha") = 0.05);

  m.def("null_moments", [](long long p, long long q, double tau, double c1, double c2) {
        const mk::AsymptoticMoments a = mk::null_moments(p, q, tau, {c1, c2});
        return py::make_tuple(a.nu, a.sigma2);
      },
      py::arg("p"), py::arg("q"), py::arg("tau"), py::arg("c1"), py::arg("c2"),
      "(nu, sigma2) under multivariate normality.");

  m.def("nonnull_moments", [](const mk::Matrix& reference, long long p, long long q, double tau,
                              double c1, double c2) {
        const mk::KurtosisWeights w{c1, c2};
        const mk::AsymptoticMoments a =
            mk::nonnull_sigma(mk::empirical_moments(reference, p, q, tau, w), tau, w);
        return py::make_tuple(a.nu, a.sigma2);
      },
      py::arg("reference"), py::arg("p"), py::arg("q"), py::arg("tau"), py::arg("c1"),
      py::arg("c2"), "(nu, sigma2) from moments estimated on reference draws.");

  m.def("optimize_weights", [](long long p, long long q, double tau) {
        const mk::OptimizedWeights o = mk::optimize_weights(p, q, tau);
        py::dict d;
        d["c1"] = o.weights.c1;
        d["c2"] = o.weights.c2;
        d["sigma2"] = o.sigma2;
        d["fallback"] = o.fallback;
        return d;
      },
      py::arg("p"), py::arg("q"), py::arg("tau"));

  m.def("std_normal_cdf", &mk::std_normal_cdf, py::arg("x"));

  m.def("draw_sample", [](const std::string& family, long long p, long long q, long long N,
                          double tau, const std::string& weights, double c1, double c2,
                          long long replications, std::uint64_t seed, double alpha, double df,
                          double eps, double scale, const std::string& mask, unsigned threads,
                          std::uint64_t rep) {
        const auto cfg = make_config(family, p, q, N, tau, weights, c1, c2, replications, seed,
                                     alpha, df, eps, scale, mask, threads);
        return sample_dict(mk::draw_sample(cfg, rep));
      },
      MK_SIM_ARGS, py::arg("rep") = 0);

  m.def("null_calibration_json", [](const std::string& family, long long p, long long q,
                                    long long N, double tau, const std::string& weights,
                                    double c1, double c2, long long replications,
                                    std::uint64_t seed, double alpha, double df, double eps,
                                    double scale, const std::string& mask, unsigned threads) {
        const auto cfg = make_config(family, p, q, N, tau, weights, c1, c2, replications, seed,
                                     alpha, df, eps, scale, mask, threads);
        py::gil_scoped_release release;
        return mk::dump_json(mk::to_json(mk::null_calibration(cfg), cfg), -1);
      },
      MK_SIM_ARGS);

  m.def("variance_oracle_json", [](const std::string& family, long long p, long long q,
                                   long long N, double tau, const std::string& weights,
                                   double c1, double c2, long long replications,
                                   std::uint64_t seed, double alpha, double df, double eps,
                                   double scale, const std::string& mask, unsigned threads) {
        const auto cfg = make_config(family, p, q, N, tau, weights, c1, c2, replications, seed,
                                     alpha, df, eps, scale, mask, threads);
        py::gil_scoped_release release;
        return mk::dump_json(mk::to_json(mk::variance_oracle(cfg), cfg), -1);
      },
      MK_SIM_ARGS);

  m.def("expansion_order_check", [](long long p, long long q, double tau, std::uint64_t seed,
                                    const std::vector<long long>& grid, long long replications,
                                    bool drop_linear, unsigned threads) {
        const std::vector<mk::Index> g(grid.begin(), grid.end());
        mk::ExpansionSummary s;
        {
          py::gil_scoped_release release;
          s = mk::expansion_order_check(p, q, tau, seed, g, replications, drop_linear, threads);
        }
        py::dict d;
        d["n_grid"] = grid;
        d["median_norm"] = s.median_norm;
        d["slope"] = s.slope;
        return d;
      },
      py::arg("p"), py::arg("q"), py::arg("tau"), py::arg("seed"),
      py::arg("grid") = std::vector<long long>{250, 500, 1000, 2000, 4000},
      py::arg("replications") = 200, py::arg("drop_linear") = false, py::arg("threads") = 0);
}
