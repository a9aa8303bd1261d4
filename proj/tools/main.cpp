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


// Command-line front end: test, simulate, moments, check-expansion and
// optimize-weights. Exit status 0 on success, 2 on usage errors and 1 on data
// or numerical failures.

#include "monokurt/asymptotics.hpp"
#include "monokurt/error.hpp"
#include "monokurt/inference.hpp"
#include "monokurt/json_output.hpp"
#include "monokurt/parallel.hpp"
#include "monokurt/sample.hpp"
#include "monokurt/simulation.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

namespace mk = monokurt;

namespace {

struct OutputOptions {
  std::string format = "json";
  std::string path;
};

void add_output_flags(CLI::App* cmd, OutputOptions& out) {
  cmd->add_option("--format", out.format, "Output format")
      ->check(CLI::IsMember({"json", "text"}))
      ->capture_default_str();
  cmd->add_option("--output,-o", out.path, "Write output to this file instead of stdout");
}

void emit(const OutputOptions& out, const std::string& text) {
  if (out.path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(out.path);
  if (!f) throw mk::DataError("output", "cannot open '" + out.path + "' for writing");
  f << text;
}

std::string render(const OutputOptions& out, const mk::Json& j, const std::string& text) {
  return out.format == "json" ? mk::dump_json(j) + "\n" : text;
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

struct WeightFlags {
  std::string scheme = "tau-bar";
  std::optional<double> c1;
  std::optional<double> c2;

  void add(CLI::App* cmd) {
    cmd->add_option("--weights", scheme, "Weight scheme")
        ->check(CLI::IsMember({"tau-bar", "unit", "custom", "optimized"}))
        ->capture_default_str();
    cmd->add_option("--c1", c1, "Weight c1 (custom scheme)");
    cmd->add_option("--c2", c2, "Weight c2 (custom scheme)");
  }

  mk::KurtosisWeights custom() const {
    if (!c1 || !c2) {
      throw CLI::ValidationError("--weights custom", "requires both --c1 and --c2");
    }
    return {*c1, *c2};
  }
};

// ---- test -----------------------------------------------------------------

struct TestArgs {
  std::string input;
  long long p = 0;
  long long q = 0;
  std::string missing = "NA";
  bool header = false;
  WeightFlags weights;
  double alpha = 0.05;
  std::string sidedness = "two-sided";
  std::optional<double> sigma2;
  OutputOptions out;
};

void run_test_command(const TestArgs& a) {
  mk::IngestOptions io;
  io.p = a.p;
  io.q = a.q;
  io.missing_token = a.missing;
  io.header = a.header;
  const mk::MonotoneSample s = mk::ingest_csv_file(a.input, io);
  const mk::WeightScheme scheme = mk::parse_weight_scheme(a.weights.scheme);
  const mk::KurtosisWeights w = mk::resolve_weights(
      scheme, s.p, s.q, s.tau(),
      scheme == mk::WeightScheme::custom ? a.weights.custom() : mk::KurtosisWeights{});
  mk::TestOptions opts;
  opts.alpha = a.alpha;
  opts.sidedness = mk::parse_sidedness(a.sidedness);
  opts.weight_scheme = a.weights.scheme;
  mk::TestReport r = mk::run_test(s, w, opts);
  if (a.sigma2) {
    mk::finish_report(r, *a.sigma2);
    r.warnings.push_back("null variance pinned to a user-supplied value");
  }
  emit(a.out, render(a.out, mk::to_json(r), mk::to_text(r)));
}

// ---- simulate ---------------------------------------------------------------

struct SimulateArgs {
  std::string config_path;
  std::string experiment = "null";
  std::optional<std::string> family;
  std::optional<double> df, eps, scale, tau, alpha;
  std::optional<long long> p, q, N, replications;
  std::optional<unsigned long long> seed;
  std::optional<std::string> weights, mask, sidedness;
  std::optional<double> c1, c2;
  std::optional<unsigned> threads;
  long long reference_size = 500000;
  bool keep_values = false;
  OutputOptions out;
};

mk::SimConfig build_config(const SimulateArgs& a) {
  mk::SimConfig cfg;
  if (!a.config_path.empty()) {
    std::ifstream f(a.config_path);
    if (!f) throw mk::DataError("config", "cannot open '" + a.config_path + "'");
    std::stringstream ss;
    ss << f.rdbuf();
    cfg = mk::parse_sim_config(ss.str(), cfg);
  }
  if (a.family) cfg.alt.family = mk::parse_family(*a.family);
  if (a.df) cfg.alt.df = *a.df;
  if (a.eps) cfg.alt.eps = *a.eps;
  if (a.scale) cfg.alt.scale = *a.scale;
  if (a.p) cfg.p = *a.p;
  if (a.q) cfg.q = *a.q;
  if (a.N) cfg.N = *a.N;
  if (a.tau) cfg.tau = *a.tau;
  if (a.alpha) cfg.alpha = *a.alpha;
  if (a.replications) cfg.replications = *a.replications;
  if (a.seed) cfg.seed = *a.seed;
  if (a.weights) cfg.weight_scheme = mk::parse_weight_scheme(*a.weights);
  if (a.c1) cfg.custom_weights.c1 = *a.c1;
  if (a.c2) cfg.custom_weights.c2 = *a.c2;
  if (a.sidedness) cfg.sidedness = mk::parse_sidedness(*a.sidedness);
  if (a.mask) {
    if (*a.mask == "deterministic") cfg.mask = mk::MaskMode::deterministic;
    else if (*a.mask == "bernoulli") cfg.mask = mk::MaskMode::bernoulli;
    else throw mk::DataError("config", "unknown mask mode '" + *a.mask + "'");
  }
  if (a.threads) cfg.threads = *a.threads;
  return cfg;
}

void run_simulate_command(const SimulateArgs& a) {
  const mk::SimConfig cfg = build_config(a);
  mk::Json j;
  std::string text;
  if (a.experiment == "null") {
    const mk::NullSummary s = mk::null_calibration(cfg);
    j = mk::to_json(s, cfg);
    if (a.keep_values) j["z"] = s.z;
    text = "null calibration, R=" + std::to_string(s.replications) + "\n" +
           "  mean_z=" + fmt("%.6f", s.mean_z) + "\n" + "  var_z=" +
           (s.var_z ? fmt("%.6f", *s.var_z) : std::string("n/a")) + "\n" +
           "  ks_distance=" + fmt("%.6f", s.ks_distance) + " ks_p_value=" +
           fmt("%.6g", s.ks_p_value) + "\n" + "  rejection_rate=" +
           fmt("%.4f", s.rejection_rate) + "\n";
  } else {
    const mk::VarianceSummary s = mk::variance_oracle(cfg);
    j = mk::to_json(s, cfg);
    std::optional<mk::AsymptoticMoments> pred;
    if (cfg.alt.family != mk::Family::standard_normal) {
      pred = mk::predicted_moments(cfg, a.reference_size);
      j["reference_size"] = a.reference_size;
      j["predicted_nu"] = pred->nu;
      j["predicted_sigma2"] = pred->sigma2;
    }
    if (a.keep_values) j["b"] = s.b;
    text = "variance oracle, R=" + std::to_string(s.replications) + "\n" +
           "  N*Var(b)=" + fmt("%.6f", s.n_var_b) + " (jackknife se " +
           fmt("%.6f", s.jackknife_se) + ")\n" + "  mean_b=" + fmt("%.6f", s.mean_b) +
           "\n" + "  normal-theory nu=" + fmt("%.6f", s.null_nu) + " sigma2=" +
           fmt("%.6f", s.null_sigma2) + "\n";
    if (pred) {
      text += "  predicted nu=" + fmt("%.6f", pred->nu) + " sigma2=" +
              fmt("%.6f", pred->sigma2) + "\n";
    }
  }
  emit(a.out, render(a.out, j, text));
}

// ---- moments ---------------------------------------------------------------

struct MomentsArgs {
  long long p = 0;
  long long q = 0;
  double tau = 0.0;
  WeightFlags weights;
  std::string family = "standard_normal";
  double df = 10.0;
  double eps = 0.1;
  double scale = 3.0;
  long long reference_size = 500000;
  unsigned long long seed = 1;
  OutputOptions out;
};

void run_moments_command(const MomentsArgs& a) {
  const mk::WeightScheme scheme = mk::parse_weight_scheme(a.weights.scheme);
  const mk::KurtosisWeights w = mk::resolve_weights(
      scheme, a.p, a.q, a.tau,
      scheme == mk::WeightScheme::custom ? a.weights.custom() : mk::KurtosisWeights{});
  mk::AlternativeSpec alt;
  alt.family = mk::parse_family(a.family);
  alt.df = a.df;
  alt.eps = a.eps;
  alt.scale = a.scale;
  alt.check();

  mk::AsymptoticMoments m;
  if (alt.family == mk::Family::standard_normal) {
    m = mk::null_moments(a.p, a.q, a.tau, w);
  } else {
    auto rng = mk::make_engine(a.seed, 0, 3);
    const mk::Matrix ref = mk::draw_matrix(alt, a.reference_size, a.p + a.q, rng);
    m = mk::nonnull_sigma(mk::empirical_moments(ref, a.p, a.q, a.tau, w), a.tau, w);
  }
  mk::Json j;
  j["p"] = a.p;
  j["q"] = a.q;
  j["tau"] = a.tau;
  j["weight_scheme"] = a.weights.scheme;
  j["weights"] = {{"c1", w.c1}, {"c2", w.c2}};
  j["alternative"] = alt.to_json();
  if (alt.family != mk::Family::standard_normal) {
    j["reference_size"] = a.reference_size;
    j["seed"] = a.seed;
  }
  j["nu"] = m.nu;
  j["sigma2"] = m.sigma2;
  const std::string text = "nu=" + fmt("%.10g", m.nu) + "\nsigma2=" + fmt("%.10g", m.sigma2) + "\n";
  emit(a.out, render(a.out, j, text));
}

// ---- check-expansion ----------------------------------------------------------

struct ExpansionArgs {
  long long p = 1;
  long long q = 1;
  double tau = 0.5;
  unsigned long long seed = 1;
  std::vector<long long> grid{250, 500, 1000, 2000, 4000};
  long long replications = 200;
  bool drop_linear = false;
  unsigned threads = 0;
  OutputOptions out;
};

void run_expansion_command(const ExpansionArgs& a) {
  const std::vector<mk::Index> grid(a.grid.begin(), a.grid.end());
  const mk::ExpansionSummary s = mk::expansion_order_check(
      a.p, a.q, a.tau, a.seed, grid, a.replications, a.drop_linear, a.threads);
  mk::Json j;
  j["experiment"] = "expansion_order_check";
  j["p"] = a.p;
  j["q"] = a.q;
  j["tau"] = a.tau;
  j["seed"] = a.seed;
  j["replications"] = a.replications;
  j["drop_linear"] = a.drop_linear;
  j["n_grid"] = s.n_grid;
  j["median_norm"] = s.median_norm;
  j["slope"] = s.slope;
  std::string text = "N          median norm\n";
  for (std::size_t i = 0; i < s.n_grid.size(); ++i) {
    text += fmt("%-10.0f ", static_cast<double>(s.n_grid[i])) +
            fmt("%.6g", s.median_norm[i]) + "\n";
  }
  text += "slope=" + fmt("%.4f", s.slope) + "\n";
  emit(a.out, render(a.out, j, text));
}

// ---- optimize-weights ---------------------------------------------------------

struct OptimizeArgs {
  long long p = 0;
  long long q = 0;
  double tau = 0.0;
  OutputOptions out;
};

void run_optimize_command(const OptimizeArgs& a) {
  const mk::OptimizedWeights o = mk::optimize_weights(a.p, a.q, a.tau);
  const mk::KurtosisWeights tb =
      mk::project_onto_constraint(a.p, a.q, a.tau, mk::KurtosisWeights::tau_weighted(a.tau));
  const mk::KurtosisWeights un =
      mk::project_onto_constraint(a.p, a.q, a.tau, mk::KurtosisWeights::unit());
  mk::Json j;
  j["p"] = a.p;
  j["q"] = a.q;
  j["tau"] = a.tau;
  j["weights"] = {{"c1", o.weights.c1}, {"c2", o.weights.c2}};
  j["sigma2"] = o.sigma2;
  j["fallback"] = o.fallback;
  j["sigma2_tau_bar_rescaled"] = mk::null_moments(a.p, a.q, a.tau, tb).sigma2;
  j["sigma2_unit_rescaled"] = mk::null_moments(a.p, a.q, a.tau, un).sigma2;
  const std::string text = "c1=" + fmt("%.10g", o.weights.c1) + " c2=" +
                           fmt("%.10g", o.weights.c2) + "\nsigma2=" +
                           fmt("%.10g", o.sigma2) + (o.fallback ? " (fallback)\n" : "\n");
  emit(a.out, render(a.out, j, text));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Kurtosis test of multivariate normality for two-step monotone incomplete data"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "monokurt 0.1.0");

  TestArgs test_args;
  auto* test = app.add_subcommand("test", "Run the kurtosis test on a CSV file");
  test->add_option("--input,-i", test_args.input, "CSV file")->required()->check(CLI::ExistingFile);
  test->add_option("--p", test_args.p, "Dimension of the X block")->required()->check(CLI::PositiveNumber);
  test->add_option("--q", test_args.q, "Dimension of the Y block")->required()->check(CLI::PositiveNumber);
  test->add_option("--missing", test_args.missing, "Missing-value token")->capture_default_str();
  test->add_flag("--header", test_args.header, "Skip the first non-comment line");
  test_args.weights.add(test);
  test->add_option("--alpha", test_args.alpha, "Significance level")->capture_default_str();
  test->add_option("--sidedness", test_args.sidedness, "two-sided or upper")
      ->check(CLI::IsMember({"two-sided", "upper"}))
      ->capture_default_str();
  test->add_option("--sigma2", test_args.sigma2, "Use this null variance instead of the closed form");
  add_output_flags(test, test_args.out);

  SimulateArgs sim_args;
  auto* sim = app.add_subcommand("simulate", "Monte Carlo experiments");
  sim->add_option("--config", sim_args.config_path, "key=value configuration file");
  sim->add_option("--experiment", sim_args.experiment, "null or variance")
      ->check(CLI::IsMember({"null", "variance"}))
      ->capture_default_str();
  sim->add_option("--family", sim_args.family, "Population family");
  sim->add_option("--df", sim_args.df, "Degrees of freedom (multivariate_t)");
  sim->add_option("--eps", sim_args.eps, "Contamination probability (normal_mixture)");
  sim->add_option("--scale", sim_args.scale, "Contamination scale (normal_mixture)");
  sim->add_option("--p", sim_args.p, "Dimension of the X block");
  sim->add_option("--q", sim_args.q, "Dimension of the Y block");
  sim->add_option("--N", sim_args.N, "Total sample size");
  sim->add_option("--tau", sim_args.tau, "Fraction of complete rows");
  sim->add_option("--weights", sim_args.weights, "Weight scheme");
  sim->add_option("--c1", sim_args.c1, "Weight c1 (custom scheme)");
  sim->add_option("--c2", sim_args.c2, "Weight c2 (custom scheme)");
  sim->add_option("--replications,-R", sim_args.replications, "Number of replications");
  sim->add_option("--seed", sim_args.seed, "Random seed");
  sim->add_option("--alpha", sim_args.alpha, "Significance level");
  sim->add_option("--sidedness", sim_args.sidedness, "two-sided or upper");
  sim->add_option("--mask", sim_args.mask, "deterministic or bernoulli");
  sim->add_option("--threads", sim_args.threads, "Worker threads (default: MONOKURT_THREADS or all cores)");
  sim->add_option("--reference-size", sim_args.reference_size,
                  "Reference draws for predicted moments of non-normal families")
      ->capture_default_str();
  sim->add_flag("--keep-values", sim_args.keep_values, "Include per-replication values");
  add_output_flags(sim, sim_args.out);

  MomentsArgs mom_args;
  auto* mom = app.add_subcommand("moments", "Asymptotic mean and variance of the statistic");
  mom->add_option("--p", mom_args.p, "Dimension of the X block")->required()->check(CLI::PositiveNumber);
  mom->add_option("--q", mom_args.q, "Dimension of the Y block")->required()->check(CLI::PositiveNumber);
  mom->add_option("--tau", mom_args.tau, "Fraction of complete rows")->required();
  mom_args.weights.add(mom);
  mom->add_option("--family", mom_args.family, "Population family")->capture_default_str();
  mom->add_option("--df", mom_args.df, "Degrees of freedom (multivariate_t)");
  mom->add_option("--eps", mom_args.eps, "Contamination probability (normal_mixture)");
  mom->add_option("--scale", mom_args.scale, "Contamination scale (normal_mixture)");
  mom->add_option("--reference-size", mom_args.reference_size, "Reference draws")->capture_default_str();
  mom->add_option("--seed", mom_args.seed, "Random seed for the reference draws");
  add_output_flags(mom, mom_args.out);

  ExpansionArgs exp_args;
  auto* exp = app.add_subcommand("check-expansion", "Order of the covariance expansion remainder");
  exp->add_option("--p", exp_args.p, "Dimension of the X block")->check(CLI::PositiveNumber);
  exp->add_option("--q", exp_args.q, "Dimension of the Y block")->check(CLI::PositiveNumber);
  exp->add_option("--tau", exp_args.tau, "Fraction of complete rows")->capture_default_str();
  exp->add_option("--seed", exp_args.seed, "Random seed")->capture_default_str();
  exp->add_option("--grid", exp_args.grid, "Sample sizes")->delimiter(',')->capture_default_str();
  exp->add_option("--replications,-R", exp_args.replications, "Replications per size")->capture_default_str();
  exp->add_flag("--drop-linear", exp_args.drop_linear, "Omit the linear term (negative control)");
  exp->add_option("--threads", exp_args.threads, "Worker threads (0: default)");
  add_output_flags(exp, exp_args.out);

  OptimizeArgs opt_args;
  auto* opt = app.add_subcommand("optimize-weights", "Variance-minimizing weights");
  opt->add_option("--p", opt_args.p, "Dimension of the X block")->required()->check(CLI::PositiveNumber);
  opt->add_option("--q", opt_args.q, "Dimension of the Y block")->required()->check(CLI::PositiveNumber);
  opt->add_option("--tau", opt_args.tau, "Fraction of complete rows")->required();
  add_output_flags(opt, opt_args.out);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*test) run_test_command(test_args);
    else if (*sim) run_simulate_command(sim_args);
    else if (*mom) run_moments_command(mom_args);
    else if (*exp) run_expansion_command(exp_args);
    else if (*opt) run_optimize_command(opt_args);
  } catch (const CLI::ValidationError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const mk::Error& e) {
    std::cerr << "error [" << e.stage() << "]: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error [internal]: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
