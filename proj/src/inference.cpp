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


#include "monokurt/inference.hpp"

#include "monokurt/asymptotics.hpp"
#include "monokurt/error.hpp"
#include "monokurt/estimation.hpp"
#include "monokurt/kurtosis.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace monokurt {

std::string to_string(Sidedness s) {
  return s == Sidedness::two_sided ? "two-sided" : "upper";
}

Sidedness parse_sidedness(const std::string& name) {
  if (name == "two-sided") return Sidedness::two_sided;
  if (name == "upper") return Sidedness::upper;
  throw DataError("inference", "unknown sidedness '" + name + "'");
}

double std_normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

double p_value_of(double z, Sidedness s) {
  if (s == Sidedness::upper) return std_normal_cdf(-z);
  return std::min(1.0, 2.0 * std_normal_cdf(-std::abs(z)));
}

void finish_report(TestReport& r, std::optional<double> sigma2_override) {
  if (!(r.alpha > 0.0 && r.alpha < 1.0)) {
    throw DataError("inference", "alpha must lie in (0, 1)");
  }
  if (r.kind == "mardia") {
    const double d = static_cast<double>(r.p);
    r.nu = d * (d + 2.0);
    r.sigma2 = 8.0 * d * (d + 2.0);
  } else {
    const AsymptoticMoments am = null_moments(r.p, r.q, r.tau, r.weights);
    r.nu = am.nu;
    r.sigma2 = am.sigma2;
  }
  if (sigma2_override) r.sigma2 = *sigma2_override;
  if (!(r.sigma2 > 0.0)) {
    throw NumericError("inference", "asymptotic variance is not positive");
  }
  r.z = std::sqrt(static_cast<double>(r.N)) * (r.b - r.nu) / std::sqrt(r.sigma2);
  r.p_value = p_value_of(r.z, r.sidedness);
  r.reject = r.p_value < r.alpha;
}

TestReport mardia_complete(const Matrix& rows, double alpha, Sidedness sidedness) {
  const Index m = rows.rows();
  const Index d = rows.cols();
  if (d < 1 || m <= d) {
    throw DataError("mardia", "the Mardia test needs more rows than columns");
  }
  TestReport r;
  r.kind = "mardia";
  r.p = d;
  r.q = 0;
  r.n = m;
  r.N = m;
  r.tau = 1.0;
  r.weight_scheme = "unit";
  r.weights = {1.0, 0.0};
  r.b1 = mardia_sum(rows);
  r.b2 = 0.0;
  r.b = r.b1 / static_cast<double>(m);
  r.alpha = alpha;
  r.sidedness = sidedness;
  finish_report(r);
  return r;
}

TestReport run_test(const MonotoneSample& sample, const KurtosisWeights& w,
                    const TestOptions& options) {
  const ValidationResult v = validate(sample);
  require_valid(sample);
  const MleEstimate est = mle(sample);
  const KurtosisValue kv = kurtosis_statistic(sample, est, w);

  TestReport r;
  r.p = sample.p;
  r.q = sample.q;
  r.n = sample.n();
  r.N = sample.N();
  r.tau = sample.tau();
  r.weight_scheme = options.weight_scheme;
  r.weights = w;
  r.b1 = kv.b1;
  r.b2 = kv.b2;
  r.b = kv.b;
  r.alpha = options.alpha;
  r.sidedness = options.sidedness;
  r.warnings = v.warnings;
  r.warnings.insert(r.warnings.end(), kv.warnings.begin(), kv.warnings.end());
  finish_report(r);

  if (options.comparisons) {
    try {
      r.complete_case = std::make_shared<const TestReport>(
          mardia_complete(sample.complete_rows(), options.alpha, options.sidedness));
    } catch (const Error& e) {
      r.warnings.push_back(std::string("complete-case comparison skipped: ") + e.what());
    }
    try {
      r.observed_y = std::make_shared<const TestReport>(
          mardia_complete(sample.y_block, options.alpha, options.sidedness));
    } catch (const Error& e) {
      r.warnings.push_back(std::string("Y-block comparison skipped: ") + e.what());
    }
  }
  return r;
}

Json to_json(const TestReport& r) {
  Json j;
  j["kind"] = r.kind;
  j["p"] = r.p;
  j["q"] = r.q;
  j["n"] = r.n;
  j["N"] = r.N;
  j["tau"] = r.tau;
  j["weight_scheme"] = r.weight_scheme;
  j["weights"] = {{"c1", r.weights.c1}, {"c2", r.weights.c2}};
  j["b1"] = r.b1;
  j["b2"] = r.b2;
  j["b"] = r.b;
  j["nu"] = r.nu;
  j["sigma2"] = r.sigma2;
  j["z"] = r.z;
  j["p_value"] = r.p_value;
  j["alpha"] = r.alpha;
  j["sidedness"] = to_string(r.sidedness);
  j["reject"] = r.reject;
  j["warnings"] = r.warnings;
  j["complete_case"] = r.complete_case ? to_json(*r.complete_case) : Json(nullptr);
  j["observed_y"] = r.observed_y ? to_json(*r.observed_y) : Json(nullptr);
  return j;
}

TestReport report_from_json(const Json& j) {
  try {
    TestReport r;
    r.kind = j.at("kind").get<std::string>();
    r.p = j.at("p").get<Index>();
    r.q = j.at("q").get<Index>();
    r.n = j.at("n").get<Index>();
    r.N = j.at("N").get<Index>();
    r.tau = j.at("tau").get<double>();
    r.weight_scheme = j.at("weight_scheme").get<std::string>();
    r.weights = {j.at("weights").at("c1").get<double>(),
                 j.at("weights").at("c2").get<double>()};
    r.b1 = j.at("b1").get<double>();
    r.b2 = j.at("b2").get<double>();
    r.b = j.at("b").get<double>();
    r.nu = j.at("nu").get<double>();
    r.sigma2 = j.at("sigma2").get<double>();
    r.z = j.at("z").get<double>();
    r.p_value = j.at("p_value").get<double>();
    r.alpha = j.at("alpha").get<double>();
    r.sidedness = parse_sidedness(j.at("sidedness").get<std::string>());
    r.reject = j.at("reject").get<bool>();
    r.warnings = j.at("warnings").get<std::vector<std::string>>();
    if (j.contains("complete_case") && !j["complete_case"].is_null()) {
      r.complete_case = std::make_shared<const TestReport>(report_from_json(j["complete_case"]));
    }
    if (j.contains("observed_y") && !j["observed_y"].is_null()) {
      r.observed_y = std::make_shared<const TestReport>(report_from_json(j["observed_y"]));
    }
    return r;
  } catch (const Json::exception& e) {
    throw DataError("report", std::string("malformed report JSON: ") + e.what());
  }
}

namespace {

void append_text(const TestReport& r, std::string& out, const std::string& title) {
  char buf[256];
  out += title + "\n";
  std::snprintf(buf, sizeof buf, "  p=%lld q=%lld n=%lld N=%lld tau=%.6f\n",
                static_cast<long long>(r.p), static_cast<long long>(r.q),
                static_cast<long long>(r.n), static_cast<long long>(r.N), r.tau);
  out += buf;
  if (r.kind == "monotone") {
    std::snprintf(buf, sizeof buf, "  weights (%s): c1=%.6g c2=%.6g\n",
                  r.weight_scheme.c_str(), r.weights.c1, r.weights.c2);
    out += buf;
    std::snprintf(buf, sizeof buf, "  b1=%.6f b2=%.6f\n", r.b1, r.b2);
    out += buf;
  }
  std::snprintf(buf, sizeof buf,
                "  b=%.6f nu=%.6f sigma2=%.6f\n  z=%.6f p_value=%.6f (%s) alpha=%.4g "
                "reject=%s\n",
                r.b, r.nu, r.sigma2, r.z, r.p_value, to_string(r.sidedness).c_str(),
                r.alpha, r.reject ? "yes" : "no");
  out += buf;
  for (const auto& w : r.warnings) out += "  warning: " + w + "\n";
}

}  // namespace

std::string to_text(const TestReport& r) {
  std::string out;
  append_text(r, out, r.kind == "mardia" ? "Mardia kurtosis test" : "Monotone kurtosis test");
  if (r.complete_case) append_text(*r.complete_case, out, "Complete-case Mardia test");
  if (r.observed_y) append_text(*r.observed_y, out, "Y-block Mardia test");
  return out;
}

}  // namespace monokurt
