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

#include "monokurt/json_output.hpp"
#include "monokurt/sample.hpp"

#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace monokurt {

enum class Sidedness { two_sided, upper };

std::string to_string(Sidedness s);
Sidedness parse_sidedness(const std::string& name);

/// Result of a kurtosis normality test.
///
/// `kind` is "monotone" for the test on a monotone sample and "mardia" for the
/// classical complete-data test. For a Mardia report p holds the dimension d,
/// q is 0, n = N = number of rows, and the weights are (1, 0).
struct TestReport {
  std::string kind = "monotone";
  Index p = 0;
  Index q = 0;
  Index n = 0;
  Index N = 0;
  double tau = 1.0;
  std::string weight_scheme = "custom";
  KurtosisWeights weights;
  double b1 = 0.0;
  double b2 = 0.0;
  double b = 0.0;
  double nu = 0.0;
  double sigma2 = 0.0;
  double z = 0.0;
  double p_value = 1.0;
  double alpha = 0.05;
  Sidedness sidedness = Sidedness::two_sided;
  bool reject = false;
  std::vector<std::string> warnings;
  /// Mardia test on the n complete rows.
  std::shared_ptr<const TestReport> complete_case;
  /// Mardia test on the Y block of all N rows.
  std::shared_ptr<const TestReport> observed_y;
};

/// Standard normal distribution function, via the complementary error function.
double std_normal_cdf(double x);

/// p-value of a standardized statistic.
double p_value_of(double z, Sidedness s);

struct TestOptions {
  double alpha = 0.05;
  Sidedness sidedness = Sidedness::two_sided;
  /// Attach the complete-case and Y-block Mardia comparisons when computable.
  bool comparisons = true;
  std::string weight_scheme = "custom";
};

/// Full pipeline: estimates, statistic, null moments, z, p-value and decision.
TestReport run_test(const MonotoneSample& sample, const KurtosisWeights& w,
                    const TestOptions& options = {});

/// Fills nu, sigma2, z, p_value and reject of `r` from its b, dimensions, tau
/// and weights. When `sigma2_override` is set it replaces the null variance.
void finish_report(TestReport& r, std::optional<double> sigma2_override = std::nullopt);

/// Classical Mardia kurtosis test on an m x d matrix of complete rows.
TestReport mardia_complete(const Matrix& rows, double alpha,
                           Sidedness sidedness = Sidedness::two_sided);

Json to_json(const TestReport& r);
TestReport report_from_json(const Json& j);

/// Short human readable rendering.
std::string to_text(const TestReport& r);

}  // namespace monokurt
