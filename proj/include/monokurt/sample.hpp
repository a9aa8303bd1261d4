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

#include <Eigen/Core>

#include <istream>
#include <string>
#include <string_view>
#include <vector>

namespace monokurt {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

/// Two-step monotone incomplete sample.
///
/// The first n observations carry both blocks (X is p-dimensional, Y is
/// q-dimensional); the remaining N - n observations carry only Y. Row j of
/// `x_block` pairs with row j of `y_block` for j < n.
///
/// Missingness is assumed to be completely at random. That assumption cannot
/// be checked from the data and nothing here attempts to.
struct MonotoneSample {
  Index p = 0;
  Index q = 0;
  Matrix x_block;  // n x p
  Matrix y_block;  // N x q

  Index n() const { return x_block.rows(); }
  Index N() const { return y_block.rows(); }
  Index dim() const { return p + q; }
  bool has_incomplete() const { return n() < N(); }

  /// Fraction of complete observations, n/N.
  double tau() const { return static_cast<double>(n()) / static_cast<double>(N()); }
  /// 1 - n/N, computed as (N - n)/N so that it is exactly zero when n == N.
  double tau_bar() const {
    return static_cast<double>(N() - n()) / static_cast<double>(N());
  }

  /// The n complete observations as an n x (p+q) matrix, X columns first.
  Matrix complete_rows() const;
  /// Y rows n..N-1.
  Matrix incomplete_y() const { return y_block.bottomRows(N() - n()); }

  bool operator==(const MonotoneSample& other) const;
};

/// Weights (c1, c2) applied to the complete and incomplete parts of the
/// kurtosis statistic. Any positive pair is accepted. Asymptotic results
/// assume c1 = O(tau) and c2 = O(1 - tau) with neither tending to zero.
struct KurtosisWeights {
  double c1 = 1.0;
  double c2 = 1.0;

  /// (tau, 1 - tau).
  static KurtosisWeights tau_weighted(double tau) { return {tau, 1.0 - tau}; }
  static KurtosisWeights unit() { return {1.0, 1.0}; }

  /// Throws DataError when the pair is not admissible for a sample with n
  /// complete rows out of N: c1 must be positive, and c2 must be positive
  /// unless n == N.
  void check(Index n, Index N) const;

  KurtosisWeights scaled(double k) const { return {c1 * k, c2 * k}; }
};

struct ValidationResult {
  std::vector<std::string> errors;
  std::vector<std::string> warnings;

  bool ok() const { return errors.empty(); }
};

/// Checks every structural invariant of the sample. Low-rank situations
/// (n < p+q+1, N < q+1) are reported as warnings.
ValidationResult validate(const MonotoneSample& sample);

/// Throws DataError listing the errors of validate() when there are any.
void require_valid(const MonotoneSample& sample);

struct IngestOptions {
  Index p = 0;
  Index q = 0;
  std::string missing_token = "NA";
  bool header = false;
};

/// Reads a comma separated file. The first p columns are X, the last q are Y.
/// Blank lines and lines starting with '#' are skipped; when `header` is set
/// the first remaining line is skipped too.
/// Rows with every field present are complete; rows whose X fields are all
/// missing (and Y fields all present) are incomplete. Complete rows are moved
/// ahead of incomplete rows, each group keeping its file order.
MonotoneSample ingest_csv(std::istream& in, const IngestOptions& options);
MonotoneSample ingest_csv_text(std::string_view text, const IngestOptions& options);
MonotoneSample ingest_csv_file(const std::string& path, const IngestOptions& options);

/// Writes the sample in the format accepted by ingest_csv, complete rows
/// first, with enough digits to round-trip every value exactly.
std::string to_csv(const MonotoneSample& sample, const IngestOptions& options = {});

}  // namespace monokurt
