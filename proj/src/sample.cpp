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

#include "monokurt/sample.hpp"

#include "monokurt/error.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace monokurt {

Matrix MonotoneSample::complete_rows() const {
  Matrix z(n(), p + q);
  z.leftCols(p) = x_block;
  z.rightCols(q) = y_block.topRows(n());
  return z;
}

bool MonotoneSample::operator==(const MonotoneSample& other) const {
  return p == other.p && q == other.q &&
         x_block.rows() == other.x_block.rows() &&
         x_block.cols() == other.x_block.cols() &&
         y_block.rows() == other.y_block.rows() &&
         y_block.cols() == other.y_block.cols() &&
         x_block == other.x_block && y_block == other.y_block;
}

void KurtosisWeights::check(Index n, Index N) const {
  if (!std::isfinite(c1) || !std::isfinite(c2)) {
    throw DataError("weights", "kurtosis weights must be finite");
  }
  if (c1 <= 0.0) {
    throw DataError("weights", "kurtosis weight c1 must be positive");
  }
  if (n < N && c2 <= 0.0) {
    throw DataError("weights",
                    "kurtosis weight c2 must be positive when the sample has "
                    "incomplete observations");
  }
  if (c2 < 0.0) {
    throw DataError("weights", "kurtosis weight c2 must be nonnegative");
  }
}

namespace {

void check_finite(const Matrix& m, const char* block, Index row_offset,
                  std::vector<std::string>& errors) {
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) {
      if (!std::isfinite(m(i, j))) {
        errors.push_back(std::string("non-finite entry in ") + block +
                         " at row " + std::to_string(i + row_offset + 1) +
                         ", column " + std::to_string(j + 1));
      }
    }
  }
}

}  // namespace

ValidationResult validate(const MonotoneSample& s) {
  ValidationResult r;
  if (s.p < 1) r.errors.push_back("p must be at least 1");
  if (s.q < 1) r.errors.push_back("q must be at least 1");
  if (s.x_block.cols() != s.p) {
    r.errors.push_back("dimension mismatch: x_block has " +
                       std::to_string(s.x_block.cols()) + " columns, p = " +
                       std::to_string(s.p));
  }
  if (s.y_block.cols() != s.q) {
    r.errors.push_back("dimension mismatch: y_block has " +
                       std::to_string(s.y_block.cols()) + " columns, q = " +
                       std::to_string(s.q));
  }
  if (s.n() < 1) r.errors.push_back("no complete observations (n = 0)");
  if (s.n() > s.N()) {
    r.errors.push_back("n = " + std::to_string(s.n()) + " exceeds N = " +
                       std::to_string(s.N()));
  }
  check_finite(s.x_block, "x_block", 0, r.errors);
  check_finite(s.y_block, "y_block", 0, r.errors);
  if (!r.ok()) return r;

  if (s.n() < s.p + s.q + 1) {
    r.warnings.push_back("n < p+q+1: the complete-data cross-product matrix "
                         "cannot be positive definite");
  }
  if (s.N() < s.q + 1) {
    r.warnings.push_back("N < q+1: the Y cross-product matrix over all "
                         "observations is singular");
  }
  return r;
}

void require_valid(const MonotoneSample& sample) {
  const ValidationResult r = validate(sample);
  if (r.ok()) return;
  std::string msg = "invalid monotone sample: ";
  for (std::size_t i = 0; i < r.errors.size(); ++i) {
    if (i) msg += "; ";
    msg += r.errors[i];
  }
  throw DataError("validation", msg);
}

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      out.push_back(trim(line.substr(start)));
      break;
    }
    out.push_back(trim(line.substr(start, comma - start)));
    start = comma + 1;
  }
  return out;
}

double parse_number(std::string_view token, std::size_t line_no, std::size_t col) {
  double value = 0.0;
  std::string_view t = token;
  if (!t.empty() && t.front() == '+') t.remove_prefix(1);
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
  if (t.empty() || ec != std::errc() || ptr != t.data() + t.size()) {
    throw DataError("ingest", "line " + std::to_string(line_no) + ", column " +
                                  std::to_string(col) + ": cannot parse '" +
                                  std::string(token) + "' as a number");
  }
  if (!std::isfinite(value)) {
    throw DataError("ingest", "line " + std::to_string(line_no) + ", column " +
                                  std::to_string(col) + ": non-finite value");
  }
  return value;
}

}  // namespace

MonotoneSample ingest_csv(std::istream& in, const IngestOptions& opt) {
  if (opt.p < 1 || opt.q < 1) {
    throw DataError("ingest", "p and q must both be at least 1");
  }
  const auto width = static_cast<std::size_t>(opt.p + opt.q);
  std::vector<std::vector<double>> complete;
  std::vector<std::vector<double>> incomplete;

  std::string line;
  std::size_t line_no = 0;
  bool skipped_header = !opt.header;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view content = trim(line);
    if (content.empty() || content.front() == '#') continue;
    if (!skipped_header) {
      skipped_header = true;
      continue;
    }
    const auto fields = split_fields(line);
    if (fields.size() != width) {
      throw DataError("ingest", "line " + std::to_string(line_no) + ": expected " +
                                    std::to_string(width) + " fields, found " +
                                    std::to_string(fields.size()));
    }
    std::size_t x_missing = 0;
    for (std::size_t c = 0; c < width; ++c) {
      const bool missing = fields[c] == opt.missing_token;
      if (c < static_cast<std::size_t>(opt.p)) {
        x_missing += missing ? 1 : 0;
      } else if (missing) {
        throw DataError("ingest", "line " + std::to_string(line_no) +
                                      ": missing Y field in column " +
                                      std::to_string(c + 1));
      }
    }
    if (x_missing != 0 && x_missing != static_cast<std::size_t>(opt.p)) {
      throw DataError("ingest", "line " + std::to_string(line_no) +
                                    ": some but not all X fields are missing; "
                                    "the row violates the two-step monotone "
                                    "pattern");
    }
    std::vector<double> row(width, 0.0);
    for (std::size_t c = 0; c < width; ++c) {
      if (fields[c] == opt.missing_token) continue;
      row[c] = parse_number(fields[c], line_no, c + 1);
    }
    (x_missing == 0 ? complete : incomplete).push_back(std::move(row));
  }
  if (complete.empty()) {
    throw DataError("ingest", "the file contains no complete rows");
  }

  MonotoneSample s;
  s.p = opt.p;
  s.q = opt.q;
  const auto n = static_cast<Index>(complete.size());
  const auto N = n + static_cast<Index>(incomplete.size());
  s.x_block.resize(n, opt.p);
  s.y_block.resize(N, opt.q);
  for (Index i = 0; i < n; ++i) {
    for (Index c = 0; c < opt.p; ++c) s.x_block(i, c) = complete[i][c];
    for (Index c = 0; c < opt.q; ++c) s.y_block(i, c) = complete[i][opt.p + c];
  }
  for (Index i = n; i < N; ++i) {
    for (Index c = 0; c < opt.q; ++c) {
      s.y_block(i, c) = incomplete[i - n][opt.p + c];
    }
  }
  require_valid(s);
  return s;
}

MonotoneSample ingest_csv_text(std::string_view text, const IngestOptions& options) {
  std::istringstream in{std::string(text)};
  return ingest_csv(in, options);
}

MonotoneSample ingest_csv_file(const std::string& path, const IngestOptions& options) {
  std::ifstream in(path);
  if (!in) throw DataError("ingest", "cannot open '" + path + "'");
  return ingest_csv(in, options);
}

std::string to_csv(const MonotoneSample& s, const IngestOptions& options) {
  std::string out;
  char buf[32];
  auto put = [&](double v) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    out += buf;
  };
  if (options.header) {
    for (Index c = 0; c < s.p; ++c) out += (c ? ",x" : "x") + std::to_string(c + 1);
    for (Index c = 0; c < s.q; ++c) out += ",y" + std::to_string(c + 1);
    out += '\n';
  }
  for (Index i = 0; i < s.N(); ++i) {
    for (Index c = 0; c < s.p; ++c) {
      if (c) out += ',';
      if (i < s.n()) {
        put(s.x_block(i, c));
      } else {
        out += options.missing_token;
      }
    }
    for (Index c = 0; c < s.q; ++c) {
      out += ',';
      put(s.y_block(i, c));
    }
    out += '\n';
  }
  return out;
}

}  // namespace monokurt
