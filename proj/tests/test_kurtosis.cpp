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


#include "oracle.hpp"

#include "monokurt/error.hpp"
#include "monokurt/estimation.hpp"
#include "monokurt/kurtosis.hpp"

#include <doctest.h>

#include <random>

using namespace monokurt;
using oracle::rel;

namespace {

MonotoneSample cholesterol() {
  IngestOptions o;
  o.p = 1;
  o.q = 2;
  o.header = true;
  return ingest_csv_file(MONOKURT_DATA_DIR "/cholesterol.csv", o);
}

MonotoneSample tiny() {
  MonotoneSample s;
  s.p = 1;
  s.q = 1;
  s.x_block.resize(3, 1);
  s.x_block << 1, 2, 3;
  s.y_block.resize(4, 1);
  s.y_block << 1, 3, 2, 4;
  return s;
}

}  // namespace

TEST_CASE("cholesterol statistic matches the independent oracle") {
  const MonotoneSample s = cholesterol();
  REQUIRE(s.n() == 19);
  REQUIRE(s.N() == 28);
  const KurtosisValue v = kurtosis_statistic(s, KurtosisWeights::tau_weighted(s.tau()));
  // Frozen from a NumPy evaluation of the defining sums with a dense inverse.
  CHECK(v.b == doctest::Approx(6.172259268181103).epsilon(1e-10));
  CHECK(v.b == doctest::Approx(oracle::naive_statistic(s, s.tau(), s.tau_bar())).epsilon(1e-10));
  CHECK(v.b == doctest::Approx((v.weights.c1 * v.b1 + v.weights.c2 * v.b2) / 28.0).epsilon(1e-12));
}

TEST_CASE("n = N: empty incomplete part and the Mardia sum") {
  std::mt19937_64 rng(21);
  const MonotoneSample s = oracle::random_sample(rng, 2, 1, 30, 30);
  const KurtosisValue v = kurtosis_statistic(s, {0.7, 0.4});
  CHECK(v.b2 == 0.0);
  CHECK(v.warnings.size() == 1);
  CHECK(v.b == doctest::Approx(0.7 * oracle::naive_mardia_sum(s.complete_rows()) / 30.0)
                   .epsilon(1e-10));
  // The reduction of N b / c1 to the classical sum.
  CHECK(rel(30.0 * v.b / 0.7, mardia_sum(s.complete_rows())) < 1e-12);
}

TEST_CASE("property: b is linear in the weights") {
  std::mt19937_64 rng(22);
  for (int trial = 0; trial < 20; ++trial) {
    const MonotoneSample s = oracle::random_sample(rng, 2, 2, 20, 35);
    const double k = 0.1 + trial;
    const KurtosisWeights w{0.3, 0.9};
    CHECK(rel(kurtosis_statistic(s, w.scaled(k)).b, k * kurtosis_statistic(s, w).b) < 1e-12);
  }
}

TEST_CASE("imputation on the p=q=1 example") {
  const MonotoneSample s = tiny();
  const Matrix z = impute(s, mle(s));
  CHECK(z(3, 0) == doctest::Approx(3.0).epsilon(1e-14));
  CHECK(z(3, 1) == 4.0);
  CHECK(z.topLeftCorner(3, 1) == s.x_block);
}

TEST_CASE("imputation collapses to the mean when the regression block vanishes") {
  // X uncorrelated with Y in the complete rows gives A12 = 0.
  MonotoneSample s;
  s.p = 1;
  s.q = 1;
  s.x_block.resize(4, 1);
  s.x_block << 1, -1, -1, 1;
  s.y_block.resize(6, 1);
  s.y_block << 1, 1, -1, -1, 5, 7;
  const MleEstimate e = mle(s);
  CHECK(std::abs(e.sigma12()(0, 0)) < 1e-15);
  const Matrix z = impute(s, e);
  CHECK(z(4, 0) == doctest::Approx(e.mu_hat(0)));
  CHECK(z(5, 0) == doctest::Approx(e.mu_hat(0)));
}

TEST_CASE("imputation at Y = mu2 gives mu1") {
  MonotoneSample s = tiny();
  // y4 = 2 makes the overall Y mean (1+3+2+2)/4 equal to y4 itself.
  s.y_block(3, 0) = 2.0;
  const MleEstimate e = mle(s);
  CHECK(e.mu_hat(1) == doctest::Approx(2.0));
  CHECK(impute(s, e)(3, 0) == doctest::Approx(e.mu_hat(0)).epsilon(1e-14));
}

TEST_CASE("imputed statistic equals the statistic") {
  const MonotoneSample c = cholesterol();
  const KurtosisWeights w = KurtosisWeights::tau_weighted(c.tau());
  const MleEstimate ec = mle(c);
  CHECK(rel(kurtosis_statistic_imputed(c, ec, w).b, kurtosis_statistic(c, ec, w).b) < 1e-10);

  std::mt19937_64 rng(23);
  const MonotoneSample s = oracle::random_sample(rng, 2, 3, 40, 60);
  const MleEstimate es = mle(s);
  CHECK(rel(kurtosis_statistic_imputed(s, es, w).b, kurtosis_statistic(s, es, w).b) < 1e-10);

  const MonotoneSample full = oracle::random_sample(rng, 2, 3, 40, 40);
  const MleEstimate ef = mle(full);
  CHECK(rel(kurtosis_statistic_imputed(full, ef, {1, 1}).b, kurtosis_statistic(full, ef, {1, 1}).b) <
        1e-10);
}

TEST_CASE("group identity and inverse") {
  std::mt19937_64 rng(24);
  const MonotoneSample s = oracle::random_sample(rng, 2, 3, 20, 30);
  CHECK(transform(s, AffineElement::identity(2, 3)) == s);
  const AffineElement g = oracle::random_group_element(rng, 2, 3);
  const MonotoneSample back = transform(transform(s, g), g.inverse());
  CHECK(rel(back.x_block, s.x_block) < 1e-10);
  CHECK(rel(back.y_block, s.y_block) < 1e-10);
  CHECK_THROWS_AS(transform(s, AffineElement::identity(3, 2)), DataError);
}

TEST_CASE("property: invariance, quadratic split and centering identity") {
  std::mt19937_64 rng(25);
  for (int trial = 0; trial < 200; ++trial) {
    const Index p = 1 + trial % 3, q = 1 + (trial / 3) % 3;
    const Index N = 20 + trial % 30;
    const Index n = p + q + 3 + trial % 6;
    const MonotoneSample s = oracle::random_sample(rng, p, q, n, N);
    const AffineElement g = oracle::random_group_element(rng, p, q);
    const KurtosisWeights w = KurtosisWeights::tau_weighted(s.tau());
    const KurtosisValue a = kurtosis_statistic(s, w);
    const KurtosisValue b = kurtosis_statistic(transform(s, g), w);
    CHECK(rel(b.b1, a.b1) < 1e-8);
    CHECK(rel(b.b2, a.b2) < 1e-8);
    CHECK(rel(b.b, a.b) < 1e-8);
    CHECK(rel(a.b, oracle::naive_statistic(s, w.c1, w.c2)) < 1e-10);

    const CrossProducts cp = cross_products(s);
    const MleEstimate e = mle(s, cp);
    const QuadraticSplit qs = complete_row_split(s, e);
    for (Index j = 0; j < n; ++j) {
      CHECK(rel(qs.residual_part(j) + qs.y_part(j), qs.full(j)) < 1e-10);
    }
    const Matrix z = s.complete_rows();
    const Vector zbar1 = z.colwise().mean().transpose();
    const Vector off = centering_offset(cp, e);
    for (Index j = 0; j < n; ++j) {
      const Vector lhs = z.row(j).transpose() - e.mu_hat;
      const Vector rhs = z.row(j).transpose() - zbar1 + s.tau_bar() * off;
      CHECK((lhs - rhs).norm() <= 1e-10 * std::max(1.0, lhs.norm()));
    }
  }
}

TEST_CASE("canonicalizer examples") {
  const AffineElement g0 = canonicalizer(Vector::Zero(3), Matrix::Identity(3, 3), 1);
  CHECK((g0.linear() - Matrix::Identity(3, 3)).norm() < 1e-15);
  CHECK(g0.nu().norm() == 0.0);

  Matrix sig = Matrix::Zero(2, 2);
  sig(0, 0) = 4;
  sig(1, 1) = 9;
  Vector mu(2);
  mu << 1, 2;
  const AffineElement g = canonicalizer(mu, sig, 1);
  CHECK(g.lambda11(0, 0) == doctest::Approx(0.5));
  CHECK(g.lambda22(0, 0) == doctest::Approx(1.0 / 3.0));
  CHECK(g.lambda12(0, 0) == doctest::Approx(0.0));
  CHECK(g.nu1(0) == doctest::Approx(-0.5));
  CHECK(g.nu2(0) == doctest::Approx(-2.0 / 3.0));
}

TEST_CASE("property: canonicalizer standardizes random moments") {
  std::mt19937_64 rng(26);
  for (int trial = 0; trial < 100; ++trial) {
    const Index p = 1 + trial % 3, q = 1 + (trial / 3) % 3;
    const Matrix sig = oracle::random_spd(rng, p + q);
    Vector mu = oracle::random_spd(rng, p + q).col(0);
    const AffineElement g = canonicalizer(mu, sig, p);
    const Matrix L = g.linear();
    CHECK((L * sig * L.transpose() - Matrix::Identity(p + q, p + q)).norm() < 1e-8);
    CHECK((L * mu + g.nu()).norm() < 1e-8 * std::max(1.0, mu.norm()));
  }
  CHECK_THROWS_AS(canonicalizer(Vector::Zero(2), -Matrix::Identity(2, 2), 1), NumericError);
}
