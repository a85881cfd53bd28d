// Copyright 2026 The weakmeas Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#include "weakmeas/stats.hpp"

#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "weakmeas/errors.hpp"
#include "weakmeas/random.hpp"

using namespace weakmeas;

namespace {

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

std::vector<double> normals(std::uint64_t seed, std::size_t n, double shift = 0.0) {
  RandomStream rng(seed, 0);
  std::vector<double> x(n);
  for (double& v : x) v = rng.normal() + shift;
  return x;
}

}  // namespace

TEST(Histogram, CountsEverySampleOnAscendingEdges) {
  const std::vector<double> x = normals(1, 5000);
  const Histogram h = make_histogram(x);
  EXPECT_EQ(h.total(), 5000u);
  EXPECT_EQ(h.edges.size(), h.bins() + 1);
  EXPECT_GE(h.bins(), 20u);
  for (std::size_t k = 0; k + 1 < h.edges.size(); ++k) EXPECT_LT(h.edges[k], h.edges[k + 1]);
  const Histogram fixed = make_histogram(x, 7);
  EXPECT_EQ(fixed.bins(), 7u);
  EXPECT_EQ(fixed.total(), 5000u);
}

TEST(Histogram, RejectsEmptyInput) {
  EXPECT_THROW(make_histogram(std::vector<double>{}), InvalidArgument);
}

TEST(ChiSquarePvalue, TabulatedQuantiles) {
  EXPECT_NEAR(chi_square_pvalue(3.841458820694124, 1), 0.05, 1e-9);
  EXPECT_NEAR(chi_square_pvalue(18.307038053275146, 10), 0.05, 1e-9);
  EXPECT_NEAR(chi_square_pvalue(2.0, 2), std::exp(-1.0), 1e-12);
}

TEST(ChiSquareGof, AcceptsTrueModelAndRejectsShiftedData) {
  EXPECT_GT(chi_square_gof(make_histogram(normals(2, 20000)), normal_cdf).pvalue, 0.01);
  EXPECT_LT(chi_square_gof(make_histogram(normals(3, 20000, 0.1)), normal_cdf).pvalue, 1e-6);
}

TEST(ChiSquareGof, MergesSparseCells) {
  const GofResult r = chi_square_gof(make_histogram(normals(4, 200), 40), normal_cdf);
  EXPECT_LT(r.cells, 40);
  EXPECT_EQ(r.dof, r.cells - 1);
}

TEST(KsTest, KnownAsymptoticValue) {
  // Two-sample-free check: a single point at the median has D = 1/2.
  const GofResult r = ks_test(std::vector<double>{0.0}, normal_cdf);
  EXPECT_NEAR(r.statistic, 0.5, 1e-15);
  EXPECT_GT(ks_test(normals(5, 10000), normal_cdf).pvalue, 0.01);
  EXPECT_LT(ks_test(normals(6, 10000, 0.05), normal_cdf).pvalue, 1e-3);
}

TEST(GoodnessOfFit, PvaluesAreCalibratedUnderTheNull) {
  int ks_reject = 0, chi_reject = 0;
  const int reps = 400;
  for (int r = 0; r < reps; ++r) {
    const std::vector<double> x = normals(100 + static_cast<std::uint64_t>(r), 1000);
    ks_reject += ks_test(x, normal_cdf).pvalue < 0.05 ? 1 : 0;
    chi_reject += chi_square_gof(make_histogram(x), normal_cdf).pvalue < 0.05 ? 1 : 0;
  }
  // Binomial(400, 0.05) has sd ~ 4.4; allow a wide band.
  EXPECT_GT(ks_reject, 5);
  EXPECT_LT(ks_reject, 40);
  EXPECT_GT(chi_reject, 5);
  EXPECT_LT(chi_reject, 40);
}

TEST(Summarize, MomentsAndOptionalFit) {
  const std::vector<double> x{1.0, 2.0, 3.0, 4.0};
  const StatSummary s = summarize(x);
  EXPECT_DOUBLE_EQ(s.mean, 2.5);
  EXPECT_NEAR(s.variance, 5.0 / 3.0, 1e-15);
  EXPECT_NEAR(s.standard_error, std::sqrt(5.0 / 3.0 / 4.0), 1e-15);
  const StatSummary f = summarize(normals(7, 5000), normal_cdf);
  EXPECT_GT(f.gof_pvalue, 0.01);
  EXPECT_THROW(summarize(std::vector<double>{1.0}), InvalidArgument);
}
