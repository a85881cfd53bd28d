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
#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <vector>

namespace weakmeas {

struct Histogram {
  std::vector<double> edges;  // bins + 1 ascending edges
  std::vector<std::size_t> counts;

  std::size_t bins() const noexcept { return counts.size(); }
  std::size_t total() const noexcept;
};

/// Histogram over [min, max] of the samples. Without an explicit bin count
/// the Freedman-Diaconis width is used, with at least `min_bins` bins.
Histogram make_histogram(std::span<const double> samples, std::optional<std::size_t> bins = std::nullopt,
                         std::size_t min_bins = 20);

struct GofResult {
  double statistic = 0.0;
  double pvalue = 0.0;
  int dof = 0;
  /// Bins left after merging to an expected count of >= 5.
  int cells = 0;
};

using Cdf = std::function<double(double)>;

/// Pearson chi-square against a continuous distribution. The outer bins
/// absorb the tail mass beyond the histogram range, and adjacent bins are
/// merged until every cell expects at least 5 counts.
GofResult chi_square_gof(const Histogram& hist, const Cdf& cdf);

/// One-sample Kolmogorov-Smirnov test with the asymptotic distribution
/// (Stephens' small-sample correction).
GofResult ks_test(std::span<const double> samples, const Cdf& cdf);

/// Upper tail probability of the chi-square distribution.
double chi_square_pvalue(double statistic, int dof);

struct StatSummary {
  double mean = 0.0;
  double variance = 0.0;
  double standard_error = 0.0;
  Histogram histogram;
  double gof_statistic = 0.0;
  double gof_pvalue = 0.0;
};

/// Sample moments (unbiased variance), histogram and, when a reference cdf
/// is given, the chi-square goodness of fit.
StatSummary summarize(std::span<const double> samples, const Cdf& reference = {});

}  // namespace weakmeas
