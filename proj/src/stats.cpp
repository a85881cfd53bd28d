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

#include <algorithm>
#include <cmath>
#include <numeric>

#include <boost/math/distributions/chi_squared.hpp>

#include "weakmeas/errors.hpp"

namespace weakmeas {

std::size_t Histogram::total() const noexcept { return std::accumulate(counts.begin(), counts.end(), std::size_t{0}); }

namespace {

double quantile_sorted(const std::vector<double>& sorted, double q) {
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (pos - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

}  // namespace

Histogram make_histogram(std::span<const double> samples, std::optional<std::size_t> bins, std::size_t min_bins) {
  if (samples.empty()) throw InvalidArgument("cannot histogram an empty sample");
  std::vector<double> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());
  double lo = sorted.front();
  double hi = sorted.back();
  if (hi == lo) {
    lo -= 0.5;
    hi += 0.5;
  }
  std::size_t n_bins = 0;
  if (bins) {
    if (*bins == 0) throw InvalidArgument("histogram needs at least one bin");
    n_bins = *bins;
  } else {
    const double iqr = quantile_sorted(sorted, 0.75) - quantile_sorted(sorted, 0.25);
    const double width = 2.0 * iqr / std::cbrt(static_cast<double>(sorted.size()));
    n_bins = width > 0.0 ? static_cast<std::size_t>(std::ceil((hi - lo) / width)) : min_bins;
    n_bins = std::clamp<std::size_t>(n_bins, min_bins, 10000);
  }
  Histogram h;
  h.edges.resize(n_bins + 1);
  for (std::size_t k = 0; k <= n_bins; ++k) {
    h.edges[k] = lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(n_bins);
  }
  h.edges.back() = hi;
  h.counts.assign(n_bins, 0);
  const double width = (hi - lo) / static_cast<double>(n_bins);
  for (double v : sorted) {
    auto k = static_cast<std::size_t>((v - lo) / width);
    k = std::min(k, n_bins - 1);
    // Guard against round-off at the edges.
    while (k > 0 && v < h.edges[k]) --k;
    while (k + 1 < n_bins && v >= h.edges[k + 1]) ++k;
    ++h.counts[k];
  }
  return h;
}

double chi_square_pvalue(double statistic, int dof) {
  if (dof < 1) throw InvalidArgument("chi-square needs at least one degree of freedom");
  const boost::math::chi_squared dist(dof);
  return boost::math::cdf(boost::math::complement(dist, std::max(0.0, statistic)));
}

GofResult chi_square_gof(const Histogram& hist, const Cdf& cdf) {
  const double n = static_cast<double>(hist.total());
  if (n == 0) throw InvalidArgument("empty histogram");
  std::vector<double> expected(hist.bins());
  for (std::size_t k = 0; k < hist.bins(); ++k) {
    const double a = k == 0 ? 0.0 : cdf(hist.edges[k]);
    const double b = k + 1 == hist.bins() ? 1.0 : cdf(hist.edges[k + 1]);
    expected[k] = n * (b - a);
  }
  std::vector<double> cell_obs, cell_exp;
  double acc_o = 0.0, acc_e = 0.0;
  for (std::size_t k = 0; k < hist.bins(); ++k) {
    acc_o += static_cast<double>(hist.counts[k]);
    acc_e += expected[k];
    if (acc_e >= 5.0) {
      cell_obs.push_back(acc_o);
      cell_exp.push_back(acc_e);
      acc_o = acc_e = 0.0;
    }
  }
  if (acc_e > 0.0 || acc_o > 0.0) {
    if (cell_exp.empty()) {
      cell_obs.push_back(acc_o);
      cell_exp.push_back(acc_e);
    } else {
      cell_obs.back() += acc_o;
      cell_exp.back() += acc_e;
    }
  }
  if (cell_exp.size() < 2) throw InvalidArgument("too few cells for a chi-square test");
  GofResult r;
  for (std::size_t c = 0; c < cell_exp.size(); ++c) {
    const double d = cell_obs[c] - cell_exp[c];
    r.statistic += d * d / cell_exp[c];
  }
  r.cells = static_cast<int>(cell_exp.size());
  r.dof = r.cells - 1;
  r.pvalue = chi_square_pvalue(r.statistic, r.dof);
  return r;
}

GofResult ks_test(std::span<const double> samples, const Cdf& cdf) {
  if (samples.empty()) throw InvalidArgument("empty sample");
  std::vector<double> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());
  const double n = static_cast<double>(sorted.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const double f = cdf(sorted[i]);
    d = std::max({d, f - static_cast<double>(i) / n, static_cast<double>(i + 1) / n - f});
  }
  const double sqrt_n = std::sqrt(n);
  const double lambda = (sqrt_n + 0.12 + 0.11 / sqrt_n) * d;
  // Q_KS(lambda) = 2 sum_k (-1)^(k-1) exp(-2 k^2 lambda^2).
  double q = 0.0;
  if (lambda < 0.2) {
    q = 1.0;
  } else {
    double sign = 1.0;
    for (int k = 1; k <= 100; ++k) {
      const double term = sign * std::exp(-2.0 * k * k * lambda * lambda);
      q += term;
      if (std::abs(term) < 1e-16) break;
      sign = -sign;
    }
    q = std::clamp(2.0 * q, 0.0, 1.0);
  }
  GofResult r;
  r.statistic = d;
  r.pvalue = q;
  r.cells = static_cast<int>(sorted.size());
  return r;
}

StatSummary summarize(std::span<const double> samples, const Cdf& reference) {
  if (samples.size() < 2) throw InvalidArgument("summary needs at least two samples");
  StatSummary s;
  const double n = static_cast<double>(samples.size());
  s.mean = std::accumulate(samples.begin(), samples.end(), 0.0) / n;
  double ss = 0.0;
  for (double v : samples) ss += (v - s.mean) * (v - s.mean);
  s.variance = ss / (n - 1.0);
  s.standard_error = std::sqrt(s.variance / n);
  s.histogram = make_histogram(samples);
  if (reference) {
    const GofResult g = chi_square_gof(s.histogram, reference);
    s.gof_statistic = g.statistic;
    s.gof_pvalue = g.pvalue;
  }
  return s;
}

}  // namespace weakmeas
