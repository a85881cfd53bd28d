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
#include "weakmeas/lg.hpp"

#include <cmath>
#include <limits>
#include <vector>

#include <fmt/format.h>

#include "weakmeas/parallel.hpp"

namespace weakmeas {

LGPlan::LGPlan(std::int64_t ensemble_size, double delta_p, double delta_a)
    : ensemble_size_(ensemble_size), delta_p_(delta_p), delta_a_(delta_a) {
  if (ensemble_size < 8) throw InvalidArgument(fmt::format("ensemble size must be >= 8, got {}", ensemble_size));
  if (!(delta_p > 0.0) || !std::isfinite(delta_p)) throw InvalidArgument("delta_p must be positive");
  if (!(delta_a >= 0.0) || !std::isfinite(delta_a)) throw InvalidArgument("delta_a must be non-negative");
}

double weak_error(const LGPlan& plan) {
  return plan.delta_p() * std::sqrt(2.0) / std::sqrt(static_cast<double>(plan.ensemble_size()));
}

double strong_equivalent_ensemble(const LGPlan& plan) {
  const double m = static_cast<double>(plan.ensemble_size());
  const double ratio2 = (plan.delta_a() * plan.delta_a()) / (plan.delta_p() * plan.delta_p());
  const double closed = 0.5 * m * ratio2;
  const double eps = weak_error(plan);
  const double from_error = plan.delta_a() * plan.delta_a() / (eps * eps);
  if (std::abs(closed - from_error) > 1e-12 * std::max(1.0, std::abs(closed))) {
    throw NumericalFailure(fmt::format("strong ensemble forms disagree: {} vs {}", closed, from_error));
  }
  return closed;
}

double total_strong_budget(const LGPlan& plan) { return 8.0 * strong_equivalent_ensemble(plan); }

LGReport compare(const LGPlan& plan, double spectrum_spread) {
  LGReport r;
  const double m = static_cast<double>(plan.ensemble_size());
  r.weak_error = weak_error(plan);
  r.weak_error_exact =
      std::sqrt(0.5 * plan.delta_p() * plan.delta_p() + plan.delta_a() * plan.delta_a()) / std::sqrt(m / 4.0);
  r.strong_equivalent_ensemble = strong_equivalent_ensemble(plan);
  r.total_strong_budget = 8.0 * r.strong_equivalent_ensemble;
  r.advantage_ratio = r.total_strong_budget > 0.0 ? m / r.total_strong_budget
                                                  : std::numeric_limits<double>::infinity();
  r.strong_wins = 2.0 * plan.delta_a() < plan.delta_p();
  r.copies_needed = static_cast<std::int64_t>(std::ceil(r.total_strong_budget));
  // One weak shot damps coherences by exp(-spread^2 / (4 delta_p^2)); flag
  // anything beyond a 1% effect.
  r.second_measurement_disturbed =
      spectrum_spread > 0.0 &&
      -std::expm1(-spectrum_spread * spectrum_spread / (4.0 * plan.delta_p() * plan.delta_p())) > 0.01;
  return r;
}

LGMonteCarlo lg_monte_carlo(const LGPlan& plan, const QuantumState& state, const Observable& obs,
                            int repetitions, std::uint64_t seed, unsigned workers) {
  if (repetitions < 2) throw InvalidArgument("Monte Carlo validation needs at least two repetitions");
  require_same_dim(state, obs);
  const GaussianMeter meter(plan.delta_p());
  const std::int64_t sub = plan.ensemble_size() / 4;
  std::vector<double> means(static_cast<std::size_t>(repetitions));
  parallel_for_index(means.size(), workers, [&](std::size_t r) {
    RandomStream rng = derive_stream(seed, r);
    double sum = 0.0;
    for (std::int64_t k = 0; k < sub; ++k) sum += sample_outcome(meter, state, obs, rng);
    means[r] = sum / static_cast<double>(sub);
  });
  double mu = 0.0;
  for (double v : means) mu += v;
  mu /= repetitions;
  double ss = 0.0;
  for (double v : means) ss += (v - mu) * (v - mu);
  const LGReport report = compare(plan);
  LGMonteCarlo out;
  out.repetitions = repetitions;
  out.subensemble_size = sub;
  out.empirical_standard_error = std::sqrt(ss / (repetitions - 1));
  out.weak_error = report.weak_error;
  out.weak_error_exact = report.weak_error_exact;
  return out;
}

}  // namespace weakmeas
