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
#include "weakmeas/sequential.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

#include <fmt/format.h>

namespace weakmeas {

namespace {

void require_steps(int steps) {
  if (steps < 1) throw InvalidArgument(fmt::format("number of measurements must be >= 1, got {}", steps));
}

// sum_j (p_j - a)^2 for every eigenvalue, over the sorted outcomes.
std::vector<double> squared_residuals(const MeasurementRecord& record) {
  std::vector<double> sorted = record.outcomes();
  std::sort(sorted.begin(), sorted.end());
  const Observable& obs = record.observable();
  std::vector<double> out(obs.dim(), 0.0);
  for (std::size_t i = 0; i < obs.dim(); ++i) {
    const double a = obs.eigenvalue(i);
    double acc = 0.0;
    for (double p : sorted) acc += (p - a) * (p - a);
    out[i] = acc;
  }
  return out;
}

}  // namespace

MeasurementRecord::MeasurementRecord(std::vector<double> outcomes, GaussianMeter meter, Observable obs)
    : outcomes_(std::move(outcomes)), meter_(meter), obs_(std::move(obs)) {
  if (outcomes_.empty()) throw InvalidArgument("measurement record must contain at least one outcome");
  for (double p : outcomes_) {
    if (!std::isfinite(p)) throw InvalidArgument("measurement record contains a non-finite outcome");
  }
}

double MeasurementRecord::mean() const {
  return std::accumulate(outcomes_.begin(), outcomes_.end(), 0.0) / static_cast<double>(outcomes_.size());
}

QuantumState bayes_update(const QuantumState& state, const GaussianMeter& meter, const Observable& obs, double p) {
  return post_state(meter, state, obs, p);
}

double joint_log_pdf(const MeasurementRecord& record, const QuantumState& initial) {
  require_same_dim(initial, record.observable());
  const double var = record.meter().delta_p() * record.meter().delta_p();
  const std::vector<double> ss = squared_residuals(record);
  std::vector<double> terms;
  terms.reserve(ss.size());
  for (std::size_t i = 0; i < ss.size(); ++i) {
    const double w = initial.probability(i);
    if (w > 0.0) terms.push_back(std::log(w) - ss[i] / var);
  }
  const double shift = *std::max_element(terms.begin(), terms.end());
  double sum = 0.0;
  for (double t : terms) sum += std::exp(t - shift);
  const double m = static_cast<double>(record.size());
  // (N^2)^M = (pi delta_p^2)^(-M/2).
  return -0.5 * m * std::log(std::numbers::pi * var) + shift + std::log(sum);
}

QuantumState state_after_record(const MeasurementRecord& record, const QuantumState& initial) {
  require_same_dim(initial, record.observable());
  const double two_var = 2.0 * record.meter().delta_p() * record.meter().delta_p();
  std::vector<double> log_w = squared_residuals(record);
  for (double& v : log_w) v = -v / two_var;
  return detail::reweight(initial, log_w);
}

RealizationTrace run_realization(const GaussianMeter& meter, const Observable& obs, const QuantumState& initial,
                                 int steps, RandomStream& rng) {
  require_steps(steps);
  require_same_dim(initial, obs);
  std::vector<double> outcomes;
  outcomes.reserve(static_cast<std::size_t>(steps));
  std::vector<QuantumState> states;
  states.reserve(static_cast<std::size_t>(steps) + 1);
  states.push_back(initial);
  for (int k = 0; k < steps; ++k) {
    const double p = sample_outcome(meter, states.back(), obs, rng);
    outcomes.push_back(p);
    states.push_back(bayes_update(states.back(), meter, obs, p));
  }
  MeasurementRecord record(std::move(outcomes), meter, obs);
  const double y = record.mean();
  return {std::move(record), std::move(states), y};
}

RealizationSummary run_realization_summary(const GaussianMeter& meter, const Observable& obs,
                                           const QuantumState& initial, int steps, RandomStream& rng) {
  require_steps(steps);
  require_same_dim(initial, obs);
  QuantumState state = initial;
  double sum = 0.0;
  for (int k = 0; k < steps; ++k) {
    const double p = sample_outcome(meter, state, obs, rng);
    sum += p;
    state = bayes_update(state, meter, obs, p);
  }
  return {std::move(state), sum / steps};
}

double ymean_pdf(const GaussianMeter& meter, const Observable& obs, const QuantumState& initial, int steps,
                 double y) {
  require_steps(steps);
  require_same_dim(initial, obs);
  const double var = meter.delta_p() * meter.delta_p();
  const double m = steps;
  double sum = 0.0;
  for (std::size_t i = 0; i < obs.dim(); ++i) {
    const double d = y - obs.eigenvalue(i);
    sum += initial.probability(i) * std::exp(-m * d * d / var);
  }
  return std::sqrt(m / (std::numbers::pi * var)) * sum;
}

double ymean_cdf(const GaussianMeter& meter, const Observable& obs, const QuantumState& initial, int steps,
                 double y) {
  require_steps(steps);
  require_same_dim(initial, obs);
  const double scale = std::sqrt(static_cast<double>(steps)) / meter.delta_p();
  double sum = 0.0;
  for (std::size_t i = 0; i < obs.dim(); ++i) {
    sum += initial.probability(i) * 0.5 * std::erfc(-(y - obs.eigenvalue(i)) * scale);
  }
  return sum;
}

DensityMatrix average_reduced_density(const GaussianMeter& meter, const Observable& obs,
                                      const QuantumState& initial, int steps) {
  require_steps(steps);
  require_same_dim(initial, obs);
  const double rate = static_cast<double>(steps) / (4.0 * meter.delta_p() * meter.delta_p());
  CMatrix rho = initial.amplitudes() * initial.amplitudes().adjoint();
  for (Eigen::Index i = 0; i < rho.rows(); ++i) {
    for (Eigen::Index j = 0; j < rho.cols(); ++j) {
      if (i == j) continue;
      const double gap = obs.eigenvalue(static_cast<std::size_t>(i)) - obs.eigenvalue(static_cast<std::size_t>(j));
      rho(i, j) *= std::exp(-rate * gap * gap);
    }
  }
  return DensityMatrix(std::move(rho));
}

double outcome_mean_error(double delta_p, int steps) {
  require_steps(steps);
  if (!(delta_p > 0.0)) throw InvalidArgument("delta_p must be positive");
  return delta_p / std::sqrt(2.0 * steps);
}

double error_disturbance(const QuantumState& initial, const Observable& obs, double epsilon) {
  if (!(epsilon > 0.0)) throw NonPositiveEpsilon(fmt::format("epsilon must be positive, got {}", epsilon));
  require_same_dim(initial, obs);
  const double eight_eps2 = 8.0 * epsilon * epsilon;
  double d = 0.0;
  for (std::size_t i = 0; i < obs.dim(); ++i) {
    for (std::size_t j = 0; j < obs.dim(); ++j) {
      if (i == j) continue;
      const double gap = obs.eigenvalue(i) - obs.eigenvalue(j);
      d += initial.probability(i) * initial.probability(j) * -std::expm1(-gap * gap / eight_eps2);
    }
  }
  return d;
}

}  // namespace weakmeas
