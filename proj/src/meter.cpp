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
#include "weakmeas/meter.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <fmt/format.h>

namespace weakmeas {

GaussianMeter::GaussianMeter(double delta_p) : delta_p_(delta_p) {
  if (!(delta_p > 0.0) || !std::isfinite(delta_p)) {
    throw InvalidArgument(fmt::format("pointer spread delta_p must be positive, got {}", delta_p));
  }
  normalizer_ = std::pow(std::numbers::pi * delta_p * delta_p, -0.25);
}

double GaussianMeter::outcome_width() const noexcept { return delta_p_ / std::numbers::sqrt2; }

std::vector<double> povm_element(const GaussianMeter& meter, const Observable& obs, double p) {
  const double two_var = 2.0 * meter.delta_p() * meter.delta_p();
  std::vector<double> diag(obs.dim());
  for (std::size_t i = 0; i < obs.dim(); ++i) {
    const double d = p - obs.eigenvalue(i);
    diag[i] = meter.normalizer() * std::exp(-d * d / two_var);
  }
  return diag;
}

double outcome_pdf(const GaussianMeter& meter, const QuantumState& state, const Observable& obs, double p) {
  require_same_dim(state, obs);
  const double var = meter.delta_p() * meter.delta_p();
  const double n2 = meter.normalizer() * meter.normalizer();
  double sum = 0.0;
  for (std::size_t i = 0; i < obs.dim(); ++i) {
    const double d = p - obs.eigenvalue(i);
    sum += state.probability(i) * std::exp(-d * d / var);
  }
  return n2 * sum;
}

double outcome_cdf(const GaussianMeter& meter, const QuantumState& state, const Observable& obs, double p) {
  require_same_dim(state, obs);
  double sum = 0.0;
  for (std::size_t i = 0; i < obs.dim(); ++i) {
    sum += state.probability(i) * 0.5 * std::erfc(-(p - obs.eigenvalue(i)) / meter.delta_p());
  }
  return sum;
}

QuantumState post_state(const GaussianMeter& meter, const QuantumState& state, const Observable& obs, double p) {
  require_same_dim(state, obs);
  const double two_var = 2.0 * meter.delta_p() * meter.delta_p();
  std::vector<double> log_w(obs.dim());
  for (std::size_t i = 0; i < obs.dim(); ++i) {
    const double d = p - obs.eigenvalue(i);
    log_w[i] = -d * d / two_var;
  }
  return detail::reweight(state, log_w);
}

double sample_outcome(const GaussianMeter& meter, const QuantumState& state, const Observable& obs,
                      RandomStream& rng) {
  require_same_dim(state, obs);
  const std::vector<double> weights = state.probabilities();
  const std::size_t i = rng.categorical(weights);
  return rng.normal(obs.eigenvalue(i), meter.outcome_width());
}

Moments outcome_moments(const GaussianMeter& meter, const QuantumState& state, const Observable& obs) {
  const Moments a = expectation_and_variance(state, obs);
  return {a.mean, 0.5 * meter.delta_p() * meter.delta_p() + a.variance};
}

DensityMatrix averaged_post_density(const GaussianMeter& meter, const QuantumState& state, const Observable& obs) {
  require_same_dim(state, obs);
  const double rate = 1.0 / (4.0 * meter.delta_p() * meter.delta_p());
  CMatrix rho = state.amplitudes() * state.amplitudes().adjoint();
  for (Eigen::Index i = 0; i < rho.rows(); ++i) {
    for (Eigen::Index j = 0; j < rho.cols(); ++j) {
      if (i == j) continue;
      const double gap = obs.eigenvalue(static_cast<std::size_t>(i)) - obs.eigenvalue(static_cast<std::size_t>(j));
      rho(i, j) *= std::exp(-rate * gap * gap);
    }
  }
  return DensityMatrix(std::move(rho));
}

CMatrix averaged_post_density_first_order(const GaussianMeter& meter, const QuantumState& state,
                                          const Observable& obs) {
  require_same_dim(state, obs);
  const double rate = 1.0 / (4.0 * meter.delta_p() * meter.delta_p());
  CMatrix rho = state.amplitudes() * state.amplitudes().adjoint();
  for (Eigen::Index i = 0; i < rho.rows(); ++i) {
    for (Eigen::Index j = 0; j < rho.cols(); ++j) {
      const double gap = obs.eigenvalue(static_cast<std::size_t>(i)) - obs.eigenvalue(static_cast<std::size_t>(j));
      rho(i, j) *= 1.0 - rate * gap * gap;
    }
  }
  return rho;
}

namespace detail {

QuantumState reweight(const QuantumState& state, const std::vector<double>& log_weights) {
  // Shift by the largest log-amplitude so the leading component is O(1).
  double shift = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < log_weights.size(); ++i) {
    const double mag = std::abs(state[i]);
    if (mag > 0.0) shift = std::max(shift, std::log(mag) + log_weights[i]);
  }
  if (!std::isfinite(shift)) throw DegenerateRecord("no finite amplitude weight survives the update");
  CVector amps = CVector::Zero(static_cast<Eigen::Index>(state.dim()));
  for (std::size_t i = 0; i < log_weights.size(); ++i) {
    const double mag = std::abs(state[i]);
    if (mag == 0.0) continue;
    amps(static_cast<Eigen::Index>(i)) = (state[i] / mag) * std::exp(std::log(mag) + log_weights[i] - shift);
  }
  if (!amps.allFinite()) throw DegenerateRecord("amplitude weights are not finite");
  return QuantumState(std::move(amps));
}

}  // namespace detail

}  // namespace weakmeas
