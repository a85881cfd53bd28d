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

#include <vector>

#include "weakmeas/qcore.hpp"

namespace weakmeas {

/// Gaussian pointer of momentum width delta_p.
///
/// The apparatus wavefunction is (pi delta_p^2)^(-1/4) exp(-p^2 / (2 delta_p^2))
/// and the interaction shifts p by the eigenvalue a_i, giving a POVM that is
/// diagonal in the eigenbasis.
class GaussianMeter {
 public:
  /// Throws InvalidArgument unless delta_p is finite and positive.
  explicit GaussianMeter(double delta_p);

  double delta_p() const noexcept { return delta_p_; }
  /// (pi delta_p^2)^(-1/4).
  double normalizer() const noexcept { return normalizer_; }
  /// Standard deviation of each mixture component of the outcome density.
  double outcome_width() const noexcept;

 private:
  double delta_p_;
  double normalizer_;
};

/// Diagonal of M_p: entry i is N exp(-(p - a_i)^2 / (2 delta_p^2)).
std::vector<double> povm_element(const GaussianMeter& meter, const Observable& obs, double p);

double outcome_pdf(const GaussianMeter& meter, const QuantumState& state, const Observable& obs, double p);
double outcome_cdf(const GaussianMeter& meter, const QuantumState& state, const Observable& obs, double p);

/// Normalized M_p |psi>. Weights are shifted in log space, so any finite p
/// is safe.
QuantumState post_state(const GaussianMeter& meter, const QuantumState& state, const Observable& obs, double p);

/// Exact draw: eigen-index from the Born weights, then a Gaussian of width
/// delta_p / sqrt(2) around that eigenvalue.
double sample_outcome(const GaussianMeter& meter, const QuantumState& state, const Observable& obs,
                      RandomStream& rng);

/// mean = <A>, variance = delta_p^2 / 2 + (Delta A)^2.
Moments outcome_moments(const GaussianMeter& meter, const QuantumState& state, const Observable& obs);

/// Outcome-averaged post-measurement state:
/// rho_ij exp(-(a_i - a_j)^2 / (4 delta_p^2)).
DensityMatrix averaged_post_density(const GaussianMeter& meter, const QuantumState& state, const Observable& obs);

/// First-order expansion of averaged_post_density in 1/delta_p^2:
/// rho_ij (1 - (a_i - a_j)^2 / (4 delta_p^2)). Diagnostic only, not
/// guaranteed positive.
CMatrix averaged_post_density_first_order(const GaussianMeter& meter, const QuantumState& state,
                                          const Observable& obs);

namespace detail {

/// Multiplies amplitude i by exp(log_weights[i] - max) and renormalizes.
/// Throws DegenerateRecord when no finite weight survives.
QuantumState reweight(const QuantumState& state, const std::vector<double>& log_weights);

}  // namespace detail

}  // namespace weakmeas
