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

#include "weakmeas/meter.hpp"
#include "weakmeas/qcore.hpp"

namespace weakmeas {

/// Ordered pointer outcomes from repeated weak measurements on one copy.
class MeasurementRecord {
 public:
  /// Throws InvalidArgument if the record is empty, contains non-finite
  /// values or the observable dimension is inconsistent.
  MeasurementRecord(std::vector<double> outcomes, GaussianMeter meter, Observable obs);

  const std::vector<double>& outcomes() const noexcept { return outcomes_; }
  std::size_t size() const noexcept { return outcomes_.size(); }
  const GaussianMeter& meter() const noexcept { return meter_; }
  const Observable& observable() const noexcept { return obs_; }
  /// Mean of the outcomes.
  double mean() const;

 private:
  std::vector<double> outcomes_;
  GaussianMeter meter_;
  Observable obs_;
};

/// One single-copy realization: states[0] is the initial state and
/// states[k] the state after the k-th outcome.
struct RealizationTrace {
  MeasurementRecord record;
  std::vector<QuantumState> states;
  double y_mean = 0.0;

  const QuantumState& final_state() const { return states.back(); }
};

/// Final state and outcome average of a realization without the
/// intermediate states.
struct RealizationSummary {
  QuantumState final_state;
  double y_mean = 0.0;
};

/// One step of the schema: the state conditioned on outcome p.
QuantumState bayes_update(const QuantumState& state, const GaussianMeter& meter, const Observable& obs, double p);

/// log P(p_1, ..., p_M) for the initial state, via a max-shifted sum.
double joint_log_pdf(const MeasurementRecord& record, const QuantumState& initial);

/// State after the whole record in one log-space pass.
///
/// Outcomes are summed in sorted order, so the result is exactly invariant
/// under permutation of the record.
QuantumState state_after_record(const MeasurementRecord& record, const QuantumState& initial);

/// Sample-then-update M times with a freshly restored meter at every step.
RealizationTrace run_realization(const GaussianMeter& meter, const Observable& obs, const QuantumState& initial,
                                 int steps, RandomStream& rng);

/// Same draws as run_realization, keeping only the final state.
RealizationSummary run_realization_summary(const GaussianMeter& meter, const Observable& obs,
                                           const QuantumState& initial, int steps, RandomStream& rng);

/// Density of the outcome average y_M.
double ymean_pdf(const GaussianMeter& meter, const Observable& obs, const QuantumState& initial, int steps,
                 double y);
double ymean_cdf(const GaussianMeter& meter, const Observable& obs, const QuantumState& initial, int steps,
                 double y);

/// Average over all records of the post-measurement density matrix after
/// M steps: rho_ij exp(-M (a_i - a_j)^2 / (4 delta_p^2)).
DensityMatrix average_reduced_density(const GaussianMeter& meter, const Observable& obs,
                                      const QuantumState& initial, int steps);

/// Statistical error of y_M: delta_p / sqrt(2 M).
double outcome_mean_error(double delta_p, int steps);

/// D(eps) = sum_ij |alpha_i|^2 |alpha_j|^2 (1 - exp(-(a_i - a_j)^2 / (8 eps^2))).
/// Throws NonPositiveEpsilon unless eps > 0.
double error_disturbance(const QuantumState& initial, const Observable& obs, double epsilon);

}  // namespace weakmeas
