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

#include <cstdint>

#include "weakmeas/meter.hpp"
#include "weakmeas/qcore.hpp"

namespace weakmeas {

/// Resource plan for a four-series, eight-measurement Leggett-Garg test on
/// an ensemble of M identical copies.
class LGPlan {
 public:
  /// Throws InvalidArgument unless M >= 8, delta_p > 0 and delta_a >= 0.
  LGPlan(std::int64_t ensemble_size, double delta_p, double delta_a);

  std::int64_t ensemble_size() const noexcept { return ensemble_size_; }
  double delta_p() const noexcept { return delta_p_; }
  double delta_a() const noexcept { return delta_a_; }

 private:
  std::int64_t ensemble_size_;
  double delta_p_;
  double delta_a_;
};

struct LGReport {
  double weak_error = 0.0;
  /// sqrt(delta_p^2 / 2 + delta_a^2) / sqrt(M / 4), the full standard error.
  double weak_error_exact = 0.0;
  double strong_equivalent_ensemble = 0.0;
  double total_strong_budget = 0.0;
  /// M / total_strong_budget; +inf for an eigenstate.
  double advantage_ratio = 0.0;
  bool strong_wins = false;
  /// ceil(total_strong_budget).
  std::int64_t copies_needed = 0;
  /// Set when delta_p is not large against the spectrum spread, so the
  /// second measurement of each series sees a visibly disturbed state.
  bool second_measurement_disturbed = false;
};

/// Weak-measurement error on each M/4 subensemble: delta_p sqrt(2) / sqrt(M).
double weak_error(const LGPlan& plan);

/// Strong ensemble size matching weak_error: (M / 2) (delta_a / delta_p)^2.
/// Cross-checks against delta_a^2 / weak_error^2 and throws
/// NumericalFailure if the two disagree beyond 1e-12 relative.
double strong_equivalent_ensemble(const LGPlan& plan);

/// 8 strong subensembles: M * 4 delta_a^2 / delta_p^2.
double total_strong_budget(const LGPlan& plan);

/// `spectrum_spread` (max - min eigenvalue) feeds only the qualitative
/// disturbance flag; pass 0 to skip it.
LGReport compare(const LGPlan& plan, double spectrum_spread = 0.0);

struct LGMonteCarlo {
  int repetitions = 0;
  std::int64_t subensemble_size = 0;
  double empirical_standard_error = 0.0;
  double weak_error = 0.0;
  double weak_error_exact = 0.0;
};

/// Draws `repetitions` weak subensembles of M/4 outcomes from the meter and
/// measures the spread of their means. Repetition r uses
/// derive_stream(seed, r), so the result does not depend on `workers`.
LGMonteCarlo lg_monte_carlo(const LGPlan& plan, const QuantumState& state, const Observable& obs,
                            int repetitions, std::uint64_t seed, unsigned workers = 1);

}  // namespace weakmeas
