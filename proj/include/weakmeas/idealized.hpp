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

/// Apparatus prepared in the uniform superposition of pointer slots 1..N.
///
/// The interaction shifts the pointer by +1 for spin up and -1 for spin
/// down, so the outcomes after interaction range over 0..N+1.
class IdealizedApparatus {
 public:
  /// Throws InvalidArgument unless N >= 3.
  explicit IdealizedApparatus(int n_slots);

  int n_slots() const noexcept { return n_slots_; }
  int min_outcome() const noexcept { return 0; }
  int max_outcome() const noexcept { return n_slots_ + 1; }

 private:
  int n_slots_;
};

struct PointerStats {
  double pre_mean = 0.0;
  double post_mean = 0.0;
  double pre_var = 0.0;
  double post_var = 0.0;
};

/// Dense table indexed by outcome 0..N+1.
std::vector<double> outcome_distribution(const IdealizedApparatus& app, const QuantumState& state);

/// Conditional system state for outcome `i`. Throws ImpossibleOutcome
/// when the outcome has zero probability or lies outside 0..N+1.
QuantumState post_state_given_outcome(const IdealizedApparatus& app, const QuantumState& state, int i);

DensityMatrix reduced_density(const IdealizedApparatus& app, const QuantumState& state);

/// 1 - (8/N) |alpha|^2 |beta|^2.
double purity_weak(const IdealizedApparatus& app, const QuantumState& state);

/// Pointer mean and variance before and after interaction, for the +-1 spin.
PointerStats pointer_stats(const IdealizedApparatus& app, const QuantumState& state);

}  // namespace weakmeas
