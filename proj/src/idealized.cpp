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
#include "weakmeas/idealized.hpp"

#include <fmt/format.h>

namespace weakmeas {

namespace {

void require_qubit(const QuantumState& state) {
  if (state.dim() != 2) {
    throw DimensionMismatch(fmt::format("idealized apparatus acts on qubits, got dimension {}", state.dim()));
  }
}

}  // namespace

IdealizedApparatus::IdealizedApparatus(int n_slots) : n_slots_(n_slots) {
  if (n_slots < 3) throw InvalidArgument(fmt::format("idealized apparatus needs N >= 3, got {}", n_slots));
}

std::vector<double> outcome_distribution(const IdealizedApparatus& app, const QuantumState& state) {
  require_qubit(state);
  const int n = app.n_slots();
  const double inv_n = 1.0 / n;
  const double up = state.probability(0);
  const double down = state.probability(1);
  std::vector<double> p(static_cast<std::size_t>(n + 2), inv_n);
  p[0] = p[1] = down * inv_n;
  p[static_cast<std::size_t>(n)] = p[static_cast<std::size_t>(n + 1)] = up * inv_n;
  return p;
}

QuantumState post_state_given_outcome(const IdealizedApparatus& app, const QuantumState& state, int i) {
  require_qubit(state);
  const int n = app.n_slots();
  if (i < app.min_outcome() || i > app.max_outcome()) {
    throw ImpossibleOutcome(fmt::format("pointer outcome {} outside 0..{}", i, n + 1));
  }
  if (i >= 2 && i <= n - 1) return state;
  const std::size_t eigen = i >= n ? 0 : 1;
  if (state.probability(eigen) == 0.0) {
    throw ImpossibleOutcome(fmt::format("pointer outcome {} has zero probability", i));
  }
  return QuantumState::basis(2, eigen);
}

DensityMatrix reduced_density(const IdealizedApparatus& app, const QuantumState& state) {
  require_qubit(state);
  CMatrix rho = state.amplitudes() * state.amplitudes().adjoint();
  const double damp = 2.0 / app.n_slots();
  rho(0, 1) -= damp * state[0] * std::conj(state[1]);
  rho(1, 0) -= damp * std::conj(state[0]) * state[1];
  return DensityMatrix(std::move(rho));
}

double purity_weak(const IdealizedApparatus& app, const QuantumState& state) {
  require_qubit(state);
  return 1.0 - 8.0 / app.n_slots() * state.probability(0) * state.probability(1);
}

PointerStats pointer_stats(const IdealizedApparatus& app, const QuantumState& state) {
  require_qubit(state);
  const double n = app.n_slots();
  const double sz = state.probability(0) - state.probability(1);
  PointerStats s;
  s.pre_mean = 0.5 * (n + 1.0);
  s.post_mean = s.pre_mean + sz;
  s.pre_var = (n * n - 1.0) / 12.0;
  s.post_var = s.pre_var + expectation_and_variance(state, Observable::qubit_pm()).variance;
  return s;
}

}  // namespace weakmeas
