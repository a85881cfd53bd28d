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

#include <cmath>
#include <vector>

#include "weakmeas/qcore.hpp"
#include "weakmeas/random.hpp"

namespace weakmeas::testing {

/// Haar-ish random pure state: complex Gaussian amplitudes, normalized.
inline QuantumState random_state(RandomStream& rng, std::size_t dim) {
  CVector v(static_cast<Eigen::Index>(dim));
  for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = Complex(rng.normal(), rng.normal());
  return QuantumState(std::move(v));
}

/// Distinct eigenvalues spread over [-range, range].
inline Observable random_observable(RandomStream& rng, std::size_t dim, double range = 2.0) {
  std::vector<double> a;
  while (a.size() < dim) {
    const double v = range * (2.0 * rng.uniform() - 1.0);
    bool distinct = true;
    for (double b : a) distinct = distinct && std::abs(b - v) > 1e-3;
    if (distinct) a.push_back(v);
  }
  return Observable(std::move(a));
}

inline QuantumState qubit_with_weight(double weight_up) {
  return make_state({Complex(std::sqrt(weight_up), 0.0), Complex(std::sqrt(1.0 - weight_up), 0.0)});
}

inline double max_abs_diff(const CMatrix& a, const CMatrix& b) { return (a - b).cwiseAbs().maxCoeff(); }

}  // namespace weakmeas::testing
