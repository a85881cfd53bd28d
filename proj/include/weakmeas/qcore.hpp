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

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "weakmeas/errors.hpp"
#include "weakmeas/random.hpp"

namespace weakmeas {

using Complex = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;

class DensityMatrix;

/// Normalized pure state, stored in the eigenbasis of the measured observable.
class QuantumState {
 public:
  /// Normalizes `amps`. Throws ZeroVector if the norm is below 1e-14 and
  /// DimensionMismatch if fewer than two amplitudes are given.
  explicit QuantumState(CVector amps);

  static QuantumState basis(std::size_t dim, std::size_t index);

  std::size_t dim() const noexcept { return static_cast<std::size_t>(amps_.size()); }
  const CVector& amplitudes() const noexcept { return amps_; }
  Complex operator[](std::size_t i) const { return amps_(static_cast<Eigen::Index>(i)); }
  double probability(std::size_t i) const { return std::norm((*this)[i]); }
  std::vector<double> probabilities() const;

  DensityMatrix density() const;

 private:
  CVector amps_;
};

QuantumState make_state(std::span<const Complex> amps);
QuantumState make_state(std::initializer_list<Complex> amps);

/// |<a|b>|^2.
double fidelity(const QuantumState& a, const QuantumState& b);

/// Hermitian, unit-trace, positive semidefinite matrix.
///
/// Construction validates all three properties (Hermiticity and trace to
/// 1e-12, eigenvalues to -1e-10). Eigenvalues in (-1e-10, 0) are clamped to
/// zero and the trace restored.
class DensityMatrix {
 public:
  explicit DensityMatrix(CMatrix elements);

  std::size_t dim() const noexcept { return static_cast<std::size_t>(rho_.rows()); }
  const CMatrix& elements() const noexcept { return rho_; }
  Complex operator()(std::size_t i, std::size_t j) const {
    return rho_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  }

  static DensityMatrix maximally_mixed(std::size_t dim);

 private:
  CMatrix rho_;
};

/// Non-degenerate spectrum of the measured observable.
class Observable {
 public:
  /// Labels default to "a0", "a1", ... Throws InvalidArgument on repeated
  /// eigenvalues, non-finite values, fewer than two eigenvalues, or a label
  /// count that does not match.
  explicit Observable(std::vector<double> eigenvalues, std::vector<std::string> labels = {});

  /// The +-1 spin observable with labels "+" and "-" (index 0 is spin up).
  static Observable qubit_pm();

  std::size_t dim() const noexcept { return eigenvalues_.size(); }
  const std::vector<double>& eigenvalues() const noexcept { return eigenvalues_; }
  double eigenvalue(std::size_t i) const { return eigenvalues_.at(i); }
  const std::string& label(std::size_t i) const { return labels_.at(i); }
  double min_eigenvalue() const;
  double max_eigenvalue() const;
  /// Smallest distance between two eigenvalues.
  double min_gap() const;
  /// Index of the eigenvalue closest to `value` (lowest index on ties).
  std::size_t nearest(double value) const;

 private:
  std::vector<double> eigenvalues_;
  std::vector<std::string> labels_;
};

/// Expectation values of the spin components S = sigma / 2.
struct BlochVector {
  double sx = 0.0;
  double sy = 0.0;
  double sz = 0.0;

  double norm_squared() const noexcept { return sx * sx + sy * sy + sz * sz; }
};

struct Moments {
  double mean = 0.0;
  double variance = 0.0;
};

struct StrongOutcome {
  std::size_t index = 0;
  double eigenvalue = 0.0;
  QuantumState post_state;
};

void require_same_dim(const QuantumState& state, const Observable& obs);

double purity(const DensityMatrix& rho);

Moments expectation_and_variance(const QuantumState& state, const Observable& obs);

/// 1 - tr(rho sigma).
double distance_measure(const DensityMatrix& rho, const DensityMatrix& sigma);

/// Half the trace norm of rho - sigma.
double trace_distance(const DensityMatrix& rho, const DensityMatrix& sigma);

/// Trace distance from a pure state to the closest eigenbasis projector.
double distance_to_nearest_eigenstate(const QuantumState& state);

/// Projective measurement in the eigenbasis.
StrongOutcome strong_measure(const QuantumState& state, const Observable& obs, RandomStream& rng);

BlochVector to_bloch(const QuantumState& state);
BlochVector to_bloch(const DensityMatrix& rho);
/// rho = I/2 + sx sigma_x + sy sigma_y + sz sigma_z. Throws InvalidArgument
/// if |S|^2 exceeds 1/4 beyond round-off.
DensityMatrix state_from_bloch(const BlochVector& b);

}  // namespace weakmeas
