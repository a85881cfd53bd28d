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
#include "weakmeas/qcore.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

namespace weakmeas {

namespace {

constexpr double kZeroNorm = 1e-14;
constexpr double kMatrixTol = 1e-12;
constexpr double kPositivityTol = 1e-10;
constexpr double kRoundoffTol = 1e-14;

}  // namespace

QuantumState::QuantumState(CVector amps) : amps_(std::move(amps)) {
  if (amps_.size() < 2) {
    throw DimensionMismatch(fmt::format("state dimension must be at least 2, got {}", amps_.size()));
  }
  if (!amps_.allFinite()) throw InvalidArgument("state amplitudes must be finite");
  const double norm = amps_.norm();
  if (norm < kZeroNorm) throw ZeroVector("cannot normalize a zero amplitude vector");
  amps_ /= norm;
}

QuantumState QuantumState::basis(std::size_t dim, std::size_t index) {
  if (index >= dim) throw InvalidArgument(fmt::format("basis index {} out of range for dim {}", index, dim));
  CVector v = CVector::Zero(static_cast<Eigen::Index>(dim));
  v(static_cast<Eigen::Index>(index)) = 1.0;
  return QuantumState(std::move(v));
}

std::vector<double> QuantumState::probabilities() const {
  std::vector<double> p(dim());
  for (std::size_t i = 0; i < dim(); ++i) p[i] = probability(i);
  return p;
}

DensityMatrix QuantumState::density() const {
  return DensityMatrix(amps_ * amps_.adjoint());
}

QuantumState make_state(std::span<const Complex> amps) {
  CVector v(static_cast<Eigen::Index>(amps.size()));
  for (std::size_t i = 0; i < amps.size(); ++i) v(static_cast<Eigen::Index>(i)) = amps[i];
  return QuantumState(std::move(v));
}

QuantumState make_state(std::initializer_list<Complex> amps) {
  return make_state(std::span<const Complex>(amps.begin(), amps.size()));
}

double fidelity(const QuantumState& a, const QuantumState& b) {
  if (a.dim() != b.dim()) throw DimensionMismatch("fidelity of states with different dimensions");
  return std::norm(a.amplitudes().dot(b.amplitudes()));
}

DensityMatrix::DensityMatrix(CMatrix elements) : rho_(std::move(elements)) {
  if (rho_.rows() != rho_.cols() || rho_.rows() < 2) {
    throw DimensionMismatch("density matrix must be square with dimension at least 2");
  }
  if (!rho_.allFinite()) throw InvalidArgument("density matrix has non-finite entries");
  const double herm_err = (rho_ - rho_.adjoint()).cwiseAbs().maxCoeff();
  if (herm_err > kMatrixTol) {
    throw InvalidArgument(fmt::format("density matrix not Hermitian (deviation {:.3e})", herm_err));
  }
  rho_ = 0.5 * (rho_ + rho_.adjoint()).eval();
  const Complex tr = rho_.trace();
  if (std::abs(tr - 1.0) > kMatrixTol) {
    throw InvalidArgument(fmt::format("density matrix trace {:.17g} is not 1", tr.real()));
  }
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(rho_);
  Eigen::VectorXd evals = solver.eigenvalues();
  if (evals.minCoeff() < -kPositivityTol) {
    throw InvalidArgument(fmt::format("density matrix has negative eigenvalue {:.3e}", evals.minCoeff()));
  }
  // Roundoff-sized negatives are left alone so exact entries stay exact.
  if (evals.minCoeff() < -kRoundoffTol) {
    evals = evals.cwiseMax(0.0);
    evals /= evals.sum();
    const CMatrix& v = solver.eigenvectors();
    rho_ = v * evals.cast<Complex>().asDiagonal() * v.adjoint();
  }
}

DensityMatrix DensityMatrix::maximally_mixed(std::size_t dim) {
  const auto n = static_cast<Eigen::Index>(dim);
  return DensityMatrix(CMatrix::Identity(n, n) / static_cast<double>(dim));
}

Observable::Observable(std::vector<double> eigenvalues, std::vector<std::string> labels)
    : eigenvalues_(std::move(eigenvalues)), labels_(std::move(labels)) {
  if (eigenvalues_.size() < 2) throw InvalidArgument("observable needs at least two eigenvalues");
  for (double a : eigenvalues_) {
    if (!std::isfinite(a)) throw InvalidArgument("observable eigenvalues must be finite");
  }
  for (std::size_t i = 0; i < eigenvalues_.size(); ++i) {
    for (std::size_t j = i + 1; j < eigenvalues_.size(); ++j) {
      if (eigenvalues_[i] == eigenvalues_[j]) {
        throw InvalidArgument(fmt::format("degenerate eigenvalue {} at indices {} and {}",
                                          eigenvalues_[i], i, j));
      }
    }
  }
  if (labels_.empty()) {
    for (std::size_t i = 0; i < eigenvalues_.size(); ++i) labels_.push_back(fmt::format("a{}", i));
  } else if (labels_.size() != eigenvalues_.size()) {
    throw InvalidArgument("observable label count does not match eigenvalue count");
  }
}

Observable Observable::qubit_pm() { return Observable({1.0, -1.0}, {"+", "-"}); }

double Observable::min_eigenvalue() const {
  return *std::min_element(eigenvalues_.begin(), eigenvalues_.end());
}

double Observable::max_eigenvalue() const {
  return *std::max_element(eigenvalues_.begin(), eigenvalues_.end());
}

double Observable::min_gap() const {
  double gap = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < eigenvalues_.size(); ++i) {
    for (std::size_t j = i + 1; j < eigenvalues_.size(); ++j) {
      gap = std::min(gap, std::abs(eigenvalues_[i] - eigenvalues_[j]));
    }
  }
  return gap;
}

std::size_t Observable::nearest(double value) const {
  std::size_t best = 0;
  for (std::size_t i = 1; i < eigenvalues_.size(); ++i) {
    if (std::abs(value - eigenvalues_[i]) < std::abs(value - eigenvalues_[best])) best = i;
  }
  return best;
}

void require_same_dim(const QuantumState& state, const Observable& obs) {
  if (state.dim() != obs.dim()) {
    throw DimensionMismatch(
        fmt::format("state dimension {} does not match observable dimension {}", state.dim(), obs.dim()));
  }
}

double purity(const DensityMatrix& rho) {
  // tr(rho^2) = sum |rho_ij|^2 for Hermitian rho.
  return rho.elements().squaredNorm();
}

Moments expectation_and_variance(const QuantumState& state, const Observable& obs) {
  require_same_dim(state, obs);
  double mean = 0.0;
  for (std::size_t i = 0; i < state.dim(); ++i) mean += state.probability(i) * obs.eigenvalue(i);
  // Central form avoids cancellation for spectra with a large offset.
  double var = 0.0;
  for (std::size_t i = 0; i < state.dim(); ++i) {
    const double d = obs.eigenvalue(i) - mean;
    var += state.probability(i) * d * d;
  }
  return {mean, var};
}

double distance_measure(const DensityMatrix& rho, const DensityMatrix& sigma) {
  if (rho.dim() != sigma.dim()) throw DimensionMismatch("distance between matrices of different dimension");
  return 1.0 - (rho.elements() * sigma.elements()).trace().real();
}

double trace_distance(const DensityMatrix& rho, const DensityMatrix& sigma) {
  if (rho.dim() != sigma.dim()) throw DimensionMismatch("trace distance between matrices of different dimension");
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(rho.elements() - sigma.elements(), Eigen::EigenvaluesOnly);
  return 0.5 * solver.eigenvalues().cwiseAbs().sum();
}

double distance_to_nearest_eigenstate(const QuantumState& state) {
  // For pure states D(psi, phi) = sqrt(1 - |<psi|phi>|^2).
  double best = 0.0;
  for (std::size_t i = 0; i < state.dim(); ++i) best = std::max(best, state.probability(i));
  return std::sqrt(std::max(0.0, 1.0 - best));
}

StrongOutcome strong_measure(const QuantumState& state, const Observable& obs, RandomStream& rng) {
  require_same_dim(state, obs);
  const std::vector<double> weights = state.probabilities();
  const std::size_t i = rng.categorical(weights);
  return {i, obs.eigenvalue(i), QuantumState::basis(state.dim(), i)};
}

BlochVector to_bloch(const QuantumState& state) {
  if (state.dim() != 2) throw DimensionMismatch("Bloch vector is defined for qubits only");
  const Complex c = std::conj(state[0]) * state[1];
  return {c.real(), c.imag(), 0.5 * (state.probability(0) - state.probability(1))};
}

BlochVector to_bloch(const DensityMatrix& rho) {
  if (rho.dim() != 2) throw DimensionMismatch("Bloch vector is defined for qubits only");
  // rho_{10} = sx + i sy, rho_{00} - rho_{11} = 2 sz.
  const Complex r10 = rho(1, 0);
  return {r10.real(), r10.imag(), 0.5 * (rho(0, 0).real() - rho(1, 1).real())};
}

DensityMatrix state_from_bloch(const BlochVector& b) {
  if (b.norm_squared() > 0.25 + 1e-10) throw InvalidArgument("Bloch vector outside the ball |S|^2 <= 1/4");
  CMatrix rho(2, 2);
  rho(0, 0) = 0.5 + b.sz;
  rho(1, 1) = 0.5 - b.sz;
  rho(0, 1) = Complex(b.sx, -b.sy);
  rho(1, 0) = Complex(b.sx, b.sy);
  return DensityMatrix(std::move(rho));
}

}  // namespace weakmeas
