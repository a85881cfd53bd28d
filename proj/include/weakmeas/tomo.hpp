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

/// Post-selected qubit state |b>, stored as its amplitudes <+|b>, <-|b> in
/// the eigenbasis of the measured observable. The overlaps entering weak
/// values are the conjugates <b|+-> .
class PostSelection {
 public:
  /// Normalizes the amplitudes. Throws InadmissiblePostSelection if either
  /// normalized component has modulus <= 1e-9.
  PostSelection(Complex b_plus, Complex b_minus);

  /// Real, positive amplitudes with |b+|^2 = weight_plus.
  static PostSelection from_weight(double weight_plus);

  Complex b_plus() const noexcept { return b_plus_; }
  Complex b_minus() const noexcept { return b_minus_; }
  double weight_plus() const noexcept { return std::norm(b_plus_); }
  double weight_minus() const noexcept { return std::norm(b_minus_); }
  /// |b+|^2 |b-|^2.
  double weight_product() const noexcept { return weight_plus() * weight_minus(); }

 private:
  Complex b_plus_;
  Complex b_minus_;
};

enum class Projector { plus, minus };

/// Weak value w+ of the projector onto |+>, with w- = 1 - w+ and
/// w_z = w+ - 1/2 the weak value of S_z. Geometry uses (x, y) = w_z.
class WeakValueCoord {
 public:
  explicit WeakValueCoord(Complex w_plus) noexcept : w_plus_(w_plus) {}
  static WeakValueCoord from_wz(Complex w_z) noexcept { return WeakValueCoord(w_z + 0.5); }

  Complex w_plus() const noexcept { return w_plus_; }
  Complex w_minus() const noexcept { return 1.0 - w_plus_; }
  Complex w_z() const noexcept { return w_plus_ - 0.5; }
  double x() const noexcept { return w_z().real(); }
  double y() const noexcept { return w_z().imag(); }

 private:
  Complex w_plus_;
};

/// Common standard deviation of the measured Re and Im parts.
class ErrorBudget {
 public:
  /// Throws InvalidArgument unless delta_s > 0.
  explicit ErrorBudget(double delta_s);
  double delta_s() const noexcept { return delta_s_; }

 private:
  double delta_s_;
};

/// <b|P|psi> / <b|psi>. Throws OrthogonalPostSelection when
/// |<b|psi>| <= 1e-9 and DimensionMismatch for non-qubits.
Complex weak_value(const QuantumState& pre, const PostSelection& post, Projector projector);
WeakValueCoord weak_value_coord(const QuantumState& pre, const PostSelection& post);

/// Pre-selected state (up to global phase) with the given weak value.
QuantumState reconstruct_state(const WeakValueCoord& w, const PostSelection& post);

/// delta_p / sqrt(2 M).
ErrorBudget statistical_error(double delta_p, long measurements);

/// True value plus independent N(0, delta_s^2) noise on Re and Im.
WeakValueCoord simulate_weak_value_estimate(const WeakValueCoord& true_w, const ErrorBudget& budget,
                                            RandomStream& rng);

/// Components of dl^2 = 2 tr(d rho d rho) pulled back to the (x, y) plane.
struct MetricComponents {
  double g_xx = 0.0;
  double g_yy = 0.0;
  double g_xy = 0.0;
  /// Complex-coordinate form dl^2 = g_ww dw^2 + conj(g_ww) dwbar^2 + g_wwbar |dw|^2.
  Complex g_ww;
  Complex g_wbarwbar;
  double g_wwbar = 0.0;

  /// Mean of the diagonal entries.
  double conformal_factor() const noexcept { return 0.5 * (g_xx + g_yy); }
};

/// Central finite differences of rho(x, y) built by reconstruct_state.
/// Throws StepOutOfRange unless h is in [1e-7, 1e-3].
MetricComponents metric_numeric(const WeakValueCoord& w, const PostSelection& post, double h = 1e-4);

/// 4 |b+|^2 |b-|^2 / D^2, D = x^2 + y^2 + x (|b-|^2 - |b+|^2) + 1/4.
double conformal_factor_analytic(double x, double y, const PostSelection& post);

/// Integral of the area element over the whole plane (4 pi).
double total_volume(const PostSelection& post);

/// Error area at (x, y): the (2 delta_s)^2 box scaled by the conformal
/// factor.
double error_area_density(double x, double y, const PostSelection& post, const ErrorBudget& budget);

struct ErrorVolume {
  /// Average of error_area_density over state space (area measure / 4 pi).
  double averaged = 0.0;
  /// 16 delta_s^2 / (|b+|^2 |b-|^2), reported for comparison only.
  double reference_closed_form = 0.0;
};

ErrorVolume averaged_error_volume(const PostSelection& post, const ErrorBudget& budget);

struct PostSelectionOptimum {
  double weight_plus = 0.0;
  double objective = 0.0;
  int evaluations = 0;
};

/// Minimizes averaged_error_volume over |b+|^2 in (0, 1): coarse grid, then
/// golden-section search on the bracketing cell.
PostSelectionOptimum optimize_postselection(const ErrorBudget& budget);

}  // namespace weakmeas
