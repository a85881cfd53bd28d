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
#include "weakmeas/tomo.hpp"

#include <cmath>
#include <numbers>

#include <fmt/format.h>

#include "weakmeas/quadrature.hpp"

namespace weakmeas {

namespace {

constexpr double kAdmissible = 1e-9;
constexpr double kOuterRadius = 1e4;
constexpr double kPlaneRelTol = 1e-11;

void require_qubit(const QuantumState& s) {
  if (s.dim() != 2) throw DimensionMismatch("weak-value tomography is defined for qubits only");
}

// Integral of f over the plane in polar coordinates about (x0, 0). The
// radial range [0, R] is split geometrically from `scale`; beyond R the
// integrand is taken to fall off as r^-decay.
template <class F>
double plane_integral(F&& f, double x0, double scale, int decay) {
  std::vector<double> breaks{0.0};
  for (double r = 0.25 * scale; r < kOuterRadius; r *= 4.0) breaks.push_back(r);
  breaks.push_back(kOuterRadius);

  auto radial = [&](double theta) {
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    auto g = [&](double r) { return r * f(x0 + r * c, r * s); };
    double sum = 0.0;
    for (std::size_t k = 0; k + 1 < breaks.size(); ++k) {
      sum += integrate(g, breaks[k], breaks[k + 1], 0.0, kPlaneRelTol);
    }
    // int_R^inf r f(r) dr for f ~ r^-decay.
    const double fr = f(x0 + kOuterRadius * c, kOuterRadius * s);
    return sum + kOuterRadius * kOuterRadius * fr / (decay - 2);
  };
  try {
    return integrate(radial, 0.0, 2.0 * std::numbers::pi, 0.0, kPlaneRelTol);
  } catch (const QuadratureFailure& e) {
    throw QuadratureFailure(fmt::format("plane integral failed: {}", e.what()));
  }
}

// Centre of the circularly symmetric conformal factor.
double centroid_x(const PostSelection& post) { return 0.5 * (post.weight_plus() - post.weight_minus()); }

}  // namespace

PostSelection::PostSelection(Complex b_plus, Complex b_minus) {
  const double norm = std::sqrt(std::norm(b_plus) + std::norm(b_minus));
  if (!(norm > 0.0) || !std::isfinite(norm)) throw InadmissiblePostSelection("post-selected state has zero norm");
  b_plus_ = b_plus / norm;
  b_minus_ = b_minus / norm;
  if (std::abs(b_plus_) <= kAdmissible || std::abs(b_minus_) <= kAdmissible) {
    throw InadmissiblePostSelection(fmt::format(
        "post-selection must overlap both eigenstates (|b+| = {:.3e}, |b-| = {:.3e})",
        std::abs(b_plus_), std::abs(b_minus_)));
  }
}

PostSelection PostSelection::from_weight(double weight_plus) {
  if (!(weight_plus > 0.0 && weight_plus < 1.0)) {
    throw InadmissiblePostSelection(fmt::format("|b+|^2 must lie in (0, 1), got {}", weight_plus));
  }
  return PostSelection(std::sqrt(weight_plus), std::sqrt(1.0 - weight_plus));
}

ErrorBudget::ErrorBudget(double delta_s) : delta_s_(delta_s) {
  if (!(delta_s > 0.0) || !std::isfinite(delta_s)) {
    throw InvalidArgument(fmt::format("error budget delta_s must be positive, got {}", delta_s));
  }
}

Complex weak_value(const QuantumState& pre, const PostSelection& post, Projector projector) {
  require_qubit(pre);
  const Complex up = std::conj(post.b_plus()) * pre[0];
  const Complex down = std::conj(post.b_minus()) * pre[1];
  const Complex overlap = up + down;
  if (std::abs(overlap) <= kAdmissible) {
    throw OrthogonalPostSelection(
        fmt::format("|<b|psi>| = {:.3e}; the weak value diverges", std::abs(overlap)));
  }
  return (projector == Projector::plus ? up : down) / overlap;
}

WeakValueCoord weak_value_coord(const QuantumState& pre, const PostSelection& post) {
  return WeakValueCoord(weak_value(pre, post, Projector::plus));
}

QuantumState reconstruct_state(const WeakValueCoord& w, const PostSelection& post) {
  CVector amps(2);
  amps(0) = w.w_plus() / std::conj(post.b_plus());
  amps(1) = w.w_minus() / std::conj(post.b_minus());
  return QuantumState(std::move(amps));
}

ErrorBudget statistical_error(double delta_p, long measurements) {
  if (!(delta_p > 0.0)) throw InvalidArgument("delta_p must be positive");
  if (measurements < 1) throw InvalidArgument("number of measurements must be >= 1");
  return ErrorBudget(delta_p / std::sqrt(2.0 * static_cast<double>(measurements)));
}

WeakValueCoord simulate_weak_value_estimate(const WeakValueCoord& true_w, const ErrorBudget& budget,
                                            RandomStream& rng) {
  const double dx = rng.normal(0.0, budget.delta_s());
  const double dy = rng.normal(0.0, budget.delta_s());
  return WeakValueCoord(true_w.w_plus() + Complex(dx, dy));
}

MetricComponents metric_numeric(const WeakValueCoord& w, const PostSelection& post, double h) {
  if (!(h >= 1e-7 && h <= 1e-3)) throw StepOutOfRange(fmt::format("finite-difference step {} outside [1e-7, 1e-3]", h));
  auto rho = [&](double dx, double dy) {
    const QuantumState s = reconstruct_state(WeakValueCoord::from_wz(w.w_z() + Complex(dx, dy)), post);
    return CMatrix(s.amplitudes() * s.amplitudes().adjoint());
  };
  const CMatrix drx = (rho(h, 0.0) - rho(-h, 0.0)) / (2.0 * h);
  const CMatrix dry = (rho(0.0, h) - rho(0.0, -h)) / (2.0 * h);
  MetricComponents g;
  g.g_xx = 2.0 * (drx * drx).trace().real();
  g.g_yy = 2.0 * (dry * dry).trace().real();
  g.g_xy = 2.0 * (drx * dry).trace().real();
  g.g_ww = Complex(g.g_xx - g.g_yy, -2.0 * g.g_xy) / 4.0;
  g.g_wbarwbar = std::conj(g.g_ww);
  g.g_wwbar = 0.5 * (g.g_xx + g.g_yy);
  return g;
}

double conformal_factor_analytic(double x, double y, const PostSelection& post) {
  const double d = x * x + y * y + x * (post.weight_minus() - post.weight_plus()) + 0.25;
  return 4.0 * post.weight_product() / (d * d);
}

double total_volume(const PostSelection& post) {
  const double k = post.weight_product();
  return plane_integral([&](double x, double y) { return conformal_factor_analytic(x, y, post); },
                        centroid_x(post), std::sqrt(k), 4);
}

double error_area_density(double x, double y, const PostSelection& post, const ErrorBudget& budget) {
  const double box = 4.0 * budget.delta_s() * budget.delta_s();
  return box * conformal_factor_analytic(x, y, post);
}

ErrorVolume averaged_error_volume(const PostSelection& post, const ErrorBudget& budget) {
  const double k = post.weight_product();
  const double integral = plane_integral(
      [&](double x, double y) { return error_area_density(x, y, post, budget) * conformal_factor_analytic(x, y, post); },
      centroid_x(post), std::sqrt(k), 8);
  ErrorVolume v;
  v.averaged = integral / (4.0 * std::numbers::pi);
  v.reference_closed_form = 16.0 * budget.delta_s() * budget.delta_s() / k;
  return v;
}

PostSelectionOptimum optimize_postselection(const ErrorBudget& budget) {
  int evaluations = 0;
  auto objective = [&](double t) {
    ++evaluations;
    return averaged_error_volume(PostSelection::from_weight(t), budget).averaged;
  };

  constexpr int kGrid = 19;
  std::vector<double> ts(kGrid), fs(kGrid);
  int best = 0;
  for (int i = 0; i < kGrid; ++i) {
    ts[i] = 0.05 * (i + 1);
    fs[i] = objective(ts[i]);
    if (fs[i] < fs[best]) best = i;
  }
  double lo = best > 0 ? ts[best - 1] : 1e-6;
  double hi = best + 1 < kGrid ? ts[best + 1] : 1.0 - 1e-6;

  constexpr double kInvPhi = 0.6180339887498948482;
  double x1 = hi - kInvPhi * (hi - lo);
  double x2 = lo + kInvPhi * (hi - lo);
  double f1 = objective(x1);
  double f2 = objective(x2);
  while (hi - lo > 1e-7) {
    if (f1 < f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - kInvPhi * (hi - lo);
      f1 = objective(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + kInvPhi * (hi - lo);
      f2 = objective(x2);
    }
  }
  const double t = 0.5 * (lo + hi);
  return {t, objective(t), evaluations};
}

}  // namespace weakmeas
