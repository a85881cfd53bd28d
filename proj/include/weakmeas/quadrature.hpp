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
#include <limits>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <fmt/format.h>

#include "weakmeas/errors.hpp"

namespace weakmeas {

/// Adaptive 31-point Gauss-Kronrod integral of `f` over [a, b].
///
/// Throws QuadratureFailure when the error estimate exceeds
/// max(abs_tol, rel_tol * |result|).
template <class F>
double integrate(F&& f, double a, double b, double abs_tol = 1e-10, double rel_tol = 1e-12,
                 unsigned max_depth = 15) {
  double err = 0.0;
  const double value = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
      f, a, b, max_depth, rel_tol, &err);
  if (!std::isfinite(value) || err > std::max(abs_tol, rel_tol * std::abs(value))) {
    throw QuadratureFailure(fmt::format("quadrature on [{}, {}] did not converge (estimate {}, error {:.3e})",
                                        a, b, value, err));
  }
  return value;
}

}  // namespace weakmeas
