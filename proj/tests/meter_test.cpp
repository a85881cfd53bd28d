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
#include "weakmeas/meter.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include <gtest/gtest.h>

#include "test_util.hpp"
#include "weakmeas/quadrature.hpp"
#include "weakmeas/sequential.hpp"
#include "weakmeas/stats.hpp"

using namespace weakmeas;
using weakmeas::testing::max_abs_diff;
using weakmeas::testing::qubit_with_weight;
using weakmeas::testing::random_observable;
using weakmeas::testing::random_state;

namespace {

const Observable kPm = Observable::qubit_pm();

// Integral over [min a - 10 delta, max a + 10 delta], split at each eigenvalue
// so every Gaussian bump sits on a panel boundary.
template <class F>
double integrate_line(F f, const GaussianMeter& m, const Observable& obs, double tol = 1e-12) {
  std::vector<double> pts{obs.min_eigenvalue() - 10.0 * m.delta_p(), obs.max_eigenvalue() + 10.0 * m.delta_p()};
  for (double a : obs.eigenvalues()) pts.push_back(a);
  std::sort(pts.begin(), pts.end());
  double total = 0.0;
  for (std::size_t k = 0; k + 1 < pts.size(); ++k) {
    if (pts[k + 1] > pts[k]) total += integrate(f, pts[k], pts[k + 1], tol, tol);
  }
  return total;
}

}  // namespace

TEST(GaussianMeter, RejectsNonPositiveWidth) {
  EXPECT_THROW(GaussianMeter(0.0), InvalidArgument);
  EXPECT_THROW(GaussianMeter(-1.0), InvalidArgument);
  EXPECT_THROW(GaussianMeter(std::nan("")), InvalidArgument);
  const GaussianMeter m(2.0);
  EXPECT_NEAR(m.normalizer(), std::pow(std::numbers::pi * 4.0, -0.25), 1e-15);
}

TEST(PovmElement, PeakAndTails) {
  const GaussianMeter m(3.0);
  const std::vector<double> e = povm_element(m, kPm, -1.0);
  EXPECT_DOUBLE_EQ(e[1], m.normalizer());
  EXPECT_LT(e[0], m.normalizer());
  EXPECT_GT(e[0], 0.0);
  for (double v : povm_element(m, kPm, 1e4)) EXPECT_EQ(v, 0.0);
}

TEST(PovmElement, CompletenessByQuadrature) {
  RandomStream rng(31, 0);
  for (int t = 0; t < 10; ++t) {
    const Observable obs = random_observable(rng, 2 + t % 3, 3.0);
    const GaussianMeter m(0.3 + 5.0 * rng.uniform());
    for (std::size_t i = 0; i < obs.dim(); ++i) {
      const double v = integrate_line([&](double p) {
        const double e = povm_element(m, obs, p)[i];
        return e * e;
      }, m, obs);
      EXPECT_NEAR(v, 1.0, 1e-8);
    }
  }
}

TEST(OutcomePdf, NormalizedForRandomStates) {
  RandomStream rng(32, 0);
  for (int t = 0; t < 20; ++t) {
    const std::size_t d = 2 + static_cast<std::size_t>(t % 3);
    const Observable obs = random_observable(rng, d, 4.0);
    const QuantumState psi = random_state(rng, d);
    const GaussianMeter m(0.2 + 4.0 * rng.uniform());
    EXPECT_NEAR(integrate_line([&](double p) { return outcome_pdf(m, psi, obs, p); }, m, obs), 1.0, 1e-8);
  }
}

TEST(OutcomePdf, EqualsSquaredPovmWeightedByBorn) {
  RandomStream rng(33, 0);
  for (int t = 0; t < 200; ++t) {
    const Observable obs = random_observable(rng, 3);
    const QuantumState psi = random_state(rng, 3);
    const GaussianMeter m(0.5 + 3.0 * rng.uniform());
    const double p = 8.0 * rng.uniform() - 4.0;
    const std::vector<double> e = povm_element(m, obs, p);
    double expected = 0.0;
    for (std::size_t i = 0; i < 3; ++i) expected += e[i] * e[i] * psi.probability(i);
    EXPECT_NEAR(outcome_pdf(m, psi, obs, p), expected, 1e-15 * std::max(1.0, expected));
  }
}

TEST(OutcomePdf, EigenstateIsSingleGaussianAndSymmetricCase) {
  const GaussianMeter m(1.5);
  const double var = 1.5 * 1.5 / 2.0;
  for (double p : {-2.0, 0.3, 1.0, 4.0}) {
    const double g = std::exp(-(p - 1.0) * (p - 1.0) / (2.0 * var)) / std::sqrt(2.0 * std::numbers::pi * var);
    EXPECT_NEAR(outcome_pdf(m, QuantumState::basis(2, 0), kPm, p), g, 1e-15);
    const QuantumState sym = make_state({1.0, 1.0});
    EXPECT_NEAR(outcome_pdf(m, sym, kPm, p), outcome_pdf(m, sym, kPm, -p), 1e-16);
  }
}

TEST(OutcomeCdf, MatchesIntegratedPdf) {
  const GaussianMeter m(0.7);
  const QuantumState psi = qubit_with_weight(0.3);
  for (double p : {-3.0, -1.0, 0.0, 0.4, 2.5}) {
    const double q = integrate([&](double x) { return outcome_pdf(m, psi, kPm, x); }, -1.0 - 10.0 * 0.7, p, 1e-13, 1e-12);
    EXPECT_NEAR(outcome_cdf(m, psi, kPm, p), q, 1e-10);
  }
}

TEST(PostState, EigenstatesAreFixedPoints) {
  RandomStream rng(34, 0);
  for (int t = 0; t < 50; ++t) {
    const Observable obs = random_observable(rng, 3);
    const GaussianMeter m(0.1 + 5.0 * rng.uniform());
    const double p = 40.0 * rng.uniform() - 20.0;
    for (std::size_t i = 0; i < 3; ++i) {
      const QuantumState e = QuantumState::basis(3, i);
      EXPECT_NEAR(fidelity(post_state(m, e, obs, p), e), 1.0, 1e-15);
    }
  }
}

TEST(PostState, SymmetricPointLeavesSymmetricQubit) {
  const QuantumState sym = make_state({1.0, 1.0});
  for (double d : {0.1, 1.0, 10.0}) EXPECT_NEAR(fidelity(post_state(GaussianMeter(d), sym, kPm, 0.0), sym), 1.0, 1e-15);
}

TEST(PostState, AmplitudesFollowGaussianReweighting) {
  const GaussianMeter m(2.0);
  const QuantumState psi = make_state({Complex(0.6, 0.0), Complex(0.0, 0.8)});
  const double p = 0.7;
  CVector direct(2);
  direct(0) = psi[0] * std::exp(-(p - 1.0) * (p - 1.0) / 8.0);
  direct(1) = psi[1] * std::exp(-(p + 1.0) * (p + 1.0) / 8.0);
  direct.normalize();
  const QuantumState out = post_state(m, psi, kPm, p);
  EXPECT_LT(std::abs(out[0] - direct(0)) + std::abs(out[1] - direct(1)), 1e-15);
}

TEST(PostState, HighFidelityInsideWeakWindow) {
  RandomStream rng(35, 0);
  for (double d : {0.5, 1.0, 2.0, 5.0, 10.0, 20.0}) {
    const GaussianMeter m(d);
    for (int t = 0; t < 20; ++t) {
      const Observable obs = random_observable(rng, 2 + t % 2, 1.0);
      const QuantumState psi = random_state(rng, obs.dim());
      const double amax = std::max(std::abs(obs.min_eigenvalue()), std::abs(obs.max_eigenvalue()));
      // 1 - F grows like (p / d^2)^2 var(A) <= 1/100 across the window, so
      // the bound is only meaningful while d <= 20 max|a|.
      if (d > 20.0 * amax) continue;
      const double pmax = d * d / (10.0 * amax);
      for (int k = -10; k <= 10; ++k) {
        const double p = pmax * k / 10.0;
        EXPECT_GE(fidelity(psi, post_state(m, psi, obs, p)), 1.0 - 5.0 * amax * amax / (d * d));
      }
    }
  }
}

TEST(SampleOutcome, EigenstateMean) {
  const GaussianMeter m(4.0);
  RandomStream rng(36, 0);
  const int n = 100000;
  double sum = 0.0;
  for (int i = 0; i < n; ++i) sum += sample_outcome(m, QuantumState::basis(2, 1), kPm, rng);
  EXPECT_NEAR(sum / n, -1.0, 5.0 * m.outcome_width() / std::sqrt(n));
}

TEST(SampleOutcome, MatchesClosedFormDistribution) {
  const GaussianMeter m(0.8);
  const QuantumState psi = qubit_with_weight(0.36);
  RandomStream rng(37, 0);
  std::vector<double> x(100000);
  for (double& v : x) v = sample_outcome(m, psi, kPm, rng);
  const Cdf cdf = [&](double p) { return outcome_cdf(m, psi, kPm, p); };
  EXPECT_GT(ks_test(x, cdf).pvalue, 0.01);
  EXPECT_GT(chi_square_gof(make_histogram(x), cdf).pvalue, 0.01);
}

TEST(SampleOutcome, DeterministicForFixedSeed) {
  const GaussianMeter m(1.0);
  const QuantumState psi = qubit_with_weight(0.5);
  RandomStream a(38, 4), b(38, 4);
  for (int i = 0; i < 1000; ++i) EXPECT_EQ(sample_outcome(m, psi, kPm, a), sample_outcome(m, psi, kPm, b));
}

TEST(OutcomeMoments, Examples) {
  const Moments e = outcome_moments(GaussianMeter(3.0), QuantumState::basis(2, 0), kPm);
  EXPECT_DOUBLE_EQ(e.mean, 1.0);
  EXPECT_NEAR(e.variance, 4.5, 1e-14);
  const Moments s = outcome_moments(GaussianMeter(10.0), make_state({1.0, 1.0}), kPm);
  EXPECT_NEAR(s.mean, 0.0, 1e-15);
  EXPECT_NEAR(s.variance, 51.0, 1e-12);
}

TEST(OutcomeMoments, AgreeWithQuadrature) {
  RandomStream rng(39, 0);
  for (int t = 0; t < 10; ++t) {
    const Observable obs = random_observable(rng, 3);
    const QuantumState psi = random_state(rng, 3);
    const GaussianMeter m(0.5 + 3.0 * rng.uniform());
    const double mean = integrate_line([&](double p) { return p * outcome_pdf(m, psi, obs, p); }, m, obs);
    const double second = integrate_line([&](double p) { return p * p * outcome_pdf(m, psi, obs, p); }, m, obs);
    const Moments mo = outcome_moments(m, psi, obs);
    EXPECT_NEAR(mo.mean, mean, 1e-8);
    EXPECT_NEAR(mo.variance, second - mean * mean, 1e-8);
  }
}

TEST(AveragedPostDensity, DiagonalsAndDamping) {
  const GaussianMeter m(10.0);
  const QuantumState psi = make_state({1.0, 1.0});
  const DensityMatrix rho = averaged_post_density(m, psi, kPm);
  EXPECT_NEAR(rho(0, 0).real(), 0.5, 1e-15);
  EXPECT_NEAR(rho(1, 1).real(), 0.5, 1e-15);
  EXPECT_NEAR(rho(0, 1).real() / 0.5, std::exp(-0.01), 1e-14);
}

TEST(AveragedPostDensity, MonteCarloProjectorAverage) {
  const GaussianMeter m(10.0);
  const QuantumState psi = make_state({1.0, 1.0});
  RandomStream rng(40, 0);
  CMatrix avg = CMatrix::Zero(2, 2);
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    avg += post_state(m, psi, kPm, sample_outcome(m, psi, kPm, rng)).density().elements();
  }
  avg /= static_cast<double>(n);
  EXPECT_LT(max_abs_diff(avg, averaged_post_density(m, psi, kPm).elements()), 0.005);
}

TEST(AveragedPostDensity, QuadratureOfConditionalProjectors) {
  RandomStream rng(41, 0);
  const Observable obs({-1.0, 0.5, 2.0});
  const GaussianMeter m(1.3);
  const QuantumState psi = random_state(rng, 3);
  const DensityMatrix rho = averaged_post_density(m, psi, obs);
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      const double re = integrate_line([&](double p) {
        return outcome_pdf(m, psi, obs, p) * (post_state(m, psi, obs, p)[i] * std::conj(post_state(m, psi, obs, p)[j])).real();
      }, m, obs, 1e-10);
      const double im = integrate_line([&](double p) {
        return outcome_pdf(m, psi, obs, p) * (post_state(m, psi, obs, p)[i] * std::conj(post_state(m, psi, obs, p)[j])).imag();
      }, m, obs, 1e-10);
      EXPECT_NEAR(std::abs(rho(i, j) - Complex(re, im)), 0.0, 1e-8);
    }
  }
}

TEST(AveragedPostDensity, FirstOrderRemainderBound) {
  RandomStream rng(42, 0);
  const Observable obs({-1.0, 0.2, 1.5});
  const QuantumState psi = random_state(rng, 3);
  for (double d : {1.0, 1.5, 2.0, 4.0, 8.0, 16.0}) {
    const GaussianMeter m(d);
    const CMatrix diff = averaged_post_density(m, psi, obs).elements() - averaged_post_density_first_order(m, psi, obs);
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) {
        const double gap = obs.eigenvalue(i) - obs.eigenvalue(j);
        EXPECT_LE(std::abs(diff(i, j)), std::pow(gap, 4) / (32.0 * std::pow(d, 4)) + 1e-16);
      }
    }
  }
}

TEST(AveragedPostDensity, EqualsSingleStepSequentialAverage) {
  RandomStream rng(43, 0);
  for (int t = 0; t < 20; ++t) {
    const Observable obs = random_observable(rng, 3);
    const QuantumState psi = random_state(rng, 3);
    const GaussianMeter m(0.3 + 3.0 * rng.uniform());
    EXPECT_EQ(max_abs_diff(averaged_post_density(m, psi, obs).elements(),
                           average_reduced_density(m, obs, psi, 1).elements()),
              0.0);
  }
}
