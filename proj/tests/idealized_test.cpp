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

#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "test_util.hpp"

using namespace weakmeas;
using weakmeas::testing::max_abs_diff;
using weakmeas::testing::qubit_with_weight;
using weakmeas::testing::random_state;

namespace {

// Composite pointer (x) system state after the shift interaction, built
// from scratch: slot i in 1..N carries 1/sqrt(N) (alpha|up>, beta|down>),
// spin up moves to i+1 and spin down to i-1. Entry [k] holds the
// unnormalized system vector attached to pointer outcome k in 0..N+1.
std::vector<CVector> composite_branches(int n, const QuantumState& psi) {
  std::vector<CVector> branch(static_cast<std::size_t>(n + 2), CVector::Zero(2));
  const double amp = 1.0 / std::sqrt(static_cast<double>(n));
  for (int i = 1; i <= n; ++i) {
    branch[static_cast<std::size_t>(i + 1)](0) += amp * psi[0];
    branch[static_cast<std::size_t>(i - 1)](1) += amp * psi[1];
  }
  return branch;
}

struct BruteForce {
  std::vector<double> prob;
  CMatrix reduced;
  double pre_mean = 0.0, pre_var = 0.0, post_mean = 0.0, post_var = 0.0;
};

BruteForce brute_force(int n, const QuantumState& psi) {
  BruteForce b;
  const auto branch = composite_branches(n, psi);
  b.reduced = CMatrix::Zero(2, 2);
  for (std::size_t k = 0; k < branch.size(); ++k) {
    b.prob.push_back(branch[k].squaredNorm());
    b.reduced += branch[k] * branch[k].adjoint();
  }
  for (int i = 1; i <= n; ++i) b.pre_mean += static_cast<double>(i) / n;
  for (int i = 1; i <= n; ++i) b.pre_var += (i - b.pre_mean) * (i - b.pre_mean) / n;
  for (std::size_t k = 0; k < b.prob.size(); ++k) b.post_mean += static_cast<double>(k) * b.prob[k];
  for (std::size_t k = 0; k < b.prob.size(); ++k) {
    b.post_var += (static_cast<double>(k) - b.post_mean) * (static_cast<double>(k) - b.post_mean) * b.prob[k];
  }
  return b;
}

}  // namespace

TEST(IdealizedApparatus, RequiresThreeSlots) {
  EXPECT_THROW(IdealizedApparatus(2), InvalidArgument);
  EXPECT_NO_THROW(IdealizedApparatus(3));
}

TEST(OutcomeDistribution, SpinUpKillsLowBand) {
  const std::vector<double> p = outcome_distribution(IdealizedApparatus(8), QuantumState::basis(2, 0));
  ASSERT_EQ(p.size(), 10u);
  EXPECT_EQ(p[0], 0.0);
  EXPECT_EQ(p[1], 0.0);
  for (int i = 2; i <= 9; ++i) EXPECT_DOUBLE_EQ(p[static_cast<std::size_t>(i)], 0.125);
}

TEST(OutcomeDistribution, WeightedQubitMatchesComposite) {
  const QuantumState psi = qubit_with_weight(0.36);
  const std::vector<double> p = outcome_distribution(IdealizedApparatus(10), psi);
  EXPECT_NEAR(p[10], 0.036, 1e-15);
  EXPECT_NEAR(p[11], 0.036, 1e-15);
  EXPECT_NEAR(p[0], 0.064, 1e-15);
  EXPECT_NEAR(p[1], 0.064, 1e-15);
  const BruteForce b = brute_force(10, psi);
  for (std::size_t k = 0; k < p.size(); ++k) EXPECT_NEAR(p[k], b.prob[k], 1e-15);
}

TEST(OutcomeDistribution, MiddleBandCarriesNoInformation) {
  RandomStream rng(21, 0);
  const IdealizedApparatus app(12);
  const std::vector<double> ref = outcome_distribution(app, QuantumState::basis(2, 0));
  for (int t = 0; t < 100; ++t) {
    const QuantumState psi = random_state(rng, 2);
    const std::vector<double> p = outcome_distribution(app, psi);
    double total = 0.0, middle = 0.0;
    for (std::size_t k = 0; k < p.size(); ++k) {
      total += p[k];
      if (k >= 2 && k <= 11) {
        EXPECT_EQ(p[k], ref[k]);
        middle += p[k];
      }
    }
    EXPECT_NEAR(total, 1.0, 1e-12);
    EXPECT_NEAR(middle, 1.0 - 2.0 / 12.0, 1e-12);
    EXPECT_NEAR(p[12] + p[13], psi.probability(0) * 2.0 / 12.0, 1e-16);
  }
}

TEST(PostStateGivenOutcome, Bands) {
  const IdealizedApparatus app(8);
  const QuantumState psi = make_state({Complex(0.6, 0.0), Complex(0.0, 0.8)});
  EXPECT_NEAR(fidelity(post_state_given_outcome(app, psi, 3), psi), 1.0, 1e-15);
  EXPECT_NEAR(fidelity(post_state_given_outcome(app, psi, 8), QuantumState::basis(2, 0)), 1.0, 1e-15);
  EXPECT_NEAR(fidelity(post_state_given_outcome(app, psi, 9), QuantumState::basis(2, 0)), 1.0, 1e-15);
  EXPECT_NEAR(fidelity(post_state_given_outcome(app, psi, 0), QuantumState::basis(2, 1)), 1.0, 1e-15);
  EXPECT_THROW(post_state_given_outcome(app, QuantumState::basis(2, 0), 0), ImpossibleOutcome);
  EXPECT_THROW(post_state_given_outcome(app, psi, 10), ImpossibleOutcome);
  EXPECT_THROW(post_state_given_outcome(app, psi, -1), ImpossibleOutcome);
}

TEST(PostStateGivenOutcome, MatchesNormalizedCompositeBranch) {
  RandomStream rng(22, 0);
  const int n = 7;
  const IdealizedApparatus app(n);
  for (int t = 0; t < 20; ++t) {
    const QuantumState psi = random_state(rng, 2);
    const auto branch = composite_branches(n, psi);
    for (int k = 0; k <= n + 1; ++k) {
      const QuantumState expected(branch[static_cast<std::size_t>(k)]);
      EXPECT_NEAR(fidelity(post_state_given_outcome(app, psi, k), expected), 1.0, 1e-12);
    }
  }
}

TEST(ReducedDensity, Examples) {
  const DensityMatrix up = reduced_density(IdealizedApparatus(8), QuantumState::basis(2, 0));
  EXPECT_LT(max_abs_diff(up.elements(), QuantumState::basis(2, 0).density().elements()), 1e-16);

  const DensityMatrix sym = reduced_density(IdealizedApparatus(8), make_state({1.0, 1.0}));
  EXPECT_NEAR(sym(0, 1).real(), 0.375, 1e-15);
  EXPECT_NEAR(sym(1, 0).real(), 0.375, 1e-15);

  const QuantumState psi = make_state({1.0, 1.0});
  const DensityMatrix big = reduced_density(IdealizedApparatus(1000000), psi);
  EXPECT_LT(max_abs_diff(big.elements(), psi.density().elements()), 1.01e-6);

  EXPECT_THROW(reduced_density(IdealizedApparatus(8), QuantumState::basis(3, 0)), DimensionMismatch);
}

TEST(ReducedDensity, EqualsWeightedConditionalProjectors) {
  RandomStream rng(23, 0);
  const IdealizedApparatus app(9);
  for (int t = 0; t < 50; ++t) {
    const QuantumState psi = random_state(rng, 2);
    const std::vector<double> p = outcome_distribution(app, psi);
    CMatrix avg = CMatrix::Zero(2, 2);
    for (int k = 0; k <= app.max_outcome(); ++k) {
      if (p[static_cast<std::size_t>(k)] == 0.0) continue;
      avg += p[static_cast<std::size_t>(k)] * post_state_given_outcome(app, psi, k).density().elements();
    }
    EXPECT_LT(max_abs_diff(avg, reduced_density(app, psi).elements()), 1e-12);
  }
}

TEST(PurityWeak, Examples) {
  EXPECT_NEAR(purity_weak(IdealizedApparatus(8), make_state({1.0, 1.0})), 0.75, 1e-15);
  EXPECT_DOUBLE_EQ(purity_weak(IdealizedApparatus(5), QuantumState::basis(2, 0)), 1.0);
  EXPECT_NEAR(purity_weak(IdealizedApparatus(800), make_state({1.0, 1.0})), 0.9975, 1e-15);
}

TEST(PointerStats, Examples) {
  const PointerStats up = pointer_stats(IdealizedApparatus(8), QuantumState::basis(2, 0));
  EXPECT_DOUBLE_EQ(up.pre_mean, 4.5);
  EXPECT_DOUBLE_EQ(up.post_mean, 5.5);
  EXPECT_DOUBLE_EQ(up.pre_var, 5.25);
  EXPECT_DOUBLE_EQ(up.post_var, 5.25);

  const PointerStats sym = pointer_stats(IdealizedApparatus(8), make_state({1.0, 1.0}));
  EXPECT_NEAR(sym.post_mean, sym.pre_mean, 1e-15);
  EXPECT_NEAR(sym.post_var, sym.pre_var + 1.0, 1e-14);

  // Brute-force sum over the shifted band for the spin-up example.
  const BruteForce b = brute_force(8, QuantumState::basis(2, 0));
  EXPECT_NEAR(b.post_mean, 5.5, 1e-14);
}

TEST(ClosedForms, AgreeWithBruteForceOverAllOutcomes) {
  RandomStream rng(24, 0);
  for (int n = 3; n <= 50; ++n) {
    const IdealizedApparatus app(n);
    for (int t = 0; t < 10; ++t) {
      const QuantumState psi = random_state(rng, 2);
      const BruteForce b = brute_force(n, psi);
      const DensityMatrix rho = reduced_density(app, psi);
      EXPECT_LT(max_abs_diff(rho.elements(), b.reduced), 1e-10);
      EXPECT_NEAR(purity(rho), b.reduced.squaredNorm(), 1e-10);
      // The closed form keeps only the 1/N term of the exact purity.
      const double ab = psi.probability(0) * psi.probability(1);
      EXPECT_NEAR(purity_weak(app, psi) + 8.0 * ab / (n * n), b.reduced.squaredNorm(), 1e-10);
      const PointerStats ps = pointer_stats(app, psi);
      EXPECT_NEAR(ps.pre_mean, b.pre_mean, 1e-10);
      EXPECT_NEAR(ps.pre_var, b.pre_var, 1e-10);
      EXPECT_NEAR(ps.post_mean, b.post_mean, 1e-10);
      EXPECT_NEAR(ps.post_var, b.post_var, 1e-10);
    }
  }
}
