// Copyright 2026 The Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "mset/ftpl.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

#include <gtest/gtest.h>

#include "mset/phi.h"

namespace mset {
namespace {

std::vector<int> Arms(const ActionSet& a) {
  return std::vector<int>(a.arms().begin(), a.arms().end());
}

TEST(ActionSetTest, Validation) {
  EXPECT_NO_THROW(ActionSet({0, 2, 5}, 6));
  EXPECT_THROW(ActionSet({2, 0}, 6), std::invalid_argument);
  EXPECT_THROW(ActionSet({0, 0}, 6), std::invalid_argument);
  EXPECT_THROW(ActionSet({0, 6}, 6), std::invalid_argument);
  EXPECT_THROW(ActionSet({-1, 2}, 6), std::invalid_argument);
  EXPECT_EQ(ActionSet::FromUnsorted({4, 1, 3}, 5), ActionSet({1, 3, 4}, 5));
  EXPECT_THROW(ActionSet::FromUnsorted({1, 1}, 5), std::invalid_argument);
  const ActionSet a = ActionSet::Prefix(3, 5);
  EXPECT_EQ(a.m(), 3);
  EXPECT_TRUE(a.Contains(2));
  EXPECT_FALSE(a.Contains(3));
  EXPECT_EQ(a.Indicator(), (std::vector<double>{1, 1, 1, 0, 0}));
}

TEST(SampleFrechetTest, InverseCdf) {
  EXPECT_NEAR(SampleFrechet(std::exp(-1.0)), 1.0, 1e-14);
  EXPECT_NEAR(SampleFrechet(std::exp(-0.25)), 2.0, 1e-14);
  EXPECT_NEAR(SampleFrechet(std::exp(-4.0)), 0.5, 1e-14);
  for (double u : {0.0, 1.0, -0.5, 1.5, std::nan("")}) {
    EXPECT_THROW(SampleFrechet(u), std::domain_error) << u;
  }
}

TEST(LearningRateTest, Schedule) {
  EXPECT_DOUBLE_EQ(LearningRate(1, 1.0), 1.0);
  EXPECT_DOUBLE_EQ(LearningRate(4, 1.0), 0.5);
  EXPECT_DOUBLE_EQ(LearningRate(100, 2.0), 0.2);
  EXPECT_THROW(LearningRate(0, 1.0), std::domain_error);
}

TEST(SelectActionTest, Examples) {
  // keys = lhat - r / eta with r = 0 reduce to lhat.
  const std::vector<double> zero(4, 0.0);
  EXPECT_EQ(Arms(SelectAction(std::vector<double>{3.2, 0.1, 5.0, 0.4}, 1.0, zero, 2)),
            (std::vector<int>{1, 3}));
  EXPECT_EQ(SelectAction(std::vector<double>{3, 1, 2, 0}, 1.0,
                         std::vector<double>{0.1, 0.2, 0.3, 0.4}, 4),
            ActionSet::Prefix(4, 4));
  const std::vector<double> r = {0.3, 2.0, 0.7, 1.1, 0.2};
  EXPECT_EQ(Arms(SelectAction(std::vector<double>(5, 0.0), 1.0, r, 2)),
            (std::vector<int>{1, 3}));
}

TEST(SelectActionTest, TiesGoToSmallerIndex) {
  const std::vector<double> lhat(5, 1.0);
  const std::vector<double> r(5, 1.0);
  EXPECT_EQ(SelectAction(lhat, 1.0, r, 3), ActionSet::Prefix(3, 5));
}

TEST(SelectActionTest, PermutationEquivarianceAndShiftInvariance) {
  Rng rng(5, 5);
  for (int trial = 0; trial < 200; ++trial) {
    const int d = 8;
    const int m = 1 + trial % 7;
    std::vector<double> lhat(d);
    for (double& v : lhat) v = 3.0 * UniformHalfOpen(rng);
    const std::vector<double> r = SamplePerturbation(d, rng);
    const ActionSet base = SelectAction(lhat, 0.7, r, m);
    ASSERT_EQ(base.m(), m);

    std::vector<int> perm(d);
    std::iota(perm.begin(), perm.end(), 0);
    std::rotate(perm.begin(), perm.begin() + 3, perm.end());
    std::vector<double> lp(d), rp(d);
    for (int i = 0; i < d; ++i) {
      lp[i] = lhat[perm[i]];
      rp[i] = r[perm[i]];
    }
    const ActionSet permuted = SelectAction(lp, 0.7, rp, m);
    std::vector<int> mapped;
    for (int i : permuted.arms()) mapped.push_back(perm[i]);
    EXPECT_EQ(ActionSet::FromUnsorted(mapped, d), base);

    std::vector<double> shifted = lhat;
    for (double& v : shifted) v += 17.25;
    EXPECT_EQ(SelectAction(shifted, 0.7, r, m), base);
  }
}

TEST(GeometricResampleTest, SymmetricMeanIsTwo) {
  // d=4, m=2, lhat=0: every arm has phi = 1/2, so E[K] = 2, Var K = 2.
  const std::vector<double> lhat(4, 0.0);
  Rng rng(11, 0);
  const int n = 100'000;
  double sum = 0.0;
  for (int k = 0; k < n; ++k) {
    sum += static_cast<double>(GeometricResample(lhat, 1.0, 1, 2, rng).count);
  }
  EXPECT_NEAR(sum / n, 2.0, 0.02);
}

TEST(GeometricResampleTest, MatchesQuadratureOracle) {
  const std::vector<double> lhat = {0.0, 0.5, 1.0, 2.0, 3.0};
  const double eta = 0.8;
  const int m = 2;
  std::vector<double> lambda(lhat.size());
  for (size_t i = 0; i < lhat.size(); ++i) lambda[i] = eta * lhat[i];
  const int arm = 3;
  const double phi = PhiQuadrature(lambda, arm, m).value;
  Rng rng(12, 0);
  const int n = 100'000;
  double sum = 0.0;
  int above5 = 0;
  for (int k = 0; k < n; ++k) {
    const auto res = GeometricResample(lhat, eta, arm, m, rng);
    sum += static_cast<double>(res.count);
    if (res.count > 5) ++above5;
  }
  const double se = std::sqrt((1.0 - phi) / (phi * phi) / n);
  EXPECT_NEAR(sum / n, 1.0 / phi, 3.0 * se);
  const double q = std::pow(1.0 - phi, 5);
  EXPECT_NEAR(static_cast<double>(above5) / n, q, 3.0 * std::sqrt(q * (1 - q) / n));
}

TEST(GeometricResampleTest, CapTruncates) {
  const std::vector<double> lhat = {0.0, 0.0, 50.0};
  Rng rng(13, 0);
  for (int k = 0; k < 100; ++k) {
    const auto res = GeometricResample(lhat, 1.0, 2, 1, rng, 1);
    EXPECT_EQ(res.count, 1u);
  }
  // Arm 2 is selected with probability well below 1e-3, so a cap of 3
  // almost always binds.
  int truncated = 0;
  for (int k = 0; k < 100; ++k) {
    const auto res = GeometricResample(lhat, 1.0, 2, 1, rng, 3);
    EXPECT_LE(res.count, 3u);
    truncated += res.truncated;
  }
  EXPECT_GT(truncated, 90);
}

TEST(FtplRoundTest, ZeroLossKeepsEstimates) {
  FtplState state = FtplState::Initial(6, 3);
  Rng rng(14, 0);
  const std::vector<double> zero(6, 0.0);
  for (int t = 0; t < 10; ++t) {
    const FtplRoundResult res = FtplRound(state, zero, rng);
    EXPECT_EQ(res.action.m(), 3);
  }
  EXPECT_EQ(state.t, 11);
  EXPECT_EQ(state.lhat, zero);
}

TEST(FtplRoundTest, RejectsLossesOutsideUnitInterval) {
  FtplState state = FtplState::Initial(3, 1);
  Rng rng(15, 0);
  EXPECT_THROW(FtplRound(state, std::vector<double>{0.0, 1.5, 0.0}, rng),
               std::domain_error);
  EXPECT_THROW(FtplRound(state, std::vector<double>{-0.1, 0.5, 0.0}, rng),
               std::domain_error);
}

TEST(FtplRoundTest, DeterministicUnderFixedSeed) {
  const auto run = [] {
    FtplState state = FtplState::Initial(5, 2);
    Rng rng(16, 3);
    Rng loss_rng(17, 0);
    std::vector<FtplRoundResult> out;
    for (int t = 0; t < 200; ++t) {
      std::vector<double> losses(5);
      for (double& v : losses) v = UniformHalfOpen(loss_rng) < 0.5 ? 1.0 : 0.0;
      out.push_back(FtplRound(state, losses, rng));
    }
    return std::pair{out, state.lhat};
  };
  const auto [a, la] = run();
  const auto [b, lb] = run();
  ASSERT_EQ(a.size(), b.size());
  for (size_t k = 0; k < a.size(); ++k) {
    EXPECT_EQ(a[k].action, b[k].action);
    EXPECT_EQ(a[k].resample_counts, b[k].resample_counts);
  }
  EXPECT_EQ(la, lb);
}

TEST(FtplRoundTest, EstimatesNondecreasingAndUpdateOnlySelected) {
  FtplState state = FtplState::Initial(6, 2);
  Rng rng(18, 0);
  const std::vector<double> losses = {0.3, 1.0, 0.0, 0.5, 0.9, 0.2};
  for (int t = 0; t < 50; ++t) {
    const std::vector<double> before = state.lhat;
    const FtplRoundResult res = FtplRound(state, losses, rng);
    for (int i = 0; i < 6; ++i) {
      EXPECT_GE(state.lhat[i], before[i]);
      if (!res.action.Contains(i)) EXPECT_EQ(state.lhat[i], before[i]);
    }
    for (int k = 0; k < res.action.m(); ++k) {
      const int arm = res.action.arms()[k];
      EXPECT_NEAR(state.lhat[arm] - before[arm],
                  losses[arm] * static_cast<double>(res.resample_counts[k]), 1e-12);
    }
  }
}

// Frozen state: E[A_i K_i] = phi_i / phi_i = 1, so the mean estimate of
// each arm equals its loss.
TEST(FtplRoundTest, EstimatorIsConditionallyUnbiased) {
  const int d = 4;
  const int m = 2;
  FtplState frozen = FtplState::Initial(d, m);
  frozen.lhat = {0.0, 0.4, 1.0, 1.5};
  frozen.t = 4;
  const std::vector<double> losses = {0.7, 1.0, 0.4, 0.9};
  Rng rng(19, 0);
  const int n = 200'000;
  std::vector<double> sum(d, 0.0);
  std::vector<double> sum_sq(d, 0.0);
  for (int k = 0; k < n; ++k) {
    FtplState state = frozen;
    FtplRound(state, losses, rng);
    for (int i = 0; i < d; ++i) {
      const double est = state.lhat[i] - frozen.lhat[i];
      sum[i] += est;
      sum_sq[i] += est * est;
    }
  }
  for (int i = 0; i < d; ++i) {
    const double mean = sum[i] / n;
    const double se = std::sqrt((sum_sq[i] / n - mean * mean) / n);
    EXPECT_NEAR(mean, losses[i], 3.0 * se) << "arm " << i;
  }
}

TEST(FtplRoundTest, SelectionFrequenciesMatchPhi) {
  const int d = 5;
  const int m = 2;
  FtplState state = FtplState::Initial(d, m);
  state.lhat = {0.0, 0.5, 0.5, 1.5, 4.0};
  state.t = 9;
  const double eta = LearningRate(state.t, state.rate_scale);
  std::vector<double> lambda(d);
  for (int i = 0; i < d; ++i) lambda[i] = eta * state.lhat[i];
  const MarginalVector w = PhiAll(lambda, m);
  Rng rng(20, 0);
  const int n = 200'000;
  std::vector<int> hits(d, 0);
  for (int k = 0; k < n; ++k) {
    const ActionSet a = FtplAct(state, rng);
    for (int arm : a.arms()) ++hits[arm];
  }
  for (int i = 0; i < d; ++i) {
    EXPECT_NEAR(static_cast<double>(hits[i]) / n, w[i],
                3.0 * std::sqrt(w[i] * (1 - w[i]) / n));
  }
}

TEST(FtplPolicyTest, CountsResampleDraws) {
  FtplPolicy policy(4, 2);
  Rng rng(21, 0);
  const std::vector<double> ones(4, 1.0);
  for (int t = 0; t < 20; ++t) {
    const ActionSet a = policy.Act(rng);
    policy.Observe(a, ones, rng);
  }
  EXPECT_GE(policy.stats().resample_draws, 40u);
  EXPECT_EQ(policy.stats().resample_truncations, 0u);
  EXPECT_EQ(policy.state().t, 21);
}

}  // namespace
}  // namespace mset
