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

#include "mset/baselines.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

#include <gtest/gtest.h>

namespace mset {
namespace {

constexpr Regularizer kAllRegularizers[] = {Regularizer::kShannon,
                                            Regularizer::kLogBarrier,
                                            Regularizer::kHybrid};

double Objective(Regularizer reg, std::span<const double> lhat, double eta,
                 std::span<const double> w) {
  double linear = 0.0;
  for (size_t i = 0; i < w.size(); ++i) linear += lhat[i] * w[i];
  return eta * linear + RegularizerValue(reg, w);
}

TEST(CappedSimplexTest, ZeroLossIsUniform) {
  const std::vector<double> lhat(7, 0.0);
  for (Regularizer reg : kAllRegularizers) {
    const auto sol = CappedSimplexSolve(lhat, 1.0, 3, reg);
    for (double w : sol.w) EXPECT_NEAR(w, 3.0 / 7.0, 1e-9) << ToString(reg);
  }
}

TEST(CappedSimplexTest, TwoPointSoftmax) {
  const std::vector<double> lhat = {0.0, std::log(2.0)};
  const auto sol = CappedSimplexSolve(lhat, 1.0, 1, Regularizer::kShannon);
  EXPECT_NEAR(sol.w[0], 2.0 / 3.0, 1e-10);
  EXPECT_NEAR(sol.w[1], 1.0 / 3.0, 1e-10);
}

// Moving mass between two coordinates must not lower the objective.
TEST(CappedSimplexTest, PairwiseExchangeOptimality) {
  Rng rng(60, 0);
  for (Regularizer reg : kAllRegularizers) {
    for (int trial = 0; trial < 40; ++trial) {
      const int d = 4 + trial % 7;
      const int m = 1 + trial % (d - 1);
      std::vector<double> lhat(d);
      for (double& v : lhat) v = 30.0 * UniformHalfOpen(rng);
      const double eta = 0.05 + UniformHalfOpen(rng);
      const auto sol = CappedSimplexSolve(lhat, eta, m, reg);
      ASSERT_NEAR(std::accumulate(sol.w.begin(), sol.w.end(), 0.0), m, 1e-8);
      const double base = Objective(reg, lhat, eta, sol.w);
      for (int i = 0; i < d; ++i) {
        for (int j = 0; j < d; ++j) {
          if (i == j) continue;
          const double room = std::min(sol.w[i] - MinimumWeight(reg), 1.0 - sol.w[j]);
          if (room <= 1e-9) continue;
          std::vector<double> moved = sol.w;
          const double step = std::min(1e-4, 0.5 * room);
          moved[i] -= step;
          moved[j] += step;
          EXPECT_GE(Objective(reg, lhat, eta, moved), base - 1e-12)
              << ToString(reg) << " trial " << trial << " " << i << "->" << j;
        }
      }
    }
  }
}

TEST(CappedSimplexTest, ExtremeLossesStayFeasible) {
  for (Regularizer reg : kAllRegularizers) {
    const std::vector<double> lhat = {0.0, 1e6, 1e-3, 5e5, 2.0};
    const auto sol = CappedSimplexSolve(lhat, 1.0, 2, reg);
    EXPECT_NEAR(std::accumulate(sol.w.begin(), sol.w.end(), 0.0), 2.0, 1e-8);
    for (double w : sol.w) {
      EXPECT_GE(w, MinimumWeight(reg));
      EXPECT_LE(w, 1.0);
    }
  }
}

TEST(CappedSimplexTest, RejectsBadArguments) {
  const std::vector<double> lhat(3, 0.0);
  EXPECT_THROW(CappedSimplexSolve(lhat, 1.0, 0, Regularizer::kShannon),
               std::invalid_argument);
  EXPECT_THROW(CappedSimplexSolve(lhat, 0.0, 1, Regularizer::kShannon),
               std::invalid_argument);
}

TEST(MadowTest, DeterministicWeights) {
  Rng rng(61, 0);
  const std::vector<double> w = {1.0, 1.0, 0.0, 0.0};
  for (int k = 0; k < 100; ++k) EXPECT_EQ(MadowSample(w, 2, rng), ActionSet::Prefix(2, 4));
}

TEST(MadowTest, InclusionFrequenciesMatchWeights) {
  Rng rng(62, 0);
  const std::vector<double> w = {0.9, 0.15, 0.55, 0.4, 0.7, 0.3};
  const int m = 3;
  const int n = 400'000;
  std::vector<int> hits(w.size(), 0);
  for (int k = 0; k < n; ++k) {
    const ActionSet a = MadowSample(w, m, rng);
    ASSERT_EQ(a.m(), m);
    for (int arm : a.arms()) ++hits[arm];
  }
  for (size_t i = 0; i < w.size(); ++i) {
    EXPECT_NEAR(static_cast<double>(hits[i]) / n, w[i],
                3.0 * std::sqrt(w[i] * (1 - w[i]) / n));
  }
}

TEST(MadowTest, RejectsInfeasibleWeights) {
  Rng rng(63, 0);
  EXPECT_THROW(MadowSample(std::vector<double>{0.5, 0.4}, 1, rng), std::domain_error);
  EXPECT_THROW(MadowSample(std::vector<double>{1.5, -0.5}, 1, rng), std::domain_error);
}

TEST(FtrlTest, ZeroLossLeavesEstimatesUnchanged) {
  for (Regularizer reg : kAllRegularizers) {
    FtrlState state = FtrlState::Initial(5, 2, reg);
    Rng rng(64, 0);
    const std::vector<double> zero(5, 0.0);
    for (int t = 0; t < 20; ++t) {
      const FtrlRoundResult res = FtrlRound(state, zero, rng);
      EXPECT_EQ(res.action.m(), 2);
    }
    EXPECT_EQ(state.lhat, zero);
    EXPECT_EQ(state.t, 21);
  }
}

TEST(FtrlTest, ImportanceWeightedUpdate) {
  FtrlState state = FtrlState::Initial(4, 2, Regularizer::kShannon);
  const ActionSet action({0, 3}, 4);
  const std::vector<double> w = {0.5, 0.5, 0.5, 0.25};
  FtrlUpdate(state, action, w, std::vector<double>{1.0, 1.0, 1.0, 0.5});
  EXPECT_EQ(state.lhat, (std::vector<double>{2.0, 0.0, 0.0, 2.0}));
}

TEST(FtrlPolicyTest, Names) {
  EXPECT_EQ(FtrlPolicy(3, 1, Regularizer::kShannon).name(), "exp2");
  EXPECT_EQ(FtrlPolicy(3, 1, Regularizer::kLogBarrier).name(), "logbarrier");
  EXPECT_EQ(FtrlPolicy(3, 1, Regularizer::kHybrid).name(), "hybrid");
}

TEST(CombUcbTest, RoundRobinInitialisation) {
  const StochasticStats stats = StochasticStats::Empty(5);
  EXPECT_EQ(CombUcbChoose(stats, 2, 1), ActionSet({0, 1}, 5));
  EXPECT_EQ(CombUcbChoose(stats, 2, 2), ActionSet({2, 3}, 5));
  EXPECT_EQ(CombUcbChoose(stats, 2, 3), ActionSet({0, 4}, 5));
}

TEST(CombUcbTest, PrefersLessPulledArmsUnderEqualMeans) {
  StochasticStats stats = StochasticStats::Empty(4);
  stats.pulls = {100, 5, 100, 7};
  stats.mean_estimates = {0.5, 0.5, 0.5, 0.5};
  EXPECT_EQ(CombUcbChoose(stats, 2, 500), ActionSet({1, 3}, 4));
}

TEST(ThompsonTest, NoDataIsSymmetric) {
  const StochasticStats stats = StochasticStats::Empty(4);
  Rng rng(65, 0);
  const int n = 100'000;
  std::vector<int> hits(4, 0);
  for (int k = 0; k < n; ++k) {
    const ActionSet a = ThompsonChoose(stats, 2, rng);
    for (int arm : a.arms()) ++hits[arm];
  }
  for (int h : hits) EXPECT_NEAR(static_cast<double>(h) / n, 0.5, 3.0 * 0.5 / std::sqrt(n));
}

TEST(ThompsonTest, HeavilyPenalisedArmIsAvoided) {
  StochasticStats stats = StochasticStats::Empty(3);
  Rng rng(66, 0);
  const std::vector<double> losses = {1.0, 0.0, 0.0};
  for (int k = 0; k < 100; ++k) stats.Record(ActionSet({0}, 3), losses, rng);
  int hits = 0;
  for (int k = 0; k < 10'000; ++k) hits += ThompsonChoose(stats, 1, rng).Contains(0);
  EXPECT_LT(hits, 5'000);
}

TEST(StochasticStatsTest, RecordsMeans) {
  StochasticStats stats = StochasticStats::Empty(3);
  Rng rng(67, 0);
  stats.Record(ActionSet({0, 2}, 3), std::vector<double>{1.0, 0.0, 0.0}, rng);
  stats.Record(ActionSet({0, 1}, 3), std::vector<double>{0.0, 1.0, 0.0}, rng);
  EXPECT_EQ(stats.pulls, (std::vector<std::int64_t>{2, 1, 1}));
  EXPECT_DOUBLE_EQ(stats.mean_estimates[0], 0.5);
  EXPECT_DOUBLE_EQ(stats.mean_estimates[1], 1.0);
  EXPECT_DOUBLE_EQ(stats.mean_estimates[2], 0.0);
  EXPECT_EQ(stats.t, 3);
}

}  // namespace
}  // namespace mset
