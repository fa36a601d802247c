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

#include "mset/lemmas.h"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <vector>

#include <gtest/gtest.h>

#include "mset/ftpl.h"

namespace mset {
namespace {

// Reference values from an independent mpmath evaluation at 30 digits.
TEST(WitnessTest, URatioFrozenValues) {
  EXPECT_NEAR(URatioWitness(100.0), 0.151014113, 1e-8);
  EXPECT_NEAR(URatioWitness(1e4), 0.0224004812, 1e-9);
  EXPECT_THROW(URatioWitness(1.5), std::domain_error);
}

TEST(WitnessTest, RRatioFrozenValues) {
  EXPECT_NEAR(RRatioWitness(64, 2.0), 2.66457157, 1e-7);
  EXPECT_NEAR(RRatioWitness(512, 4.0), 4.20463497, 1e-7);
  EXPECT_THROW(RRatioWitness(3, 2.0), std::domain_error);
}

TEST(WitnessTest, URatioScaledIsStable) {
  for (double k : {100.0, 1e3, 1e4}) {
    const double scaled = URatioWitness(k) * std::sqrt(k / std::log(k));
    EXPECT_GT(scaled, 0.6) << k;
    EXPECT_LT(scaled, 0.8) << k;
  }
}

TEST(TopMSumTest, MaximumMatchesClosedForm) {
  // E[max of d Frechet(2)] = sqrt(pi d) since the maximum is sqrt(d) times
  // a Frechet(2) draw with mean Gamma(1/2).
  Rng rng(40, 0);
  const double estimate = TopMSumEstimate(10, 1, 400'000, rng);
  EXPECT_NEAR(estimate, std::sqrt(std::numbers::pi * 10.0), 0.1);
}

TEST(TopMSumTest, BelowSquareRootBound) {
  Rng rng(41, 0);
  for (auto [d, m] : {std::pair{10, 5}, std::pair{100, 10}}) {
    const double estimate = TopMSumEstimate(d, m, 50'000, rng);
    EXPECT_LE(estimate, 2.0 * std::sqrt(d * m) * std::sqrt(std::numbers::pi));
    EXPECT_GT(estimate, 0.0);
  }
}

TEST(WStarTest, SymmetricPairIsHalf) {
  EXPECT_NEAR(WStar(std::vector<double>{0.0, 0.0}, 1), 0.5, 1e-8);
}

TEST(WStarTest, MatchesSimulatedSelection) {
  const std::vector<double> lambda = {0.0, 0.4, 1.5, 2.0, 3.0};
  const int m = 2;
  const double w = WStar(lambda, m);
  Rng rng(42, 0);
  const int n = 200'000;
  int hits = 0;
  for (int k = 0; k < n; ++k) {
    const ActionSet a = SelectAction(lambda, 1.0, SamplePerturbation(5, rng), m);
    if (a == ActionSet::Prefix(m, 5)) ++hits;
  }
  EXPECT_NEAR(static_cast<double>(hits) / n, w, 3.0 * std::sqrt(w * (1 - w) / n));
}

TEST(WStarTest, LargeGapsGiveHighProbability) {
  const std::vector<double> lambda = {0.0, 0.0, 20.0, 20.0, 20.0};
  EXPECT_GT(WStar(lambda, 2), 0.95);
}

TEST(InverseSquareGapSumTest, Values) {
  EXPECT_DOUBLE_EQ(InverseSquareGapSum(std::vector<double>{0.0, 1.0, 2.0, 4.0}, 2),
                   1.0 + 1.0 / 9.0);
  EXPECT_EQ(InverseSquareGapSum(std::vector<double>{0.0, 1.0, 1.0}, 2),
            std::numeric_limits<double>::infinity());
}

TEST(PhiLowerCheckTest, HoldsWhenGapsAreLarge) {
  const std::vector<double> lambda = {0.0, 0.0, 10.0, 12.0};
  EXPECT_TRUE(PhiLowerCheck(lambda, 2, 2));
  EXPECT_TRUE(PhiLowerCheck(lambda, 2, 3));
  EXPECT_THROW(PhiLowerCheck(lambda, 2, 0), std::domain_error);
  EXPECT_THROW(PhiLowerCheck(std::vector<double>{0.0, 0.5, 1.0}, 1, 2),
               std::domain_error);
}

}  // namespace
}  // namespace mset
