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

// Numerical witnesses for the order-statistic inequalities behind the FTPL
// regret analysis.

#ifndef MSET_LEMMAS_H_
#define MSET_LEMMAS_H_

#include <cstdint>
#include <span>

#include "mset/quadrature.h"
#include "mset/random.h"

namespace mset {

// U_4(mu) / U_3(mu) at mu = -sqrt(2K / log K), where
//   U_N(mu) = int_0^inf x^{-N} exp(-K/x^2) (1 - F(x + mu)) dx.
// Requires K >= 2.
double URatioWitness(double k, double tol = kDefaultQuadratureTol);

// R_4(1) / R_3(1), where
//   R_N(mu) = int_0^inf x^{-N} exp(-K/x^2) (1 - F(x + mu))^M dx.
// Requires K >= 1 and M >= 2K.
double RRatioWitness(int count_m, double k, double tol = kDefaultQuadratureTol);

// Monte-Carlo mean of the sum of the m largest of d i.i.d. Fréchet(2) draws.
double TopMSumEstimate(int d, int m, std::int64_t samples, Rng& rng);

// Probability that the m arms with smallest lambda are exactly the selected
// set. Requires d >= m + 1.
double WStar(std::span<const double> lambda, int m,
             double tol = kDefaultQuadratureTol);

// sum over the d - m arms outside the m smallest of gap^-2 (infinite if any
// of those gaps is zero).
double InverseSquareGapSum(std::span<const double> lambda, int m);

// True iff phi_arm(lambda) >= gap_arm^-2 / (4e) - tol. Throws
// std::domain_error unless the arm lies outside the m smallest with a
// positive gap and InverseSquareGapSum(lambda, m) < 1 / (2m).
bool PhiLowerCheck(std::span<const double> lambda, int m, int arm,
                   double tol = kDefaultQuadratureTol);

}  // namespace mset

#endif  // MSET_LEMMAS_H_
