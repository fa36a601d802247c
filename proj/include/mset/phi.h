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

// Arm-selection probabilities of the Fréchet(2) perturbed leader.
//
// phi_i(lambda) is the probability that r_i - lambda_i ranks among the m
// largest of r_1 - lambda_1, ..., r_d - lambda_d for i.i.d. Fréchet(2) r.
// Conditioning on r_i turns it into a one-dimensional integral whose inner
// factor is a Poisson-binomial lower tail, so every quadrature node costs
// O(d * m) instead of a sum over subsets.
//
// All integrals are evaluated in the variable t = 1 / (x + lambda_i), i.e.
// u = F(x + lambda_i) = exp(-t^2), which maps the half-line onto a bounded
// interval with a bounded integrand.

#ifndef MSET_PHI_H_
#define MSET_PHI_H_

#include <cstdint>
#include <span>
#include <vector>

#include "mset/quadrature.h"
#include "mset/random.h"

namespace mset {

// A point of the capped simplex {w in [0,1]^d : sum w = m}.
using MarginalVector = std::vector<double>;

// Fréchet(2) CDF exp(-1/y^2) for y > 0, and 0 otherwise.
double FrechetCdf(double y);
// 1 - FrechetCdf(y), computed without cancellation.
double FrechetSurvival(double y);

// P(X <= threshold) for X a sum of independent Bernoulli(p_q).
// Throws std::domain_error if some p_q lies outside [0, 1], and
// std::invalid_argument if threshold is negative or exceeds |p|.
double PoissonBinomialTail(std::span<const double> p, int threshold);

// phi_arm(lambda) by quadrature, with abs_error_estimate <= tol.
QuadratureResult PhiQuadrature(std::span<const double> lambda, int arm, int m,
                               double tol = kDefaultQuadratureTol);

// phi for every arm. Throws std::runtime_error if the entries do not sum to
// m within d * tol.
MarginalVector PhiAll(std::span<const double> lambda, int m,
                      double tol = kDefaultQuadratureTol);

struct MonteCarloMarginals {
  MarginalVector frequencies;
  std::vector<double> standard_errors;  // binomial, per arm
};

// Selection frequencies over `samples` independent perturbations.
MonteCarloMarginals PhiMonteCarlo(std::span<const double> lambda, int m,
                                  std::int64_t samples, Rng& rng);

// The order-statistic integral
//   V_{arm,N}(lambda) = int_{y>0} y^{-N} exp(-1/y^2) P(at most m-1 others
//                       exceed y - lambda_arm) dy,
// so that phi_arm = 2 V_{arm,3}. Requires order >= 2.
QuadratureResult VIntegral(std::span<const double> lambda, int arm, int order,
                           int m, double tol = kDefaultQuadratureTol);

// Gaps from the m-th smallest entry: (lambda_i - lambda_(m))^+.
std::vector<double> LowerGaps(std::span<const double> lambda, int m);

}  // namespace mset

#endif  // MSET_PHI_H_
