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

#include "mset/phi.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "anchored_integral.h"

namespace mset {
namespace {

void CheckLambda(std::span<const double> lambda, int m) {
  const int d = static_cast<int>(lambda.size());
  if (d < 2) throw std::invalid_argument("lambda must have d >= 2 entries");
  if (m < 1 || m > d) throw std::invalid_argument("m must lie in [1, d]");
  for (double v : lambda) {
    if (!std::isfinite(v)) throw std::invalid_argument("lambda must be finite");
  }
}

// DP over the first `threshold + 1` counts; `dp` is caller-provided scratch.
double TailWithScratch(std::span<const double> p, int threshold,
                       std::vector<double>& dp) {
  dp.assign(threshold + 1, 0.0);
  dp[0] = 1.0;
  int reach = 0;
  for (double pq : p) {
    const double q = 1.0 - pq;
    reach = std::min(reach + 1, threshold);
    for (int c = reach; c >= 1; --c) dp[c] = dp[c] * q + dp[c - 1] * pq;
    dp[0] *= q;
  }
  double total = 0.0;
  for (double v : dp) total += v;
  return std::min(1.0, std::max(0.0, total));
}

// Value of the m-th smallest entry of `values` (1-based m).
double KthSmallest(std::vector<double> values, int k) {
  std::nth_element(values.begin(), values.begin() + (k - 1), values.end());
  return values[k - 1];
}

QuadratureResult ArmIntegral(std::span<const double> lambda, int arm,
                             int order, int m, double tol) {
  const int d = static_cast<int>(lambda.size());
  if (arm < 0 || arm >= d) throw std::invalid_argument("arm out of range");
  std::vector<double> others;
  others.reserve(d - 1);
  for (int q = 0; q < d; ++q) {
    if (q != arm) others.push_back(lambda[q]);
  }
  const double anchor = lambda[arm];
  // At least m competitors are certain to beat the arm once
  // y - anchor <= -(m-th smallest competitor lambda).
  double y_low = 0.0;
  if (m <= d - 1) y_low = std::max(0.0, anchor - KthSmallest(others, m));

  std::vector<double> exceed(others.size());
  std::vector<double> scratch;
  const Integrand tail = [&](double x) {
    for (size_t k = 0; k < others.size(); ++k) {
      exceed[k] = FrechetSurvival(x + others[k]);
    }
    return TailWithScratch(exceed, m - 1, scratch);
  };
  return internal::IntegrateAnchored(anchor, y_low, others, order, tol, tail);
}

}  // namespace

namespace internal {

QuadratureResult IntegrateAnchored(double anchor, double y_low,
                                   std::span<const double> offsets, int order,
                                   double tol, const Integrand& h) {
  // t^(order-2) exp(-t^2) is below 1e-30 beyond this point for order <= 12.
  const double t_cut = 10.0 + order;
  const double t_hi = y_low > 0.0 ? std::min(1.0 / y_low, t_cut) : t_cut;
  std::vector<double> breaks = {0.0, t_hi};
  for (double c : offsets) {
    const double gap = std::abs(anchor - c);
    if (gap > 0.0) {
      const double t = 1.0 / gap;
      if (t > 0.0 && t < t_hi) breaks.push_back(t);
    }
  }
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end(),
                           [t_hi](double a, double b) {
                             return std::abs(a - b) <= 1e-12 * t_hi;
                           }),
               breaks.end());
  const int power = order - 2;
  const Integrand integrand = [&](double t) {
    const double weight = std::pow(t, power) * std::exp(-t * t);
    if (weight == 0.0) return 0.0;
    return weight * h(1.0 / t - anchor);
  };
  return IntegratePiecewise(integrand, breaks, tol);
}

}  // namespace internal

double FrechetCdf(double y) { return y > 0.0 ? std::exp(-1.0 / (y * y)) : 0.0; }

double FrechetSurvival(double y) {
  return y > 0.0 ? -std::expm1(-1.0 / (y * y)) : 1.0;
}

double PoissonBinomialTail(std::span<const double> p, int threshold) {
  if (threshold < 0 || threshold > static_cast<int>(p.size())) {
    throw std::invalid_argument("PoissonBinomialTail: threshold out of range");
  }
  for (double pq : p) {
    if (!(pq >= 0.0 && pq <= 1.0)) {
      throw std::domain_error("PoissonBinomialTail: probability outside [0,1]");
    }
  }
  std::vector<double> dp;
  return TailWithScratch(p, threshold, dp);
}

QuadratureResult PhiQuadrature(std::span<const double> lambda, int arm, int m,
                               double tol) {
  CheckLambda(lambda, m);
  if (!(tol > 0.0)) throw std::invalid_argument("tol must be positive");
  QuadratureResult v = ArmIntegral(lambda, arm, 3, m, tol / 2.0);
  v.value = std::min(1.0, std::max(0.0, 2.0 * v.value));
  v.abs_error_estimate *= 2.0;
  return v;
}

MarginalVector PhiAll(std::span<const double> lambda, int m, double tol) {
  CheckLambda(lambda, m);
  const int d = static_cast<int>(lambda.size());
  MarginalVector w(d);
  double sum = 0.0;
  for (int i = 0; i < d; ++i) {
    w[i] = PhiQuadrature(lambda, i, m, tol).value;
    sum += w[i];
  }
  if (std::abs(sum - m) > d * tol) {
    throw std::runtime_error("PhiAll: marginals sum to " + std::to_string(sum) +
                             ", expected " + std::to_string(m));
  }
  return w;
}

MonteCarloMarginals PhiMonteCarlo(std::span<const double> lambda, int m,
                                  std::int64_t samples, Rng& rng) {
  CheckLambda(lambda, m);
  if (samples < 1) throw std::invalid_argument("samples must be >= 1");
  const int d = static_cast<int>(lambda.size());
  std::vector<std::int64_t> hits(d, 0);
  std::vector<double> keys(d);
  std::vector<int> order(d);
  const auto less = [&keys](int a, int b) {
    return keys[a] < keys[b] || (keys[a] == keys[b] && a < b);
  };
  for (std::int64_t s = 0; s < samples; ++s) {
    for (int q = 0; q < d; ++q) keys[q] = lambda[q] - FrechetDraw(rng);
    std::iota(order.begin(), order.end(), 0);
    if (m < d) std::nth_element(order.begin(), order.begin() + m, order.end(), less);
    for (int k = 0; k < m; ++k) ++hits[order[k]];
  }
  MonteCarloMarginals out;
  out.frequencies.resize(d);
  out.standard_errors.resize(d);
  const double n = static_cast<double>(samples);
  for (int q = 0; q < d; ++q) {
    const double p = static_cast<double>(hits[q]) / n;
    out.frequencies[q] = p;
    out.standard_errors[q] = std::sqrt(p * (1.0 - p) / n);
  }
  return out;
}

QuadratureResult VIntegral(std::span<const double> lambda, int arm, int order,
                           int m, double tol) {
  CheckLambda(lambda, m);
  if (order < 2) throw std::invalid_argument("VIntegral: order must be >= 2");
  if (!(tol > 0.0)) throw std::invalid_argument("tol must be positive");
  return ArmIntegral(lambda, arm, order, m, tol);
}

std::vector<double> LowerGaps(std::span<const double> lambda, int m) {
  const int d = static_cast<int>(lambda.size());
  if (m < 1 || m > d) throw std::invalid_argument("m must lie in [1, d]");
  const double pivot =
      KthSmallest(std::vector<double>(lambda.begin(), lambda.end()), m);
  std::vector<double> gaps(d);
  for (int i = 0; i < d; ++i) gaps[i] = std::max(0.0, lambda[i] - pivot);
  return gaps;
}

}  // namespace mset
