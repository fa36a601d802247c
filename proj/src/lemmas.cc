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

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "anchored_integral.h"
#include "mset/phi.h"

namespace mset {
namespace {

// For integrands of the form x^{-N} exp(-K/x^2) g(x), substituting
// s = sqrt(K) / x gives K^{-(N-1)/2} int s^{N-2} exp(-s^2) g(sqrt(K)/s) ds,
// so the N=4 over N=3 ratio is K^{-1/2} times a ratio of s-moments.
// `log_g` is evaluated in the s variable. Both moments are scaled by the
// same constant before integration so that tiny g (e.g. g = h^M) does not
// underflow.
template <typename LogG>
double ScaledMomentRatio(double k, const LogG& log_g, double s_max,
                         std::vector<double> breaks, double tol) {
  const auto log_f = [&](double s, int power) {
    return power * std::log(s) - s * s + log_g(s);
  };
  constexpr int kGrid = 4000;
  double shift = -std::numeric_limits<double>::infinity();
  double s_peak = s_max;
  for (int j = 1; j <= kGrid; ++j) {
    const double s = s_max * j / kGrid;
    const double v = log_f(s, 1);
    if (v > shift) {
      shift = v;
      s_peak = s;
    }
  }
  if (!std::isfinite(shift)) {
    throw std::runtime_error("moment ratio: integrand vanishes on the grid");
  }
  double s_hi = s_max;
  for (int j = kGrid; j >= 1; --j) {
    const double s = s_max * j / kGrid;
    if (std::max(log_f(s, 1), log_f(s, 2)) - shift > -60.0) {
      s_hi = std::min(s_max, s + 2.0 * s_max / kGrid);
      break;
    }
  }
  breaks.push_back(0.0);
  breaks.push_back(s_hi);
  for (int j = 1; j < 8; ++j) breaks.push_back(s_hi * j / 8.0);
  if (s_peak < s_hi) breaks.push_back(s_peak);
  std::erase_if(breaks, [s_hi](double b) { return b < 0.0 || b > s_hi; });
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());

  const auto moment = [&](int power) {
    const Integrand f = [&](double s) {
      return std::exp(log_f(s, power) - shift);
    };
    return IntegratePiecewise(f, breaks, tol).value;
  };
  const double second = moment(2);
  const double first = moment(1);
  return second / (first * std::sqrt(k));
}

std::vector<int> AscendingOrder(std::span<const double> lambda) {
  std::vector<int> order(lambda.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return lambda[a] < lambda[b]; });
  return order;
}

}  // namespace

double URatioWitness(double k, double tol) {
  if (!(k >= 2.0)) throw std::domain_error("URatioWitness: K must be >= 2");
  const double sqrt_k = std::sqrt(k);
  const double mu = -std::sqrt(2.0 * k / std::log(k));
  // 1 - F(x + mu) equals 1 once x <= -mu, i.e. for s >= sqrt(K) / |mu|.
  const double s_switch = sqrt_k / -mu;
  const auto log_g = [&](double s) {
    return std::log(FrechetSurvival(sqrt_k / s + mu));
  };
  return ScaledMomentRatio(k, log_g, 14.0, {s_switch}, tol);
}

double RRatioWitness(int count_m, double k, double tol) {
  if (!(k >= 1.0)) throw std::domain_error("RRatioWitness: K must be >= 1");
  if (!(count_m >= 2.0 * k)) {
    throw std::domain_error("RRatioWitness: requires M >= 2K");
  }
  const double sqrt_k = std::sqrt(k);
  const auto log_g = [&](double s) {
    return count_m * std::log(FrechetSurvival(sqrt_k / s + 1.0));
  };
  // The scaled integrand peaks near s ~ (M sqrt K)^(1/3).
  const double s_max = 14.0 + 4.0 * std::cbrt(count_m * sqrt_k);
  return ScaledMomentRatio(k, log_g, s_max, {}, tol);
}

double TopMSumEstimate(int d, int m, std::int64_t samples, Rng& rng) {
  if (d < 1 || m < 1 || m > d) {
    throw std::invalid_argument("TopMSumEstimate: need 1 <= m <= d");
  }
  if (samples < 1) throw std::invalid_argument("samples must be >= 1");
  std::vector<double> draws(d);
  double total = 0.0;
  for (std::int64_t s = 0; s < samples; ++s) {
    for (double& x : draws) x = FrechetDraw(rng);
    std::nth_element(draws.begin(), draws.begin() + (d - m), draws.end());
    double top = 0.0;
    for (int j = d - m; j < d; ++j) top += draws[j];
    total += top;
  }
  return total / static_cast<double>(samples);
}

double WStar(std::span<const double> lambda, int m, double tol) {
  const int d = static_cast<int>(lambda.size());
  if (m < 1 || d < m + 1) throw std::invalid_argument("WStar: need d >= m + 1");
  const std::vector<int> order = AscendingOrder(lambda);
  std::vector<double> sorted(d);
  for (int j = 0; j < d; ++j) sorted[j] = lambda[order[j]];

  // Sum over which bottom-group arm attains the bottom-group maximum of
  // r - lambda: the others stay below it and every top-group arm above it.
  double total = 0.0;
  const double term_tol = tol / (2.0 * (d - m));
  for (int j = m; j < d; ++j) {
    double lowest_other = std::numeric_limits<double>::infinity();
    for (int k = m; k < d; ++k) {
      if (k != j) lowest_other = std::min(lowest_other, sorted[k]);
    }
    const double y_low =
        std::isfinite(lowest_other) ? std::max(0.0, sorted[j] - lowest_other) : 0.0;
    const Integrand h = [&](double x) {
      double value = 1.0;
      for (int k = m; k < d && value > 0.0; ++k) {
        if (k != j) value *= FrechetCdf(x + sorted[k]);
      }
      for (int i = 0; i < m && value > 0.0; ++i) {
        value *= FrechetSurvival(x + sorted[i]);
      }
      return value;
    };
    total += 2.0 * internal::IntegrateAnchored(sorted[j], y_low, sorted, 3,
                                               term_tol, h)
                       .value;
  }
  return std::min(1.0, std::max(0.0, total));
}

double InverseSquareGapSum(std::span<const double> lambda, int m) {
  const int d = static_cast<int>(lambda.size());
  const std::vector<int> order = AscendingOrder(lambda);
  const std::vector<double> gaps = LowerGaps(lambda, m);
  double sum = 0.0;
  for (int j = m; j < d; ++j) {
    const double gap = gaps[order[j]];
    if (gap <= 0.0) return std::numeric_limits<double>::infinity();
    sum += 1.0 / (gap * gap);
  }
  return sum;
}

bool PhiLowerCheck(std::span<const double> lambda, int m, int arm, double tol) {
  const int d = static_cast<int>(lambda.size());
  if (arm < 0 || arm >= d) throw std::invalid_argument("arm out of range");
  if (m < 1 || m >= d) throw std::domain_error("PhiLowerCheck: need m < d");
  const std::vector<double> gaps = LowerGaps(lambda, m);
  if (!(gaps[arm] > 0.0)) {
    throw std::domain_error("PhiLowerCheck: arm must have a positive gap");
  }
  if (!(InverseSquareGapSum(lambda, m) < 0.5 / m)) {
    throw std::domain_error(
        "PhiLowerCheck: inverse-square gap sum must be below 1/(2m)");
  }
  const double phi = PhiQuadrature(lambda, arm, m, tol).value;
  const double bound = 1.0 / (4.0 * std::numbers::e * gaps[arm] * gaps[arm]);
  return phi >= bound - tol;
}

}  // namespace mset
