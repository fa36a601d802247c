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
#include <limits>
#include <numeric>
#include <random>
#include <stdexcept>

#include "mset/ftpl.h"

namespace mset {
namespace {

// m smallest entries of `score`, ties to the smaller index.
ActionSet SmallestM(const std::vector<double>& score, int m) {
  const int d = static_cast<int>(score.size());
  std::vector<int> order(d);
  std::iota(order.begin(), order.end(), 0);
  if (m < d) {
    std::nth_element(order.begin(), order.begin() + m, order.end(),
                     [&score](int a, int b) {
                       return score[a] < score[b] || (score[a] == score[b] && a < b);
                     });
    order.resize(m);
  }
  return ActionSet::FromUnsorted(std::move(order), d);
}

double BetaDraw(double a, double b, Rng& rng) {
  std::gamma_distribution<double> ga(a, 1.0);
  std::gamma_distribution<double> gb(b, 1.0);
  const double x = ga(rng);
  const double y = gb(rng);
  return x / (x + y);
}

double HybridGradient(double w) {
  return -0.5 / std::sqrt(w) - std::log1p(-w) - 1.0;
}

double HybridCurvature(double w) {
  return 0.25 / (w * std::sqrt(w)) + 1.0 / (1.0 - w);
}

// Beyond this g the root is within one ulp of 1.
constexpr double kHybridSaturation = 36.0;

// Safeguarded Newton on a strictly monotone h over [lo, hi].
template <typename F>
double MonotoneNewton(F h_and_slope, double x, double lo, double hi,
                      bool increasing) {
  for (int iter = 0; iter < 100; ++iter) {
    const auto [h, slope] = h_and_slope(x);
    if (h == 0.0) return x;
    if ((h > 0.0) == increasing) {
      hi = x;
    } else {
      lo = x;
    }
    double next = x - h / slope;
    if (std::abs(next - x) <= 1e-14 * std::abs(x)) return next;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    x = next;
  }
  return x;
}

// Solves HybridGradient(w) = g for w in (w_min, 1), given
// HybridGradient(w_min) < g. Small roots are found in v = w^{-1/2} and large
// ones in z = -ln(1 - w); the equation is close to linear in each.
double HybridInverse(double g, double w_min) {
  if (g >= kHybridSaturation) return 1.0;
  if (g <= HybridGradient(0.5)) {
    const double v = MonotoneNewton(
        [g](double v) {
          const double h = -0.5 * v - std::log1p(-1.0 / (v * v)) - 1.0 - g;
          return std::pair{h, -0.5 - 2.0 / (v * v * v - v)};
        },
        std::clamp(-2.0 * (g + 1.0), std::sqrt(2.0), 1.0 / std::sqrt(w_min)),
        std::sqrt(2.0), 1.0 / std::sqrt(w_min), /*increasing=*/false);
    return 1.0 / (v * v);
  }
  const double z = MonotoneNewton(
      [g](double z) {
        const double w = -std::expm1(-z);
        const double h = -0.5 / std::sqrt(w) + z - 1.0 - g;
        return std::pair{h, 1.0 + 0.25 * (1.0 - w) / (w * std::sqrt(w))};
      },
      std::clamp(g + 1.5, std::log(2.0), 40.0), std::log(2.0), 40.0,
      /*increasing=*/true);
  return -std::expm1(-z);
}

struct CoordinateSolver {
  Regularizer reg;
  double w_min;
  std::span<const double> scaled;  // eta * (lhat - min lhat)
  std::vector<double>& w;
  int clipped = 0;

  // Fills w(nu) and returns (sum, d sum / d nu).
  std::pair<double, double> Evaluate(double nu) {
    double sum = 0.0;
    double slope = 0.0;
    clipped = 0;
    for (size_t i = 0; i < scaled.size(); ++i) {
      const double g = -scaled[i] - nu;
      double wi = 0.0;
      double curvature = 0.0;
      switch (reg) {
        case Regularizer::kShannon:
          wi = std::exp(std::min(g - 1.0, 1.0));
          curvature = 1.0 / wi;
          break;
        case Regularizer::kLogBarrier:
          wi = g < 0.0 ? -1.0 / g : 2.0;
          curvature = 1.0 / (wi * wi);
          break;
        case Regularizer::kHybrid:
          if (HybridGradient(w_min) >= g) {
            wi = 0.0;
          } else {
            wi = HybridInverse(g, w_min);
            curvature = wi < 1.0 ? HybridCurvature(wi) : 0.0;
          }
          break;
      }
      if (wi < w_min) {
        wi = w_min;
        ++clipped;
      } else if (wi >= 1.0) {
        wi = 1.0;
      } else if (curvature > 0.0) {
        slope -= 1.0 / curvature;
      }
      w[i] = wi;
      sum += wi;
    }
    return {sum, slope};
  }
};

}  // namespace

// -- StochasticStats ----------------------------------------------------------

StochasticStats StochasticStats::Empty(int d) {
  StochasticStats s;
  s.pulls.assign(d, 0);
  s.mean_estimates.assign(d, 0.0);
  s.successes.assign(d, 0);
  s.failures.assign(d, 0);
  return s;
}

void StochasticStats::Record(const ActionSet& action,
                             std::span<const double> feedback, Rng& rng) {
  for (int arm : action.arms()) {
    const double loss = feedback[arm];
    if (!(loss >= 0.0 && loss <= 1.0)) throw std::domain_error("loss outside [0,1]");
    ++pulls[arm];
    mean_estimates[arm] += (loss - mean_estimates[arm]) / pulls[arm];
    bool failure;
    if (loss == 0.0 || loss == 1.0) {
      failure = loss == 1.0;
    } else {
      failure = UniformHalfOpen(rng) < loss;
    }
    if (failure) {
      ++failures[arm];
    } else {
      ++successes[arm];
    }
  }
  ++t;
}

ActionSet CombUcbChoose(const StochasticStats& stats, int m, std::int64_t t) {
  const int d = stats.d();
  if (m < 1 || m > d) throw std::invalid_argument("CombUcbChoose: m outside [1,d]");
  const std::int64_t init_rounds = (d + m - 1) / m;
  if (t <= init_rounds) {
    std::vector<int> arms(m);
    for (int j = 0; j < m; ++j) {
      arms[j] = static_cast<int>(((t - 1) * m + j) % d);
    }
    return ActionSet::FromUnsorted(std::move(arms), d);
  }
  const double log_t = std::log(static_cast<double>(t));
  std::vector<double> lcb(d);
  for (int i = 0; i < d; ++i) {
    if (stats.pulls[i] == 0) {
      lcb[i] = -std::numeric_limits<double>::infinity();
    } else {
      lcb[i] = stats.mean_estimates[i] -
               std::sqrt(1.5 * log_t / static_cast<double>(stats.pulls[i]));
    }
  }
  return SmallestM(lcb, m);
}

ActionSet ThompsonChoose(const StochasticStats& stats, int m, Rng& rng) {
  const int d = stats.d();
  if (m < 1 || m > d) throw std::invalid_argument("ThompsonChoose: m outside [1,d]");
  std::vector<double> theta(d);
  for (int i = 0; i < d; ++i) {
    theta[i] = BetaDraw(1.0 + static_cast<double>(stats.failures[i]),
                        1.0 + static_cast<double>(stats.successes[i]), rng);
  }
  return SmallestM(theta, m);
}

CombUcbPolicy::CombUcbPolicy(int d, int m) : m_(m), stats_(StochasticStats::Empty(d)) {
  if (m < 1 || m > d) throw std::invalid_argument("CombUcbPolicy: m outside [1,d]");
}

ActionSet CombUcbPolicy::Act(Rng&) { return CombUcbChoose(stats_, m_, stats_.t); }

void CombUcbPolicy::Observe(const ActionSet& action,
                            std::span<const double> feedback, Rng& rng) {
  stats_.Record(action, feedback, rng);
}

ThompsonPolicy::ThompsonPolicy(int d, int m)
    : m_(m), stats_(StochasticStats::Empty(d)) {
  if (m < 1 || m > d) throw std::invalid_argument("ThompsonPolicy: m outside [1,d]");
}

ActionSet ThompsonPolicy::Act(Rng& rng) { return ThompsonChoose(stats_, m_, rng); }

void ThompsonPolicy::Observe(const ActionSet& action,
                             std::span<const double> feedback, Rng& rng) {
  stats_.Record(action, feedback, rng);
}

// -- Capped-simplex FTRL ------------------------------------------------------

std::string ToString(Regularizer reg) {
  switch (reg) {
    case Regularizer::kShannon:
      return "shannon";
    case Regularizer::kLogBarrier:
      return "log_barrier";
    case Regularizer::kHybrid:
      return "hybrid";
  }
  return "unknown";
}

double MinimumWeight(Regularizer reg) {
  return reg == Regularizer::kLogBarrier ? 1e-9 : 1e-12;
}

double RegularizerGradient(Regularizer reg, double w) {
  switch (reg) {
    case Regularizer::kShannon:
      return std::log(w) + 1.0;
    case Regularizer::kLogBarrier:
      return -1.0 / w;
    case Regularizer::kHybrid:
      return HybridGradient(w);
  }
  return 0.0;
}

double RegularizerValue(Regularizer reg, std::span<const double> w) {
  double total = 0.0;
  for (double x : w) {
    switch (reg) {
      case Regularizer::kShannon:
        total += x > 0.0 ? x * std::log(x) : 0.0;
        break;
      case Regularizer::kLogBarrier:
        total -= std::log(x);
        break;
      case Regularizer::kHybrid:
        total += -std::sqrt(x) + (x < 1.0 ? (1.0 - x) * std::log1p(-x) : 0.0);
        break;
    }
  }
  return total;
}

CappedSimplexSolution CappedSimplexSolve(std::span<const double> lhat,
                                         double eta, int m, Regularizer reg,
                                         double tol, double nu_hint) {
  const int d = static_cast<int>(lhat.size());
  if (d < 1 || m < 1 || m > d) {
    throw std::invalid_argument("CappedSimplexSolve: need 1 <= m <= d");
  }
  if (!(eta > 0.0)) throw std::invalid_argument("CappedSimplexSolve: eta <= 0");
  if (!(tol > 0.0)) throw std::invalid_argument("CappedSimplexSolve: tol <= 0");
  CappedSimplexSolution out;
  if (m == d) {
    out.w.assign(d, 1.0);
    return out;
  }
  const double floor_lhat = *std::min_element(lhat.begin(), lhat.end());
  std::vector<double> scaled(d);
  for (int i = 0; i < d; ++i) scaled[i] = eta * (lhat[i] - floor_lhat);

  out.w.assign(d, 0.0);
  CoordinateSolver solver{reg, MinimumWeight(reg), scaled, out.w};
  const double target = static_cast<double>(m);

  // Bracket: sum(nu_lo) >= m >= sum(nu_hi).
  double nu = std::isfinite(nu_hint) ? nu_hint : 0.0;
  auto [sum, slope] = solver.Evaluate(nu);
  if (std::abs(sum - target) <= tol) {
    out.multiplier = nu;
    out.clipped_below = solver.clipped;
    return out;
  }
  double nu_lo, nu_hi;
  double step = 1.0;
  if (sum > target) {
    nu_lo = nu;
    nu_hi = nu + step;
    while (solver.Evaluate(nu_hi).first > target) {
      nu_lo = nu_hi;
      step *= 2.0;
      nu_hi += step;
      if (step > 1e300) throw std::runtime_error("CappedSimplexSolve: no upper bracket");
    }
  } else {
    nu_hi = nu;
    nu_lo = nu - step;
    while (solver.Evaluate(nu_lo).first < target) {
      nu_hi = nu_lo;
      step *= 2.0;
      nu_lo -= step;
      if (step > 1e300) throw std::runtime_error("CappedSimplexSolve: no lower bracket");
    }
  }

  nu = 0.5 * (nu_lo + nu_hi);
  for (int iter = 0; iter < 400; ++iter) {
    std::tie(sum, slope) = solver.Evaluate(nu);
    const double residual = sum - target;
    if (std::abs(residual) <= tol) {
      out.multiplier = nu;
      out.clipped_below = solver.clipped;
      return out;
    }
    if (residual > 0.0) {
      nu_lo = nu;
    } else {
      nu_hi = nu;
    }
    double next = slope < 0.0 ? nu - residual / slope : 0.5 * (nu_lo + nu_hi);
    if (!(next > nu_lo && next < nu_hi)) next = 0.5 * (nu_lo + nu_hi);
    if (next == nu) break;
    nu = next;
  }
  throw std::runtime_error("CappedSimplexSolve: multiplier search did not converge");
}

ActionSet MadowSample(std::span<const double> w, int m, Rng& rng) {
  const int d = static_cast<int>(w.size());
  if (m < 1 || m > d) throw std::domain_error("MadowSample: m outside [1, d]");
  double total = 0.0;
  for (double x : w) {
    if (!(x >= 0.0 && x <= 1.0)) {
      throw std::domain_error("MadowSample: weight outside [0, 1]");
    }
    total += x;
  }
  if (std::abs(total - m) > 1e-6) {
    throw std::domain_error("MadowSample: weights must sum to m");
  }
  const double u = UniformHalfOpen(rng);
  std::vector<int> arms;
  arms.reserve(m);
  std::vector<char> taken(d, 0);
  double cumulative = 0.0;
  int k = 0;  // next grid point is u + k
  for (int i = 0; i < d && k < m; ++i) {
    cumulative += w[i];
    if (u + k < cumulative) {
      arms.push_back(i);
      taken[i] = 1;
      ++k;
      // An interval of length <= 1 holds at most one grid point; skip any
      // rounding duplicate.
      while (k < m && u + k < cumulative) ++k;
    }
  }
  // Rounding can leave the last grid point just past the final cumulative
  // sum; give it to the highest-index arm not yet taken.
  for (int i = d - 1; static_cast<int>(arms.size()) < m && i >= 0; --i) {
    if (!taken[i] && w[i] > 0.0) {
      arms.push_back(i);
      taken[i] = 1;
    }
  }
  for (int i = d - 1; static_cast<int>(arms.size()) < m && i >= 0; --i) {
    if (!taken[i]) {
      arms.push_back(i);
      taken[i] = 1;
    }
  }
  return ActionSet::FromUnsorted(std::move(arms), d);
}

FtrlState FtrlState::Initial(int d, int m, Regularizer reg, double rate_scale) {
  if (d < 2 || m < 1 || m > d) throw std::invalid_argument("FtrlState: bad (d, m)");
  if (!(rate_scale > 0.0)) throw std::invalid_argument("FtrlState: rate_scale <= 0");
  FtrlState s;
  s.lhat.assign(d, 0.0);
  s.regularizer = reg;
  s.rate_scale = rate_scale;
  s.m = m;
  return s;
}

CappedSimplexSolution FtrlMarginals(FtrlState& state) {
  const double eta = LearningRate(state.t, state.rate_scale);
  CappedSimplexSolution sol = CappedSimplexSolve(
      state.lhat, eta, state.m, state.regularizer, 1e-10, state.last_multiplier);
  state.last_multiplier = sol.multiplier;
  state.clip_events += sol.clipped_below;
  return sol;
}

void FtrlUpdate(FtrlState& state, const ActionSet& action,
                std::span<const double> w, std::span<const double> losses) {
  for (int arm : action.arms()) {
    const double loss = losses[arm];
    if (!(loss >= 0.0 && loss <= 1.0)) throw std::domain_error("loss outside [0,1]");
    state.lhat[arm] += loss / w[arm];
  }
  ++state.t;
}

FtrlRoundResult FtrlRound(FtrlState& state, std::span<const double> losses,
                          Rng& rng) {
  if (losses.size() != state.lhat.size()) {
    throw std::invalid_argument("FtrlRound: loss vector has wrong length");
  }
  CappedSimplexSolution sol = FtrlMarginals(state);
  ActionSet action = MadowSample(sol.w, state.m, rng);
  FtrlUpdate(state, action, sol.w, losses);
  return {std::move(action), std::move(sol.w)};
}

FtrlPolicy::FtrlPolicy(int d, int m, Regularizer reg, double rate_scale)
    : state_(FtrlState::Initial(d, m, reg, rate_scale)) {}

std::string FtrlPolicy::name() const {
  switch (state_.regularizer) {
    case Regularizer::kShannon:
      return "exp2";
    case Regularizer::kLogBarrier:
      return "logbarrier";
    case Regularizer::kHybrid:
      return "hybrid";
  }
  return "ftrl";
}

ActionSet FtrlPolicy::Act(Rng& rng) {
  current_w_ = FtrlMarginals(state_).w;
  return MadowSample(current_w_, state_.m, rng);
}

void FtrlPolicy::Observe(const ActionSet& action,
                         std::span<const double> feedback, Rng&) {
  FtrlUpdate(state_, action, current_w_, feedback);
}

PolicyStats FtrlPolicy::stats() const {
  PolicyStats s;
  s.weight_clip_events = state_.clip_events;
  return s;
}

}  // namespace mset
