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

// Comparison policies for m-set semi-bandits: CombUCB, Thompson sampling and
// FTRL over the capped simplex with Shannon, log-barrier or hybrid
// regularization.

#ifndef MSET_BASELINES_H_
#define MSET_BASELINES_H_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "mset/action_set.h"
#include "mset/phi.h"
#include "mset/policy.h"
#include "mset/random.h"

namespace mset {

// -- Stochastic baselines -----------------------------------------------------

struct StochasticStats {
  std::vector<std::int64_t> pulls;
  std::vector<double> mean_estimates;
  // Observations with loss 0 (successes) and loss 1 (failures).
  std::vector<std::int64_t> successes;
  std::vector<std::int64_t> failures;
  std::int64_t t = 1;

  static StochasticStats Empty(int d);
  int d() const { return static_cast<int>(pulls.size()); }

  // Records the feedback of `action`. Fractional losses are binarized with
  // a Bernoulli draw for the success/failure counts.
  void Record(const ActionSet& action, std::span<const double> feedback,
              Rng& rng);
};

// Rounds 1..ceil(d/m) cycle through m-sets covering every arm; afterwards the
// m smallest lower confidence bounds mean_i - sqrt(1.5 ln t / T_i).
ActionSet CombUcbChoose(const StochasticStats& stats, int m, std::int64_t t);

// Samples theta_i ~ Beta(1 + failures_i, 1 + successes_i) as a posterior
// draw of the mean loss and plays the m smallest.
ActionSet ThompsonChoose(const StochasticStats& stats, int m, Rng& rng);

class CombUcbPolicy : public Policy {
 public:
  CombUcbPolicy(int d, int m);
  std::string name() const override { return "combucb"; }
  int d() const override { return stats_.d(); }
  int m() const override { return m_; }
  ActionSet Act(Rng& rng) override;
  void Observe(const ActionSet& action, std::span<const double> feedback,
               Rng& rng) override;
  const StochasticStats& stats_view() const { return stats_; }

 private:
  int m_;
  StochasticStats stats_;
};

class ThompsonPolicy : public Policy {
 public:
  ThompsonPolicy(int d, int m);
  std::string name() const override { return "thompson"; }
  int d() const override { return stats_.d(); }
  int m() const override { return m_; }
  ActionSet Act(Rng& rng) override;
  void Observe(const ActionSet& action, std::span<const double> feedback,
               Rng& rng) override;
  const StochasticStats& stats_view() const { return stats_; }

 private:
  int m_;
  StochasticStats stats_;
};

// -- FTRL over the capped simplex ---------------------------------------------

enum class Regularizer { kShannon, kLogBarrier, kHybrid };

std::string ToString(Regularizer reg);

// Lower clip applied to every marginal.
double MinimumWeight(Regularizer reg);

// R(w) summed over coordinates:
//   shannon      sum w ln w
//   log_barrier  -sum ln w
//   hybrid       -sum sqrt(w) + sum (1 - w) ln(1 - w)
double RegularizerValue(Regularizer reg, std::span<const double> w);
// dR/dw_i at a single coordinate.
double RegularizerGradient(Regularizer reg, double w);

struct CappedSimplexSolution {
  MarginalVector w;
  double multiplier = 0.0;   // the equality-constraint multiplier nu
  int clipped_below = 0;     // coordinates held at the lower clip
};

// argmin over {w in [w_min, 1]^d : sum w = m} of <w, lhat> + R(w) / eta.
//
// Each coordinate of the stationarity condition eta lhat_i + R'(w_i) + nu = 0
// is solved in closed form (shannon, log_barrier) or by a safeguarded scalar
// Newton iteration (hybrid), then clipped. sum_i w_i(nu) is nonincreasing in
// nu, and nu is found by bracketed bisection accelerated with Newton steps
// until |sum w - m| <= tol. `nu_hint` seeds the bracket search.
CappedSimplexSolution CappedSimplexSolve(std::span<const double> lhat,
                                         double eta, int m, Regularizer reg,
                                         double tol = 1e-10,
                                         double nu_hint = 0.0);

// Madow systematic sampling: an m-subset whose inclusion probabilities are
// exactly w. Throws std::domain_error if some w_i lies outside [0, 1] or
// |sum w - m| > 1e-6.
ActionSet MadowSample(std::span<const double> w, int m, Rng& rng);

struct FtrlState {
  std::vector<double> lhat;
  std::int64_t t = 1;
  Regularizer regularizer = Regularizer::kShannon;
  double rate_scale = 1.0;
  int m = 1;
  double last_multiplier = 0.0;
  std::uint64_t clip_events = 0;

  static FtrlState Initial(int d, int m, Regularizer reg,
                           double rate_scale = 1.0);
};

struct FtrlRoundResult {
  ActionSet action;
  MarginalVector w;
};

// Marginals for the current round.
CappedSimplexSolution FtrlMarginals(FtrlState& state);

// Importance-weighted update lhat_i += loss_i / w_i on the chosen arms.
void FtrlUpdate(FtrlState& state, const ActionSet& action,
                std::span<const double> w, std::span<const double> losses);

// One full round: solve, sample, update.
FtrlRoundResult FtrlRound(FtrlState& state, std::span<const double> losses,
                          Rng& rng);

class FtrlPolicy : public Policy {
 public:
  FtrlPolicy(int d, int m, Regularizer reg, double rate_scale = 1.0);
  // "exp2", "logbarrier" or "hybrid".
  std::string name() const override;
  int d() const override { return static_cast<int>(state_.lhat.size()); }
  int m() const override { return state_.m; }
  ActionSet Act(Rng& rng) override;
  void Observe(const ActionSet& action, std::span<const double> feedback,
               Rng& rng) override;
  PolicyStats stats() const override;
  const FtrlState& state() const { return state_; }

 private:
  FtrlState state_;
  MarginalVector current_w_;
};

}  // namespace mset

#endif  // MSET_BASELINES_H_
