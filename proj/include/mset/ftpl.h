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

// Follow-the-Perturbed-Leader with Fréchet(2) perturbations and geometric
// resampling for m-set semi-bandits.

#ifndef MSET_FTPL_H_
#define MSET_FTPL_H_

#include <cstdint>
#include <span>
#include <vector>

#include "mset/action_set.h"
#include "mset/policy.h"
#include "mset/random.h"

namespace mset {

// Inverse CDF of Fréchet(2): returns x with exp(-1/x^2) == u.
// Throws std::domain_error unless 0 < u < 1.
double SampleFrechet(double u);

// d i.i.d. Fréchet(2) draws.
std::vector<double> SamplePerturbation(int d, Rng& rng);

// rate_scale / sqrt(t). Throws std::domain_error for t < 1 or
// rate_scale <= 0.
double LearningRate(std::int64_t t, double rate_scale);

// The m arms with smallest lhat_i - r_i / eta; ties go to the smaller index.
ActionSet SelectAction(std::span<const double> lhat, double eta,
                       std::span<const double> r, int m);

// Cap value meaning "no cap" (the hard safety limit still applies).
inline constexpr std::uint64_t kUnlimitedResamples = 0;
// Exceeding this many redraws in one call indicates a bug, not bad luck.
inline constexpr std::uint64_t kResampleSafetyLimit = 1'000'000'000;

struct ResampleResult {
  std::uint64_t count;  // K >= 1, already truncated at the cap
  bool truncated;
};

// Redraws perturbations until `arm` is selected again and returns the number
// of redraws K, so that E[K] = 1 / phi_arm(eta * lhat) when uncapped.
ResampleResult GeometricResample(std::span<const double> lhat, double eta,
                                 int arm, int m, Rng& rng,
                                 std::uint64_t cap = kUnlimitedResamples);

struct FtplState {
  int d = 0;
  int m = 0;
  std::int64_t t = 1;
  std::vector<double> lhat;
  double rate_scale = 1.0;

  static FtplState Initial(int d, int m, double rate_scale = 1.0);
};

struct FtplRoundResult {
  ActionSet action;
  // K for each arm of `action`, in the same order; 0 where the loss was 0
  // and K was not drawn.
  std::vector<std::uint64_t> resample_counts;
  int truncations = 0;
};

// Samples the perturbation for round state.t and plays the perturbed leader.
ActionSet FtplAct(const FtplState& state, Rng& rng);

// Geometric-resampling update after playing `action`. Only entries of
// `losses` at arms in `action` are read. Increments state.t.
FtplRoundResult FtplUpdate(FtplState& state, const ActionSet& action,
                           std::span<const double> losses, Rng& rng,
                           std::uint64_t cap = kUnlimitedResamples);

// One full round: act, observe `losses` on the chosen arms, update.
// Throws std::domain_error if a loss lies outside [0, 1].
FtplRoundResult FtplRound(FtplState& state, std::span<const double> losses,
                          Rng& rng, std::uint64_t cap = kUnlimitedResamples);

class FtplPolicy : public Policy {
 public:
  FtplPolicy(int d, int m, double rate_scale = 1.0,
             std::uint64_t resample_cap = kUnlimitedResamples);

  std::string name() const override { return "ftpl"; }
  int d() const override { return state_.d; }
  int m() const override { return state_.m; }
  ActionSet Act(Rng& rng) override;
  void Observe(const ActionSet& action, std::span<const double> feedback,
               Rng& rng) override;
  PolicyStats stats() const override { return stats_; }

  const FtplState& state() const { return state_; }

 private:
  FtplState state_;
  std::uint64_t resample_cap_;
  PolicyStats stats_;
};

}  // namespace mset

#endif  // MSET_FTPL_H_
