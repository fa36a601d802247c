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

// Oblivious Bernoulli loss processes for m-set semi-bandits.

#ifndef MSET_ENVIRONMENT_H_
#define MSET_ENVIRONMENT_H_

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "mset/action_set.h"
#include "mset/random.h"

namespace mset {

enum class EnvironmentKind { kStochastic, kPhasedAdversarial, kReplay };

std::string ToString(EnvironmentKind kind);
EnvironmentKind ParseEnvironmentKind(const std::string& name);

struct GapVector {
  std::vector<double> gaps;
  // Smallest positive gap; 0 when every gap is 0.
  double min_gap = 0.0;
};

// Immutable after construction; safe to share across threads.
class EnvironmentModel {
 public:
  // First m arms have mean 1/2 - delta, the rest 1/2 + delta.
  static EnvironmentModel Stochastic(int d, int m, double delta,
                                     std::int64_t horizon);

  // Phase s = 1, 2, ... lasts round(growth^s) rounds (at least 1). In odd
  // phases the first m arms have mean 1 - delta/2 and the rest 1; in even
  // phases they have mean 0 and delta/2.
  static EnvironmentModel PhasedAdversarial(int d, int m, double delta,
                                            double growth,
                                            std::int64_t horizon);

  // Arbitrary per-round means, row-major horizon x d.
  static EnvironmentModel Replay(int d, int m, std::vector<double> means);

  EnvironmentKind kind() const { return kind_; }
  int d() const { return d_; }
  int m() const { return m_; }
  double delta() const { return delta_; }
  double growth() const { return growth_; }
  std::int64_t horizon() const { return horizon_; }

  // Mean loss vector at round t (1-based). Throws std::out_of_range for t
  // outside [1, horizon].
  std::span<const double> MeanLoss(std::int64_t t) const;

  // Inclusive last round of each phase (phased environments only).
  const std::vector<std::int64_t>& phase_ends() const { return phase_ends_; }
  // 1-based phase index of round t.
  int PhaseOf(std::int64_t t) const;

  // Sum over rounds 1..n of the mean losses of each arm.
  std::vector<double> CumulativeMeans(std::int64_t n) const;

 private:
  EnvironmentModel() = default;
  void CheckRound(std::int64_t t) const;

  EnvironmentKind kind_ = EnvironmentKind::kStochastic;
  int d_ = 0;
  int m_ = 0;
  double delta_ = 0.0;
  double growth_ = 0.0;
  std::int64_t horizon_ = 0;
  std::vector<std::int64_t> phase_ends_;
  // Stochastic: one row. Phased: row 0 = odd phase, row 1 = even phase.
  // Replay: horizon rows.
  std::vector<double> means_;
};

// Phase durations round(growth^s), s = 1, 2, ..., each at least 1.
std::int64_t PhaseDuration(double growth, int phase);

// Independent Bernoulli(mean_i) draws for round t.
std::vector<double> SampleLoss(const EnvironmentModel& env, std::int64_t t,
                               Rng& rng);
// Allocation-free variant.
void SampleLossInto(const EnvironmentModel& env, std::int64_t t, Rng& rng,
                    std::span<double> out);

// Gaps of a mean vector from its m-th smallest entry.
GapVector ComputeGaps(std::span<const double> means, int m);

// The m arms with the smallest cumulative mean loss over rounds 1..n; ties
// go to the smaller index.
ActionSet BestFixedAction(const EnvironmentModel& env, std::int64_t n);

// <action - a_star, mean_loss(t)>.
double PseudoRegretIncrement(const EnvironmentModel& env, std::int64_t t,
                             const ActionSet& action, const ActionSet& a_star);

// A fixed sequence of realized 0/1 losses, row-major horizon x d.
class LossTable {
 public:
  LossTable(int d, std::int64_t horizon, std::vector<std::uint8_t> bits);

  // Samples every round of `env` once.
  static LossTable Sample(const EnvironmentModel& env, Rng& rng);

  int d() const { return d_; }
  std::int64_t horizon() const { return horizon_; }
  std::span<const std::uint8_t> Row(std::int64_t t) const;
  const std::vector<std::uint8_t>& bits() const { return bits_; }

  // Binary layout: uint64 d, uint64 horizon (little-endian), then
  // horizon * d bytes of 0/1, row-major.
  void Save(const std::filesystem::path& path) const;
  static LossTable Load(const std::filesystem::path& path);

  friend bool operator==(const LossTable&, const LossTable&) = default;

 private:
  int d_;
  std::int64_t horizon_;
  std::vector<std::uint8_t> bits_;
};

}  // namespace mset

#endif  // MSET_ENVIRONMENT_H_
