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

// Policy x environment regret experiments with reproducible seeding.
//
// Every (policy slot, repetition) pair is an independent task that owns its
// policy, its RNG stream and its regret accumulator, so the output does not
// depend on how many worker threads run the tasks.

#ifndef MSET_HARNESS_H_
#define MSET_HARNESS_H_

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "mset/action_set.h"
#include "mset/environment.h"
#include "mset/policy.h"

namespace mset {

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// How realized losses are produced.
//   kReplay: one loss table sampled from env_seed, shared by every policy
//            and repetition.
//   kFresh:  each repetition samples its own losses; all policies in the
//            same repetition see the same draws.
enum class LossMode { kReplay, kFresh };

struct EnvironmentSpec {
  EnvironmentKind kind = EnvironmentKind::kStochastic;
  int d = 10;
  int m = 5;
  double delta = 0.1;
  double growth = 1.6;
  LossMode loss_mode = LossMode::kFresh;
  std::uint64_t env_seed = 0;
  // kReplay kind: CSV of per-round means, one row of d values per round.
  std::string means_file;
  // Optional binary loss table to replay instead of sampling one.
  std::string loss_table_file;
};

struct PolicySpec {
  std::string name;  // ftpl, combucb, thompson, exp2, logbarrier, hybrid,
                     // uniform, oracle
  std::string label;  // defaults to name
  double rate_scale = 1.0;
  std::uint64_t resample_cap = 0;  // 0 = unlimited
};

struct ExperimentConfig {
  EnvironmentSpec environment;
  std::vector<PolicySpec> policies;
  std::int64_t horizon = 1000;
  int repetitions = 1;
  std::uint64_t master_seed = 0;
  int checkpoint_count = 200;
  int threads = 0;  // 0 = hardware concurrency, capped by MSET_THREADS
  std::string output_dir = ".";

  // Throws ConfigError describing the first problem found.
  void Validate() const;
};

// JSON document with sections "environment", "policies" and "run".
ExperimentConfig ConfigFromJsonText(std::string_view text);
ExperimentConfig LoadConfig(const std::filesystem::path& path);
std::string ConfigToJsonText(const ExperimentConfig& config);

// `count` strictly increasing rounds, roughly log-spaced, starting at 1 and
// ending at horizon (fewer when horizon < count).
std::vector<std::int64_t> LogSpacedCheckpoints(std::int64_t horizon, int count);

EnvironmentModel BuildEnvironment(const EnvironmentSpec& spec,
                                  std::int64_t horizon);

// Policy for one task. "oracle" plays `a_star` every round.
std::unique_ptr<Policy> MakePolicy(const PolicySpec& spec, int d, int m,
                                   const ActionSet& a_star);

bool IsKnownPolicy(const std::string& name);

class UniformRandomPolicy : public Policy {
 public:
  UniformRandomPolicy(int d, int m);
  std::string name() const override { return "uniform"; }
  int d() const override { return d_; }
  int m() const override { return m_; }
  ActionSet Act(Rng& rng) override;
  void Observe(const ActionSet&, std::span<const double>, Rng&) override {}

 private:
  int d_;
  int m_;
};

class FixedActionPolicy : public Policy {
 public:
  explicit FixedActionPolicy(ActionSet action);
  std::string name() const override { return "oracle"; }
  int d() const override { return action_.d(); }
  int m() const override { return action_.m(); }
  ActionSet Act(Rng&) override { return action_; }
  void Observe(const ActionSet&, std::span<const double>, Rng&) override {}

 private:
  ActionSet action_;
};

struct RegretTrace {
  std::string policy;  // label
  int policy_index = 0;
  int repetition = 0;
  std::vector<std::int64_t> t;
  std::vector<double> regret;  // cumulative pseudo-regret at t
  PolicyStats stats;
  std::string error;  // non-empty if the run aborted
  // First actions played, kept for stream-independence checks.
  std::vector<ActionSet> first_actions;
};

// Compensated (Kahan-Babuska) running sum.
class CompensatedSum {
 public:
  void Add(double x);
  double value() const { return sum_ + compensation_; }

 private:
  double sum_ = 0.0;
  double compensation_ = 0.0;
};

// Shared, read-only inputs of all tasks in one experiment.
struct ExperimentContext {
  EnvironmentModel env;
  ActionSet a_star;
  std::optional<LossTable> losses;  // set in replay mode
  std::vector<std::int64_t> checkpoints;
};

ExperimentContext PrepareExperiment(const ExperimentConfig& config);

// Runs a single (policy slot, repetition) task. If `per_round` is non-null
// it receives every pseudo-regret increment.
RegretTrace RunTrace(const ExperimentConfig& config,
                     const ExperimentContext& context, int policy_index,
                     int repetition, std::vector<double>* per_round = nullptr);

// All traces, ordered by policy slot then repetition.
std::vector<RegretTrace> RunExperiment(const ExperimentConfig& config);
std::vector<RegretTrace> RunExperiment(const ExperimentConfig& config,
                                       const ExperimentContext& context);

// Worker count after applying config.threads and MSET_THREADS.
int ResolveThreadCount(int requested);

struct PolicySummary {
  std::string policy;
  std::vector<std::int64_t> t;
  std::vector<double> mean;
  std::vector<double> sd;  // sample SD (n - 1); 0 for a single repetition
  std::vector<double> se;
  int repetitions = 0;
};

// Pointwise mean/SD across repetitions, per policy in order of first
// appearance. Failed traces are skipped. Throws std::invalid_argument if the
// traces of one policy do not share a checkpoint grid.
std::vector<PolicySummary> Aggregate(const std::vector<RegretTrace>& traces);

enum class GrowthModel { kLog, kSqrt };

struct GrowthFitResult {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  int points = 0;
};

// Least-squares fit of regret against ln t or sqrt t over the last two
// decades of checkpoints (t >= t_last / 100). Throws std::invalid_argument
// with fewer than 5 points in the window.
GrowthFitResult GrowthFit(const std::vector<std::int64_t>& t,
                          const std::vector<double>& regret, GrowthModel model);

}  // namespace mset

#endif  // MSET_HARNESS_H_
