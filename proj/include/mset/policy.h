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

#ifndef MSET_POLICY_H_
#define MSET_POLICY_H_

#include <cstdint>
#include <span>
#include <string>

#include "mset/action_set.h"
#include "mset/random.h"

namespace mset {

// Counters a policy may report after a run.
struct PolicyStats {
  std::uint64_t resample_draws = 0;
  std::uint64_t resample_truncations = 0;
  std::uint64_t weight_clip_events = 0;
};

// A semi-bandit learner. Each round the harness calls Act, then Observe with
// the semi-bandit feedback for the same round. A policy instance is owned by
// a single repetition and is never shared across threads.
class Policy {
 public:
  virtual ~Policy() = default;

  virtual std::string name() const = 0;
  virtual int d() const = 0;
  virtual int m() const = 0;

  virtual ActionSet Act(Rng& rng) = 0;

  // `feedback` has length d; entries outside `action` are zero and must not
  // be relied upon.
  virtual void Observe(const ActionSet& action, std::span<const double> feedback,
                       Rng& rng) = 0;

  virtual PolicyStats stats() const { return {}; }
};

}  // namespace mset

#endif  // MSET_POLICY_H_
