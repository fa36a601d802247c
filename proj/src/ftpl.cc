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

#include "mset/ftpl.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace mset {
namespace {

void CheckDims(std::span<const double> lhat, int m) {
  const int d = static_cast<int>(lhat.size());
  if (d < 1) throw std::invalid_argument("empty loss-estimate vector");
  if (m < 1 || m > d) {
    throw std::invalid_argument("m must lie in [1, d], got m=" +
                                std::to_string(m));
  }
}

void CheckLosses(std::span<const double> losses, int d) {
  if (static_cast<int>(losses.size()) != d) {
    throw std::invalid_argument("loss vector has wrong length");
  }
  for (double loss : losses) {
    if (!(loss >= 0.0 && loss <= 1.0)) {
      throw std::domain_error("loss outside [0, 1]: " + std::to_string(loss));
    }
  }
}

// True iff `arm` is among the m smallest keys lhat_j - r_j / eta under a
// fresh perturbation. Draws stop as soon as m competitors beat `arm`.
bool ArmSelectedUnderFreshDraw(std::span<const double> lhat, double eta,
                               int arm, int m, Rng& rng) {
  const int d = static_cast<int>(lhat.size());
  const double key = lhat[arm] - FrechetDraw(rng) / eta;
  int beaten_by = 0;
  for (int j = 0; j < d; ++j) {
    if (j == arm) continue;
    const double other = lhat[j] - FrechetDraw(rng) / eta;
    if (other < key || (other == key && j < arm)) {
      if (++beaten_by >= m) return false;
    }
  }
  return true;
}

}  // namespace

double SampleFrechet(double u) {
  if (!(u > 0.0 && u < 1.0)) {
    throw std::domain_error("SampleFrechet: u must lie in (0, 1)");
  }
  return 1.0 / std::sqrt(-std::log(u));
}

std::vector<double> SamplePerturbation(int d, Rng& rng) {
  std::vector<double> r(d);
  for (double& x : r) x = FrechetDraw(rng);
  return r;
}

double LearningRate(std::int64_t t, double rate_scale) {
  if (t < 1) throw std::domain_error("LearningRate: t must be >= 1");
  if (!(rate_scale > 0.0)) {
    throw std::domain_error("LearningRate: rate_scale must be positive");
  }
  return rate_scale / std::sqrt(static_cast<double>(t));
}

ActionSet SelectAction(std::span<const double> lhat, double eta,
                       std::span<const double> r, int m) {
  CheckDims(lhat, m);
  const int d = static_cast<int>(lhat.size());
  if (static_cast<int>(r.size()) != d) {
    throw std::invalid_argument("SelectAction: perturbation length mismatch");
  }
  if (!(eta > 0.0)) throw std::invalid_argument("SelectAction: eta <= 0");

  std::vector<double> keys(d);
  for (int i = 0; i < d; ++i) keys[i] = lhat[i] - r[i] / eta;
  std::vector<int> order(d);
  std::iota(order.begin(), order.end(), 0);
  if (m < d) {
    std::nth_element(order.begin(), order.begin() + m, order.end(),
                     [&keys](int a, int b) {
                       return keys[a] < keys[b] || (keys[a] == keys[b] && a < b);
                     });
    order.resize(m);
  }
  return ActionSet::FromUnsorted(std::move(order), d);
}

ResampleResult GeometricResample(std::span<const double> lhat, double eta,
                                 int arm, int m, Rng& rng, std::uint64_t cap) {
  CheckDims(lhat, m);
  if (arm < 0 || arm >= static_cast<int>(lhat.size())) {
    throw std::invalid_argument("GeometricResample: arm out of range");
  }
  const std::uint64_t limit =
      cap == kUnlimitedResamples ? kResampleSafetyLimit : cap;
  for (std::uint64_t k = 1;; ++k) {
    if (ArmSelectedUnderFreshDraw(lhat, eta, arm, m, rng)) return {k, false};
    if (k >= limit) {
      if (cap == kUnlimitedResamples) {
        throw std::runtime_error(
            "GeometricResample: safety limit of 1e9 redraws exceeded");
      }
      return {k, true};
    }
  }
}

FtplState FtplState::Initial(int d, int m, double rate_scale) {
  if (d < 2) throw std::invalid_argument("FtplState: d must be >= 2");
  if (m < 1 || m > d) throw std::invalid_argument("FtplState: m outside [1, d]");
  if (!(rate_scale > 0.0)) {
    throw std::invalid_argument("FtplState: rate_scale must be positive");
  }
  return FtplState{d, m, 1, std::vector<double>(d, 0.0), rate_scale};
}

ActionSet FtplAct(const FtplState& state, Rng& rng) {
  const double eta = LearningRate(state.t, state.rate_scale);
  const std::vector<double> r = SamplePerturbation(state.d, rng);
  return SelectAction(state.lhat, eta, r, state.m);
}

FtplRoundResult FtplUpdate(FtplState& state, const ActionSet& action,
                           std::span<const double> losses, Rng& rng,
                           std::uint64_t cap) {
  if (static_cast<int>(losses.size()) != state.d || action.d() != state.d) {
    throw std::invalid_argument("FtplUpdate: dimension mismatch");
  }
  const double eta = LearningRate(state.t, state.rate_scale);
  FtplRoundResult result{action, {}, 0};
  result.resample_counts.reserve(action.m());
  // Estimates for the whole round are computed against the pre-update lhat.
  std::vector<double> increments(action.m(), 0.0);
  for (int k = 0; k < action.m(); ++k) {
    const int arm = action.arms()[k];
    const double loss = losses[arm];
    if (!(loss >= 0.0 && loss <= 1.0)) {
      throw std::domain_error("loss outside [0, 1]");
    }
    // A zero loss gives a zero estimate whatever K is, so K is not drawn.
    if (loss == 0.0) {
      result.resample_counts.push_back(0);
      continue;
    }
    const ResampleResult resample =
        GeometricResample(state.lhat, eta, arm, state.m, rng, cap);
    result.resample_counts.push_back(resample.count);
    if (resample.truncated) ++result.truncations;
    increments[k] = loss * static_cast<double>(resample.count);
  }
  for (int k = 0; k < action.m(); ++k) state.lhat[action.arms()[k]] += increments[k];
  ++state.t;
  return result;
}

FtplRoundResult FtplRound(FtplState& state, std::span<const double> losses,
                          Rng& rng, std::uint64_t cap) {
  CheckLosses(losses, state.d);
  const ActionSet action = FtplAct(state, rng);
  return FtplUpdate(state, action, losses, rng, cap);
}

// -- FtplPolicy ---------------------------------------------------------------

FtplPolicy::FtplPolicy(int d, int m, double rate_scale,
                       std::uint64_t resample_cap)
    : state_(FtplState::Initial(d, m, rate_scale)),
      resample_cap_(resample_cap) {}

ActionSet FtplPolicy::Act(Rng& rng) { return FtplAct(state_, rng); }

void FtplPolicy::Observe(const ActionSet& action,
                         std::span<const double> feedback, Rng& rng) {
  const FtplRoundResult result =
      FtplUpdate(state_, action, feedback, rng, resample_cap_);
  for (std::uint64_t k : result.resample_counts) stats_.resample_draws += k;
  stats_.resample_truncations += result.truncations;
}

}  // namespace mset
