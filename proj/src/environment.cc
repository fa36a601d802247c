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

#include "mset/environment.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iterator>
#include <numeric>
#include <stdexcept>

namespace mset {
namespace {

void CheckShape(int d, int m) {
  if (d < 2) throw std::domain_error("environment: d must be >= 2");
  if (m < 1 || m >= d) throw std::domain_error("environment: need 1 <= m < d");
}

void CheckDelta(double delta) {
  if (!(delta > 0.0 && delta < 0.5)) {
    throw std::domain_error("environment: delta must lie in (0, 1/2)");
  }
}

void CheckHorizon(std::int64_t horizon) {
  if (horizon < 1) throw std::domain_error("environment: horizon must be >= 1");
}

void WriteU64(std::ostream& out, std::uint64_t v) {
  unsigned char bytes[8];
  for (int k = 0; k < 8; ++k) bytes[k] = static_cast<unsigned char>(v >> (8 * k));
  out.write(reinterpret_cast<const char*>(bytes), 8);
}

std::uint64_t ReadU64(std::istream& in) {
  unsigned char bytes[8];
  if (!in.read(reinterpret_cast<char*>(bytes), 8)) {
    throw std::runtime_error("loss table: truncated header");
  }
  std::uint64_t v = 0;
  for (int k = 7; k >= 0; --k) v = (v << 8) | bytes[k];
  return v;
}

}  // namespace

std::string ToString(EnvironmentKind kind) {
  switch (kind) {
    case EnvironmentKind::kStochastic:
      return "stochastic";
    case EnvironmentKind::kPhasedAdversarial:
      return "phased_adversarial";
    case EnvironmentKind::kReplay:
      return "replay";
  }
  return "unknown";
}

EnvironmentKind ParseEnvironmentKind(const std::string& name) {
  if (name == "stochastic") return EnvironmentKind::kStochastic;
  if (name == "phased_adversarial") return EnvironmentKind::kPhasedAdversarial;
  if (name == "replay") return EnvironmentKind::kReplay;
  throw std::invalid_argument("unknown environment kind: " + name);
}

std::int64_t PhaseDuration(double growth, int phase) {
  return std::max<std::int64_t>(
      1, static_cast<std::int64_t>(std::llround(std::pow(growth, phase))));
}

EnvironmentModel EnvironmentModel::Stochastic(int d, int m, double delta,
                                              std::int64_t horizon) {
  CheckShape(d, m);
  CheckDelta(delta);
  CheckHorizon(horizon);
  EnvironmentModel env;
  env.kind_ = EnvironmentKind::kStochastic;
  env.d_ = d;
  env.m_ = m;
  env.delta_ = delta;
  env.horizon_ = horizon;
  env.means_.assign(d, 0.5 + delta);
  std::fill(env.means_.begin(), env.means_.begin() + m, 0.5 - delta);
  return env;
}

EnvironmentModel EnvironmentModel::PhasedAdversarial(int d, int m, double delta,
                                                     double growth,
                                                     std::int64_t horizon) {
  CheckShape(d, m);
  CheckDelta(delta);
  CheckHorizon(horizon);
  if (!(growth > 1.0)) throw std::domain_error("environment: growth must be > 1");
  EnvironmentModel env;
  env.kind_ = EnvironmentKind::kPhasedAdversarial;
  env.d_ = d;
  env.m_ = m;
  env.delta_ = delta;
  env.growth_ = growth;
  env.horizon_ = horizon;
  std::int64_t end = 0;
  for (int s = 1; end < horizon; ++s) {
    end = std::min(horizon, end + PhaseDuration(growth, s));
    env.phase_ends_.push_back(end);
  }
  // 1/2 -+ delta/4 +- (1/2 - delta/4), "+" in odd phases.
  const double base = 0.5 - delta / 4.0;
  env.means_.resize(2 * d);
  for (int i = 0; i < d; ++i) {
    const double centre = i < m ? 0.5 - delta / 4.0 : 0.5 + delta / 4.0;
    env.means_[i] = centre + base;
    env.means_[d + i] = centre - base;
  }
  return env;
}

EnvironmentModel EnvironmentModel::Replay(int d, int m,
                                          std::vector<double> means) {
  CheckShape(d, m);
  if (means.empty() || means.size() % d != 0) {
    throw std::domain_error("environment: replay means must be horizon x d");
  }
  for (double v : means) {
    if (!(v >= 0.0 && v <= 1.0)) {
      throw std::domain_error("environment: replay means must lie in [0, 1]");
    }
  }
  EnvironmentModel env;
  env.kind_ = EnvironmentKind::kReplay;
  env.d_ = d;
  env.m_ = m;
  env.horizon_ = static_cast<std::int64_t>(means.size() / d);
  env.means_ = std::move(means);
  return env;
}

void EnvironmentModel::CheckRound(std::int64_t t) const {
  if (t < 1 || t > horizon_) {
    throw std::out_of_range("round " + std::to_string(t) +
                            " outside [1, horizon]");
  }
}

int EnvironmentModel::PhaseOf(std::int64_t t) const {
  CheckRound(t);
  const auto it = std::lower_bound(phase_ends_.begin(), phase_ends_.end(), t);
  return static_cast<int>(it - phase_ends_.begin()) + 1;
}

std::span<const double> EnvironmentModel::MeanLoss(std::int64_t t) const {
  CheckRound(t);
  const std::span<const double> all(means_);
  switch (kind_) {
    case EnvironmentKind::kStochastic:
      return all.subspan(0, d_);
    case EnvironmentKind::kPhasedAdversarial:
      return all.subspan(PhaseOf(t) % 2 == 1 ? 0 : d_, d_);
    case EnvironmentKind::kReplay:
      return all.subspan(static_cast<size_t>(t - 1) * d_, d_);
  }
  return {};
}

std::vector<double> EnvironmentModel::CumulativeMeans(std::int64_t n) const {
  if (n < 0 || n > horizon_) throw std::out_of_range("CumulativeMeans: n");
  std::vector<double> sums(d_, 0.0);
  switch (kind_) {
    case EnvironmentKind::kStochastic:
      for (int i = 0; i < d_; ++i) sums[i] = means_[i] * static_cast<double>(n);
      break;
    case EnvironmentKind::kPhasedAdversarial: {
      std::int64_t odd_rounds = 0;
      std::int64_t start = 1;
      for (size_t s = 0; s < phase_ends_.size() && start <= n; ++s) {
        const std::int64_t stop = std::min(phase_ends_[s], n);
        if (s % 2 == 0) odd_rounds += stop - start + 1;
        start = phase_ends_[s] + 1;
      }
      const double odd = static_cast<double>(odd_rounds);
      const double even = static_cast<double>(n - odd_rounds);
      for (int i = 0; i < d_; ++i) {
        sums[i] = means_[i] * odd + means_[d_ + i] * even;
      }
      break;
    }
    case EnvironmentKind::kReplay:
      for (std::int64_t t = 0; t < n; ++t) {
        for (int i = 0; i < d_; ++i) sums[i] += means_[t * d_ + i];
      }
      break;
  }
  return sums;
}

void SampleLossInto(const EnvironmentModel& env, std::int64_t t, Rng& rng,
                    std::span<double> out) {
  const std::span<const double> means = env.MeanLoss(t);
  for (int i = 0; i < env.d(); ++i) {
    out[i] = UniformHalfOpen(rng) < means[i] ? 1.0 : 0.0;
  }
}

std::vector<double> SampleLoss(const EnvironmentModel& env, std::int64_t t,
                               Rng& rng) {
  std::vector<double> out(env.d());
  SampleLossInto(env, t, rng, out);
  return out;
}

GapVector ComputeGaps(std::span<const double> means, int m) {
  const int d = static_cast<int>(means.size());
  if (m < 1 || m > d) throw std::invalid_argument("ComputeGaps: m outside [1, d]");
  std::vector<double> sorted(means.begin(), means.end());
  std::nth_element(sorted.begin(), sorted.begin() + (m - 1), sorted.end());
  const double pivot = sorted[m - 1];
  GapVector out;
  out.gaps.resize(d);
  for (int i = 0; i < d; ++i) {
    out.gaps[i] = std::max(0.0, means[i] - pivot);
    if (out.gaps[i] > 0.0 && (out.min_gap == 0.0 || out.gaps[i] < out.min_gap)) {
      out.min_gap = out.gaps[i];
    }
  }
  return out;
}

ActionSet BestFixedAction(const EnvironmentModel& env, std::int64_t n) {
  const std::vector<double> sums = env.CumulativeMeans(n);
  std::vector<int> order(env.d());
  std::iota(order.begin(), order.end(), 0);
  std::nth_element(order.begin(), order.begin() + env.m(), order.end(),
                   [&sums](int a, int b) {
                     return sums[a] < sums[b] || (sums[a] == sums[b] && a < b);
                   });
  order.resize(env.m());
  return ActionSet::FromUnsorted(std::move(order), env.d());
}

double PseudoRegretIncrement(const EnvironmentModel& env, std::int64_t t,
                             const ActionSet& action, const ActionSet& a_star) {
  const std::span<const double> means = env.MeanLoss(t);
  if (action.m() != a_star.m()) {
    throw std::invalid_argument("PseudoRegretIncrement: action sizes differ");
  }
  // Shared arms cancel exactly; the rest are paired in index order so equal
  // sets give exactly 0.
  const std::span<const int> a = action.arms();
  const std::span<const int> b = a_star.arms();
  std::vector<int> only_a;
  std::vector<int> only_b;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(),
                      std::back_inserter(only_a));
  std::set_difference(b.begin(), b.end(), a.begin(), a.end(),
                      std::back_inserter(only_b));
  double regret = 0.0;
  for (size_t k = 0; k < only_a.size(); ++k) {
    regret += means[only_a[k]] - means[only_b[k]];
  }
  return regret;
}

// -- LossTable ----------------------------------------------------------------

LossTable::LossTable(int d, std::int64_t horizon, std::vector<std::uint8_t> bits)
    : d_(d), horizon_(horizon), bits_(std::move(bits)) {
  if (d_ < 1 || horizon_ < 1 ||
      bits_.size() != static_cast<size_t>(d_) * static_cast<size_t>(horizon_)) {
    throw std::invalid_argument("LossTable: size does not match d x horizon");
  }
  for (std::uint8_t b : bits_) {
    if (b > 1) throw std::invalid_argument("LossTable: entries must be 0 or 1");
  }
}

LossTable LossTable::Sample(const EnvironmentModel& env, Rng& rng) {
  std::vector<std::uint8_t> bits(static_cast<size_t>(env.d()) * env.horizon());
  for (std::int64_t t = 1; t <= env.horizon(); ++t) {
    const std::span<const double> means = env.MeanLoss(t);
    std::uint8_t* row = bits.data() + (t - 1) * env.d();
    for (int i = 0; i < env.d(); ++i) {
      row[i] = UniformHalfOpen(rng) < means[i] ? 1 : 0;
    }
  }
  return LossTable(env.d(), env.horizon(), std::move(bits));
}

std::span<const std::uint8_t> LossTable::Row(std::int64_t t) const {
  if (t < 1 || t > horizon_) throw std::out_of_range("LossTable::Row");
  return std::span<const std::uint8_t>(bits_).subspan((t - 1) * d_, d_);
}

void LossTable::Save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path.string());
  WriteU64(out, static_cast<std::uint64_t>(d_));
  WriteU64(out, static_cast<std::uint64_t>(horizon_));
  out.write(reinterpret_cast<const char*>(bits_.data()),
            static_cast<std::streamsize>(bits_.size()));
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

LossTable LossTable::Load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  const std::uint64_t d = ReadU64(in);
  const std::uint64_t horizon = ReadU64(in);
  if (d == 0 || d > (1u << 20) || horizon == 0 || horizon > (1ull << 40)) {
    throw std::runtime_error("loss table: implausible header");
  }
  std::vector<std::uint8_t> bits(d * horizon);
  if (!in.read(reinterpret_cast<char*>(bits.data()),
               static_cast<std::streamsize>(bits.size()))) {
    throw std::runtime_error("loss table: truncated body");
  }
  return LossTable(static_cast<int>(d), static_cast<std::int64_t>(horizon),
                   std::move(bits));
}

}  // namespace mset
