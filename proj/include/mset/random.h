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

#ifndef MSET_RANDOM_H_
#define MSET_RANDOM_H_

#include <array>
#include <cstdint>
#include <limits>

namespace mset {

// Philox4x32-10 counter-based generator.
//
// The 128-bit counter is split into a 64-bit stream id (high words) and a
// 64-bit block index (low words), so every (key, stream) pair addresses a
// disjoint, reproducible sequence. Each block yields two 64-bit outputs.
class Philox4x32 {
 public:
  using result_type = std::uint64_t;
  using Counter = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  Philox4x32(std::uint64_t seed, std::uint64_t stream);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() {
    return std::numeric_limits<result_type>::max();
  }

  result_type operator()();

  // Ten rounds of the Philox bijection on a single counter block.
  static Counter Block(Counter counter, Key key);

  std::uint64_t stream() const { return stream_; }

 private:
  Key key_;
  std::uint64_t stream_;
  std::uint64_t block_ = 0;
  std::array<std::uint64_t, 2> buffer_{};
  int buffered_ = 0;
};

using Rng = Philox4x32;

// Reserved stream tags for consumers that are not policies.
inline constexpr std::uint32_t kEnvironmentStreamTag = 0xFFFFFFFFu;

// Derives the stream for (tag, index), e.g. (policy slot, repetition).
Rng MakeStream(std::uint64_t master_seed, std::uint32_t tag,
               std::uint32_t index);

std::uint64_t SplitMix64(std::uint64_t x);

// Uniform on the open interval (0, 1); never returns 0 or 1.
double UniformOpen(Rng& rng);

// Uniform on [0, 1).
double UniformHalfOpen(Rng& rng);

// One Fréchet(shape 2) draw by inverse-CDF transform of UniformOpen.
double FrechetDraw(Rng& rng);

}  // namespace mset

#endif  // MSET_RANDOM_H_
