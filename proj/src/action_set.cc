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

#include "mset/action_set.h"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace mset {

ActionSet::ActionSet(std::vector<int> arms, int d)
    : arms_(std::move(arms)), d_(d) {
  if (d_ < 1) throw std::invalid_argument("ActionSet: d must be positive");
  if (arms_.empty() || static_cast<int>(arms_.size()) > d_) {
    throw std::invalid_argument("ActionSet: size must be in [1, d]");
  }
  for (size_t k = 0; k < arms_.size(); ++k) {
    if (arms_[k] < 0 || arms_[k] >= d_) {
      throw std::invalid_argument("ActionSet: arm index out of range");
    }
    if (k > 0 && arms_[k] <= arms_[k - 1]) {
      throw std::invalid_argument("ActionSet: arms must be strictly increasing");
    }
  }
}

ActionSet ActionSet::FromUnsorted(std::vector<int> arms, int d) {
  std::sort(arms.begin(), arms.end());
  return ActionSet(std::move(arms), d);
}

ActionSet ActionSet::Prefix(int m, int d) {
  std::vector<int> arms(m);
  std::iota(arms.begin(), arms.end(), 0);
  return ActionSet(std::move(arms), d);
}

bool ActionSet::Contains(int arm) const {
  return std::binary_search(arms_.begin(), arms_.end(), arm);
}

std::vector<double> ActionSet::Indicator() const {
  std::vector<double> out(d_, 0.0);
  for (int arm : arms_) out[arm] = 1.0;
  return out;
}

std::string ActionSet::ToString() const {
  std::string out = "{";
  for (size_t k = 0; k < arms_.size(); ++k) {
    if (k > 0) out += ",";
    out += std::to_string(arms_[k]);
  }
  return out + "}";
}

}  // namespace mset
