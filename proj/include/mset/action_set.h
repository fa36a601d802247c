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

#ifndef MSET_ACTION_SET_H_
#define MSET_ACTION_SET_H_

#include <span>
#include <string>
#include <vector>

namespace mset {

// A size-m subset of {0, ..., d-1}, stored as strictly increasing indices.
class ActionSet {
 public:
  // Throws std::invalid_argument unless `arms` is strictly increasing with
  // every entry in [0, d).
  ActionSet(std::vector<int> arms, int d);

  // Sorts and validates; duplicates are rejected.
  static ActionSet FromUnsorted(std::vector<int> arms, int d);

  // The arms {0, ..., m-1}.
  static ActionSet Prefix(int m, int d);

  std::span<const int> arms() const { return arms_; }
  int d() const { return d_; }
  int m() const { return static_cast<int>(arms_.size()); }

  bool Contains(int arm) const;

  // Length-d 0/1 vector.
  std::vector<double> Indicator() const;

  std::string ToString() const;

  friend bool operator==(const ActionSet&, const ActionSet&) = default;

 private:
  std::vector<int> arms_;
  int d_;
};

}  // namespace mset

#endif  // MSET_ACTION_SET_H_
