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

#ifndef MSET_QUADRATURE_H_
#define MSET_QUADRATURE_H_

#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>

namespace mset {

inline constexpr double kDefaultQuadratureTol = 1e-8;

struct QuadratureResult {
  double value = 0.0;
  double abs_error_estimate = 0.0;
  std::int64_t nodes_used = 0;
};

// Raised when refinement exhausts its panel budget. Carries the best
// estimate reached so far.
class QuadratureError : public std::runtime_error {
 public:
  QuadratureError(const std::string& what, QuadratureResult best)
      : std::runtime_error(what), best_(best) {}
  const QuadratureResult& best() const { return best_; }

 private:
  QuadratureResult best_;
};

using Integrand = std::function<double(double)>;

// Composite 20-point Gauss-Legendre on [a, b]. The panel count starts at
// `initial_panels` and doubles until two successive sums differ by less
// than tol.
QuadratureResult IntegrateDyadic(const Integrand& f, double a, double b,
                                 double tol, int initial_panels = 4,
                                 int max_panels = 1 << 15);

// IntegrateDyadic on each interval between consecutive `breakpoints`
// (sorted ascending, endpoints included), with the tolerance split evenly.
QuadratureResult IntegratePiecewise(const Integrand& f,
                                    std::span<const double> breakpoints,
                                    double tol);

}  // namespace mset

#endif  // MSET_QUADRATURE_H_
