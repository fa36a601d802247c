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

#include "mset/quadrature.h"

#include <boost/math/quadrature/gauss.hpp>
#include <cmath>

namespace mset {
namespace {

constexpr int kRuleOrder = 20;
using Rule = boost::math::quadrature::gauss<double, kRuleOrder>;

double Composite(const Integrand& f, double a, double b, int panels) {
  const double width = (b - a) / panels;
  double sum = 0.0;
  for (int p = 0; p < panels; ++p) {
    const double lo = a + p * width;
    const double hi = p + 1 == panels ? b : lo + width;
    sum += Rule::integrate(f, lo, hi);
  }
  return sum;
}

}  // namespace

QuadratureResult IntegrateDyadic(const Integrand& f, double a, double b,
                                 double tol, int initial_panels,
                                 int max_panels) {
  if (!(tol > 0.0)) throw std::invalid_argument("quadrature tol must be > 0");
  if (!(b > a)) return {0.0, 0.0, 0};
  int panels = std::max(1, initial_panels);
  double coarse = Composite(f, a, b, panels);
  std::int64_t nodes = static_cast<std::int64_t>(panels) * kRuleOrder;
  while (true) {
    panels *= 2;
    const double fine = Composite(f, a, b, panels);
    nodes += static_cast<std::int64_t>(panels) * kRuleOrder;
    const double diff = std::abs(fine - coarse);
    if (!std::isfinite(fine)) {
      throw QuadratureError("quadrature produced a non-finite value",
                            {coarse, diff, nodes});
    }
    if (diff < tol) return {fine, diff, nodes};
    if (panels >= max_panels) {
      throw QuadratureError("quadrature did not converge within node budget",
                            {fine, diff, nodes});
    }
    coarse = fine;
  }
}

QuadratureResult IntegratePiecewise(const Integrand& f,
                                    std::span<const double> breakpoints,
                                    double tol) {
  QuadratureResult total;
  if (breakpoints.size() < 2) return total;
  const double segment_tol = tol / static_cast<double>(breakpoints.size() - 1);
  for (size_t k = 0; k + 1 < breakpoints.size(); ++k) {
    QuadratureResult part;
    try {
      part = IntegrateDyadic(f, breakpoints[k], breakpoints[k + 1], segment_tol);
    } catch (const QuadratureError& e) {
      QuadratureResult best = e.best();
      best.value += total.value;
      best.abs_error_estimate += total.abs_error_estimate;
      best.nodes_used += total.nodes_used;
      throw QuadratureError(e.what(), best);
    }
    total.value += part.value;
    total.abs_error_estimate += part.abs_error_estimate;
    total.nodes_used += part.nodes_used;
  }
  return total;
}

}  // namespace mset
