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

#ifndef MSET_SRC_ANCHORED_INTEGRAL_H_
#define MSET_SRC_ANCHORED_INTEGRAL_H_

#include <span>

#include "mset/quadrature.h"

namespace mset::internal {

// int_{y > y_low} y^{-order} exp(-1/y^2) h(y - anchor) dy, computed as
// int_0^{1/y_low} t^{order-2} exp(-t^2) h(1/t - anchor) dt.
//
// h must vanish for y <= y_low. Breakpoints are placed where 1/t equals
// |anchor - c| for each c in `offsets`, which is where the Fréchet factors
// of h switch on or change scale.
QuadratureResult IntegrateAnchored(double anchor, double y_low,
                                   std::span<const double> offsets, int order,
                                   double tol, const Integrand& h);

}  // namespace mset::internal

#endif  // MSET_SRC_ANCHORED_INTEGRAL_H_
