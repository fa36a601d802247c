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

// Numerical check batteries for the selection-probability oracle, the
// geometric resampling estimator and the auxiliary inequalities.
//
// Every check yields one CheckRow. Monte-Carlo comparisons use the standard
// error implied by the oracle value (the null model), so a degenerate
// probability of exactly 0 or 1 is not flagged by a zero empirical spread.

#ifndef MSET_VERIFY_H_
#define MSET_VERIFY_H_

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "mset/quadrature.h"

namespace mset {

struct CheckRow {
  std::string name;
  std::string parameters;  // "key=value" pairs separated by ';'
  double value = 0.0;
  double bound = 0.0;
  bool pass = false;
};

// Lower floors for the scaled witness ratios
//   U_4/U_3 * sqrt(K / ln K)   and   R_4/R_3 / (M/K)^(1/3).
// Computed values on the default grids lie in [0.70, 0.75] and
// [0.83, 0.89]; the floors are deliberately loose shape checks.
inline constexpr double kURatioFloor = 0.05;
inline constexpr double kRRatioFloor = 0.05;
// Upper sanity bound for R_4/R_3 / (M/K)^(1/3) over the grid.
inline constexpr double kRRatioCeiling = 2.0;

struct VerifyOptions {
  double tol = kDefaultQuadratureTol;
  std::uint64_t seed = 20261016;
  // K values for the U-ratio witness.
  std::vector<double> k_grid = {100.0, 1e4};
  // (M, K) pairs for the R-ratio witness; M >= 2K.
  std::vector<std::pair<int, double>> mk_grid = {{64, 2.0}, {512, 4.0}};
  int phi_instances = 100;
  std::int64_t phi_samples = 1'000'000;
  int binomial_instances = 1000;
  int resample_states = 20;
  std::int64_t resample_draws = 100'000;
  int lemma_instances = 20;
  std::int64_t top_m_samples = 100'000;
};

// Sum identity and quadrature-vs-Monte-Carlo agreement on random lambda.
std::vector<CheckRow> PhiIdentityChecks(const VerifyOptions& options);
// Poisson-binomial DP against exhaustive enumeration, |p| <= 12.
std::vector<CheckRow> PoissonBinomialChecks(const VerifyOptions& options);
// Shift invariance, finite-difference monotonicity, limits.
std::vector<CheckRow> PhiStructureChecks(const VerifyOptions& options);
// Mean and survival function of K against 1/phi and (1 - phi)^k.
std::vector<CheckRow> ResamplingChecks(const VerifyOptions& options);
// w_star regimes, phi lower bound, top-m Frechet sum, V_{i,N} upper bound.
std::vector<CheckRow> LemmaChecks(const VerifyOptions& options);
// U and R ratio witnesses against their floors.
std::vector<CheckRow> WitnessChecks(const VerifyOptions& options);

// "phi", "resampling", "lemmas", "witnesses" or "all".
bool IsKnownSuite(std::string_view suite);
// Throws std::invalid_argument for unknown suites.
std::vector<CheckRow> RunSuite(std::string_view suite,
                               const VerifyOptions& options);

// Columns: check_name,parameters,value,bound,pass.
void WriteVerifyCsv(std::ostream& out, const std::vector<CheckRow>& rows);
void WriteVerifyCsv(const std::filesystem::path& path,
                    const std::vector<CheckRow>& rows);

}  // namespace mset

#endif  // MSET_VERIFY_H_
