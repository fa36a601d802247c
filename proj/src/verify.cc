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

#include "mset/verify.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <type_traits>

#include "mset/ftpl.h"
#include "mset/lemmas.h"
#include "mset/phi.h"
#include "mset/random.h"
#include "mset/report.h"

namespace mset {
namespace {

// Stream tags, one per check family.
enum StreamTag : std::uint32_t {
  kTagPhiInstances = 1,
  kTagPhiMonteCarlo = 2,
  kTagBinomial = 3,
  kTagStructure = 4,
  kTagResampleStates = 5,
  kTagResampleDraws = 6,
  kTagLemmaInstances = 7,
  kTagTopM = 8,
};

int UniformInt(Rng& rng, int lo, int hi) {
  return lo + static_cast<int>(UniformHalfOpen(rng) * (hi - lo + 1));
}

double UniformReal(Rng& rng, double lo, double hi) {
  return lo + (hi - lo) * UniformHalfOpen(rng);
}

std::vector<double> RandomLambda(Rng& rng, int d, double hi) {
  std::vector<double> lambda(d);
  for (double& v : lambda) v = UniformReal(rng, 0.0, hi);
  return lambda;
}

class Params {
 public:
  template <typename T>
  Params& Add(const char* key, const T& value) {
    if (!text_.empty()) text_ += ';';
    text_ += key;
    text_ += '=';
    if constexpr (std::is_floating_point_v<T>) {
      text_ += FormatDouble(value);
    } else if constexpr (std::is_convertible_v<T, std::string>) {
      text_ += value;
    } else {
      text_ += std::to_string(value);
    }
    return *this;
  }
  const std::string& str() const { return text_; }

 private:
  std::string text_;
};

CheckRow AtMost(std::string name, const Params& p, double value, double bound) {
  return {std::move(name), p.str(), value, bound, value <= bound};
}

CheckRow AtLeast(std::string name, const Params& p, double value, double bound) {
  return {std::move(name), p.str(), value, bound, value >= bound};
}

// Binomial null-model standard error of a frequency estimate of p.
double NullSe(double p, double n) {
  return std::sqrt(std::max(0.0, p * (1.0 - p)) / n);
}

// Exact P(sum <= threshold) by enumerating all 2^|p| outcomes.
double EnumeratedTail(const std::vector<double>& p, int threshold) {
  const int n = static_cast<int>(p.size());
  double total = 0.0;
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    if (std::popcount(mask) > threshold) continue;
    double prob = 1.0;
    for (int q = 0; q < n; ++q) prob *= (mask >> q & 1u) ? p[q] : 1.0 - p[q];
    total += prob;
  }
  return total;
}

void Append(std::vector<CheckRow>& out, std::vector<CheckRow> more) {
  out.insert(out.end(), std::make_move_iterator(more.begin()),
             std::make_move_iterator(more.end()));
}

}  // namespace

std::vector<CheckRow> PhiIdentityChecks(const VerifyOptions& o) {
  std::vector<CheckRow> rows;
  Rng instances = MakeStream(o.seed, kTagPhiInstances, 0);
  for (int n = 0; n < o.phi_instances; ++n) {
    const int d = UniformInt(instances, 3, 20);
    const int m = UniformInt(instances, 1, d);
    const std::vector<double> lambda = RandomLambda(instances, d, 5.0);
    MarginalVector w(d);
    double sum = 0.0;
    for (int i = 0; i < d; ++i) {
      w[i] = PhiQuadrature(lambda, i, m, o.tol).value;
      sum += w[i];
    }
    Params p;
    p.Add("instance", n).Add("d", d).Add("m", m);
    rows.push_back(AtMost("phi_sum_identity", p, std::abs(sum - m), 1e-6));

    Rng rng = MakeStream(o.seed, kTagPhiMonteCarlo, static_cast<std::uint32_t>(n));
    const MonteCarloMarginals mc = PhiMonteCarlo(lambda, m, o.phi_samples, rng);
    const double samples = static_cast<double>(o.phi_samples);
    for (int i = 0; i < d; ++i) {
      Params pa = p;
      pa.Add("arm", i).Add("phi", w[i]).Add("mc", mc.frequencies[i]);
      rows.push_back(AtMost("phi_quadrature_vs_mc", pa,
                            std::abs(w[i] - mc.frequencies[i]),
                            3.0 * NullSe(w[i], samples) + o.tol));
    }
  }
  return rows;
}

std::vector<CheckRow> PoissonBinomialChecks(const VerifyOptions& o) {
  std::vector<CheckRow> rows;
  Rng rng = MakeStream(o.seed, kTagBinomial, 0);
  for (int n = 0; n < o.binomial_instances; ++n) {
    const int size = UniformInt(rng, 0, 12);
    const int threshold = UniformInt(rng, 0, size);
    std::vector<double> p(size);
    for (double& v : p) {
      // Exact 0 and 1 entries exercise the boundary branches.
      const double u = UniformHalfOpen(rng);
      v = u < 0.05 ? 0.0 : u > 0.95 ? 1.0 : UniformHalfOpen(rng);
    }
    const double dp = PoissonBinomialTail(p, threshold);
    const double exact = EnumeratedTail(p, threshold);
    Params pa;
    pa.Add("instance", n).Add("size", size).Add("threshold", threshold);
    rows.push_back(AtMost("poisson_binomial_vs_enumeration", pa,
                          std::abs(dp - exact), 1e-12));
  }
  return rows;
}

std::vector<CheckRow> PhiStructureChecks(const VerifyOptions& o) {
  std::vector<CheckRow> rows;
  Rng rng = MakeStream(o.seed, kTagStructure, 0);
  for (int n = 0; n < 10; ++n) {
    const int d = UniformInt(rng, 3, 10);
    const int m = UniformInt(rng, 1, d - 1);
    const std::vector<double> lambda = RandomLambda(rng, d, 5.0);
    const MarginalVector w = PhiAll(lambda, m, o.tol);
    const double c = UniformReal(rng, -50.0, 50.0);
    std::vector<double> shifted = lambda;
    for (double& v : shifted) v += c;
    const MarginalVector ws = PhiAll(shifted, m, o.tol);
    double worst = 0.0;
    for (int i = 0; i < d; ++i) worst = std::max(worst, std::abs(w[i] - ws[i]));
    Params p;
    p.Add("instance", n).Add("d", d).Add("m", m).Add("shift", c);
    rows.push_back(AtMost("phi_shift_invariance", p, worst, 2.0 * o.tol));

    // Raising lambda_j by 0.1 lowers phi_j and raises every other phi.
    const int j = UniformInt(rng, 0, d - 1);
    std::vector<double> bumped = lambda;
    bumped[j] += 0.1;
    const MarginalVector wb = PhiAll(bumped, m, o.tol);
    for (int i = 0; i < d; ++i) {
      Params pi;
      pi.Add("instance", n).Add("d", d).Add("m", m).Add("bumped", j).Add("arm", i);
      if (i == j) {
        rows.push_back(AtMost("phi_monotone_own", pi, wb[i] - w[i], 2.0 * o.tol));
      } else {
        rows.push_back(AtLeast("phi_monotone_other", pi, wb[i] - w[i], -2.0 * o.tol));
      }
    }
  }
  {
    const std::vector<double> lambda = {0.0, 0.0, 0.0};
    Params p;
    p.Add("d", 3).Add("m", 2);
    rows.push_back(AtMost("phi_symmetric", p,
                          std::abs(PhiQuadrature(lambda, 0, 2, o.tol).value - 2.0 / 3.0),
                          o.tol));
  }
  {
    const std::vector<double> lambda = {0.0, 1e6};
    Params p;
    p.Add("d", 2).Add("m", 1).Add("gap", 1e6);
    rows.push_back(AtMost("phi_dominant_arm", p,
                          1.0 - PhiQuadrature(lambda, 0, 1, o.tol).value, 1e-6));
  }
  return rows;
}

std::vector<CheckRow> ResamplingChecks(const VerifyOptions& o) {
  std::vector<CheckRow> rows;
  Rng states = MakeStream(o.seed, kTagResampleStates, 0);
  const double n = static_cast<double>(o.resample_draws);
  for (int s = 0; s < o.resample_states; ++s) {
    const int d = UniformInt(states, 3, 12);
    const int m = UniformInt(states, 1, d - 1);
    const double eta = UniformReal(states, 0.2, 1.0);
    const std::vector<double> lhat = RandomLambda(states, d, 4.0);
    std::vector<double> lambda(d);
    for (int i = 0; i < d; ++i) lambda[i] = eta * lhat[i];
    const MarginalVector w = PhiAll(lambda, m, o.tol);
    for (int arm = 0; arm < d; ++arm) {
      if (w[arm] < 0.05) continue;
      Rng rng = MakeStream(o.seed, kTagResampleDraws,
                           static_cast<std::uint32_t>(s * 64 + arm));
      double sum = 0.0;
      std::int64_t above[3] = {0, 0, 0};
      constexpr int kLevels[3] = {1, 5, 20};
      for (std::int64_t k = 0; k < o.resample_draws; ++k) {
        const ResampleResult r = GeometricResample(lhat, eta, arm, m, rng);
        sum += static_cast<double>(r.count);
        for (int j = 0; j < 3; ++j) {
          if (r.count > static_cast<std::uint64_t>(kLevels[j])) ++above[j];
        }
      }
      const double phi = w[arm];
      Params p;
      p.Add("state", s).Add("d", d).Add("m", m).Add("arm", arm).Add("phi", phi);
      // Var K = (1 - phi) / phi^2 under the geometric law.
      const double se_mean = std::sqrt((1.0 - phi) / (phi * phi) / n);
      Params pm = p;
      pm.Add("mean_k", sum / n);
      rows.push_back(AtMost("resample_mean", pm, std::abs(sum / n - 1.0 / phi),
                            3.0 * se_mean));
      for (int j = 0; j < 3; ++j) {
        const double expected = std::pow(1.0 - phi, kLevels[j]);
        const double observed = static_cast<double>(above[j]) / n;
        Params ps = p;
        ps.Add("k", kLevels[j]).Add("survival", observed);
        rows.push_back(AtMost("resample_survival", ps, std::abs(observed - expected),
                              3.0 * NullSe(expected, n)));
      }
    }
  }
  return rows;
}

std::vector<CheckRow> LemmaChecks(const VerifyOptions& o) {
  std::vector<CheckRow> rows;
  Rng rng = MakeStream(o.seed, kTagLemmaInstances, 0);

  // Instances sorted by construction: m arms in [0, 1], the others above
  // the m-th smallest by the given gaps.
  const auto build = [&rng](int d, int m, const std::vector<double>& gaps) {
    std::vector<double> lambda(d);
    for (int i = 0; i < m; ++i) lambda[i] = UniformReal(rng, 0.0, 1.0);
    const double pivot = *std::max_element(lambda.begin(), lambda.begin() + m);
    for (int i = m; i < d; ++i) lambda[i] = pivot + gaps[i - m];
    return lambda;
  };

  for (int n = 0; n < o.lemma_instances; ++n) {
    // Every gap at least sqrt(2.1 m (d - m)) keeps the inverse-square sum
    // below 1/(2m).
    const int d = UniformInt(rng, 2, 10);
    const int m = UniformInt(rng, 1, d - 1);
    const double g0 = std::sqrt(2.1 * m * (d - m));
    std::vector<double> gaps(d - m);
    for (double& g : gaps) g = UniformReal(rng, g0, 3.0 * g0);
    const std::vector<double> lambda = build(d, m, gaps);
    const double s = InverseSquareGapSum(lambda, m);
    Params p;
    p.Add("instance", n).Add("d", d).Add("m", m).Add("gap_sum", s);
    rows.push_back(AtLeast("wstar_lower_regime", p, WStar(lambda, m, o.tol), 0.5));

    // phi lower bound on the arm with the smallest positive gap (the
    // tightest bound), plus one random other arm.
    const std::vector<double> lower = LowerGaps(lambda, m);
    int tight = m;
    for (int i = m; i < d; ++i) {
      if (lower[i] < lower[tight]) tight = i;
    }
    for (int arm : {tight, UniformInt(rng, m, d - 1)}) {
      const double phi = PhiQuadrature(lambda, arm, m, o.tol).value;
      const double bound = 1.0 / (4.0 * std::numbers::e * lower[arm] * lower[arm]);
      Params pa = p;
      pa.Add("arm", arm).Add("gap", lower[arm]);
      rows.push_back(AtLeast("phi_lower_bound", pa, phi, bound - o.tol));
    }
  }
  for (int n = 0; n < o.lemma_instances; ++n) {
    const int d = UniformInt(rng, 2, 10);
    const int m = UniformInt(rng, 1, d - 1);
    std::vector<double> gaps(d - m);
    std::vector<double> lambda;
    double s = 0.0;
    // Gaps up to sqrt(2 m (d - m)) place the inverse-square sum above
    // 1/(2m) in most draws; redraw otherwise. A zero gap is allowed.
    do {
      for (double& g : gaps) {
        g = UniformHalfOpen(rng) < 0.1 ? 0.0
                                       : UniformReal(rng, 0.05, std::sqrt(2.0 * m * (d - m)));
      }
      lambda = build(d, m, gaps);
      s = InverseSquareGapSum(lambda, m);
    } while (!(s >= 0.5 / m));
    Params p;
    p.Add("instance", n).Add("d", d).Add("m", m).Add("gap_sum", s);
    rows.push_back(AtMost("wstar_upper_regime", p, WStar(lambda, m, o.tol),
                          1.0 - 1.0 / (16.0 * m)));
  }
  {
    const std::vector<double> lambda = {0.0, 0.0};
    Params p;
    p.Add("d", 2).Add("m", 1);
    rows.push_back(AtMost("wstar_symmetric", p, std::abs(WStar(lambda, 1, o.tol) - 0.5),
                          o.tol));
  }
  for (const auto& [lambda, m] :
       std::vector<std::pair<std::vector<double>, int>>{
           {{0.0, 0.0, 20.0, 30.0, 40.0, 50.0}, 2}, {{0.0, 10.0, 10.0, 10.0}, 1}}) {
    const int d = static_cast<int>(lambda.size());
    Params p;
    p.Add("d", d).Add("m", m).Add("arm", d - 1);
    const double gap = LowerGaps(lambda, m)[d - 1];
    rows.push_back(AtLeast("phi_lower_bound_fixed", p,
                           PhiQuadrature(lambda, d - 1, m, o.tol).value,
                           1.0 / (4.0 * std::numbers::e * gap * gap) - o.tol));
  }

  const std::pair<int, int> top_m_cases[] = {{10, 5}, {100, 10}, {1000, 30}};
  for (const auto& [d, m] : top_m_cases) {
    Rng top = MakeStream(o.seed, kTagTopM, static_cast<std::uint32_t>(d));
    Params p;
    p.Add("d", d).Add("m", m).Add("samples", o.top_m_samples);
    rows.push_back(AtMost("top_m_frechet_sum", p,
                          TopMSumEstimate(d, m, o.top_m_samples, top),
                          5.0 * std::sqrt(static_cast<double>(m) * d)));
  }

  // V_{i,N} <= gap^(1-N) / (N-1) for arms outside the m smallest.
  for (int n = 0; n < 5; ++n) {
    const int d = UniformInt(rng, 3, 8);
    const int m = UniformInt(rng, 1, d - 1);
    std::vector<double> gaps(d - m);
    for (double& g : gaps) g = UniformReal(rng, 0.2, 4.0);
    const std::vector<double> lambda = build(d, m, gaps);
    const std::vector<double> lower = LowerGaps(lambda, m);
    for (int order : {2, 3, 4}) {
      const int arm = UniformInt(rng, m, d - 1);
      Params p;
      p.Add("instance", n).Add("d", d).Add("m", m).Add("arm", arm).Add("order", order);
      rows.push_back(AtMost("v_integral_bound", p,
                            VIntegral(lambda, arm, order, m, o.tol).value,
                            std::pow(lower[arm], 1.0 - order) / (order - 1) + o.tol));
    }
  }
  return rows;
}

std::vector<CheckRow> WitnessChecks(const VerifyOptions& o) {
  std::vector<CheckRow> rows;
  double previous = std::numeric_limits<double>::infinity();
  std::vector<double> ks = o.k_grid;
  std::sort(ks.begin(), ks.end());
  for (double k : ks) {
    const double ratio = URatioWitness(k, o.tol);
    Params p;
    p.Add("K", k).Add("ratio", ratio);
    rows.push_back(AtLeast("u_ratio_witness", p, ratio * std::sqrt(k / std::log(k)),
                           kURatioFloor));
    // The ratio itself must decay in K.
    rows.push_back(AtMost("u_ratio_decay", p, ratio, previous));
    previous = ratio;
  }
  for (const auto& [count_m, k] : o.mk_grid) {
    const double ratio = RRatioWitness(count_m, k, o.tol);
    const double scaled = ratio / std::cbrt(count_m / k);
    Params p;
    p.Add("M", count_m).Add("K", k).Add("ratio", ratio);
    rows.push_back(AtLeast("r_ratio_witness", p, scaled, kRRatioFloor));
    rows.push_back(AtMost("r_ratio_ceiling", p, scaled, kRRatioCeiling));
  }
  return rows;
}

bool IsKnownSuite(std::string_view suite) {
  return suite == "phi" || suite == "resampling" || suite == "lemmas" ||
         suite == "witnesses" || suite == "all";
}

std::vector<CheckRow> RunSuite(std::string_view suite, const VerifyOptions& o) {
  if (!IsKnownSuite(suite)) {
    throw std::invalid_argument("unknown suite '" + std::string(suite) + "'");
  }
  const bool all = suite == "all";
  std::vector<CheckRow> rows;
  if (all || suite == "phi") {
    Append(rows, PoissonBinomialChecks(o));
    Append(rows, PhiStructureChecks(o));
    Append(rows, PhiIdentityChecks(o));
  }
  if (all || suite == "resampling") Append(rows, ResamplingChecks(o));
  if (all || suite == "lemmas") Append(rows, LemmaChecks(o));
  if (all || suite == "witnesses") Append(rows, WitnessChecks(o));
  return rows;
}

void WriteVerifyCsv(std::ostream& out, const std::vector<CheckRow>& rows) {
  out << "check_name,parameters,value,bound,pass\n";
  for (const CheckRow& r : rows) {
    out << r.name << ',' << r.parameters << ',' << FormatDouble(r.value) << ','
        << FormatDouble(r.bound) << ',' << (r.pass ? "true" : "false") << '\n';
  }
}

void WriteVerifyCsv(const std::filesystem::path& path,
                    const std::vector<CheckRow>& rows) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  WriteVerifyCsv(out, rows);
}

}  // namespace mset
