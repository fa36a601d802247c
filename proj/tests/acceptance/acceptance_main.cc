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

// Acceptance suite: one PASS/FAIL line per criterion, exit 1 if any fails.
//
// Usage: mset_acceptance [config_dir] [output_dir]
// config_dir must hold stochastic.json, adversarial.json and smoke.json.
// Regret artifacts of the full-scale runs are written to output_dir.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "mset/harness.h"
#include "mset/report.h"
#include "mset/verify.h"

namespace {

namespace fs = std::filesystem;
using mset::CheckRow;
using mset::PolicySummary;

struct Outcome {
  bool pass = false;
  std::string detail;
};

int g_failures = 0;

void Report(int index, const std::string& title, const Outcome& o, double seconds) {
  std::printf("%s criterion %d (%s): %s [%.1f s]\n", o.pass ? "PASS" : "FAIL", index,
              title.c_str(), o.detail.c_str(), seconds);
  std::fflush(stdout);
  if (!o.pass) ++g_failures;
}

template <typename F>
void Timed(int index, const std::string& title, F&& body) {
  const auto start = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  Report(index, title,
         o, std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count());
}

std::string Fmt(double x) {
  std::ostringstream s;
  s.precision(6);
  s << x;
  return s.str();
}

// Summarizes a batch of checks; prints up to 10 failing rows.
Outcome FromRows(const std::vector<CheckRow>& rows) {
  std::map<std::string, std::pair<int, int>> by_name;  // failed, total
  for (const CheckRow& r : rows) {
    auto& [failed, total] = by_name[r.name];
    ++total;
    if (!r.pass) {
      if (failed < 10) {
        std::printf("  failing %s [%s] value=%s bound=%s\n", r.name.c_str(),
                    r.parameters.c_str(), Fmt(r.value).c_str(), Fmt(r.bound).c_str());
      }
      ++failed;
    }
  }
  Outcome o{true, ""};
  for (const auto& [name, counts] : by_name) {
    if (!o.detail.empty()) o.detail += ", ";
    o.detail += name + " " + std::to_string(counts.second - counts.first) + "/" +
                std::to_string(counts.second);
    if (counts.first > 0) o.pass = false;
  }
  return o;
}

const PolicySummary& Find(const std::vector<PolicySummary>& s, const std::string& label) {
  for (const PolicySummary& p : s) {
    if (p.policy == label) return p;
  }
  throw std::runtime_error("no summary for policy '" + label + "'");
}

// Mean regret at round t, linear between the bracketing checkpoints.
double MeanAt(const PolicySummary& s, std::int64_t t) {
  const auto it = std::lower_bound(s.t.begin(), s.t.end(), t);
  if (it == s.t.end()) throw std::runtime_error("round beyond the last checkpoint");
  const size_t k = static_cast<size_t>(it - s.t.begin());
  if (*it == t || k == 0) return s.mean[k];
  const double t0 = static_cast<double>(s.t[k - 1]);
  const double t1 = static_cast<double>(s.t[k]);
  const double a = (static_cast<double>(t) - t0) / (t1 - t0);
  return (1.0 - a) * s.mean[k - 1] + a * s.mean[k];
}

std::string Slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

struct FullRun {
  mset::ExperimentConfig config;
  std::vector<PolicySummary> summaries;
  std::string error;
};

FullRun RunFull(const fs::path& config_path, const fs::path& out_dir) {
  FullRun run;
  run.config = mset::LoadConfig(config_path);
  run.config.threads = 0;
  const auto start = std::chrono::steady_clock::now();
  const std::vector<mset::RegretTrace> traces = mset::RunExperiment(run.config);
  for (const mset::RegretTrace& tr : traces) {
    if (!tr.error.empty()) {
      run.error = tr.policy + " rep " + std::to_string(tr.repetition) + ": " + tr.error;
    }
  }
  run.summaries = mset::Aggregate(traces);
  fs::create_directories(out_dir);
  mset::WriteTracesCsv(out_dir / "traces.csv", traces);
  mset::WriteSummaryCsv(out_dir / "summary.csv", run.summaries);
  std::ofstream(out_dir / "regret.svg")
      << mset::RenderRegretSvg(run.summaries,
                               {mset::PlotPanel::kLinear, mset::PlotPanel::kLogLog});
  std::printf("  ran %s: %zu traces in %.0f s, artifacts in %s\n",
              config_path.filename().string().c_str(), traces.size(),
              std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
                  .count(),
              out_dir.string().c_str());
  std::fflush(stdout);
  return run;
}

Outcome StochasticShape(const FullRun& run) {
  if (!run.error.empty()) return {false, "aborted trace " + run.error};
  const PolicySummary& ftpl = Find(run.summaries, "ftpl");
  const double r6 = MeanAt(ftpl, 1'000'000);
  const double r5 = MeanAt(ftpl, 100'000);
  const double ratio = r6 / r5;
  const auto log_fit = mset::GrowthFit(ftpl.t, ftpl.mean, mset::GrowthModel::kLog);
  const auto sqrt_fit = mset::GrowthFit(ftpl.t, ftpl.mean, mset::GrowthModel::kSqrt);
  const bool pass = ratio <= 2.0 && log_fit.r_squared > sqrt_fit.r_squared;
  return {pass, "r(1e6)=" + Fmt(r6) + " r(1e5)=" + Fmt(r5) + " ratio=" + Fmt(ratio) +
                    " (<= 2), R2 log=" + Fmt(log_fit.r_squared) +
                    " sqrt=" + Fmt(sqrt_fit.r_squared)};
}

Outcome AdversarialShape(const FullRun& run) {
  if (!run.error.empty()) return {false, "aborted trace " + run.error};
  const PolicySummary& ftpl = Find(run.summaries, "ftpl");
  const double r6 = MeanAt(ftpl, 1'000'000);
  const double r25 = MeanAt(ftpl, 250'000);
  const double ratio = r6 / r25;
  // Average regret over the last decade, smoothed by a 5-point moving mean.
  std::vector<double> rate;
  for (size_t k = 0; k < ftpl.t.size(); ++k) {
    if (ftpl.t[k] >= ftpl.t.back() / 10) {
      rate.push_back(ftpl.mean[k] / static_cast<double>(ftpl.t[k]));
    }
  }
  std::vector<double> smooth;
  for (size_t k = 0; k + 5 <= rate.size(); ++k) {
    double sum = 0.0;
    for (size_t j = k; j < k + 5; ++j) sum += rate[j];
    smooth.push_back(sum / 5.0);
  }
  int rises = 0;
  for (size_t k = 1; k < smooth.size(); ++k) rises += smooth[k] > smooth[k - 1];
  const bool pass = ratio <= 2.6 && rises == 0 && smooth.size() >= 2;
  return {pass, "r(1e6)=" + Fmt(r6) + " r(2.5e5)=" + Fmt(r25) + " ratio=" + Fmt(ratio) +
                    " (<= 2.6), smoothed r/n " + Fmt(smooth.front()) + " -> " +
                    Fmt(smooth.back()) + " with " + std::to_string(rises) +
                    " increases over " + std::to_string(smooth.size()) + " points"};
}

Outcome Ordering(const FullRun& stochastic, const FullRun& adversarial) {
  if (!stochastic.error.empty() || !adversarial.error.empty()) {
    return {false, "aborted trace"};
  }
  const std::int64_t n = 1'000'000;
  const double exp2 = MeanAt(Find(stochastic.summaries, "exp2"), n);
  bool pass = true;
  std::string detail = "stochastic exp2=" + Fmt(exp2);
  for (const char* label : {"ftpl", "combucb", "thompson", "hybrid"}) {
    const double r = MeanAt(Find(stochastic.summaries, label), n);
    detail += std::string(" ") + label + "=" + Fmt(r);
    pass = pass && r < exp2;
  }
  double best = INFINITY;
  std::string best_label;
  for (const PolicySummary& s : adversarial.summaries) {
    if (s.policy == "ftpl") continue;
    const double r = MeanAt(s, n);
    if (r < best) {
      best = r;
      best_label = s.policy;
    }
  }
  const double ftpl = MeanAt(Find(adversarial.summaries, "ftpl"), n);
  pass = pass && ftpl <= 3.0 * best;
  detail += "; adversarial ftpl=" + Fmt(ftpl) + " best baseline " + best_label + "=" +
            Fmt(best) + " ratio=" + Fmt(ftpl / best) + " (<= 3)";
  return {pass, detail};
}

// Two executions per config at thread counts 1 and 4 must write identical
// traces.csv bytes; the smoke config runs at full scale, the others at a
// reduced horizon.
Outcome Determinism(const fs::path& config_dir, const fs::path& scratch) {
  std::vector<std::string> notes;
  bool pass = true;
  for (const char* name : {"smoke.json", "stochastic.json", "adversarial.json"}) {
    mset::ExperimentConfig config = mset::LoadConfig(config_dir / name);
    if (config.horizon > 20'000) {
      config.horizon = 20'000;
      config.repetitions = 4;
    }
    std::string bytes[2];
    const int threads[2] = {1, 4};
    for (int k = 0; k < 2; ++k) {
      config.threads = threads[k];
      const fs::path path = scratch / (std::string(name) + "." +
                                       std::to_string(threads[k]) + ".csv");
      mset::WriteTracesCsv(path, mset::RunExperiment(config));
      bytes[k] = Slurp(path);
    }
    const bool same = !bytes[0].empty() && bytes[0] == bytes[1];
    pass = pass && same;
    notes.push_back(std::string(name) + (same ? " identical" : " DIFFERENT") + " (" +
                    std::to_string(bytes[0].size()) + " bytes)");
  }
  std::string detail;
  for (const std::string& s : notes) detail += (detail.empty() ? "" : ", ") + s;
  return {pass, detail};
}

}  // namespace

int main(int argc, char** argv) {
  const fs::path config_dir = argc > 1 ? fs::path(argv[1]) : fs::path("configs");
  const fs::path out_dir = argc > 2 ? fs::path(argv[2]) : fs::path("acceptance_out");
  fs::create_directories(out_dir);
  std::printf("acceptance: configs from %s, %d worker threads\n",
              config_dir.string().c_str(), mset::ResolveThreadCount(0));

  const mset::VerifyOptions options;  // spec sizes; fixed seed
  Timed(1, "probability identity and Monte-Carlo agreement",
        [&] { return FromRows(mset::PhiIdentityChecks(options)); });
  Timed(2, "Poisson-binomial DP vs enumeration",
        [&] { return FromRows(mset::PoissonBinomialChecks(options)); });
  Timed(3, "geometric resampling law",
        [&] { return FromRows(mset::ResamplingChecks(options)); });
  Timed(4, "lemma witnesses", [&] {
    std::vector<CheckRow> rows = mset::LemmaChecks(options);
    const std::vector<CheckRow> witnesses = mset::WitnessChecks(options);
    rows.insert(rows.end(), witnesses.begin(), witnesses.end());
    return FromRows(rows);
  });

  FullRun stochastic;
  FullRun adversarial;
  try {
    stochastic = RunFull(config_dir / "stochastic.json", out_dir / "stochastic");
    adversarial = RunFull(config_dir / "adversarial.json", out_dir / "adversarial");
  } catch (const std::exception& e) {
    stochastic.error = adversarial.error = e.what();
  }
  Timed(5, "stochastic regret growth", [&] { return StochasticShape(stochastic); });
  Timed(6, "adversarial regret growth", [&] { return AdversarialShape(adversarial); });
  Timed(7, "policy ordering", [&] { return Ordering(stochastic, adversarial); });
  Timed(8, "determinism across thread counts",
        [&] { return Determinism(config_dir, out_dir); });

  std::printf("acceptance: %d of 8 criteria failed\n", g_failures);
  return g_failures == 0 ? 0 : 1;
}
