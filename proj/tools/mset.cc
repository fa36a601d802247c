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

// mset: run regret experiments, verification suites and regret plots.
//
// Exit codes: 0 success, 1 failed check or runtime failure, 2 usage or
// configuration error.

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "mset/harness.h"
#include "mset/report.h"
#include "mset/verify.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;

struct RunArgs {
  std::string config;
  std::string out;
  int threads = -1;
};

struct VerifyArgs {
  std::string suite;
  std::vector<double> k;
  double tol = mset::kDefaultQuadratureTol;
  std::uint64_t seed = mset::VerifyOptions{}.seed;
  int instances = -1;
  std::int64_t samples = -1;
  std::string out = ".";
};

struct PlotArgs {
  std::string summary;
  std::string out;
  std::string panels = "linear,loglog";
};

int CmdRun(const RunArgs& args) {
  mset::ExperimentConfig config;
  try {
    config = mset::LoadConfig(args.config);
    if (!args.out.empty()) config.output_dir = args.out;
    if (args.threads >= 0) config.threads = args.threads;
    config.Validate();
  } catch (const mset::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitUsage;
  }
  try {
    const std::filesystem::path dir(config.output_dir);
    std::filesystem::create_directories(dir);
    const auto start = std::chrono::steady_clock::now();
    const std::vector<mset::RegretTrace> traces = mset::RunExperiment(config);
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    mset::WriteTracesCsv(dir / "traces.csv", traces);
    mset::WriteSummaryCsv(dir / "summary.csv", mset::Aggregate(traces));
    int failed = 0;
    for (const mset::RegretTrace& tr : traces) {
      if (!tr.error.empty()) {
        ++failed;
        std::cerr << "trace " << tr.policy << " rep " << tr.repetition
                  << " aborted: " << tr.error << "\n";
      }
    }
    std::cout << "ran " << traces.size() << " traces in " << seconds << " s with "
              << mset::ResolveThreadCount(config.threads) << " threads; wrote "
              << (dir / "traces.csv").string() << " and "
              << (dir / "summary.csv").string() << "\n";
    return failed == 0 ? kExitOk : kExitFailure;
  } catch (const mset::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "run failed: " << e.what() << "\n";
    return kExitFailure;
  }
}

int CmdVerify(const VerifyArgs& args) {
  if (!mset::IsKnownSuite(args.suite)) {
    std::cerr << "unknown suite '" << args.suite
              << "' (expected phi, resampling, lemmas, witnesses or all)\n";
    return kExitUsage;
  }
  mset::VerifyOptions options;
  options.tol = args.tol;
  options.seed = args.seed;
  if (!args.k.empty()) {
    for (double k : args.k) {
      if (!(k >= 2.0)) {
        std::cerr << "--k values must be >= 2\n";
        return kExitUsage;
      }
    }
    options.k_grid = args.k;
  }
  if (args.instances > 0) {
    options.phi_instances = args.instances;
    options.binomial_instances = args.instances;
    options.resample_states = args.instances;
    options.lemma_instances = args.instances;
  }
  if (args.samples > 0) {
    options.phi_samples = args.samples;
    options.resample_draws = args.samples;
    options.top_m_samples = args.samples;
  }
  try {
    const std::vector<mset::CheckRow> rows = mset::RunSuite(args.suite, options);
    std::filesystem::create_directories(args.out);
    const std::filesystem::path path = std::filesystem::path(args.out) / "verify.csv";
    mset::WriteVerifyCsv(path, rows);
    int failed = 0;
    for (const mset::CheckRow& r : rows) {
      if (r.pass) continue;
      ++failed;
      std::cerr << "FAIL " << r.name << " [" << r.parameters << "] value=" << r.value
                << " bound=" << r.bound << "\n";
    }
    std::cout << rows.size() - failed << "/" << rows.size() << " checks passed; wrote "
              << path.string() << "\n";
    return failed == 0 ? kExitOk : kExitFailure;
  } catch (const std::exception& e) {
    std::cerr << "verify failed: " << e.what() << "\n";
    return kExitFailure;
  }
}

int CmdPlot(const PlotArgs& args) {
  std::vector<mset::PlotPanel> panels;
  std::vector<mset::PolicySummary> summaries;
  try {
    panels = mset::ParsePanels(args.panels);
    summaries = mset::ReadSummaryCsv(args.summary);
  } catch (const std::exception& e) {
    std::cerr << "plot: " << e.what() << "\n";
    return kExitUsage;
  }
  std::ofstream out(args.out, std::ios::binary);
  if (!out) {
    std::cerr << "plot: cannot write " << args.out << "\n";
    return kExitFailure;
  }
  out << mset::RenderRegretSvg(summaries, panels);
  if (!out) {
    std::cerr << "plot: write failed for " << args.out << "\n";
    return kExitFailure;
  }
  std::cout << "wrote " << args.out << " (" << summaries.size() << " series)\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"FTPL m-set semi-bandit experiments and numerical checks"};
  app.require_subcommand(1);

  RunArgs run_args;
  CLI::App* run = app.add_subcommand("run", "Run an experiment config");
  run->add_option("config", run_args.config, "Experiment JSON file")->required();
  run->add_option("--out", run_args.out, "Output directory (overrides run.output_dir)");
  run->add_option("--threads", run_args.threads, "Worker threads (0 = all cores)");

  VerifyArgs verify_args;
  CLI::App* verify = app.add_subcommand("verify", "Run a numerical check suite");
  verify->add_option("suite", verify_args.suite, "phi, resampling, lemmas, witnesses or all")
      ->required();
  verify->add_option("--k", verify_args.k, "K grid for the U-ratio witness")
      ->delimiter(',');
  verify->add_option("--tol", verify_args.tol, "Quadrature tolerance")
      ->check(CLI::PositiveNumber);
  verify->add_option("--seed", verify_args.seed, "Master seed");
  verify->add_option("--instances", verify_args.instances,
                     "Random instances per check family");
  verify->add_option("--samples", verify_args.samples, "Monte-Carlo samples per check");
  verify->add_option("--out", verify_args.out, "Directory for verify.csv");

  PlotArgs plot_args;
  CLI::App* plot = app.add_subcommand("plot", "Render summary.csv as SVG");
  plot->add_option("summary", plot_args.summary, "summary.csv from 'run'")->required();
  plot->add_option("--out", plot_args.out, "Output SVG path")->required();
  plot->add_option("--panels", plot_args.panels, "Comma-separated: linear,loglog");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }
  if (run->parsed()) return CmdRun(run_args);
  if (verify->parsed()) return CmdVerify(verify_args);
  return CmdPlot(plot_args);
}
