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

#include "mset/harness.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>
#include <thread>

#include "json.hpp"
#include "mset/baselines.h"
#include "mset/ftpl.h"

namespace mset {
namespace {

using nlohmann::json;

constexpr int kRecordedActions = 100;

const std::vector<std::string>& KnownPolicies() {
  static const std::vector<std::string> names = {
      "ftpl", "combucb", "thompson", "exp2", "logbarrier", "hybrid",
      "uniform", "oracle"};
  return names;
}

void RequireKeys(const json& object, const std::string& section,
                 std::initializer_list<const char*> allowed) {
  if (!object.is_object()) {
    throw ConfigError("config section '" + section + "' must be an object");
  }
  for (const auto& [key, value] : object.items()) {
    if (std::find_if(allowed.begin(), allowed.end(), [&](const char* a) {
          return key == a;
        }) == allowed.end()) {
      throw ConfigError("unknown key '" + key + "' in section '" + section + "'");
    }
  }
}

template <typename T>
T Get(const json& object, const char* key, T fallback) {
  if (!object.contains(key)) return fallback;
  try {
    return object.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad value for '") + key + "': " + e.what());
  }
}

LossMode ParseLossMode(const std::string& name) {
  if (name == "replay") return LossMode::kReplay;
  if (name == "fresh") return LossMode::kFresh;
  throw ConfigError("loss_mode must be 'replay' or 'fresh', got '" + name + "'");
}

std::vector<double> ReadMeansCsv(const std::string& path, int d) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open means_file " + path);
  std::vector<double> means;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream row(line);
    std::string cell;
    int count = 0;
    while (std::getline(row, cell, ',')) {
      try {
        means.push_back(std::stod(cell));
      } catch (const std::exception&) {
        throw ConfigError("means_file: bad number '" + cell + "'");
      }
      ++count;
    }
    if (count != d) throw ConfigError("means_file: each row needs d values");
  }
  return means;
}

}  // namespace

// -- Configuration ------------------------------------------------------------

void ExperimentConfig::Validate() const {
  const EnvironmentSpec& e = environment;
  if (e.d < 2) throw ConfigError("environment.d must be >= 2");
  if (e.m < 1 || e.m >= e.d) throw ConfigError("environment.m must lie in [1, d)");
  if (e.kind != EnvironmentKind::kReplay && !(e.delta > 0.0 && e.delta < 0.5)) {
    throw ConfigError("environment.delta must lie in (0, 1/2)");
  }
  if (e.kind == EnvironmentKind::kPhasedAdversarial && !(e.growth > 1.0)) {
    throw ConfigError("environment.growth must be > 1");
  }
  if (e.kind == EnvironmentKind::kReplay && e.means_file.empty()) {
    throw ConfigError("replay environments need environment.means_file");
  }
  if (policies.empty()) throw ConfigError("at least one policy is required");
  for (const PolicySpec& p : policies) {
    if (!IsKnownPolicy(p.name)) throw ConfigError("unknown policy '" + p.name + "'");
    if (!(p.rate_scale > 0.0)) throw ConfigError("rate_scale must be positive");
  }
  if (horizon < 1) throw ConfigError("run.horizon must be >= 1");
  if (repetitions < 1) throw ConfigError("run.repetitions must be >= 1");
  if (checkpoint_count < 1) throw ConfigError("run.checkpoints must be >= 1");
  if (threads < 0) throw ConfigError("run.threads must be >= 0");
}

ExperimentConfig ConfigFromJsonText(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  RequireKeys(doc, "<root>", {"environment", "policies", "run"});
  ExperimentConfig config;

  const json env = doc.value("environment", json::object());
  RequireKeys(env, "environment",
              {"kind", "d", "m", "delta", "growth", "loss_mode", "env_seed",
               "means_file", "loss_table_file"});
  EnvironmentSpec& e = config.environment;
  try {
    e.kind = ParseEnvironmentKind(Get<std::string>(env, "kind", "stochastic"));
  } catch (const std::invalid_argument& err) {
    throw ConfigError(err.what());
  }
  e.d = Get<int>(env, "d", e.d);
  e.m = Get<int>(env, "m", e.m);
  e.delta = Get<double>(env, "delta", e.delta);
  e.growth = Get<double>(env, "growth", e.growth);
  const std::string default_mode =
      e.kind == EnvironmentKind::kPhasedAdversarial ? "replay" : "fresh";
  e.loss_mode = ParseLossMode(Get<std::string>(env, "loss_mode", default_mode));
  e.env_seed = Get<std::uint64_t>(env, "env_seed", e.env_seed);
  e.means_file = Get<std::string>(env, "means_file", "");
  e.loss_table_file = Get<std::string>(env, "loss_table_file", "");

  if (!doc.contains("policies") || !doc["policies"].is_array()) {
    throw ConfigError("'policies' must be an array");
  }
  for (const json& entry : doc["policies"]) {
    PolicySpec spec;
    if (entry.is_string()) {
      spec.name = entry.get<std::string>();
    } else {
      RequireKeys(entry, "policies[]", {"name", "label", "rate_scale", "resample_cap"});
      if (!entry.contains("name")) throw ConfigError("policy entry needs 'name'");
      spec.name = Get<std::string>(entry, "name", "");
      spec.label = Get<std::string>(entry, "label", "");
      spec.rate_scale = Get<double>(entry, "rate_scale", 1.0);
      spec.resample_cap = Get<std::uint64_t>(entry, "resample_cap", 0);
    }
    if (spec.label.empty()) spec.label = spec.name;
    config.policies.push_back(spec);
  }

  const json run = doc.value("run", json::object());
  RequireKeys(run, "run",
              {"horizon", "repetitions", "master_seed", "checkpoints", "threads",
               "output_dir"});
  config.horizon = Get<std::int64_t>(run, "horizon", config.horizon);
  config.repetitions = Get<int>(run, "repetitions", config.repetitions);
  config.master_seed = Get<std::uint64_t>(run, "master_seed", config.master_seed);
  config.checkpoint_count = Get<int>(run, "checkpoints", config.checkpoint_count);
  config.threads = Get<int>(run, "threads", config.threads);
  config.output_dir = Get<std::string>(run, "output_dir", config.output_dir);
  config.Validate();
  return config;
}

ExperimentConfig LoadConfig(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  ExperimentConfig config = ConfigFromJsonText(buffer.str());
  // Relative data paths are resolved against the config's directory.
  const std::filesystem::path base = path.parent_path();
  for (std::string* p : {&config.environment.means_file,
                         &config.environment.loss_table_file}) {
    if (!p->empty() && std::filesystem::path(*p).is_relative()) {
      *p = (base / *p).string();
    }
  }
  return config;
}

std::string ConfigToJsonText(const ExperimentConfig& config) {
  const EnvironmentSpec& e = config.environment;
  json env = {{"kind", ToString(e.kind)},
              {"d", e.d},
              {"m", e.m},
              {"delta", e.delta},
              {"growth", e.growth},
              {"loss_mode", e.loss_mode == LossMode::kReplay ? "replay" : "fresh"},
              {"env_seed", e.env_seed}};
  if (!e.means_file.empty()) env["means_file"] = e.means_file;
  if (!e.loss_table_file.empty()) env["loss_table_file"] = e.loss_table_file;
  json policies = json::array();
  for (const PolicySpec& p : config.policies) {
    policies.push_back({{"name", p.name},
                        {"label", p.label},
                        {"rate_scale", p.rate_scale},
                        {"resample_cap", p.resample_cap}});
  }
  json run = {{"horizon", config.horizon},
              {"repetitions", config.repetitions},
              {"master_seed", config.master_seed},
              {"checkpoints", config.checkpoint_count},
              {"threads", config.threads},
              {"output_dir", config.output_dir}};
  return json{{"environment", env}, {"policies", policies}, {"run", run}}.dump(2);
}

std::vector<std::int64_t> LogSpacedCheckpoints(std::int64_t horizon, int count) {
  if (horizon < 1 || count < 1) {
    throw std::invalid_argument("LogSpacedCheckpoints: horizon and count must be >= 1");
  }
  std::vector<std::int64_t> out;
  if (horizon <= count) {
    out.resize(horizon);
    std::iota(out.begin(), out.end(), 1);
    return out;
  }
  if (count == 1) return {horizon};
  const double log_n = std::log(static_cast<double>(horizon));
  for (int k = 0; k < count; ++k) {
    std::int64_t t = std::llround(std::exp(log_n * k / (count - 1)));
    if (!out.empty()) t = std::max(t, out.back() + 1);
    // Leave room for the remaining points.
    t = std::min(t, horizon - (count - 1 - k));
    out.push_back(t);
  }
  out.back() = horizon;
  return out;
}

EnvironmentModel BuildEnvironment(const EnvironmentSpec& spec,
                                  std::int64_t horizon) {
  switch (spec.kind) {
    case EnvironmentKind::kStochastic:
      return EnvironmentModel::Stochastic(spec.d, spec.m, spec.delta, horizon);
    case EnvironmentKind::kPhasedAdversarial:
      return EnvironmentModel::PhasedAdversarial(spec.d, spec.m, spec.delta,
                                                 spec.growth, horizon);
    case EnvironmentKind::kReplay: {
      std::vector<double> means = ReadMeansCsv(spec.means_file, spec.d);
      if (static_cast<std::int64_t>(means.size() / spec.d) < horizon) {
        throw ConfigError("means_file has fewer rows than the horizon");
      }
      means.resize(static_cast<size_t>(horizon) * spec.d);
      return EnvironmentModel::Replay(spec.d, spec.m, std::move(means));
    }
  }
  throw ConfigError("unknown environment kind");
}

// -- Policies -----------------------------------------------------------------

bool IsKnownPolicy(const std::string& name) {
  const auto& names = KnownPolicies();
  return std::find(names.begin(), names.end(), name) != names.end();
}

std::unique_ptr<Policy> MakePolicy(const PolicySpec& spec, int d, int m,
                                   const ActionSet& a_star) {
  if (spec.name == "ftpl") {
    return std::make_unique<FtplPolicy>(d, m, spec.rate_scale, spec.resample_cap);
  }
  if (spec.name == "combucb") return std::make_unique<CombUcbPolicy>(d, m);
  if (spec.name == "thompson") return std::make_unique<ThompsonPolicy>(d, m);
  if (spec.name == "exp2") {
    return std::make_unique<FtrlPolicy>(d, m, Regularizer::kShannon, spec.rate_scale);
  }
  if (spec.name == "logbarrier") {
    return std::make_unique<FtrlPolicy>(d, m, Regularizer::kLogBarrier,
                                        spec.rate_scale);
  }
  if (spec.name == "hybrid") {
    return std::make_unique<FtrlPolicy>(d, m, Regularizer::kHybrid, spec.rate_scale);
  }
  if (spec.name == "uniform") return std::make_unique<UniformRandomPolicy>(d, m);
  if (spec.name == "oracle") return std::make_unique<FixedActionPolicy>(a_star);
  throw ConfigError("unknown policy '" + spec.name + "'");
}

UniformRandomPolicy::UniformRandomPolicy(int d, int m) : d_(d), m_(m) {
  if (m < 1 || m > d) throw std::invalid_argument("UniformRandomPolicy: bad m");
}

ActionSet UniformRandomPolicy::Act(Rng& rng) {
  std::vector<int> arms(d_);
  std::iota(arms.begin(), arms.end(), 0);
  for (int k = 0; k < m_; ++k) {
    const int pick =
        k + static_cast<int>(UniformHalfOpen(rng) * static_cast<double>(d_ - k));
    std::swap(arms[k], arms[std::min(pick, d_ - 1)]);
  }
  arms.resize(m_);
  return ActionSet::FromUnsorted(std::move(arms), d_);
}

FixedActionPolicy::FixedActionPolicy(ActionSet action) : action_(std::move(action)) {}

// -- Running ------------------------------------------------------------------

void CompensatedSum::Add(double x) {
  const double t = sum_ + x;
  if (std::abs(sum_) >= std::abs(x)) {
    compensation_ += (sum_ - t) + x;
  } else {
    compensation_ += (x - t) + sum_;
  }
  sum_ = t;
}

ExperimentContext PrepareExperiment(const ExperimentConfig& config) {
  config.Validate();
  EnvironmentModel env = BuildEnvironment(config.environment, config.horizon);
  ActionSet a_star = BestFixedAction(env, config.horizon);
  std::optional<LossTable> losses;
  if (!config.environment.loss_table_file.empty()) {
    losses = LossTable::Load(config.environment.loss_table_file);
    if (losses->d() != env.d() || losses->horizon() < config.horizon) {
      throw ConfigError("loss table does not match d / horizon");
    }
  } else if (config.environment.loss_mode == LossMode::kReplay) {
    Rng rng = MakeStream(config.environment.env_seed, kEnvironmentStreamTag,
                         kEnvironmentStreamTag);
    losses = LossTable::Sample(env, rng);
  }
  return ExperimentContext{std::move(env), std::move(a_star), std::move(losses),
                           LogSpacedCheckpoints(config.horizon,
                                                config.checkpoint_count)};
}

RegretTrace RunTrace(const ExperimentConfig& config,
                     const ExperimentContext& context, int policy_index,
                     int repetition, std::vector<double>* per_round) {
  const PolicySpec& spec = config.policies.at(policy_index);
  const EnvironmentModel& env = context.env;
  const int d = env.d();
  RegretTrace trace;
  trace.policy = spec.label.empty() ? spec.name : spec.label;
  trace.policy_index = policy_index;
  trace.repetition = repetition;
  trace.t.reserve(context.checkpoints.size());
  trace.regret.reserve(context.checkpoints.size());

  Rng policy_rng = MakeStream(config.master_seed,
                              static_cast<std::uint32_t>(policy_index),
                              static_cast<std::uint32_t>(repetition));
  Rng env_rng = MakeStream(config.master_seed, kEnvironmentStreamTag,
                           static_cast<std::uint32_t>(repetition));
  std::vector<double> losses(d);
  std::vector<double> feedback(d);
  CompensatedSum regret;
  size_t next_checkpoint = 0;
  std::unique_ptr<Policy> policy;
  try {
    policy = MakePolicy(spec, d, env.m(), context.a_star);
    for (std::int64_t t = 1; t <= config.horizon; ++t) {
      if (context.losses) {
        const auto row = context.losses->Row(t);
        for (int i = 0; i < d; ++i) losses[i] = row[i];
      } else {
        SampleLossInto(env, t, env_rng, losses);
      }
      const ActionSet action = policy->Act(policy_rng);
      if (action.d() != d || action.m() != env.m()) {
        throw std::logic_error("policy returned an action of the wrong shape");
      }
      std::fill(feedback.begin(), feedback.end(), 0.0);
      for (int arm : action.arms()) feedback[arm] = losses[arm];
      policy->Observe(action, feedback, policy_rng);

      const double increment = PseudoRegretIncrement(env, t, action, context.a_star);
      regret.Add(increment);
      if (per_round) per_round->push_back(increment);
      if (static_cast<int>(trace.first_actions.size()) < kRecordedActions) {
        trace.first_actions.push_back(action);
      }
      if (next_checkpoint < context.checkpoints.size() &&
          context.checkpoints[next_checkpoint] == t) {
        trace.t.push_back(t);
        trace.regret.push_back(regret.value());
        ++next_checkpoint;
      }
    }
  } catch (const std::exception& e) {
    trace.error = e.what();
  }
  if (policy) trace.stats = policy->stats();
  return trace;
}

int ResolveThreadCount(int requested) {
  int threads = requested > 0
                    ? requested
                    : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  if (const char* cap = std::getenv("MSET_THREADS")) {
    const int limit = std::atoi(cap);
    if (limit >= 1) threads = std::min(threads, limit);
  }
  return std::max(1, threads);
}

std::vector<RegretTrace> RunExperiment(const ExperimentConfig& config) {
  return RunExperiment(config, PrepareExperiment(config));
}

std::vector<RegretTrace> RunExperiment(const ExperimentConfig& config,
                                       const ExperimentContext& context) {
  const int policies = static_cast<int>(config.policies.size());
  const int tasks = policies * config.repetitions;
  std::vector<RegretTrace> traces(tasks);
  std::atomic<int> next{0};
  const auto worker = [&]() {
    for (int task = next++; task < tasks; task = next++) {
      traces[task] = RunTrace(config, context, task / config.repetitions,
                              task % config.repetitions);
    }
  };
  const int threads = std::min(ResolveThreadCount(config.threads), tasks);
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (int k = 0; k < threads; ++k) pool.emplace_back(worker);
  }
  return traces;
}

// -- Statistics ---------------------------------------------------------------

std::vector<PolicySummary> Aggregate(const std::vector<RegretTrace>& traces) {
  std::vector<PolicySummary> out;
  std::map<std::string, std::vector<const RegretTrace*>> groups;
  for (const RegretTrace& trace : traces) {
    if (!trace.error.empty()) continue;
    if (!groups.contains(trace.policy)) {
      PolicySummary summary;
      summary.policy = trace.policy;
      out.push_back(summary);
    }
    groups[trace.policy].push_back(&trace);
  }
  for (PolicySummary& summary : out) {
    const auto& group = groups[summary.policy];
    summary.t = group.front()->t;
    summary.repetitions = static_cast<int>(group.size());
    const size_t points = summary.t.size();
    for (const RegretTrace* trace : group) {
      if (trace->t != summary.t || trace->regret.size() != points) {
        throw std::invalid_argument("Aggregate: traces of policy '" +
                                    summary.policy + "' use different checkpoints");
      }
    }
    const double n = static_cast<double>(group.size());
    summary.mean.assign(points, 0.0);
    summary.sd.assign(points, 0.0);
    summary.se.assign(points, 0.0);
    for (size_t k = 0; k < points; ++k) {
      double mean = 0.0;
      for (const RegretTrace* trace : group) mean += trace->regret[k];
      mean /= n;
      double ss = 0.0;
      for (const RegretTrace* trace : group) {
        const double dev = trace->regret[k] - mean;
        ss += dev * dev;
      }
      summary.mean[k] = mean;
      summary.sd[k] = group.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
      summary.se[k] = summary.sd[k] / std::sqrt(n);
    }
  }
  return out;
}

GrowthFitResult GrowthFit(const std::vector<std::int64_t>& t,
                          const std::vector<double>& regret, GrowthModel model) {
  if (t.size() != regret.size() || t.empty()) {
    throw std::invalid_argument("GrowthFit: t and regret must be non-empty and aligned");
  }
  const double t_min = static_cast<double>(t.back()) / 100.0;
  std::vector<double> xs, ys;
  for (size_t k = 0; k < t.size(); ++k) {
    if (static_cast<double>(t[k]) < t_min) continue;
    const double tk = static_cast<double>(t[k]);
    xs.push_back(model == GrowthModel::kLog ? std::log(tk) : std::sqrt(tk));
    ys.push_back(regret[k]);
  }
  const int n = static_cast<int>(xs.size());
  if (n < 5) {
    throw std::invalid_argument("GrowthFit: fewer than 5 checkpoints in the window");
  }
  const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
  const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (int k = 0; k < n; ++k) {
    sxx += (xs[k] - mx) * (xs[k] - mx);
    sxy += (xs[k] - mx) * (ys[k] - my);
    syy += (ys[k] - my) * (ys[k] - my);
  }
  GrowthFitResult fit;
  fit.points = n;
  fit.slope = sxx > 0.0 ? sxy / sxx : 0.0;
  fit.intercept = my - fit.slope * mx;
  double ss_res = 0.0;
  for (int k = 0; k < n; ++k) {
    const double r = ys[k] - (fit.intercept + fit.slope * xs[k]);
    ss_res += r * r;
  }
  fit.r_squared = syy > 0.0 ? 1.0 - ss_res / syy : 1.0;
  return fit;
}

}  // namespace mset
