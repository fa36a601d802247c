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

// Python bindings for the core operations. Action sets cross the boundary
// as sorted lists of arm indices.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <string>
#include <vector>

#include "mset/baselines.h"
#include "mset/ftpl.h"
#include "mset/harness.h"
#include "mset/lemmas.h"
#include "mset/phi.h"
#include "mset/verify.h"

namespace py = pybind11;

namespace {

std::vector<int> ToList(const mset::ActionSet& a) {
  return {a.arms().begin(), a.arms().end()};
}

mset::Regularizer ParseRegularizer(const std::string& name) {
  if (name == "shannon") return mset::Regularizer::kShannon;
  if (name == "log_barrier") return mset::Regularizer::kLogBarrier;
  if (name == "hybrid") return mset::Regularizer::kHybrid;
  throw py::value_error("regularizer must be shannon, log_barrier or hybrid");
}

py::dict TraceToDict(const mset::RegretTrace& tr) {
  py::dict d;
  d["policy"] = tr.policy;
  d["repetition"] = tr.repetition;
  d["t"] = tr.t;
  d["regret"] = tr.regret;
  d["error"] = tr.error;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "FTPL with Frechet perturbations for m-set semi-bandits";

  py::register_exception<mset::ConfigError>(m, "ConfigError", PyExc_ValueError);

  py::class_<mset::Rng>(m, "Rng")
      .def(py::init<std::uint64_t, std::uint64_t>(), py::arg("seed"),
           py::arg("stream") = 0)
      .def("next", [](mset::Rng& r) { return r(); })
      .def("uniform", [](mset::Rng& r) { return mset::UniformOpen(r); });
  m.def("make_stream", &mset::MakeStream, py::arg("master_seed"), py::arg("tag"),
        py::arg("index"));

  m.def("sample_frechet", &mset::SampleFrechet, py::arg("u"));
  m.def("learning_rate", &mset::LearningRate, py::arg("t"), py::arg("rate_scale") = 1.0);
  m.def(
      "select_action",
      [](const std::vector<double>& lhat, double eta, const std::vector<double>& r,
         int m) { return ToList(mset::SelectAction(lhat, eta, r, m)); },
      py::arg("lhat"), py::arg("eta"), py::arg("r"), py::arg("m"));
  m.def(
      "geometric_resample",
      [](const std::vector<double>& lhat, double eta, int arm, int m, mset::Rng& rng,
         std::uint64_t cap) {
        const auto res = mset::GeometricResample(lhat, eta, arm, m, rng, cap);
        return py::make_tuple(res.count, res.truncated);
      },
      py::arg("lhat"), py::arg("eta"), py::arg("arm"), py::arg("m"), py::arg("rng"),
      py::arg("cap") = mset::kUnlimitedResamples);

  m.def(
      "phi",
      [](const std::vector<double>& lam, int m, double tol) {
        return mset::PhiAll(lam, m, tol);
      },
      py::arg("lam"), py::arg("m"),
        py::arg("tol") = mset::kDefaultQuadratureTol);
  m.def(
      "phi_arm",
      [](const std::vector<double>& lam, int arm, int m, double tol) {
        return mset::PhiQuadrature(lam, arm, m, tol).value;
      },
      py::arg("lam"), py::arg("arm"), py::arg("m"),
      py::arg("tol") = mset::kDefaultQuadratureTol);
  m.def(
      "phi_monte_carlo",
      [](const std::vector<double>& lam, int m, std::int64_t samples, mset::Rng& rng) {
        const auto mc = mset::PhiMonteCarlo(lam, m, samples, rng);
        return py::make_tuple(mc.frequencies, mc.standard_errors);
      },
      py::arg("lam"), py::arg("m"), py::arg("samples"), py::arg("rng"));
  m.def(
      "poisson_binomial_cdf",
      [](const std::vector<double>& p, int threshold) {
        return mset::PoissonBinomialTail(p, threshold);
      },
      py::arg("p"), py::arg("threshold"), "P(sum of Bernoulli(p_q) <= threshold).");

  m.def("u_ratio_witness", &mset::URatioWitness, py::arg("k"),
        py::arg("tol") = mset::kDefaultQuadratureTol);
  m.def("r_ratio_witness", &mset::RRatioWitness, py::arg("count_m"), py::arg("k"),
        py::arg("tol") = mset::kDefaultQuadratureTol);
  m.def(
      "w_star",
      [](const std::vector<double>& lam, int m, double tol) {
        return mset::WStar(lam, m, tol);
      },
      py::arg("lam"), py::arg("m"),
        py::arg("tol") = mset::kDefaultQuadratureTol);

  m.def(
      "capped_simplex_solve",
      [](const std::vector<double>& lhat, double eta, int m, const std::string& reg) {
        return mset::CappedSimplexSolve(lhat, eta, m, ParseRegularizer(reg)).w;
      },
      py::arg("lhat"), py::arg("eta"), py::arg("m"), py::arg("regularizer"));
  m.def(
      "madow_sample",
      [](const std::vector<double>& w, int m, mset::Rng& rng) {
        return ToList(mset::MadowSample(w, m, rng));
      },
      py::arg("w"), py::arg("m"), py::arg("rng"));

  m.def("log_spaced_checkpoints", &mset::LogSpacedCheckpoints, py::arg("horizon"),
        py::arg("count"));
  m.def(
      "run_experiment",
      [](const std::string& config_json, int threads) {
        mset::ExperimentConfig config = mset::ConfigFromJsonText(config_json);
        if (threads >= 0) config.threads = threads;
        std::vector<mset::RegretTrace> traces;
        {
          py::gil_scoped_release release;
          traces = mset::RunExperiment(config);
        }
        py::list out;
        for (const auto& tr : traces) out.append(TraceToDict(tr));
        return out;
      },
      py::arg("config_json"), py::arg("threads") = -1,
      "Runs a JSON experiment config; returns one dict per trace.");
  m.def(
      "verify",
      [](const std::string& suite, std::uint64_t seed) {
        mset::VerifyOptions options;
        options.seed = seed;
        std::vector<mset::CheckRow> rows;
        {
          py::gil_scoped_release release;
          rows = mset::RunSuite(suite, options);
        }
        py::list out;
        for (const auto& r : rows) {
          out.append(py::make_tuple(r.name, r.parameters, r.value, r.bound, r.pass));
        }
        return out;
      },
      py::arg("suite"), py::arg("seed") = mset::VerifyOptions{}.seed);
}
