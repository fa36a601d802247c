# Copyright 2026 The Authors.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""FTPL with Frechet perturbations for m-set semi-bandits."""

from mset._core import (
    ConfigError,
    Rng,
    capped_simplex_solve,
    geometric_resample,
    learning_rate,
    log_spaced_checkpoints,
    madow_sample,
    make_stream,
    phi,
    phi_arm,
    phi_monte_carlo,
    poisson_binomial_cdf,
    r_ratio_witness,
    run_experiment,
    sample_frechet,
    select_action,
    u_ratio_witness,
    verify,
    w_star,
)

__all__ = [
    "ConfigError",
    "Rng",
    "capped_simplex_solve",
    "geometric_resample",
    "learning_rate",
    "log_spaced_checkpoints",
    "madow_sample",
    "make_stream",
    "phi",
    "phi_arm",
    "phi_monte_carlo",
    "poisson_binomial_cdf",
    "r_ratio_witness",
    "run_experiment",
    "sample_frechet",
    "select_action",
    "u_ratio_witness",
    "verify",
    "w_star",
]
