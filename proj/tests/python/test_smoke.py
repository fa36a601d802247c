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

import json
import math
import os
import pathlib

import pytest

import mset

SOURCE_DIR = pathlib.Path(
    os.environ.get("MSET_SOURCE_DIR", pathlib.Path(__file__).resolve().parents[2]))


def test_frechet_inverse_cdf():
    assert mset.sample_frechet(math.exp(-1.0)) == pytest.approx(1.0, abs=1e-14)
    with pytest.raises(ValueError):
        mset.sample_frechet(0.0)


def test_select_action_examples():
    assert mset.select_action([3.2, 0.1, 5.0, 0.4], 1.0, [0.0] * 4, 2) == [1, 3]
    assert mset.select_action([0.0] * 5, 1.0, [0.3, 2.0, 0.7, 1.1, 0.2], 2) == [1, 3]


def test_phi_frozen_values_and_sum():
    w = mset.phi([0.0, 0.0, 1.0, 3.0], 2)
    assert w[0] == pytest.approx(0.855149745, abs=1e-8)
    assert w[3] == pytest.approx(0.0585611666, abs=1e-8)
    assert sum(w) == pytest.approx(2.0, abs=1e-8)
    assert mset.phi_arm([0.0, 0.0, 1.0, 3.0], 2, 2) == pytest.approx(w[2])


def test_phi_monte_carlo_agrees():
    lam = [0.0, 0.5, 1.0, 2.0]
    w = mset.phi(lam, 2)
    freq, se = mset.phi_monte_carlo(lam, 2, 100_000, mset.Rng(3, 0))
    for wi, fi in zip(w, freq):
        assert abs(fi - wi) <= 4.0 * math.sqrt(wi * (1 - wi) / 100_000)


def test_poisson_binomial_cdf():
    assert mset.poisson_binomial_cdf([0.5, 0.5], 0) == pytest.approx(0.25)
    assert mset.poisson_binomial_cdf([0.5, 0.5], 2) == pytest.approx(1.0)


def test_geometric_resample_symmetric_mean():
    rng = mset.Rng(11, 0)
    n = 20_000
    total = sum(mset.geometric_resample([0.0] * 4, 1.0, 1, 2, rng)[0] for _ in range(n))
    assert total / n == pytest.approx(2.0, abs=0.05)


def test_witnesses():
    assert mset.u_ratio_witness(100.0) == pytest.approx(0.151014113, abs=1e-8)
    assert mset.r_ratio_witness(64, 2.0) == pytest.approx(2.66457157, abs=1e-7)
    assert mset.w_star([0.0, 0.0], 1) == pytest.approx(0.5, abs=1e-8)


def test_capped_simplex_and_madow():
    w = mset.capped_simplex_solve([0.0, math.log(2.0)], 1.0, 1, "shannon")
    assert w == pytest.approx([2 / 3, 1 / 3], abs=1e-10)
    assert mset.madow_sample([1.0, 1.0, 0.0, 0.0], 2, mset.Rng(1, 0)) == [0, 1]
    with pytest.raises(ValueError):
        mset.capped_simplex_solve([0.0, 1.0], 1.0, 1, "tsallis")


def test_run_experiment_deterministic():
    config = json.loads((SOURCE_DIR / "configs" / "smoke.json").read_text())
    config["run"]["horizon"] = 500
    text = json.dumps(config)
    a = mset.run_experiment(text, threads=1)
    b = mset.run_experiment(text, threads=2)
    assert [t["regret"] for t in a] == [t["regret"] for t in b]
    oracle = [t for t in a if t["policy"] == "oracle"]
    assert oracle and all(r == 0.0 for t in oracle for r in t["regret"])


def test_bad_config_raises():
    with pytest.raises(mset.ConfigError):
        mset.run_experiment('{"policies": []}')


def test_verify_witness_suite():
    rows = mset.verify("witnesses")
    assert rows and all(row[4] for row in rows)
