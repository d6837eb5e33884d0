# Copyright 2026 The querysim Authors
# SPDX-License-Identifier: Apache-2.0

import csv
import io
import math
import os
import subprocess

import pytest

import querysim as qs

FLU, MEN = 6, 8


def test_diagnosis_odds():
    assert qs.posterior_odds("S1=1 S7=1", [FLU], []) == pytest.approx(42.504734, abs=1e-5)
    assert qs.posterior_odds("S1=1 S7=1", [MEN], []) == pytest.approx(6.112397, abs=1e-5)


def test_empty_evidence_gives_priors():
    priors = qs.posterior_marginals("")
    assert priors[FLU - 1] == pytest.approx(0.08, abs=1e-12)
    assert len(priors) == len(qs.disease_names())


def test_sampled_marginals_close_to_exact():
    exact = qs.posterior_marginals("S1=1 S7=1")
    sampled = qs.sample_marginals("S1=1 S7=1", samples=4000, seed=3)
    assert max(abs(a - b) for a, b in zip(exact, sampled)) < 0.04
    assert sampled == qs.sample_marginals("S1=1 S7=1", samples=4000, seed=3)


def test_model_text_and_errors():
    text = qs.table1_model_text().replace("6 Influenza 0.08", "6 Influenza 0.2")
    assert qs.posterior_odds("S1=1 S7=1", [FLU], [], model=text) > 100
    with pytest.raises(qs.ParseError):
        qs.posterior_marginals("", model="[diseases]\n1 A 1.5\n")
    with pytest.raises(qs.Error):
        qs.posterior_marginals("S99=1")


def test_beta():
    assert qs.beta_posterior_from_counts(3, 10) == (4.0, 8.0)
    assert qs.beta_density(1.0, 1.0, 0.4) == pytest.approx(1.0)


def test_structure():
    assert [qs.count_dags(d) for d in range(1, 5)] == [1, 3, 25, 543]
    with pytest.raises(qs.DimensionTooLarge):
        qs.count_dags(6)
    assert qs.d_separated(3, [(0, 1), (2, 1)], 0, 2)
    assert not qs.d_separated(3, [(0, 1), (2, 1)], 0, 2, [1])
    rows = [[1, 1], [1, 1], [0, 0], [0, 0]]
    assert qs.bayes_factor_independent_vs_dependent(rows) == pytest.approx(0.3)
    lhs = math.log(qs.bayes_factor_independent_vs_dependent(rows))
    rhs = qs.log_score(2, [], rows) - qs.log_score(2, [(0, 1)], rows)
    assert lhs == pytest.approx(rhs, abs=1e-12)
    assert qs.log_score(3, [(0, 1)], []) == 0.0


def test_evidence_curve():
    curve = qs.evidence_curve(d=0.5, trials=10, n_max=400, seed=1)
    assert len(curve) == 400 and curve[0][0] == 1
    assert curve[-1][1] < 0
    assert qs.dependence_rate(0.5) == pytest.approx(0.130812, abs=1e-6)


def test_policy():
    pol = qs.solve_policy(1)
    actions, _ = pol["start"]
    assert actions["TEST"] == pytest.approx(0.402459, abs=1e-6)
    assert actions["WAIT"] == pytest.approx(0.292131, abs=1e-6)
    assert pol["negative"][0]["WAIT"] == pytest.approx(0.767932, abs=1e-6)
    best = qs.solve_policy(None)
    assert best["start"][0]["TEST"] == 1.0
    assert best["positive"][0]["INJECT"] == 1.0
    assert best["negative"][0]["WAIT"] == 1.0


def test_choice():
    want = qs.multiplicative_choice_probability(0.6, 0.3, 2)
    assert want == pytest.approx(0.8)
    got = qs.choice_frequency("multiplicative", 0.6, 0.3, 2, samples=20000, seed=5)
    assert abs(got - want) < 4 * math.sqrt(want * (1 - want) / 20000)


def test_computable_and_uniform():
    freq, bits = qs.bernoulli_ratio(1, 3, samples=50000, seed=2)
    assert abs(freq - 1 / 3) < 4 * math.sqrt(2 / 9 / 50000)
    assert bits < 6
    counts = qs.uniform_conditioning(samples=6000, seed=1)
    assert sorted(counts) == [30, 60, 90, 120, 150, 180]


def test_verify_subset():
    passed, report = qs.verify([4, 8])
    assert passed, report
    assert "criterion 4 PASS" in report


@pytest.mark.skipif(not os.environ.get("QUERYSIM_CLI"), reason="CLI not built")
def test_cli_csv_round_trip():
    cli = os.environ["QUERYSIM_CLI"]
    out = subprocess.run([cli, "decide", "--k", "1"], check=True, capture_output=True, text=True).stdout
    rows = list(csv.DictReader(io.StringIO(out)))
    assert rows[0].keys() == {"state", "action", "probability", "action_success", "state_success"}
    root = {r["action"]: float(r["probability"]) for r in rows if r["state"] == "start"}
    assert root["TEST"] == pytest.approx(0.402459, abs=1e-6)
    assert "\r" not in out
