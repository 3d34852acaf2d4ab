import json
import math

import numpy as np
import pytest

from twoproj.errors import ParameterError
from twoproj.harness import SUITES, VerificationReport, ks_distance, ranks, run_suite
from twoproj.limits import minimizer_pqp, quantile_cloud


def uniform_cdf(x):
    return np.clip(x, 0.0, 1.0)


def test_ks_examples():
    n = 100
    assert ks_distance((np.arange(n) + 0.5) / n, uniform_cdf) <= 1 / n
    assert ks_distance(np.zeros(10), uniform_cdf) == pytest.approx(1.0)
    law = minimizer_pqp(0.5, 0.5)
    q = quantile_cloud(law, 2000)
    assert ks_distance(q.cloud, law.continuous_cdf) <= 5e-4
    with pytest.raises(ParameterError):
        ks_distance([], uniform_cdf)


def test_ks_against_scipy():
    from scipy.stats import kstest

    x = np.random.default_rng(3).uniform(size=257)
    assert ks_distance(x, uniform_cdf) == pytest.approx(kstest(x, "uniform").statistic, abs=1e-15)


def test_ranks_round_half_up():
    assert ranks(512, 0.5, 0.3) == (256, 154)
    assert ranks(10, 0.25, 0.35) == (3, 4)


def test_unknown_suite_and_config():
    with pytest.raises(ParameterError):
        run_suite("NOPE")
    with pytest.raises(ParameterError):
        run_suite("SELBERG", {"bogus": 1})


def test_selberg_and_b_limit_pass():
    for name in ("SELBERG", "B_LIMIT"):
        rep = run_suite(name, master_seed=1)
        assert rep.passed, rep.to_json()


def test_suite_name_case_insensitive():
    assert run_suite("selberg").suite == "SELBERG"


def test_reports_deterministic_and_thread_independent():
    cfg = {"configs": [(6, 2, 3)], "samples": 300}
    a = run_suite("STRUCTURE", cfg, master_seed=5)
    b = run_suite("STRUCTURE", dict(cfg, threads=3), master_seed=5)
    c = run_suite("STRUCTURE", cfg, master_seed=6)
    assert [x.statistic for x in a.checks] == [x.statistic for x in b.checks]
    assert [x.statistic for x in a.checks] != [x.statistic for x in c.checks]


def test_small_contraction_and_moments_configs():
    assert run_suite("CONTRACTION", {"configs": [(5, 2, 2)], "samples": 10}, 3).passed
    rep = run_suite("MOMENTS", {"N": 8, "k": 3, "l": 4, "samples": 500}, 3)
    assert rep.passed


def test_report_serialization():
    rep = VerificationReport("X")
    rep.add("finite", 0.1, 1.0)
    rep.add("infinite", math.inf, math.inf, passed=True, samples=3, seed=9)
    d = json.loads(rep.to_json())
    assert d["passed"] is True and d["suite"] == "X"
    assert d["checks"][1]["statistic"] == "+inf" and d["checks"][1]["seed"] == 9
    rep.add("bad", 2.0, 1.0)
    assert rep.passed is False


def test_all_suites_registered():
    assert set(SUITES) == {
        "SELBERG", "B_LIMIT", "STRUCTURE", "FREENESS", "RATE_MIN", "CONTRACTION", "MOMENTS", "UNITARY_LAW",
    }
