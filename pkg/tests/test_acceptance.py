"""Acceptance criteria, one test per criterion, at the stated tolerances.

Each test prints a single ``PASS``/``FAIL`` line.  Run directly with
``python tests/test_acceptance.py`` to get only the summary lines.
"""

import sys
import time

import pytest

from twoproj.harness import run_suite

SEED = 7

# (number, suite, runtime budget in seconds)
CRITERIA = [
    (1, "SELBERG", 10),
    (2, "B_LIMIT", 10),
    (3, "STRUCTURE", 300),
    (4, "FREENESS", 300),
    (5, "RATE_MIN", 30),
    (6, "CONTRACTION", 60),
    (7, "MOMENTS", 60),
    (8, "UNITARY_LAW", 120),
]


def evaluate(number, suite, budget):
    t0 = time.perf_counter()
    report = run_suite(suite, master_seed=SEED)
    elapsed = time.perf_counter() - t0
    ok = report.passed and elapsed < budget
    worst = max(report.checks, key=lambda c: (not c.passed, c.statistic / c.threshold if c.threshold not in (0, float("inf")) else 0))
    line = (
        f"criterion {number} {suite:<12} {'PASS' if ok else 'FAIL'}  "
        f"{len(report.checks)} checks, {elapsed:.1f}s (budget {budget}s); "
        f"tightest: {worst.name} = {worst.statistic:.4g} vs {worst.threshold:.4g}"
    )
    return ok, line, report


@pytest.mark.parametrize("number,suite,budget", CRITERIA, ids=[c[1] for c in CRITERIA])
def test_criterion(number, suite, budget, capsys):
    ok, line, report = evaluate(number, suite, budget)
    with capsys.disabled():
        print("\n" + line)
    failed = [c for c in report.checks if not c.passed]
    assert not failed, failed
    assert ok, line


if __name__ == "__main__":
    results = [evaluate(*c) for c in CRITERIA]
    for _, line, _ in results:
        print(line)
    sys.exit(0 if all(ok for ok, _, _ in results) else 1)
