"""End-to-end acceptance checks with their runtime budgets.

Each test prints a ``criterion N: PASS`` or ``criterion N: FAIL`` line straight
to the terminal, so the summary is visible even without ``-s``.
"""

import subprocess
import sys
import time

import pytest

from torustop.critical import TrackerConfig
from torustop.verify import (
    check_critical_counts,
    check_euler_sum,
    check_generic_vanishing,
    check_novikov_vanishing,
    check_roots_of_unity,
    check_scaling,
)

SEED = 42
CONFIG = TrackerConfig()


@pytest.fixture
def report(capsys):
    def emit(cid, ok, elapsed, budget):
        verdict = "PASS" if ok and elapsed < budget else "FAIL"
        with capsys.disabled():
            print(f"\ncriterion {cid}: {verdict} ({elapsed:.2f} s, budget {budget} s)")

    return emit


def timed(fn, *args):
    t0 = time.perf_counter()
    ok, details = fn(*args)
    return ok, details, time.perf_counter() - t0


def test_criterion_1_novikov_vanishing(report):
    ok, details, dt = timed(check_novikov_vanishing, SEED)
    report(1, ok, dt, 5)
    assert ok, details["failures"]
    assert details["cases"] == sum(5 * min(k, 3) for k in range(1, 7))
    assert dt < 5


def test_criterion_2_roots_of_unity(report):
    ok, details, dt = timed(check_roots_of_unity, SEED)
    report(2, ok, dt, 1)
    assert ok, details
    assert details["counterexample_rejected"]
    assert dt < 1


def test_criterion_3_generic_vanishing(report):
    ok, details, dt = timed(check_generic_vanishing, SEED)
    report(3, ok, dt, 10)
    assert ok, details
    for scan in details["scans"]:
        assert scan["samples"] == 50
        assert scan["forced_roots"]
    assert dt < 10


def test_criterion_4_euler_sum(report):
    ok, details, dt = timed(check_euler_sum, SEED)
    report(4, ok, dt, 10)
    assert ok, details["failures"]
    assert details["complexes"] == 100
    assert dt < 10


def test_criterion_5_critical_counts(report):
    ok, details, dt = timed(check_critical_counts, SEED, CONFIG)
    report(5, ok, dt, 60)
    assert ok, details
    names = {row["example"] for row in details["examples"]}
    assert {"lines_3", "lines_4", "lines_5", "lines_6", "x_plus_y_eq_1", "boolean", "central_3"} <= names
    for row in details["examples"]:
        if row["example"].startswith("lines"):
            assert len(row["trial_counts"]) == 3
            assert row["max_residual"] <= 1e-10
    assert dt < 60


def test_criterion_6_scaling(report):
    ok, details, dt = timed(check_scaling, SEED, CONFIG)
    report(6, ok, dt, 60)
    assert ok, details
    assert details["tolerance"] == 1e-6
    assert len(details["examples"]) == 7


def test_criterion_7_determinism(report):
    t0 = time.perf_counter()
    cmd = [sys.executable, "-m", "torustop.cli", "verify", "--seed", "42"]
    runs = [subprocess.run(cmd, capture_output=True, check=False) for _ in range(2)]
    dt = time.perf_counter() - t0
    ok = all(r.returncode == 0 for r in runs) and runs[0].stdout == runs[1].stdout and runs[0].stdout
    report(7, bool(ok), dt, 300)
    assert runs[0].returncode == 0, runs[0].stderr.decode()
    assert runs[0].stdout == runs[1].stdout
