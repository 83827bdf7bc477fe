"""Regression suite behind ``torustop verify``.

Each check returns ``(passed, details)`` where ``details`` is plain JSON
data.  Nothing time-dependent goes into the report; wall-clock times are
returned separately so callers can print them to stderr or assert budgets.
"""

from __future__ import annotations

import json
import math
import random
import time
import warnings

import numpy as np

from . import __version__
from ._accel import BACKEND
from .alexander import homology, novikov_vanishing_certificate
from .arrangements import Arrangement, bounded_regions, complement_euler, generic_lines
from .complexes import CWPresentation, euler_char, fox_complex, random_model_complex, torus_skeleton
from .critical import (
    GenericityError,
    MasterProblem,
    PartialSolveWarning,
    SolveError,
    TorusCI,
    TrackerConfig,
    count_critical,
    critical_system,
    random_weights,
    solve,
)
from .laurent import LaurentPoly, is_product_of_cyclotomics
from .localsys import generic_vanishing_scan

__all__ = ["CRITERIA", "run_verify", "canonical_json"]

SCALING_TOL = 1e-6
POINT_TOL = 1e-8


def canonical_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=1, ensure_ascii=True) + "\n"


def _nonzero_weights(rng: random.Random, k: int, bound: int = 9) -> tuple:
    return tuple(rng.choice([v for v in range(-bound, bound + 1) if v]) for _ in range(k))


def _skeleton_family(seed: int):
    rng = random.Random(f"skeletons:{seed}")
    for k in range(1, 7):
        for n in range(1, min(k, 3) + 1):
            for _ in range(5):
                yield k, n, _nonzero_weights(rng, k)


def check_novikov_vanishing(seed: int):
    cases = 0
    failures = []
    for k, n, u in _skeleton_family(seed):
        c = torus_skeleton(k, n, u)
        data = homology(c)
        expected = math.comb(k - 1, n)
        signed = (-1) ** n * euler_char(c)
        b = list(data.ranks)
        ok = all(b[i] == 0 for i in range(len(b)) if i != n) and b[n] == expected == signed
        cert = novikov_vanishing_certificate(data, n)
        ok = ok and cert["certified"]
        cases += 1
        if not ok:
            failures.append({"k": k, "n": n, "u": list(u), "betti": b, "expected_middle": expected})
    return not failures, {"cases": cases, "failures": failures}


def _fox_models():
    yield "torus", fox_complex(CWPresentation(["a", "b"], ["a b a^-1 b^-1"], (1, 0)))
    yield "torus_diagonal", fox_complex(CWPresentation(["a", "b"], ["a b a^-1 b^-1"], (1, 1)))
    yield "torus_21", fox_complex(CWPresentation(["a", "b"], ["a b a^-1 b^-1"], (2, -1)))
    yield "wedge_2", fox_complex(CWPresentation(["a", "b"], [], (1, 1)))
    yield "wedge_3", fox_complex(CWPresentation(["a", "b", "c"], [], (1, 2, -1)))
    yield "genus_2", fox_complex(
        CWPresentation(["a", "b", "c", "d"], ["a b a^-1 b^-1 c d c^-1 d^-1"], (1, 0, 2, 1))
    )


def check_roots_of_unity(seed: int):
    checked = 0
    bad = []
    sources = [(f"skeleton{(k, n, u)}", torus_skeleton(k, n, u)) for k, n, u in _skeleton_family(seed)]
    sources += list(_fox_models())
    for name, c in sources:
        for i, p in enumerate(homology(c).alexander_polys):
            checked += 1
            if not is_product_of_cyclotomics(p):
                bad.append({"model": name, "degree": i, "poly": str(p)})
    counter = LaurentPoly({0: 2, 1: -3, 2: 2})
    rejected = not is_product_of_cyclotomics(counter)
    return (not bad) and rejected, {
        "polynomials_checked": checked,
        "non_cyclotomic": bad,
        "counterexample": str(counter),
        "counterexample_rejected": rejected,
    }


def check_generic_vanishing(seed: int):
    rng = random.Random(f"vanishing:{seed}")
    u4 = _nonzero_weights(rng, 4)
    rows = []
    passed = True
    for k, u in ((3, (1, 1, 1)), (4, u4)):
        c = torus_skeleton(k, 2, u)
        rep = generic_vanishing_scan(c, 2, 50, seed=rng.randrange(2**32))
        forced = [r["s"] for r in rep["samples"] if r["exceptional"]]
        ok = rep["all_consistent"] and rep["generic_samples_vanish"] and bool(forced)
        passed &= ok
        rows.append(
            {
                "k": k,
                "u": list(u),
                "samples": sum(1 for r in rep["samples"] if not r["exceptional"]),
                "forced_roots": forced,
                "expected_middle_dim": rep["expected_middle_dim"],
                "all_consistent": rep["all_consistent"],
                "generic_samples_vanish": rep["generic_samples_vanish"],
            }
        )
    return passed, {"scans": rows}


def check_euler_sum(seed: int):
    rng = random.Random(f"euler:{seed}")
    bad = []
    for trial in range(100):
        c = random_model_complex(rng)
        data = homology(c)
        lhs = sum((-1) ** i * b for i, b in enumerate(data.ranks))
        if lhs != euler_char(c):
            bad.append({"trial": trial, "label": c.label, "betti": list(data.ranks), "chi": euler_char(c)})
    return not bad, {"complexes": 100, "failures": bad}


def _line_ci(u) -> TorusCI:
    return TorusCI(2, ({(1, 0): 1, (0, 1): 1, (0, 0): -1},), tuple(u), 1)


def critical_examples(seed: int):
    """Named master problems shared by the count and scaling checks."""
    rng = np.random.default_rng([seed, 5])
    out = []
    for k in (3, 4, 5, 6):
        out.append((f"lines_{k}", MasterProblem(arrangement=generic_lines(k, random_weights(k, rng)))))
    while True:
        u = random_weights(2, rng)
        if u[0] + u[1] != 0:
            break
    out.append(("x_plus_y_eq_1", MasterProblem(torus_ci=_line_ci(u))))
    boolean = Arrangement(2, ((1, 0, 0), (0, 1, 0)), random_weights(2, rng))
    out.append(("boolean", MasterProblem(arrangement=boolean)))
    central = Arrangement(2, ((1, 0, 0), (0, 1, 0), (1, -1, 0)), random_weights(3, rng))
    out.append(("central_3", MasterProblem(arrangement=central)))
    return out


def _quiet_count(p, seed, cfg):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", PartialSolveWarning)
        return count_critical(p, seed=seed, trials=3, config=cfg)


def check_critical_counts(seed: int, config: TrackerConfig | None = None):
    cfg = config or TrackerConfig()
    rows = []
    passed = True
    for i, (name, p) in enumerate(critical_examples(seed)):
        row = {"example": name, "weights": list(p.weights)}
        try:
            rep = _quiet_count(p, seed + i, cfg)
        except (GenericityError, SolveError) as exc:
            row.update({"passed": False, "error": str(exc)})
            rows.append(row)
            passed = False
            continue
        sol = rep["solutions"]
        ok = rep["match"] is True and not any(sol["singular"])
        ok = ok and all(r <= cfg.newton_tol for r in sol["residuals"])
        row.update(
            {
                "count": rep["count"],
                "expected": rep["expected"],
                "trial_counts": rep["genericity"]["counts"],
                "max_residual": max(sol["residuals"], default=0.0),
            }
        )
        if p.arrangement is not None and name.startswith("lines"):
            br = bounded_regions(p.arrangement)
            chi = (-1) ** p.n * complement_euler(p.arrangement)
            k = p.arrangement.k
            target = (k - 1) * (k - 2) // 2
            row.update({"bounded_regions": br, "signed_euler": chi, "formula": target})
            ok = ok and rep["count"] == br == chi == target
        elif name == "x_plus_y_eq_1":
            u1, u2 = p.weights
            want = np.array([u1 / (u1 + u2), u2 / (u1 + u2)])
            pts = [np.array([complex(*z) for z in pt]) for pt in sol["torus_coords"]]
            err = float(np.abs(pts[0] - want).max()) if len(pts) == 1 else math.inf
            row["point_error_below_1e-8"] = err <= POINT_TOL
            ok = ok and rep["count"] == 1 and err <= POINT_TOL
        else:
            ok = ok and rep["count"] == 0
        row["passed"] = bool(ok)
        passed &= ok
        rows.append(row)
    return passed, {"examples": rows}


def _match_sets(a: list, b: list, tol: float) -> bool:
    if len(a) != len(b):
        return False
    left = list(b)
    for p in a:
        j = next((j for j, q in enumerate(left) if np.abs(p - q).max() <= tol), None)
        if j is None:
            return False
        left.pop(j)
    return True


def check_scaling(seed: int, config: TrackerConfig | None = None):
    cfg = config or TrackerConfig()
    rows = []
    passed = True
    for i, (name, p) in enumerate(critical_examples(seed)):
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", PartialSolveWarning)
            base = solve(critical_system(p), seed + i, cfg)
            scaled = solve(critical_system(p.with_weights([3 * w for w in p.weights])), seed + 100 + i, cfg)
        # compare torus coordinates: Lagrange multipliers scale with u
        ok = _match_sets(base.coords, scaled.coords, SCALING_TOL)
        rows.append({"example": name, "points": len(base.coords), "points_3u": len(scaled.coords), "match": ok})
        passed &= ok
    return passed, {"examples": rows, "tolerance": SCALING_TOL}


CRITERIA = {
    1: ("signed Euler characteristic and Novikov vanishing", check_novikov_vanishing),
    2: ("Alexander polynomials are products of cyclotomics", check_roots_of_unity),
    3: ("generic vanishing of twisted homology", check_generic_vanishing),
    4: ("Euler-sum identity on random tensor complexes", check_euler_sum),
    5: ("critical-point counts match the signed Euler characteristic", check_critical_counts),
    6: ("critical points invariant under u -> 3u", check_scaling),
}


def _run_once(seed: int, config: TrackerConfig):
    results = []
    timings = {}
    for cid, (name, fn) in CRITERIA.items():
        t0 = time.perf_counter()
        if cid in (5, 6):
            ok, details = fn(seed, config)
        else:
            ok, details = fn(seed)
        timings[cid] = time.perf_counter() - t0
        results.append({"id": cid, "name": name, "passed": bool(ok), "details": details})
    return results, timings


def run_verify(seed: int = 42, config: TrackerConfig | None = None, determinism: bool = True):
    """Run every criterion; returns ``(report, timings)``.

    With ``determinism`` the suite is run a second time and the canonical
    serializations of both runs are compared byte for byte.
    """
    cfg = config or TrackerConfig()
    results, timings = _run_once(seed, cfg)
    if determinism:
        t0 = time.perf_counter()
        again, _ = _run_once(seed, cfg)
        same = canonical_json(results) == canonical_json(again)
        timings[7] = time.perf_counter() - t0
        results.append(
            {
                "id": 7,
                "name": "byte-identical report on repeated runs",
                "passed": same,
                "details": {"runs_compared": 2},
            }
        )
    report = {
        "tool": "torustop",
        "version": __version__,
        "command": "verify",
        "seed": seed,
        "backend": BACKEND,
        "tolerances": cfg.to_json(),
        "criteria": results,
        "passed": all(r["passed"] for r in results),
    }
    return report, timings

