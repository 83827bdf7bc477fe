"""Total-degree homotopy solving and critical-point counting."""

from __future__ import annotations

import itertools
import logging
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np

from .._accel import BACKEND, thread_cap
from . import kernels
from .system import MasterProblem, PolySystem, critical_system

__all__ = [
    "TrackerConfig",
    "SolutionSet",
    "SolveError",
    "GenericityError",
    "PartialSolveWarning",
    "solve",
    "count_critical",
    "genericity_check",
    "random_weights",
]

log = logging.getLogger(__name__)


class SolveError(RuntimeError):
    pass


class GenericityError(RuntimeError):
    def __init__(self, message, report):
        super().__init__(message)
        self.report = report


class PartialSolveWarning(RuntimeWarning):
    pass


@dataclass(frozen=True)
class TrackerConfig:
    h_min: float = 1e-6
    h_max: float = 1e-1
    max_steps: int = 20000
    corrector_tol: float = 1e-8
    trust: float = 1e-2
    newton_tol: float = 1e-10
    dedup_radius: float = 1e-6
    singular_cond: float = 1e8
    membership_margin: float = 1e-8
    divergence_bound: float = 1e8
    polish_iters: int = 60
    endgame_t: float = 1e-10
    t_end: float = 1e-14

    def to_json(self) -> dict:
        return asdict(self)


@dataclass
class SolutionSet:
    points: list
    coords: list
    residuals: list
    singular_flags: list
    conditions: list
    count: int
    seed: int
    gamma: complex
    n_paths: int
    path_status: dict = field(default_factory=dict)
    discarded: list = field(default_factory=list)
    failed_paths: list = field(default_factory=list)

    def to_json(self, digits: int = 12) -> dict:
        def cplx(z):
            return [round(float(z.real), digits) + 0.0, round(float(z.imag), digits) + 0.0]

        return {
            "count": self.count,
            "seed": self.seed,
            "gamma": cplx(self.gamma),
            "n_paths": self.n_paths,
            "path_status": dict(sorted(self.path_status.items())),
            "points": [[cplx(z) for z in p] for p in self.points],
            "torus_coords": [[cplx(z) for z in p] for p in self.coords],
            "residuals": [float(f"{r:.3e}") for r in self.residuals],
            "singular": list(self.singular_flags),
            "condition_numbers": [float(f"{c:.3e}") for c in self.conditions],
            "discarded": self.discarded,
            "failed_paths": self.failed_paths,
        }


def _start_points(degs):
    roots = [np.exp(2j * np.pi * np.arange(d) / d) for d in degs]
    for combo in itertools.product(*roots):
        yield np.array(combo, dtype=np.complex128)


def _dedup(found, radius):
    kept = []
    for item in sorted(found, key=lambda it: it["residual"]):
        x = item["x"]
        if any(np.max(np.abs(x - k["x"])) <= radius for k in kept):
            continue
        kept.append(item)
    kept.sort(key=lambda it: tuple(v for z in it["x"] for v in (round(z.real, 8), round(z.imag, 8))))
    return kept


def solve(system: PolySystem, seed: int = 0, config: TrackerConfig | None = None) -> SolutionSet:
    """Find the isolated torus solutions of a square system by path tracking.

    Paths are tracked independently (``TORUSTOP_THREADS`` caps the worker
    count) and merged in path order, so the result depends only on
    ``(system, seed, config)``.
    """
    cfg = config or TrackerConfig()
    coeffs, exps, ptr = system.pack()
    degs = np.asarray(system.degrees, dtype=np.int64)
    if len(system.polys) != system.nvars:
        raise SolveError("system is not square")
    if np.any(degs < 1):
        raise SolveError("constant equation in system; no finite solutions to track")
    rng = np.random.default_rng(seed)
    gamma = complex(np.exp(2j * np.pi * rng.random()))
    starts = list(_start_points(degs))

    def run(x0):
        x, t, status, steps = kernels.track_path(
            x0, coeffs, exps, ptr, degs, gamma, cfg.h_min, cfg.h_max, cfg.max_steps,
            cfg.corrector_tol, cfg.trust, cfg.divergence_bound, cfg.t_end,
        )
        if status == kernels.TRACK_OK or (status == kernels.TRACK_MIN_STEP and t <= cfg.endgame_t):
            xp, res = kernels.polish(x, coeffs, exps, ptr, cfg.polish_iters)
        else:
            xp, res = x, np.inf
        return x, float(t), int(status), int(steps), xp, float(res)

    workers = min(thread_cap(), len(starts))
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(run, starts))
    else:
        results = [run(x0) for x0 in starts]

    n = system.nvars
    F = np.zeros(n, dtype=np.complex128)
    J = np.zeros((n, n), dtype=np.complex128)
    status_counts: dict = {}
    found, discarded, failed = [], [], []
    for idx, (x, t, status, steps, xp, res) in enumerate(results):
        name = kernels.STATUS_NAMES[status]
        finite = bool(np.all(np.isfinite(xp)))
        if finite and res <= cfg.newton_tol:
            xo = system.to_original(xp)
            opens = np.abs(system.open_values(xo))
            if opens.size and opens.min() <= cfg.membership_margin:
                kind = "boundary"
                discarded.append({"path": idx, "reason": "violates open condition", "min_open": float(f"{opens.min():.3e}")})
                log.debug("path %d ends off the torus (min |open| = %.2e)", idx, opens.min())
            else:
                kind = "solution"
                kernels.eval_system(xp, coeffs, exps, ptr, F, J)
                cond = float(np.linalg.cond(J))
                found.append({"x": xo, "residual": res, "cond": cond, "path": idx})
        elif status == kernels.TRACK_DIVERGED or not finite or np.linalg.norm(xp) > 1e6 or np.linalg.norm(x) > 1e6:
            kind = "at_infinity"
        else:
            kind = "failed"
            failed.append({"path": idx, "status": name, "t": float(f"{t:.3e}"), "residual": float(f"{res:.3e}")})
        status_counts[kind] = status_counts.get(kind, 0) + 1

    if failed and len(failed) == len(starts):
        raise SolveError(f"all {len(starts)} paths failed")
    if failed:
        warnings.warn(
            f"{len(failed)} of {len(starts)} paths failed: {[f['path'] for f in failed]}",
            PartialSolveWarning,
            stacklevel=2,
        )

    kept = _dedup(found, cfg.dedup_radius)
    singular = [it["cond"] > cfg.singular_cond for it in kept]
    return SolutionSet(
        points=[it["x"] for it in kept],
        coords=[system.coords(it["x"]) for it in kept],
        residuals=[it["residual"] for it in kept],
        singular_flags=singular,
        conditions=[it["cond"] for it in kept],
        count=sum(1 for s in singular if not s),
        seed=seed,
        gamma=gamma,
        n_paths=len(starts),
        path_status=status_counts,
        discarded=discarded,
        failed_paths=failed,
    )


def random_weights(k: int, rng: np.random.Generator, bound: int = 50) -> tuple:
    """Integer weights uniform in ``[-bound, bound]`` with zero entries rejected."""
    out = []
    while len(out) < k:
        v = int(rng.integers(-bound, bound + 1))
        if v:
            out.append(v)
    return tuple(out)


def genericity_check(p: MasterProblem, trials: int = 3, seed: int = 0, config: TrackerConfig | None = None) -> dict:
    """Resolve with fresh weights and gammas; generic iff counts agree and all points are regular.

    Trial 0 uses the problem's own weights; the remaining trials draw new
    weights.  Each trial uses its own tracker seed.
    """
    if trials < 2:
        raise ValueError("genericity check needs at least 2 trials")
    rng = np.random.default_rng([seed, 0x6E6E])
    rows = []
    for i in range(trials):
        q = p if i == 0 else p.with_weights(random_weights(len(p.weights), rng))
        trial_seed = int(rng.integers(0, 2**63 - 1))
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always", PartialSolveWarning)
            try:
                sol = solve(critical_system(q), trial_seed, config)
                count, nonsingular, failed = sol.count, not any(sol.singular_flags), len(sol.failed_paths)
            except SolveError as exc:
                count, nonsingular, failed = None, False, -1
                log.warning("trial %d failed: %s", i, exc)
        rows.append(
            {
                "trial": i,
                "weights": list(q.weights),
                "seed": trial_seed,
                "count": count,
                "all_nonsingular": nonsingular,
                "failed_paths": failed,
                "warnings": len(caught),
            }
        )
    counts = {r["count"] for r in rows}
    passed = len(counts) == 1 and None not in counts and all(r["all_nonsingular"] for r in rows)
    return {
        "generic": passed,
        "status": "generic" if passed else "non-generic or solver failure",
        "counts": [r["count"] for r in rows],
        "trials": rows,
    }


def count_critical(
    p: MasterProblem,
    seed: int = 0,
    trials: int = 3,
    config: TrackerConfig | None = None,
    check: bool = True,
) -> dict:
    """Count critical points of the master function and compare with ``(-1)^n chi``.

    With ``check`` the weights are first validated by :func:`genericity_check`;
    a failure raises :class:`GenericityError` carrying the per-trial report.
    """
    cfg = config or TrackerConfig()
    report = None
    if check:
        report = genericity_check(p, trials=trials, seed=seed, config=cfg)
        if not report["generic"]:
            raise GenericityError(
                f"weights {list(p.weights)} look non-generic: per-trial counts {report['counts']}", report
            )
    system = critical_system(p)
    sol = solve(system, seed, cfg)
    expected = p.expected_count()
    return {
        "count": sol.count,
        "expected": expected,
        "match": None if expected is None else sol.count == expected,
        "seed": seed,
        "weights": list(p.weights),
        "dim": p.n,
        "backend": BACKEND,
        "genericity": report,
        "solutions": sol.to_json(),
        "system": system.describe(),
        "tracker": cfg.to_json(),
    }
