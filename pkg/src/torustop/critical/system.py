"""Stationarity systems of master functions ``z_1^u_1 ... z_m^u_m`` restricted to X.

Critical points of the master function are the zeros of the logarithmic
form ``sum_i u_i dz_i / z_i`` on X.

* Arrangement complements: X is embedded in the torus by the forms
  ``z_i = alpha_i(x)``, so the form vanishes iff
  ``sum_i u_i a_ij / alpha_i(x) = 0`` for every coordinate ``j``; denominators
  are cleared by multiplying with ``prod_i alpha_i``.
* Complete intersections ``f_1 = ... = f_c = 0`` in ``(C*)^m``: Lagrange
  system ``u_j = sum_i lambda_i z_j df_i/dz_j`` together with ``f_i = 0``.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

import numpy as np

from ..arrangements import Arrangement, _rref, complement_euler
from ..laurent import format_rational, parse_rational

__all__ = [
    "Poly",
    "TorusCI",
    "MasterProblem",
    "PolySystem",
    "MalformedProblemError",
    "critical_system",
    "load_torus_ci",
]


class MalformedProblemError(ValueError):
    pass


Poly = dict  # exponent tuple -> Fraction


def _padd(p: Poly, q: Poly, scale=1) -> Poly:
    out = dict(p)
    for e, c in q.items():
        v = out.get(e, 0) + scale * c
        if v:
            out[e] = v
        else:
            out.pop(e, None)
    return out


def _pmul(p: Poly, q: Poly) -> Poly:
    out: Poly = {}
    for e1, c1 in p.items():
        for e2, c2 in q.items():
            e = tuple(a + b for a, b in zip(e1, e2))
            v = out.get(e, 0) + c1 * c2
            if v:
                out[e] = v
            else:
                out.pop(e, None)
    return out


def _affine(form, nvars: int) -> Poly:
    p: Poly = {}
    for j, a in enumerate(form[:-1]):
        if a:
            e = [0] * nvars
            e[j] = 1
            p[tuple(e)] = Fraction(a)
    if form[-1]:
        p[(0,) * nvars] = Fraction(form[-1])
    return p


def _degree(p: Poly) -> int:
    return max((sum(e) for e in p), default=0)


@dataclass(frozen=True)
class TorusCI:
    """Complete intersection ``f_1 = ... = f_c = 0`` in ``(C*)^m``."""

    nvars: int
    polys: tuple
    weights: tuple
    expected: int | None = None

    def __post_init__(self):
        polys = []
        for p in self.polys:
            clean = {}
            for e, c in dict(p).items():
                e = tuple(int(x) for x in e)
                if len(e) != self.nvars or any(x < 0 for x in e):
                    raise MalformedProblemError(f"bad exponent vector {e}")
                c = parse_rational(c) if not isinstance(c, Fraction) else c
                if c:
                    clean[e] = clean.get(e, 0) + c
            if not clean:
                raise MalformedProblemError("zero polynomial in complete intersection")
            polys.append(clean)
        object.__setattr__(self, "polys", tuple(polys))
        object.__setattr__(self, "weights", tuple(int(w) for w in self.weights))
        if len(self.weights) != self.nvars:
            raise MalformedProblemError("one weight per torus coordinate required")
        if not len(polys) < self.nvars:
            raise MalformedProblemError("need fewer equations than torus coordinates")

    @property
    def dim(self) -> int:
        return self.nvars - len(self.polys)

    def to_json(self) -> dict:
        return {
            "nvars": self.nvars,
            "polys": [
                [[format_rational(c), list(e)] for e, c in sorted(p.items())] for p in self.polys
            ],
            "weights": list(self.weights),
            "expected": self.expected,
        }

    @classmethod
    def from_json(cls, obj) -> "TorusCI":
        try:
            polys = [{tuple(e): c for c, e in terms} for terms in obj["polys"]]
            return cls(int(obj["nvars"]), tuple(polys), tuple(obj["weights"]), obj.get("expected"))
        except (KeyError, TypeError) as exc:
            raise MalformedProblemError(f"bad torus complete intersection JSON: {exc}") from None


def load_torus_ci(path) -> TorusCI:
    return TorusCI.from_json(json.loads(Path(path).read_text()))


@dataclass(frozen=True)
class MasterProblem:
    arrangement: Arrangement | None = None
    torus_ci: TorusCI | None = None

    def __post_init__(self):
        if (self.arrangement is None) == (self.torus_ci is None):
            raise MalformedProblemError("give exactly one of arrangement / torus_ci")
        u = self.weights
        if not u or not any(u):
            raise MalformedProblemError("weights must not all vanish")
        if self.arrangement is not None and len(u) != self.arrangement.k:
            raise MalformedProblemError("one weight per hyperplane required")

    @property
    def weights(self) -> tuple:
        return self.arrangement.weights if self.arrangement is not None else self.torus_ci.weights

    @property
    def n(self) -> int:
        return self.arrangement.dim if self.arrangement is not None else self.torus_ci.dim

    def with_weights(self, u) -> "MasterProblem":
        u = tuple(int(x) for x in u)
        if self.arrangement is not None:
            return MasterProblem(arrangement=self.arrangement.with_weights(u))
        ci = self.torus_ci
        return MasterProblem(torus_ci=TorusCI(ci.nvars, ci.polys, u, ci.expected))

    def expected_count(self) -> int | None:
        if self.arrangement is not None:
            return (-1) ** self.n * complement_euler(self.arrangement)
        return self.torus_ci.expected


@dataclass
class PolySystem:
    """Square polynomial system plus the open conditions a solution must satisfy.

    ``open_conditions`` are polynomials that must not vanish at a solution;
    ``torus_coords`` are the polynomials giving the torus coordinates z.
    """

    nvars: int
    polys: list
    open_conditions: list = field(default_factory=list)
    torus_coords: list = field(default_factory=list)
    variables: list = field(default_factory=list)
    shift: tuple | None = None
    scale: tuple | None = None

    @property
    def degrees(self) -> list[int]:
        return [_degree(p) for p in self.polys]

    def _frame(self):
        shift = self.shift or (Fraction(0),) * self.nvars
        scale = self.scale or (Fraction(1),) * self.nvars
        return shift, scale

    def working_polys(self) -> list:
        """Equations in the tracking variables ``y`` with ``x = shift + scale * y``."""
        shift, scale = self._frame()
        if not any(shift) and all(r == 1 for r in scale):
            return list(self.polys)
        subs = []
        for j in range(self.nvars):
            unit = [0] * self.nvars
            unit[j] = 1
            sub = {tuple(unit): Fraction(scale[j])}
            if shift[j]:
                sub[(0,) * self.nvars] = Fraction(shift[j])
            subs.append(sub)
        out = []
        for p in self.polys:
            acc: Poly = {}
            for e, c in p.items():
                term: Poly = {(0,) * self.nvars: Fraction(c)}
                for j, k in enumerate(e):
                    for _ in range(k):
                        term = _pmul(term, subs[j])
                acc = _padd(acc, term)
            out.append(acc)
        return out

    def to_original(self, y) -> np.ndarray:
        shift, scale = self._frame()
        return np.array([float(a) for a in shift]) + np.array([float(r) for r in scale]) * np.asarray(y)

    def pack(self):
        """Arrays ``(coeffs, exps, ptr)`` of the working equations for the numeric kernels."""
        coeffs, exps, ptr = [], [], [0]
        for p in self.working_polys():
            # rescale so the largest coefficient has modulus 1
            top = max(abs(c) for c in p.values())
            for e, c in sorted(p.items()):
                coeffs.append(complex(c / top))
                exps.append(e)
            ptr.append(len(coeffs))
        return (
            np.asarray(coeffs, dtype=np.complex128),
            np.asarray(exps, dtype=np.int64).reshape(len(coeffs), self.nvars),
            np.asarray(ptr, dtype=np.int64),
        )

    @staticmethod
    def evaluate_poly(p: Poly, x) -> complex:
        acc = 0j
        for e, c in p.items():
            term = complex(c)
            for xi, ei in zip(x, e):
                if ei:
                    term *= xi**ei
            acc += term
        return acc

    def evaluate(self, x) -> np.ndarray:
        return np.array([self.evaluate_poly(p, x) for p in self.polys])

    def open_values(self, x) -> np.ndarray:
        return np.array([self.evaluate_poly(p, x) for p in self.open_conditions])

    def coords(self, x) -> np.ndarray:
        return np.array([self.evaluate_poly(p, x) for p in self.torus_coords])

    def describe(self) -> list[str]:
        out = []
        for p in self.polys:
            terms = []
            for e, c in sorted(p.items(), reverse=True):
                mono = "*".join(
                    (v if k == 1 else f"{v}^{k}") for v, k in zip(self.variables, e) if k
                )
                terms.append(f"({format_rational(Fraction(c))})" + (f"*{mono}" if mono else ""))
            out.append(" + ".join(terms) if terms else "0")
        return out


def _arrangement_system(A: Arrangement) -> PolySystem:
    n, k = A.dim, A.k
    alphas = [_affine(f, n) for f in A.forms]
    others = []
    for i in range(k):
        prod: Poly = {(0,) * n: Fraction(1)}
        for l in range(k):
            if l != i:
                prod = _pmul(prod, alphas[l])
        others.append(prod)
    polys = []
    for j in range(n):
        eq: Poly = {}
        for i in range(k):
            coef = A.weights[i] * A.forms[i][j]
            if coef:
                eq = _padd(eq, others[i], coef)
        if not eq:
            raise MalformedProblemError(
                f"equation {j} vanishes identically (non-essential arrangement or degenerate weights)"
            )
        polys.append(eq)
    names = ["x", "y", "z", "w"] if n <= 4 else [f"x{j + 1}" for j in range(n)]
    shift, scale = _vertex_frame(A)
    return PolySystem(
        n, polys, open_conditions=alphas, torus_coords=alphas, variables=names[:n], shift=shift, scale=scale
    )


def _vertex_frame(A: Arrangement):
    """Center and per-axis spread of the arrangement's vertices.

    Tracking in ``y = (x - center) / spread`` keeps the roots of order one,
    which the fixed step bounds of the tracker rely on.
    """
    n = A.dim
    verts = []
    for idx in itertools.combinations(range(A.k), n):
        key = _rref(A.equations(idx))
        if key is not None and len(key) == n and all(key[r][r] == 1 for r in range(n)):
            verts.append([key[r][-1] for r in range(n)])
    if not verts:
        return None, None
    center = tuple(sum(v[j] for v in verts) / len(verts) for j in range(n))
    spread = []
    for j in range(n):
        r = max(abs(v[j] - center[j]) for v in verts)
        spread.append(r if r > 0 else Fraction(1))
    return center, tuple(spread)


def _torus_ci_system(ci: TorusCI) -> PolySystem:
    m, c = ci.nvars, len(ci.polys)
    N = m + c

    def lift(p: Poly) -> Poly:
        return {tuple(e) + (0,) * c: v for e, v in p.items()}

    polys = []
    for j in range(m):
        eq: Poly = {(0,) * N: Fraction(ci.weights[j])}
        for i, f in enumerate(ci.polys):
            for e, v in f.items():
                if e[j]:
                    mono = list(e) + [0] * c
                    mono[m + i] += 1
                    eq = _padd(eq, {tuple(mono): v * e[j]}, -1)
        polys.append(eq)
    polys.extend(lift(f) for f in ci.polys)
    coords = []
    for j in range(m):
        e = [0] * N
        e[j] = 1
        coords.append({tuple(e): Fraction(1)})
    names = [f"z{j + 1}" for j in range(m)] + [f"l{i + 1}" for i in range(c)]
    return PolySystem(N, polys, open_conditions=coords, torus_coords=coords, variables=names)


def critical_system(p: MasterProblem) -> PolySystem:
    if p.arrangement is not None:
        return _arrangement_system(p.arrangement)
    return _torus_ci_system(p.torus_ci)
