"""Intersection posets of rational affine hyperplane arrangements.

Flats are affine subspaces cut out by subfamilies of the forms; each flat is
keyed by the reduced row-echelon form of its defining equations, and the
poset order is reverse inclusion of subspaces (= inclusion of the sets of
hyperplanes containing the flat).
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from .laurent import format_rational, parse_rational

__all__ = [
    "Arrangement",
    "ArrangementError",
    "Flat",
    "IntersectionPoset",
    "intersection_poset",
    "complement_euler",
    "characteristic_polynomial",
    "poincare_polynomial",
    "bounded_regions",
    "is_essential",
    "genericity_report",
    "generic_lines",
    "load_arrangement",
    "save_arrangement",
]


class ArrangementError(ValueError):
    pass


def _rref(rows: list[list[Fraction]]) -> tuple[tuple[Fraction, ...], ...] | None:
    """RREF of an augmented system; ``None`` when the system is inconsistent."""
    A = [list(r) for r in rows]
    if not A:
        return ()
    ncols = len(A[0])
    piv_row = 0
    for col in range(ncols):
        piv = next((r for r in range(piv_row, len(A)) if A[r][col] != 0), None)
        if piv is None:
            continue
        A[piv_row], A[piv] = A[piv], A[piv_row]
        p = A[piv_row]
        inv = 1 / p[col]
        A[piv_row] = p = [x * inv for x in p]
        for r in range(len(A)):
            if r != piv_row and A[r][col]:
                f = A[r][col]
                A[r] = [x - f * y for x, y in zip(A[r], p)]
        piv_row += 1
        if piv_row == len(A):
            break
    out = tuple(tuple(r) for r in A[:piv_row])
    for r in out:
        if all(x == 0 for x in r[:-1]) and r[-1] != 0:
            return None
    return out


@dataclass(frozen=True)
class Arrangement:
    """Forms ``alpha_i(x) = a_i . x + c_i`` over Q^dim, with integer weights."""

    dim: int
    forms: tuple
    weights: tuple = ()

    def __post_init__(self):
        forms = []
        for row in self.forms:
            row = tuple(parse_rational(x) if not isinstance(x, Fraction) else x for x in row)
            if len(row) != self.dim + 1:
                raise ArrangementError(f"form {row} must have dim + 1 = {self.dim + 1} entries")
            if all(x == 0 for x in row[:-1]):
                raise ArrangementError(f"form {row} has zero linear part")
            forms.append(row)
        object.__setattr__(self, "forms", tuple(forms))
        weights = tuple(int(w) for w in self.weights)
        if weights and len(weights) != len(forms):
            raise ArrangementError("one weight per form required")
        object.__setattr__(self, "weights", weights)
        keys = [self._projective_key(f) for f in forms]
        if len(set(keys)) != len(keys):
            raise ArrangementError("repeated hyperplane (forms equal up to scalar)")

    @staticmethod
    def _projective_key(form):
        lead = next(x for x in form if x != 0)
        return tuple(x / lead for x in form)

    @property
    def k(self) -> int:
        return len(self.forms)

    def with_weights(self, weights) -> "Arrangement":
        return Arrangement(self.dim, self.forms, tuple(weights))

    def equations(self, idx) -> list[list[Fraction]]:
        # alpha(x) = 0  <=>  a . x = -c
        return [list(self.forms[i][:-1]) + [-self.forms[i][-1]] for i in idx]

    def to_json(self) -> dict:
        return {
            "dim": self.dim,
            "forms": [[format_rational(x) for x in f] for f in self.forms],
            "weights": list(self.weights),
        }

    @classmethod
    def from_json(cls, obj) -> "Arrangement":
        if not isinstance(obj, dict) or "dim" not in obj or "forms" not in obj:
            raise ArrangementError("arrangement JSON needs 'dim' and 'forms'")
        for f in obj["forms"]:
            for x in f:
                if isinstance(x, float):
                    raise ArrangementError(f"inexact coefficient {x!r}")
        return cls(int(obj["dim"]), tuple(tuple(f) for f in obj["forms"]), tuple(obj.get("weights", ())))


def load_arrangement(path) -> Arrangement:
    return Arrangement.from_json(json.loads(Path(path).read_text()))


def save_arrangement(A: Arrangement, path) -> None:
    Path(path).write_text(json.dumps(A.to_json(), sort_keys=True, indent=1) + "\n")


@dataclass(frozen=True)
class Flat:
    hyperplanes: frozenset
    rank: int
    key: tuple


@dataclass(frozen=True)
class IntersectionPoset:
    flats: tuple
    moebius: dict

    def below(self, x: Flat):
        """Flats ``y <= x`` (i.e. containing ``x`` as a subspace)."""
        return [y for y in self.flats if y.hyperplanes <= x.hyperplanes]

    @property
    def bottom(self) -> Flat:
        return self.flats[0]


def intersection_poset(A: Arrangement) -> IntersectionPoset:
    whole = Flat(frozenset(), 0, ())
    by_key = {(): whole}
    frontier = [whole]
    while frontier:
        nxt = []
        for x in frontier:
            for i in range(A.k):
                if i in x.hyperplanes:
                    continue
                key = _rref([list(r) for r in x.key] + A.equations([i]))
                if key is None or key in by_key:
                    continue
                hyps = frozenset(
                    j for j in range(A.k) if _rref([list(r) for r in key] + A.equations([j])) == key
                )
                flat = Flat(hyps, len(key), key)
                by_key[key] = flat
                nxt.append(flat)
        frontier = nxt
    flats = sorted(by_key.values(), key=lambda f: (f.rank, sorted(f.hyperplanes)))
    mu: dict = {}
    for x in flats:
        if x.rank == 0:
            mu[x] = 1
        else:
            mu[x] = -sum(mu[y] for y in flats if y.rank < x.rank and y.hyperplanes <= x.hyperplanes)
    return IntersectionPoset(flats=tuple(flats), moebius=mu)


def characteristic_polynomial(A: Arrangement, poset: IntersectionPoset | None = None) -> list[int]:
    """Coefficients ``c[j]`` of ``t^j`` in ``sum_x mu(x) t^(dim - rank x)``."""
    poset = poset or intersection_poset(A)
    coeffs = [0] * (A.dim + 1)
    for x in poset.flats:
        coeffs[A.dim - x.rank] += poset.moebius[x]
    return coeffs


def poincare_polynomial(A: Arrangement, poset: IntersectionPoset | None = None) -> list[int]:
    """Coefficients of ``sum_x mu(x) (-t)^(rank x)``; all nonnegative."""
    poset = poset or intersection_poset(A)
    coeffs = [0] * (A.dim + 1)
    for x in poset.flats:
        coeffs[x.rank] += poset.moebius[x] * (-1) ** x.rank
    return coeffs


def complement_euler(A: Arrangement, poset: IntersectionPoset | None = None) -> int:
    """Euler characteristic of the complex complement, the Poincare polynomial at -1."""
    pi = poincare_polynomial(A, poset)
    return sum(c * (-1) ** j for j, c in enumerate(pi))


def is_essential(A: Arrangement) -> bool:
    rows = [list(f[:-1]) + [Fraction(0)] for f in A.forms]
    key = _rref(rows)
    return key is not None and len(key) == A.dim


def bounded_regions(A: Arrangement, poset: IntersectionPoset | None = None) -> int:
    """Number of bounded chambers of the real arrangement, ``(-1)^dim chi_A(1)``."""
    if not is_essential(A):
        raise ArrangementError("not essential: bounded region count requires rank = dim")
    chi = characteristic_polynomial(A, poset)
    return (-1) ** A.dim * sum(chi)


def genericity_report(A: Arrangement) -> dict:
    """Check general position: every <= dim forms independent, dim + 1 forms never meet."""
    problems = []
    for size in range(2, min(A.k, A.dim) + 1):
        for idx in itertools.combinations(range(A.k), size):
            lin = _rref([list(A.forms[i][:-1]) + [Fraction(0)] for i in idx])
            if len(lin) < size:
                problems.append({"forms": list(idx), "issue": "linearly dependent normals"})
    if A.k > A.dim:
        for idx in itertools.combinations(range(A.k), A.dim + 1):
            if _rref(A.equations(idx)) is not None:
                problems.append({"forms": list(idx), "issue": f"{A.dim + 1} hyperplanes share a point"})
    return {"general_position": not problems, "problems": problems[:20]}


def generic_lines(k: int, weights=None) -> Arrangement:
    """``k`` tangent lines ``2 i x - y - i^2 = 0`` to a parabola: no parallels, no triple points."""
    forms = tuple((2 * i, -1, -i * i) for i in range(1, k + 1))
    return Arrangement(2, forms, tuple(weights) if weights is not None else (1,) * k)
