"""Finite free chain complexes over Z[t, t^-1].

A :class:`TwistedComplex` stores one boundary matrix per positive degree:
``boundaries[i - 1]`` is the matrix of ``d_i : C_i -> C_{i-1}`` with
``ranks[i - 1]`` rows and ``ranks[i]`` columns, acting on column vectors.

Sign conventions (shared with the JSON schema):

* Koszul skeleton: ``d e_S = sum_j (-1)^(j-1) (t^{u_{i_j}} - 1) e_{S - i_j}``
  for ``S = {i_1 < ... < i_p}``.
* Tensor product: ``d(a x b) = da x b + (-1)^p a x db`` with ``p = deg a``;
  the basis of degree ``d`` lists blocks with the first factor's degree
  running from high to low, each block ordered first-factor-major.
"""

from __future__ import annotations

import itertools
import json
import os
import random
from dataclasses import dataclass, field
from pathlib import Path

from .laurent import ONE, ZERO, LaurentPoly, evaluate

__all__ = [
    "ComplexError",
    "CWPresentation",
    "TwistedComplex",
    "fox_complex",
    "parse_word",
    "torus_skeleton",
    "circle",
    "point",
    "elementary",
    "direct_sum",
    "tensor",
    "euler_char",
    "load",
    "save",
    "random_model_complex",
]


class ComplexError(ValueError):
    """Invalid complex data: bad shapes, bad schema or d∘d != 0."""


def t_power_minus_one(k: int) -> LaurentPoly:
    if k == 0:
        return ZERO
    return LaurentPoly({k: 1, 0: -1})


@dataclass(frozen=True)
class CWPresentation:
    """Presentation 2-complex together with the integer cocycle ``xi``.

    Relators are sequences of ``(generator, exponent)`` pairs; strings such
    as ``"a b a^-1 b^-1"`` are accepted and parsed with :func:`parse_word`.
    """

    generators: tuple
    relators: tuple
    xi: dict

    def __init__(self, generators, relators, xi):
        gens = tuple(generators)
        if len(set(gens)) != len(gens):
            raise ComplexError("duplicate generator names")
        rels = tuple(
            parse_word(r, gens) if isinstance(r, str) else tuple((g, int(e)) for g, e in r)
            for r in relators
        )
        if isinstance(xi, dict):
            xmap = {g: int(xi[g]) for g in gens}
        else:
            xi = list(xi)
            if len(xi) != len(gens):
                raise ComplexError("xi must give one value per generator")
            xmap = {g: int(v) for g, v in zip(gens, xi)}
        object.__setattr__(self, "generators", gens)
        object.__setattr__(self, "relators", rels)
        object.__setattr__(self, "xi", xmap)
        self.validate()

    def validate(self) -> None:
        if not any(self.xi.values()):
            raise ComplexError("xi is identically zero")
        for k, rel in enumerate(self.relators):
            for g, _ in rel:
                if g not in self.xi:
                    raise ComplexError(f"relator {k} uses unknown generator {g!r}")
            total = sum(self.xi[g] * e for g, e in rel)
            if total != 0:
                raise ComplexError(
                    f"cocycle condition fails on relator {k} ({format_word(rel)}): xi sums to {total}"
                )


def parse_word(text: str, generators=None) -> tuple:
    """Parse ``"a b^2 a^-1"`` into ``(("a", 1), ("b", 2), ("a", -1))``."""
    word = []
    for token in text.replace("*", " ").split():
        if "^" in token:
            name, _, exp = token.partition("^")
            try:
                e = int(exp)
            except ValueError:
                raise ComplexError(f"bad exponent in token {token!r}") from None
        else:
            name, e = token, 1
        if generators is not None and name not in generators:
            raise ComplexError(f"unknown generator {name!r} in word {text!r}")
        if e:
            word.append((name, e))
    return tuple(word)


def format_word(word) -> str:
    return " ".join(g if e == 1 else f"{g}^{e}" for g, e in word)


@dataclass(frozen=True, eq=False)
class TwistedComplex:
    """Free chain complex ``C_*`` over Z[t, t^-1]; validated on construction."""

    ranks: tuple
    boundaries: tuple
    label: str = ""
    top_dim: int = field(init=False)

    def __post_init__(self):
        ranks = tuple(int(r) for r in self.ranks)
        bds = tuple(
            tuple(tuple(LaurentPoly._coerce(x) for x in row) for row in mat) for mat in self.boundaries
        )
        object.__setattr__(self, "ranks", ranks)
        object.__setattr__(self, "boundaries", bds)
        object.__setattr__(self, "top_dim", len(ranks) - 1)
        self._check()

    def _check(self) -> None:
        if not self.ranks:
            raise ComplexError("complex needs at least degree 0")
        if any(r < 0 for r in self.ranks):
            raise ComplexError("negative rank")
        if len(self.boundaries) != self.top_dim:
            raise ComplexError(
                f"expected {self.top_dim} boundary matrices, got {len(self.boundaries)}"
            )
        for i in range(1, self.top_dim + 1):
            mat = self.boundaries[i - 1]
            rows, cols = self.ranks[i - 1], self.ranks[i]
            if len(mat) != rows or any(len(row) != cols for row in mat):
                raise ComplexError(f"boundary {i} must be {rows}x{cols}")
        for i in range(1, self.top_dim):
            low, high = self.boundaries[i - 1], self.boundaries[i]
            for r in range(self.ranks[i - 1]):
                for c in range(self.ranks[i + 1]):
                    acc = ZERO
                    for k in range(self.ranks[i]):
                        if low[r][k] and high[k][c]:
                            acc = acc + low[r][k] * high[k][c]
                    if acc:
                        raise ComplexError(
                            f"d_{i} d_{i + 1} != 0 at (i={i}, row={r}, col={c}): {acc}"
                        )

    def boundary(self, i: int):
        """Matrix of ``d_i``; empty-shaped outside ``1..top_dim``."""
        if 1 <= i <= self.top_dim:
            return self.boundaries[i - 1]
        rows = self.ranks[i - 1] if 0 <= i - 1 <= self.top_dim else 0
        cols = self.ranks[i] if 0 <= i <= self.top_dim else 0
        return tuple(tuple(ZERO for _ in range(cols)) for _ in range(rows))

    def rank(self, i: int) -> int:
        return self.ranks[i] if 0 <= i <= self.top_dim else 0

    def specialize(self, s):
        """Boundary matrices with ``t`` replaced by ``s`` (exact for rational s)."""
        return [[[evaluate(x, s) for x in row] for row in mat] for mat in self.boundaries]

    def __eq__(self, other):
        if not isinstance(other, TwistedComplex):
            return NotImplemented
        return self.ranks == other.ranks and self.boundaries == other.boundaries

    def __hash__(self):
        return hash((self.ranks, self.boundaries))

    def to_json(self) -> dict:
        return {
            "top_dim": self.top_dim,
            "ranks": list(self.ranks),
            "boundaries": [[[x.to_json() for x in row] for row in mat] for mat in self.boundaries],
            "label": self.label,
        }

    @classmethod
    def from_json(cls, obj) -> "TwistedComplex":
        if not isinstance(obj, dict):
            raise ComplexError("complex JSON must be an object")
        missing = {"top_dim", "ranks", "boundaries"} - set(obj)
        if missing:
            raise ComplexError(f"complex JSON missing keys: {sorted(missing)}")
        ranks = obj["ranks"]
        if not isinstance(ranks, list) or not all(isinstance(r, int) and not isinstance(r, bool) for r in ranks):
            raise ComplexError("ranks must be a list of integers")
        if obj["top_dim"] != len(ranks) - 1:
            raise ComplexError("top_dim must equal len(ranks) - 1")
        mats = obj["boundaries"]
        if not isinstance(mats, list):
            raise ComplexError("boundaries must be a list of matrices")
        try:
            bds = [[[LaurentPoly.from_json(x) for x in row] for row in mat] for mat in mats]
        except (TypeError, ValueError) as exc:
            raise ComplexError(f"cannot parse boundary entry: {exc}") from None
        # zero-column matrices serialize as lists of empty rows; zero-row ones as []
        return cls(ranks=tuple(ranks), boundaries=tuple(bds), label=str(obj.get("label", "")))


def fox_complex(p: CWPresentation) -> TwistedComplex:
    """Chain complex of the infinite cyclic cover of a presentation 2-complex.

    ``d_1`` is the row of ``t^xi(g) - 1``; column ``j`` of ``d_2`` holds the
    Fox derivatives of relator ``j`` pushed into Z[t, t^-1] through ``xi``.
    With no relators the complex stops in degree 1.
    """
    p.validate()
    gens = p.generators
    index = {g: k for k, g in enumerate(gens)}
    d1 = (tuple(t_power_minus_one(p.xi[g]) for g in gens),)
    if not p.relators:
        return TwistedComplex(ranks=(1, len(gens)), boundaries=(d1,), label="fox")
    cols = []
    for rel in p.relators:
        col = [ZERO] * len(gens)
        prefix = 0
        for g, e in rel:
            x = p.xi[g]
            k = index[g]
            # d(g^e)/dg = 1 + g + ... + g^(e-1) for e > 0, -(g^-1 + ... + g^e) for e < 0
            if e > 0:
                for j in range(e):
                    col[k] = col[k] + LaurentPoly.monomial(prefix + j * x)
            else:
                for j in range(1, -e + 1):
                    col[k] = col[k] - LaurentPoly.monomial(prefix - j * x)
            prefix += e * x
        cols.append(col)
    d2 = tuple(tuple(cols[j][i] for j in range(len(cols))) for i in range(len(gens)))
    return TwistedComplex(ranks=(1, len(gens), len(p.relators)), boundaries=(d1, d2), label="fox")


def torus_skeleton(k: int, n: int, u) -> TwistedComplex:
    """``n``-skeleton of the ``k``-torus twisted by the weights ``u``.

    Degree-``i`` cells are the ``i``-subsets of ``range(k)`` in
    lexicographic order.
    """
    u = [int(x) for x in u]
    if not 1 <= n <= k:
        raise ComplexError(f"need 1 <= n <= k, got k={k}, n={n}")
    if len(u) != k:
        raise ComplexError(f"expected {k} weights, got {len(u)}")
    if any(x == 0 for x in u):
        raise ComplexError("degenerate weight: every u_i must be nonzero")
    return _koszul(k, n, u, label=f"torus_skeleton(k={k},n={n},u={tuple(u)})")


def _koszul(k: int, n: int, u, label: str) -> TwistedComplex:
    cells = [list(itertools.combinations(range(k), i)) for i in range(n + 1)]
    factors = [t_power_minus_one(x) for x in u]
    bds = []
    for i in range(1, n + 1):
        pos = {S: r for r, S in enumerate(cells[i - 1])}
        mat = [[ZERO] * len(cells[i]) for _ in cells[i - 1]]
        for c, S in enumerate(cells[i]):
            for j, idx in enumerate(S):
                face = S[:j] + S[j + 1:]
                f = factors[idx]
                mat[pos[face]][c] = f if j % 2 == 0 else -f
        bds.append(mat)
    return TwistedComplex(ranks=tuple(len(c) for c in cells), boundaries=tuple(bds), label=label)


def circle(u: int = 1) -> TwistedComplex:
    """One 0-cell and one 1-cell with monodromy ``t^u``; ``u = 0`` is allowed."""
    return TwistedComplex(ranks=(1, 1), boundaries=(((t_power_minus_one(int(u)),),),), label=f"circle(u={u})")


def point() -> TwistedComplex:
    return TwistedComplex(ranks=(1,), boundaries=(), label="point")


def elementary(degree: int) -> TwistedComplex:
    """Acyclic complex ``C_degree -> C_(degree-1)`` given by the identity."""
    if degree < 1:
        raise ComplexError("elementary complex needs degree >= 1")
    ranks = [0] * (degree + 1)
    ranks[degree - 1] = ranks[degree] = 1
    bds = []
    for i in range(1, degree + 1):
        rows, cols = ranks[i - 1], ranks[i]
        if i == degree:
            bds.append(((ONE,),))
        else:
            bds.append(tuple(tuple(ZERO for _ in range(cols)) for _ in range(rows)))
    return TwistedComplex(ranks=tuple(ranks), boundaries=tuple(bds), label=f"elementary({degree})")


def direct_sum(A: TwistedComplex, B: TwistedComplex) -> TwistedComplex:
    top = max(A.top_dim, B.top_dim)
    ranks = tuple(A.rank(i) + B.rank(i) for i in range(top + 1))
    bds = []
    for i in range(1, top + 1):
        a, b = A.boundary(i), B.boundary(i)
        ca, cb = A.rank(i), B.rank(i)
        rows = [tuple(row) + (ZERO,) * cb for row in a]
        rows += [(ZERO,) * ca + tuple(row) for row in b]
        bds.append(tuple(rows))
    return TwistedComplex(ranks=ranks, boundaries=tuple(bds), label=f"({A.label})+({B.label})")


def _tensor_basis(A: TwistedComplex, B: TwistedComplex, d: int):
    basis = []
    for p in range(min(d, A.top_dim), max(0, d - B.top_dim) - 1, -1):
        for a in range(A.ranks[p]):
            for b in range(B.ranks[d - p]):
                basis.append((p, a, b))
    return basis


def tensor(A: TwistedComplex, B: TwistedComplex) -> TwistedComplex:
    """Total complex of ``A (x) B`` over Z[t, t^-1] (t acts diagonally)."""
    top = A.top_dim + B.top_dim
    bases = [_tensor_basis(A, B, d) for d in range(top + 1)]
    bds = []
    for d in range(1, top + 1):
        pos = {cell: r for r, cell in enumerate(bases[d - 1])}
        mat = [[ZERO] * len(bases[d]) for _ in bases[d - 1]]
        for c, (p, a, b) in enumerate(bases[d]):
            q = d - p
            if p >= 1:
                da = A.boundaries[p - 1]
                for r in range(A.ranks[p - 1]):
                    if da[r][a]:
                        mat[pos[(p - 1, r, b)]][c] += da[r][a]
            if q >= 1:
                db = B.boundaries[q - 1]
                for r in range(B.ranks[q - 1]):
                    if db[r][b]:
                        entry = db[r][b] if p % 2 == 0 else -db[r][b]
                        mat[pos[(p, a, r)]][c] += entry
        bds.append(mat)
    return TwistedComplex(
        ranks=tuple(len(b) for b in bases), boundaries=tuple(bds), label=f"({A.label})x({B.label})"
    )


def euler_char(c: TwistedComplex) -> int:
    return sum((-1) ** i * r for i, r in enumerate(c.ranks))


def save(c: TwistedComplex, path) -> None:
    Path(path).write_text(json.dumps(c.to_json(), sort_keys=True, indent=1) + "\n")


def load(path) -> TwistedComplex:
    try:
        obj = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise ComplexError(f"{os.fspath(path)}: invalid JSON ({exc})") from None
    return TwistedComplex.from_json(obj)


def random_model_complex(rng: random.Random, max_factors: int = 3) -> TwistedComplex:
    """Tensor product of a few randomly drawn model complexes."""
    def draw():
        kind = rng.choice(["circle", "skeleton", "fox_torus", "wedge", "point"])
        if kind == "circle":
            return circle(rng.choice([-2, -1, 0, 1, 2, 3]))
        if kind == "skeleton":
            k = rng.randint(1, 3)
            n = rng.randint(1, k)
            return torus_skeleton(k, n, [rng.choice([-2, -1, 1, 2]) for _ in range(k)])
        if kind == "fox_torus":
            xi = rng.choice([(1, 0), (0, 1), (1, 1), (2, -1)])
            return fox_complex(CWPresentation(["a", "b"], ["a b a^-1 b^-1"], xi))
        if kind == "wedge":
            return fox_complex(CWPresentation(["a", "b"], [], (rng.choice([1, 2]), rng.choice([-1, 1]))))
        return point()

    c = draw()
    for _ in range(rng.randint(0, max_factors - 1)):
        nxt = draw()
        if sum(c.ranks) * sum(nxt.ranks) > 36:
            break
        c = tensor(c, nxt)
    return c

