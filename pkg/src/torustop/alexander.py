"""Alexander modules of a twisted complex, computed over Q[t, t^-1].

Over a PID the torsion of ``H_i`` is the cokernel torsion of ``d_{i+1}``
(``ker d_i`` is a saturated submodule), so one Smith form per boundary map
yields everything:

    rank H_i  = rank C_i - rank d_i - rank d_{i+1}
    torsion   = non-unit invariant factors of d_{i+1}
"""

from __future__ import annotations

from dataclasses import dataclass

from .complexes import TwistedComplex, euler_char
from .laurent import ONE, LaurentPoly, canonical, is_product_of_cyclotomics, smith_normal_form

__all__ = [
    "AlexanderData",
    "homology",
    "novikov_betti",
    "torsion_profile",
    "novikov_vanishing_certificate",
]


@dataclass(frozen=True)
class AlexanderData:
    ranks: tuple
    invariant_factors: tuple
    euler: int

    @property
    def alexander_polys(self) -> tuple:
        out = []
        for factors in self.invariant_factors:
            p = ONE
            for f in factors:
                p = p * f
            out.append(canonical(p))
        return tuple(out)

    @property
    def top_dim(self) -> int:
        return len(self.ranks) - 1

    def to_json(self) -> dict:
        return {
            "degrees": [
                {
                    "degree": i,
                    "rank": self.ranks[i],
                    "invariant_factors": [f.to_json() for f in self.invariant_factors[i]],
                    "alexander_poly": self.alexander_polys[i].to_json(),
                    "alexander_poly_text": str(self.alexander_polys[i]),
                }
                for i in range(len(self.ranks))
            ],
            "euler_char": self.euler,
        }


def _boundary_snf(c: TwistedComplex, i: int):
    if not 1 <= i <= c.top_dim:
        return 0, []
    mat = c.boundaries[i - 1]
    if not mat or not mat[0]:
        return 0, []
    res = smith_normal_form(mat, transforms=False)
    return res.rank, res.invariant_factors


def homology(c: TwistedComplex) -> AlexanderData:
    snfs = [_boundary_snf(c, i) for i in range(c.top_dim + 2)]
    ranks = []
    factors = []
    for i in range(c.top_dim + 1):
        r_i = snfs[i][0]
        r_next, inv = snfs[i + 1]
        ranks.append(c.ranks[i] - r_i - r_next)
        factors.append(tuple(f for f in inv if not f.is_unit()))
    return AlexanderData(ranks=tuple(ranks), invariant_factors=tuple(factors), euler=euler_char(c))


def novikov_betti(c: TwistedComplex | AlexanderData) -> list[int]:
    data = c if isinstance(c, AlexanderData) else homology(c)
    return list(data.ranks)


def torsion_profile(c: TwistedComplex | AlexanderData) -> list[dict]:
    data = c if isinstance(c, AlexanderData) else homology(c)
    return [
        {
            "degree": i,
            "is_torsion": data.ranks[i] == 0,
            "all_cyclotomic": is_product_of_cyclotomics(data.alexander_polys[i]),
        }
        for i in range(len(data.ranks))
    ]


def _extreme_coeffs_are_units(f: LaurentPoly) -> bool:
    coeffs = canonical(f).integer_coeffs()
    return abs(coeffs[0]) == 1 and abs(coeffs[-1]) == 1


def novikov_vanishing_certificate(c: TwistedComplex | AlexanderData, n: int) -> dict:
    """Sufficient test that Novikov homology vanishes outside degree ``n``.

    Certified when every ``H_i`` with ``i != n`` has rank 0 and every
    invariant factor has leading and trailing coefficients ``+-1``, so the
    factor is invertible in the Novikov ring.  A negative answer means
    "not certified", not "nonzero".
    """
    data = c if isinstance(c, AlexanderData) else homology(c)
    if not 0 <= n <= data.top_dim:
        raise ValueError(f"middle degree {n} outside 0..{data.top_dim}")
    reasons = []
    for i in range(data.top_dim + 1):
        if i == n:
            continue
        if data.ranks[i]:
            reasons.append({"degree": i, "reason": "positive rank", "rank": data.ranks[i]})
        for f in data.invariant_factors[i]:
            if not _extreme_coeffs_are_units(f):
                reasons.append({"degree": i, "reason": "extreme coefficient not +-1", "factor": str(f)})
    return {
        "certified": not reasons,
        "status": "certified" if not reasons else "not certified",
        "middle": n,
        "betti": list(data.ranks),
        "middle_betti_equals_signed_euler": data.ranks[n] == (-1) ** n * data.euler,
        "obstructions": reasons,
    }
