"""Exact arithmetic in Q[t, t^-1].

Polynomials are stored densely as a lowest exponent plus a tuple of
``Fraction`` coefficients whose first and last entries are nonzero.  All
arithmetic is exact; floats only appear when :func:`evaluate` is handed a
complex argument.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational

__all__ = [
    "LaurentPoly",
    "ZeroPolynomialError",
    "SNFResult",
    "normalize",
    "gcd",
    "smith_normal_form",
    "is_product_of_cyclotomics",
    "cyclotomic",
    "evaluate",
    "rational_roots",
    "parse_rational",
    "format_rational",
]


class ZeroPolynomialError(ValueError):
    """Raised when an operation is undefined on the zero polynomial."""


def parse_rational(value) -> Fraction:
    if isinstance(value, bool):
        raise TypeError("booleans are not coefficients")
    if isinstance(value, (int, Fraction)):
        return Fraction(value)
    if isinstance(value, str):
        text = value.strip()
        if not text:
            raise ValueError("empty coefficient string")
        return Fraction(text)
    raise TypeError(f"cannot read exact rational from {value!r}")


def format_rational(q: Fraction) -> str:
    return f"{q.numerator}/{q.denominator}"


def _trim(lo: int, coeffs: list) -> tuple[int, tuple]:
    start = 0
    end = len(coeffs)
    while start < end and coeffs[start] == 0:
        start += 1
    while end > start and coeffs[end - 1] == 0:
        end -= 1
    if start == end:
        return 0, ()
    return lo + start, tuple(coeffs[start:end])


class LaurentPoly:
    """Element of Q[t, t^-1]; immutable and hashable."""

    __slots__ = ("_lo", "_c")

    def __init__(self, coeffs=None):
        items = {} if coeffs is None else dict(coeffs)
        if not items:
            self._lo, self._c = 0, ()
            return
        lo = min(items)
        hi = max(items)
        dense = [Fraction(0)] * (hi - lo + 1)
        for e, c in items.items():
            if not isinstance(e, int) or isinstance(e, bool):
                raise TypeError(f"exponent must be an integer, got {e!r}")
            dense[e - lo] += parse_rational(c)
        self._lo, self._c = _trim(lo, dense)

    @classmethod
    def _raw(cls, lo: int, coeffs) -> "LaurentPoly":
        obj = cls.__new__(cls)
        obj._lo, obj._c = _trim(lo, list(coeffs))
        return obj

    @classmethod
    def const(cls, c) -> "LaurentPoly":
        return cls._raw(0, [parse_rational(c)])

    @classmethod
    def monomial(cls, exponent: int, c=1) -> "LaurentPoly":
        return cls._raw(exponent, [parse_rational(c)])

    @classmethod
    def t(cls) -> "LaurentPoly":
        return cls._raw(1, [Fraction(1)])

    @classmethod
    def from_dense(cls, lo: int, coeffs) -> "LaurentPoly":
        """``coeffs[i]`` is the coefficient of ``t**(lo + i)``."""
        return cls._raw(lo, [parse_rational(c) for c in coeffs])

    # -- inspection -------------------------------------------------------

    @property
    def coeffs(self) -> dict[int, Fraction]:
        return {self._lo + i: c for i, c in enumerate(self._c) if c != 0}

    @property
    def low(self) -> int:
        if not self._c:
            raise ZeroPolynomialError("zero polynomial has no lowest exponent")
        return self._lo

    @property
    def high(self) -> int:
        if not self._c:
            raise ZeroPolynomialError("zero polynomial has no highest exponent")
        return self._lo + len(self._c) - 1

    @property
    def span(self) -> int:
        """Difference between the highest and lowest exponents (-1 for zero)."""
        return len(self._c) - 1

    def is_zero(self) -> bool:
        return not self._c

    def is_unit(self) -> bool:
        return len(self._c) == 1

    def __bool__(self) -> bool:
        return bool(self._c)

    def leading(self) -> Fraction:
        return self._c[-1]

    def trailing(self) -> Fraction:
        return self._c[0]

    # -- arithmetic -------------------------------------------------------

    @staticmethod
    def _coerce(other) -> "LaurentPoly":
        if isinstance(other, LaurentPoly):
            return other
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return LaurentPoly._raw(0, [Fraction(other)])
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if not other._c:
            return self
        if not self._c:
            return other
        lo = min(self._lo, other._lo)
        hi = max(self.high, other.high)
        out = [Fraction(0)] * (hi - lo + 1)
        for i, c in enumerate(self._c):
            out[self._lo - lo + i] += c
        for i, c in enumerate(other._c):
            out[other._lo - lo + i] += c
        return LaurentPoly._raw(lo, out)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly._raw(self._lo, [-c for c in self._c])

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if not self._c or not other._c:
            return ZERO
        a, b = self._c, other._c
        if len(b) == 1:
            s = b[0]
            return LaurentPoly._raw(self._lo + other._lo, [c * s for c in a])
        if len(a) == 1:
            s = a[0]
            return LaurentPoly._raw(self._lo + other._lo, [c * s for c in b])
        out = [Fraction(0)] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    out[i + j] += x * y
        return LaurentPoly._raw(self._lo + other._lo, out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            if not self.is_unit():
                raise ValueError("only units have negative powers")
            return LaurentPoly._raw(self._lo * k, [self._c[0] ** k])
        result = ONE
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def divmod(self, other: "LaurentPoly") -> tuple["LaurentPoly", "LaurentPoly"]:
        """Euclidean division with ``span(remainder) < span(other)``."""
        if not other._c:
            raise ZeroDivisionError("division by the zero polynomial")
        if not self._c:
            return ZERO, ZERO
        g = other._c
        dg = len(g) - 1
        r = list(self._c)
        if len(r) - 1 < dg:
            return ZERO, self
        lead = g[-1]
        q = [Fraction(0)] * (len(r) - dg)
        for k in range(len(r) - 1 - dg, -1, -1):
            c = r[k + dg]
            if c:
                c = c / lead
                q[k] = c
                for i in range(dg + 1):
                    r[k + i] -= c * g[i]
        quot = LaurentPoly._raw(self._lo - other._lo, q)
        rem = LaurentPoly._raw(self._lo, r[:dg])
        return quot, rem

    def __floordiv__(self, other):
        return self.divmod(self._coerce(other))[0]

    def __mod__(self, other):
        return self.divmod(self._coerce(other))[1]

    def divides(self, other: "LaurentPoly") -> bool:
        """True when ``self`` divides ``other`` in Q[t, t^-1]."""
        if not self._c:
            return not other._c
        return not other.divmod(self)[1]

    def exact_div(self, other: "LaurentPoly") -> "LaurentPoly":
        q, r = self.divmod(other)
        if r:
            raise ArithmeticError(f"{other} does not divide {self}")
        return q

    def unit_inverse(self) -> "LaurentPoly":
        if not self.is_unit():
            raise ArithmeticError(f"{self} is not a unit")
        return LaurentPoly._raw(-self._lo, [1 / self._c[0]])

    # -- comparison / display ---------------------------------------------

    def __eq__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self._c == other._c and (not self._c or self._lo == other._lo)

    def __hash__(self):
        return hash((self._lo, self._c)) if self._c else hash(())

    def __repr__(self):
        return f"LaurentPoly({self})"

    def __str__(self):
        if not self._c:
            return "0"
        parts = []
        for i in range(len(self._c) - 1, -1, -1):
            c = self._c[i]
            if not c:
                continue
            e = self._lo + i
            sign = "-" if c < 0 else "+"
            mag = abs(c)
            if e == 0:
                body = str(mag)
            else:
                mono = "t" if e == 1 else f"t^{e}"
                body = mono if mag == 1 else f"{mag}*{mono}"
            parts.append((sign, body))
        first_sign, first = parts[0]
        text = ("-" if first_sign == "-" else "") + first
        for sign, body in parts[1:]:
            text += f" {sign} {body}"
        return text

    # -- serialization ----------------------------------------------------

    def to_json(self) -> dict[str, str]:
        return {str(e): format_rational(c) for e, c in sorted(self.coeffs.items())}

    @classmethod
    def from_json(cls, obj) -> "LaurentPoly":
        if not isinstance(obj, dict):
            raise ValueError(f"Laurent polynomial must be a JSON object, got {type(obj).__name__}")
        items = {}
        for key, value in obj.items():
            try:
                e = int(key)
            except (TypeError, ValueError):
                raise ValueError(f"exponent {key!r} is not an integer") from None
            if str(e) != str(key).strip().lstrip("+"):
                raise ValueError(f"exponent {key!r} is not an integer")
            if isinstance(value, float):
                raise ValueError(f"coefficient {value!r} is not exact")
            items[e] = parse_rational(value)
        return cls(items)

    def integer_coeffs(self) -> list[int]:
        """Dense coefficients from lowest exponent; all must be integers."""
        out = []
        for c in self._c:
            if c.denominator != 1:
                raise ValueError(f"{self} has non-integer coefficients")
            out.append(c.numerator)
        return out


ZERO = LaurentPoly._raw(0, [])
ONE = LaurentPoly._raw(0, [Fraction(1)])


def normalize(f: LaurentPoly) -> tuple[tuple[Fraction, int], LaurentPoly]:
    """Split ``f`` as ``c * t**k * p`` with ``p`` the canonical representative.

    ``p`` has lowest exponent 0, coprime integer coefficients and a positive
    leading coefficient.  Returns ``((c, k), p)``.
    """
    if not f._c:
        raise ZeroPolynomialError("cannot normalize the zero polynomial")
    den = 1
    for c in f._c:
        den = den * c.denominator // math.gcd(den, c.denominator)
    ints = [int(c * den) for c in f._c]
    content = 0
    for a in ints:
        content = math.gcd(content, a)
    if ints[-1] < 0:
        content = -content
    prim = LaurentPoly._raw(0, [Fraction(a // content) for a in ints])
    return (Fraction(content, den), f._lo), prim


def canonical(f: LaurentPoly) -> LaurentPoly:
    return normalize(f)[1]


def gcd(f: LaurentPoly, g: LaurentPoly) -> LaurentPoly:
    """Normalized greatest common divisor in Q[t, t^-1]."""
    if not f and not g:
        raise ZeroPolynomialError("gcd of two zero polynomials is undefined")
    a, b = f, g
    while b:
        a, b = b, a.divmod(b)[1]
    return canonical(a)


@dataclass(frozen=True)
class SNFResult:
    """Smith form ``U @ M @ V = diag(invariant_factors)`` (zero padded)."""

    invariant_factors: list
    rank: int
    transforms: tuple | None = None
    shape: tuple[int, int] = (0, 0)

    @property
    def U(self):
        return None if self.transforms is None else self.transforms[0]

    @property
    def V(self):
        return None if self.transforms is None else self.transforms[1]


def _identity(n: int) -> list[list[LaurentPoly]]:
    return [[ONE if i == j else ZERO for j in range(n)] for i in range(n)]


def smith_normal_form(M, transforms: bool = True) -> SNFResult:
    """Smith normal form over the PID Q[t, t^-1].

    Pivots are chosen as the nonzero entry of smallest span, ties broken in
    row-major order, so the output is deterministic.  When ``transforms`` is
    set the unimodular ``U`` (rows x rows) and ``V`` (cols x cols) are
    accumulated alongside.
    """
    A = [[LaurentPoly._coerce(x) for x in row] for row in M]
    m = len(A)
    n = len(A[0]) if m else 0
    if any(len(row) != n for row in A):
        raise ValueError("ragged matrix")
    U = _identity(m) if transforms else None
    V = _identity(n) if transforms else None

    def swap_rows(i, j):
        if i != j:
            A[i], A[j] = A[j], A[i]
            if U is not None:
                U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        if i != j:
            for row in A:
                row[i], row[j] = row[j], row[i]
            if V is not None:
                for row in V:
                    row[i], row[j] = row[j], row[i]

    def add_row(dst, src, q):
        # row_dst -= q * row_src
        rs, rd = A[src], A[dst]
        for j in range(n):
            if rs[j]:
                rd[j] = rd[j] - q * rs[j]
        if U is not None:
            us, ud = U[src], U[dst]
            for j in range(m):
                if us[j]:
                    ud[j] = ud[j] - q * us[j]

    def add_col(dst, src, q):
        # col_dst -= q * col_src
        for row in A:
            if row[src]:
                row[dst] = row[dst] - q * row[src]
        if V is not None:
            for row in V:
                if row[src]:
                    row[dst] = row[dst] - q * row[src]

    diag: list[LaurentPoly] = []
    r = 0
    while r < m and r < n:
        best = None
        for i in range(r, m):
            for j in range(r, n):
                x = A[i][j]
                if x and (best is None or x.span < best[0]):
                    best = (x.span, i, j)
                    if best[0] == 0:
                        break
            if best is not None and best[0] == 0:
                break
        if best is None:
            break
        _, i0, j0 = best
        swap_rows(r, i0)
        swap_cols(r, j0)
        while True:
            piv = A[r][r]
            clean = True
            for i in range(r + 1, m):
                if A[i][r]:
                    q, rem = A[i][r].divmod(piv)
                    add_row(i, r, q)
                    if rem:
                        clean = False
            for j in range(r + 1, n):
                if A[r][j]:
                    q, rem = A[r][j].divmod(piv)
                    add_col(j, r, q)
                    if rem:
                        clean = False
            if not clean:
                best = None
                for i in range(r + 1, m):
                    x = A[i][r]
                    if x and (best is None or x.span < best[0]):
                        best = (x.span, i, r)
                for j in range(r + 1, n):
                    x = A[r][j]
                    if x and (best is None or x.span < best[0]):
                        best = (x.span, r, j)
                _, bi, bj = best
                swap_rows(r, bi)
                swap_cols(r, bj)
                continue
            bad = None
            if not piv.is_unit():
                for i in range(r + 1, m):
                    for j in range(r + 1, n):
                        if A[i][j] and A[i][j].divmod(piv)[1]:
                            bad = i
                            break
                    if bad is not None:
                        break
            if bad is None:
                break
            add_row(r, bad, -ONE)
        diag.append(A[r][r])
        r += 1

    factors = []
    for k, d in enumerate(diag):
        (c, e), prim = normalize(d)
        factors.append(prim)
        if U is not None:
            inv = LaurentPoly._raw(-e, [1 / c])
            U[k] = [x * inv for x in U[k]]
    return SNFResult(
        invariant_factors=factors,
        rank=len(factors),
        transforms=(U, V) if transforms else None,
        shape=(m, n),
    )


def matmul(A, B):
    """Product of matrices over Q[t, t^-1] given as nested lists."""
    if not A:
        return []
    inner = len(B)
    cols = len(B[0]) if inner else 0
    out = []
    for row in A:
        new = []
        for j in range(cols):
            acc = ZERO
            for k in range(inner):
                if row[k] and B[k][j]:
                    acc = acc + row[k] * B[k][j]
            new.append(acc)
        out.append(new)
    return out


def determinant(A) -> LaurentPoly:
    """Determinant via fraction-free cofactor expansion (small matrices only)."""
    n = len(A)
    if n == 0:
        return ONE
    if n == 1:
        return A[0][0]
    total = ZERO
    for j in range(n):
        if A[0][j]:
            minor = [row[:j] + row[j + 1:] for row in A[1:]]
            term = A[0][j] * determinant(minor)
            total = total + term if j % 2 == 0 else total - term
    return total


# -- cyclotomic testing ---------------------------------------------------


def _euler_phi(m: int) -> int:
    result = m
    p = 2
    k = m
    while p * p <= k:
        if k % p == 0:
            while k % p == 0:
                k //= p
            result -= result // p
        p += 1
    if k > 1:
        result -= result // k
    return result


def _polymulmod(a: list[int], b: list[int], mod: list[int]) -> list[int]:
    # all lists low-to-high; mod is monic
    prod = [0] * (len(a) + len(b) - 1) if a and b else []
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                prod[i + j] += x * y
    return _polymod(prod, mod)


def _polymod(a: list[int], mod: list[int]) -> list[int]:
    d = len(mod) - 1
    a = list(a)
    for k in range(len(a) - 1, d - 1, -1):
        c = a[k]
        if c:
            for i in range(d + 1):
                a[k - d + i] -= c * mod[i]
    a = a[:d]
    while a and a[-1] == 0:
        a.pop()
    return a


def is_product_of_cyclotomics(f: LaurentPoly) -> bool:
    """Decide whether the canonical form of ``f`` is a product of cyclotomics.

    With ``d`` the degree and ``L = lcm{m : phi(m) <= d}``, a monic integer
    polynomial is such a product exactly when it divides ``(t^L - 1)^d``.
    The power is reduced modulo the polynomial, so ``L`` may be huge.
    """
    if not f:
        raise ZeroPolynomialError("cyclotomic test undefined for the zero polynomial")
    prim = canonical(f)
    d = prim.span
    if d == 0:
        return True
    coeffs = prim.integer_coeffs()
    if coeffs[-1] != 1:
        return False
    L = 1
    for m in range(1, 2 * d * d + 2):
        if _euler_phi(m) <= d:
            L = L * m // math.gcd(L, m)
    # t^L mod prim by square and multiply
    power = [1]
    base = _polymod([0, 1], coeffs)
    e = L
    while e:
        if e & 1:
            power = _polymulmod(power, base, coeffs)
        base = _polymulmod(base, base, coeffs)
        e >>= 1
    x = list(power) or [0]
    x[0] -= 1
    x = _polymod(x, coeffs)
    acc = [1]
    for _ in range(d):
        acc = _polymulmod(acc, x, coeffs)
        if not acc:
            return True
    return not acc


def cyclotomic(m: int) -> LaurentPoly:
    """Phi_m, obtained by exact division of t^m - 1 by Phi_k for k | m, k < m."""
    if m < 1:
        raise ValueError("cyclotomic index must be positive")
    f = LaurentPoly({m: 1, 0: -1})
    for k in range(1, m):
        if m % k == 0:
            f = f.exact_div(cyclotomic(k))
    return f


# -- specialization -------------------------------------------------------


def evaluate(f: LaurentPoly, s):
    """Value of ``f`` at ``t = s``; exact for rational ``s``."""
    if isinstance(s, complex) or isinstance(s, float):
        z = complex(s)
        if z == 0:
            raise ZeroDivisionError("t is invertible; cannot evaluate at 0")
        acc = 0j
        for c in reversed(f._c):
            acc = acc * z + float(c)
        return acc * z ** f._lo if f._c else 0j
    if isinstance(s, bool) or not isinstance(s, (int, Fraction, Rational, str)):
        raise TypeError(f"unsupported evaluation point {s!r}")
    q = parse_rational(s) if isinstance(s, str) else Fraction(s)
    if q == 0:
        raise ZeroDivisionError("t is invertible; cannot evaluate at 0")
    acc = Fraction(0)
    for c in reversed(f._c):
        acc = acc * q + c
    return acc * q ** f._lo if f._c else Fraction(0)


def rational_roots(f: LaurentPoly) -> list[Fraction]:
    """Nonzero rational roots of ``f`` (sorted, without multiplicity)."""
    if not f:
        raise ZeroPolynomialError("zero polynomial has every root")
    coeffs = canonical(f).integer_coeffs()
    a0, an = abs(coeffs[0]), abs(coeffs[-1])

    def divisors(k):
        return [d for d in range(1, k + 1) if k % d == 0]

    roots = set()
    for p in divisors(a0):
        for q in divisors(an):
            for cand in (Fraction(p, q), Fraction(-p, q)):
                if evaluate(f, cand) == 0:
                    roots.add(cand)
    return sorted(roots)
