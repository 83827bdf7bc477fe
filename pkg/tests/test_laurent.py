from fractions import Fraction
from math import gcd as igcd

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from torustop.laurent import (
    ONE,
    ZERO,
    LaurentPoly,
    ZeroPolynomialError,
    canonical,
    cyclotomic,
    determinant,
    evaluate,
    gcd,
    is_product_of_cyclotomics,
    matmul,
    normalize,
    rational_roots,
    smith_normal_form,
)

T = LaurentPoly.t()


def P(d):
    return LaurentPoly(d)


coeff = st.fractions(min_value=-5, max_value=5, max_denominator=4)
polys = st.dictionaries(st.integers(-3, 3), coeff, max_size=4).map(LaurentPoly)
nonzero_polys = polys.filter(bool)


# -- arithmetic ----------------------------------------------------------------


def test_zero_coefficients_are_dropped():
    f = P({0: 1, 2: 0, -1: Fraction(0)})
    assert f.coeffs == {0: Fraction(1)}
    assert P({3: 0}) == ZERO


def test_str_is_readable():
    assert str(T - 1) == "t - 1"
    assert str(P({2: 2, 0: Fraction(-1, 2), -1: 1})) == "2*t^2 - 1/2 + t^-1"


@given(polys, polys, polys)
def test_ring_axioms(f, g, h):
    assert f + g == g + f
    assert f * g == g * f
    assert (f * g) * h == f * (g * h)
    assert f * (g + h) == f * g + f * h
    assert f - f == ZERO


@given(polys, nonzero_polys)
def test_divmod_identity(f, g):
    q, r = f.divmod(g)
    assert q * g + r == f
    assert not r or r.span < g.span


def test_units_are_monomials():
    assert P({-4: Fraction(3, 7)}).is_unit()
    assert not (T - 1).is_unit()
    u = P({2: 3})
    assert u * u.unit_inverse() == ONE


# -- normal form and gcd --------------------------------------------------------


@pytest.mark.parametrize(
    "f, unit, prim",
    [
        (P({2: 1, 1: -1}), (1, 1), T - 1),
        (P({-1: -2, 0: 2}), (2, -1), T - 1),  # 2 t^-1 (t - 1)
        (P({0: 5}), (5, 0), ONE),
    ],
)
def test_normalize_examples(f, unit, prim):
    (c, k), p = normalize(f)
    assert (c, k) == unit
    assert p == prim
    assert P({k: c}) * p == f


def test_normalize_zero_raises():
    with pytest.raises(ZeroPolynomialError):
        normalize(ZERO)


@given(nonzero_polys)
def test_canonical_is_primitive_integer(f):
    p = canonical(f)
    ints = p.integer_coeffs()
    assert p.low == 0
    assert ints[-1] > 0
    g = 0
    for a in ints:
        g = igcd(g, a)
    assert g == 1


@pytest.mark.parametrize(
    "f, g, want",
    [
        (T - 1, T * T - 1, T - 1),
        (T - 1, T + 1, ONE),
        (P({2: 2, 1: -3, 0: 2}), T - 1, ONE),
    ],
)
def test_gcd_examples(f, g, want):
    assert gcd(f, g) == want


def test_gcd_both_zero():
    with pytest.raises(ZeroPolynomialError):
        gcd(ZERO, ZERO)


@settings(max_examples=60)
@given(nonzero_polys, nonzero_polys, nonzero_polys)
def test_gcd_divides_and_is_maximal(a, b, c):
    f, g = a * c, b * c
    d = gcd(f, g)
    assert d.divides(f) and d.divides(g)
    assert canonical(c).divides(d)


# -- Smith normal form ----------------------------------------------------------


def _diag(factors, m, n):
    out = [[ZERO] * n for _ in range(m)]
    for i, f in enumerate(factors):
        out[i][i] = f
    return out


def test_snf_examples():
    assert smith_normal_form([[T - 1]]).invariant_factors == [T - 1]
    res = smith_normal_form([[T - 1, ZERO], [ZERO, (T - 1) * (T + 1)]])
    assert res.invariant_factors == [T - 1, T * T - 1]
    res = smith_normal_form([[T - 1, T - 1]])
    assert res.invariant_factors == [T - 1] and res.rank == 1


matrices = st.integers(1, 3).flatmap(
    lambda m: st.integers(1, 3).flatmap(
        lambda n: st.lists(st.lists(polys, min_size=n, max_size=n), min_size=m, max_size=m)
    )
)


@settings(max_examples=60, deadline=None)
@given(matrices)
def test_snf_transforms_reproduce_diagonal(M):
    res = smith_normal_form(M)
    m, n = res.shape
    assert matmul(matmul(res.U, M), res.V) == _diag(res.invariant_factors, m, n)
    assert determinant(res.U).is_unit()
    assert determinant(res.V).is_unit()
    fs = res.invariant_factors
    for a, b in zip(fs, fs[1:]):
        assert a.divides(b)
    for f in fs:
        assert f == canonical(f)


# -- cyclotomic test ------------------------------------------------------------


@pytest.mark.parametrize("m", range(1, 31))
def test_every_cyclotomic_polynomial_passes(m):
    assert is_product_of_cyclotomics(cyclotomic(m))


def test_products_and_unit_multiples_pass():
    f = cyclotomic(12) * cyclotomic(12) * cyclotomic(5) * (T - 1)
    assert is_product_of_cyclotomics(f)
    assert is_product_of_cyclotomics(P({-3: Fraction(-7, 2)}) * f)
    assert is_product_of_cyclotomics(P({0: 4}))


@pytest.mark.parametrize(
    "f",
    [
        P({2: 2, 1: -3, 0: 2}),  # roots on the unit circle, not roots of unity
        P({2: 1, 1: -1, 0: -1}),
        T - 2,
        P({1: 2, 0: -1}),
        P({4: 1, 3: -1, 2: 1, 1: -1, 0: 1}) * P({2: 1, 1: 1, 0: 1}) + 1,
    ],
)
def test_non_cyclotomic_rejected(f):
    assert not is_product_of_cyclotomics(f)


def test_cyclotomic_of_zero_raises():
    with pytest.raises(ZeroPolynomialError):
        is_product_of_cyclotomics(ZERO)


# -- evaluation -----------------------------------------------------------------


def test_evaluate_examples():
    assert evaluate(T - 1, 1) == 0
    assert evaluate(T - 1, 2) == 1
    assert evaluate(P({2: 1, -1: 1}), Fraction(1, 2)) == Fraction(9, 4)
    assert evaluate(P({2: 1, -1: 1}), "1/2") == Fraction(9, 4)
    assert abs(evaluate(T * T + 1, 1j)) < 1e-15


def test_evaluate_at_zero_raises():
    with pytest.raises(ZeroDivisionError):
        evaluate(T - 1, 0)
    with pytest.raises(ZeroDivisionError):
        evaluate(T - 1, 0j)


def test_rational_roots():
    f = (T - 2) * (P({1: 3, 0: 1})) * (T * T + 1)
    assert rational_roots(f) == [Fraction(-1, 3), Fraction(2)]


# -- serialization --------------------------------------------------------------


@given(polys)
def test_json_round_trip(f):
    assert LaurentPoly.from_json(f.to_json()) == f


@pytest.mark.parametrize("bad", [{"1.5": "1"}, {"x": "1"}, {"1": 0.5}, ["1", "2"]])
def test_json_rejects_bad_input(bad):
    with pytest.raises(ValueError):
        LaurentPoly.from_json(bad)
