import random
from fractions import Fraction

import pytest

from torustop.alexander import homology
from torustop.complexes import CWPresentation, circle, euler_char, fox_complex, random_model_complex, torus_skeleton
from torustop.localsys import LocalSystemSpec, generic_vanishing_scan, milnor_dims, twisted_dims


def dims(c, s):
    return twisted_dims(LocalSystemSpec(c, s))


def test_circle_examples():
    c = circle(1)
    assert dims(c, 2) == [0, 0]
    assert dims(c, 1) == [1, 1]
    a = homology(c)
    assert milnor_dims(a, 1) == [1, 1]
    assert milnor_dims(a, 2) == [0, 0]


def test_skeleton_example():
    assert dims(torus_skeleton(3, 2, (1, 1, 1)), 2) == [0, 0, 1]


def test_zero_s_rejected():
    with pytest.raises(ValueError):
        LocalSystemSpec(circle(1), 0)
    with pytest.raises(ValueError):
        milnor_dims(homology(circle(1)), "0")


def test_float_mode_matches_exact():
    c = torus_skeleton(3, 2, (1, 2, 3))
    for s in (Fraction(1), Fraction(-1), Fraction(3, 7)):
        assert dims(c, complex(s)) == dims(c, s)
    # primitive cube root of unity is a root of t^3 - 1
    w = complex(-0.5, 3**0.5 / 2)
    assert dims(c, w) == milnor_dims(homology(c), w)


def _models():
    yield torus_skeleton(3, 2, (1, 1, 1))
    yield torus_skeleton(4, 2, (2, -1, 1, 3))
    yield torus_skeleton(3, 3, (1, 2, 2))
    yield fox_complex(CWPresentation(["a", "b"], ["a b a^-1 b^-1"], (1, 0)))
    yield fox_complex(CWPresentation(["a", "b"], ["a b^2 a^-1 b^-1"], (1, 0)))
    yield circle(-2)
    rng = random.Random(2)
    for _ in range(6):
        yield random_model_complex(rng)


@pytest.mark.parametrize("c", list(_models()), ids=lambda c: c.label[:40])
def test_two_routes_agree_everywhere(c):
    a = homology(c)
    rng = random.Random(c.label)
    points = [Fraction(1), Fraction(-1), Fraction(2), Fraction(1, 2)]
    points += [Fraction(rng.randint(-30, 30) or 1, rng.randint(1, 30)) for _ in range(46)]
    for s in points:
        d = dims(c, s)
        assert d == milnor_dims(a, s), s
        assert sum((-1) ** i * x for i, x in enumerate(d)) == euler_char(c)


def test_s_equal_one_is_untwisted():
    # the 2-skeleton of T^3 has Betti numbers 1, 3, 3
    assert dims(torus_skeleton(3, 2, (1, 1, 1)), 1) == [1, 3, 3]


class TestScan:
    def test_skeleton_scan(self):
        rep = generic_vanishing_scan(torus_skeleton(3, 2, (1, 1, 1)), 2, 10, seed=1)
        generic = [r for r in rep["samples"] if not r["exceptional"]]
        assert len(generic) == 10
        assert all(r["dims"] == [0, 0, 1] for r in generic)
        assert rep["all_consistent"] and rep["generic_samples_vanish"]

    def test_circle_flags_one(self):
        rep = generic_vanishing_scan(circle(1), 1, 5, seed=0)
        assert rep["exceptional_roots"] == ["1/1"]
        forced = [r for r in rep["samples"] if r["exceptional"]]
        assert forced[0]["dims"] == [1, 1]
        assert forced[0]["vanishing_pattern"] is False

    def test_fox_torus(self):
        c = fox_complex(CWPresentation(["a", "b"], ["a b a^-1 b^-1"], (1, 0)))
        rep = generic_vanishing_scan(c, 2, 8, seed=3, include_roots=False)
        assert all(r["dims"] == [0, 0, 0] for r in rep["samples"])
        assert rep["expected_middle_dim"] == 0

    def test_deterministic(self):
        c = torus_skeleton(4, 2, (1, -2, 3, 1))
        assert generic_vanishing_scan(c, 2, 20, seed=9) == generic_vanishing_scan(c, 2, 20, seed=9)

    def test_bad_arguments(self):
        with pytest.raises(ValueError):
            generic_vanishing_scan(circle(1), 1, 0, seed=0)
        with pytest.raises(ValueError):
            generic_vanishing_scan(circle(1), 3, 5, seed=0)
