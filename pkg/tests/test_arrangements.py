import itertools
import json
import math
import random
from fractions import Fraction

import pytest

from torustop.arrangements import (
    Arrangement,
    ArrangementError,
    bounded_regions,
    characteristic_polynomial,
    complement_euler,
    generic_lines,
    genericity_report,
    intersection_poset,
    is_essential,
    load_arrangement,
    poincare_polynomial,
    save_arrangement,
)


def lines(*forms):
    return Arrangement(2, tuple(forms))


def moebius_by_rank(A):
    poset = intersection_poset(A)
    out = {}
    for x in poset.flats:
        out.setdefault(x.rank, []).append(poset.moebius[x])
    return {r: sorted(v) for r, v in out.items()}


class TestPoset:
    def test_two_crossing_lines(self):
        A = lines((1, 0, 0), (0, 1, 0))
        assert moebius_by_rank(A) == {0: [1], 1: [-1, -1], 2: [1]}
        assert poincare_polynomial(A) == [1, 2, 1]
        assert complement_euler(A) == 0

    def test_three_concurrent_lines(self):
        A = lines((1, 0, 0), (0, 1, 0), (1, 1, 0))
        assert moebius_by_rank(A)[2] == [2]
        assert characteristic_polynomial(A) == [2, -3, 1]

    def test_three_generic_lines(self):
        A = generic_lines(3)
        assert moebius_by_rank(A) == {0: [1], 1: [-1, -1, -1], 2: [1, 1, 1]}
        assert complement_euler(A) == 1

    def test_parallel_lines_do_not_meet(self):
        A = lines((1, 0, 0), (1, 0, -1))
        assert moebius_by_rank(A) == {0: [1], 1: [-1, -1]}
        assert not is_essential(A)

    def test_boolean_in_three_space(self):
        A = Arrangement(3, ((1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0)))
        assert poincare_polynomial(A) == [1, 3, 3, 1]
        assert complement_euler(A) == 0


@pytest.mark.parametrize("k", range(1, 9))
def test_generic_lines_euler(k):
    assert complement_euler(generic_lines(k)) == 1 - k + math.comb(k, 2)
    assert genericity_report(generic_lines(k))["general_position"]


# -- bounded regions oracle ------------------------------------------------------


def _line_graph_bounded_faces(A):
    """Bounded faces of a line arrangement from V - E + F = 1 on the bounded graph.

    Every vertex is a crossing point; a line through m vertices contributes
    m - 1 bounded edges.  The bounded part is connected when essential, so
    the number of bounded faces is E - V + 1.
    """
    pts = set()
    on_line = [set() for _ in A.forms]
    for i, j in itertools.combinations(range(A.k), 2):
        (a1, b1, c1), (a2, b2, c2) = A.forms[i], A.forms[j]
        det = a1 * b2 - a2 * b1
        if det == 0:
            continue
        p = ((-c1 * b2 + c2 * b1) / det, (-a1 * c2 + a2 * c1) / det)
        pts.add(p)
        on_line[i].add(p)
        on_line[j].add(p)
    V = len(pts)
    E = sum(max(len(s) - 1, 0) for s in on_line)
    return E - V + 1 if V else 0


def random_lines(rng, k):
    """Random essential line arrangement with small integer forms (parallels and triple points allowed)."""
    while True:
        forms = set()
        while len(forms) < k:
            a, b, c = rng.randint(-3, 3), rng.randint(-3, 3), rng.randint(-3, 3)
            if (a, b) == (0, 0):
                continue
            g = math.gcd(math.gcd(a, b), c)
            a, b, c = a // g, b // g, c // g
            forms.add(max((a, b, c), (-a, -b, -c)))
        A = lines(*sorted(forms))
        if is_essential(A):
            return A


@pytest.mark.parametrize("k", range(2, 9))
def test_bounded_regions_against_euler_formula(k):
    rng = random.Random(k)
    for _ in range(15):
        A = random_lines(rng, k)
        assert bounded_regions(A) == _line_graph_bounded_faces(A)


@pytest.mark.parametrize("k", range(2, 9))
def test_generic_lines_bounded_regions(k):
    assert bounded_regions(generic_lines(k)) == math.comb(k - 1, 2)


def test_central_has_no_bounded_regions():
    assert bounded_regions(lines((1, 0, 0), (0, 1, 0), (1, 1, 0))) == 0


def test_bounded_regions_in_three_space():
    # four generic planes bound one simplex
    A = Arrangement(3, ((1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0), (1, 1, 1, -1)))
    assert bounded_regions(A) == 1
    assert (-1) ** 3 * complement_euler(A) == 1


def test_not_essential_error():
    with pytest.raises(ArrangementError, match="not essential"):
        bounded_regions(lines((1, 0, 0), (1, 0, 1)))


class TestInput:
    def test_repeated_hyperplane(self):
        with pytest.raises(ArrangementError, match="repeated"):
            lines((1, 1, 1), (2, 2, 2))

    def test_zero_linear_part(self):
        with pytest.raises(ArrangementError):
            lines((0, 0, 1))

    def test_float_coefficient_rejected(self):
        with pytest.raises(ArrangementError, match="inexact"):
            Arrangement.from_json({"dim": 2, "forms": [[1, 0.5, 0]]})

    def test_rational_strings_accepted(self):
        A = Arrangement.from_json({"dim": 2, "forms": [["1/2", 0, 0], [0, 1, "-3/4"]]})
        assert A.forms[0][0] == Fraction(1, 2)

    def test_missing_keys(self):
        with pytest.raises(ArrangementError):
            Arrangement.from_json({"forms": []})

    def test_round_trip(self, tmp_path):
        A = generic_lines(4, (1, -2, 3, 5))
        path = tmp_path / "a.json"
        save_arrangement(A, path)
        assert load_arrangement(path) == A
        assert json.loads(path.read_text())["weights"] == [1, -2, 3, 5]

    def test_genericity_report_flags_triple_point(self):
        rep = genericity_report(lines((1, 0, 0), (0, 1, 0), (1, 1, 0)))
        assert not rep["general_position"]
        assert any("share a point" in p["issue"] for p in rep["problems"])
