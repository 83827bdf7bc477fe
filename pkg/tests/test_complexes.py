import json
import math
import random

import pytest

from torustop.complexes import (
    ComplexError,
    CWPresentation,
    TwistedComplex,
    circle,
    direct_sum,
    elementary,
    euler_char,
    fox_complex,
    load,
    parse_word,
    point,
    random_model_complex,
    save,
    tensor,
    torus_skeleton,
)
from torustop.laurent import ONE, ZERO, LaurentPoly

T = LaurentPoly.t()


def fox_torus(xi=(1, 0)):
    return fox_complex(CWPresentation(["a", "b"], ["a b a^-1 b^-1"], xi))


def test_parse_word():
    assert parse_word("a b^2 a^-1") == (("a", 1), ("b", 2), ("a", -1))
    assert parse_word("a*b") == (("a", 1), ("b", 1))
    with pytest.raises(ComplexError):
        parse_word("a^x")
    with pytest.raises(ComplexError):
        parse_word("c", ["a", "b"])


class TestFox:
    def test_circle(self):
        c = fox_complex(CWPresentation(["a"], [], (1,)))
        assert c.ranks == (1, 1)
        assert c.boundary(1) == ((T - 1,),)

    def test_torus(self):
        c = fox_torus()
        assert c.ranks == (1, 2, 1)
        assert c.boundary(1) == ((T - 1, ZERO),)
        assert c.boundary(2) == ((ZERO,), (T - 1,))

    def test_wedge(self):
        c = fox_complex(CWPresentation(["a", "b"], [], (1, 1)))
        assert c.top_dim == 1
        assert c.boundary(1) == ((T - 1, T - 1),)

    def test_cocycle_violation_names_relator(self):
        with pytest.raises(ComplexError, match=r"relator 1 \(a\^2 b\)"):
            CWPresentation(["a", "b"], ["a b a^-1 b^-1", "a^2 b"], (1, 0))

    def test_unknown_generator(self):
        with pytest.raises(ComplexError):
            CWPresentation(["a"], ["a b"], (1,))

    def test_zero_cocycle(self):
        with pytest.raises(ComplexError):
            CWPresentation(["a"], [], (0,))


class TestTorusSkeleton:
    def test_circle_case(self):
        assert torus_skeleton(1, 1, [1]) == circle(1)

    def test_two_torus_up_to_sign(self):
        c = torus_skeleton(2, 2, (1, 1))
        assert c.boundary(1) == ((T - 1, T - 1),)
        d2 = c.boundary(2)
        # the columns differ from the hand-written example only by an overall sign
        assert d2 in (((T - 1,), (-(T - 1),)), ((-(T - 1),), (T - 1,)))

    def test_ranks_and_euler(self):
        c = torus_skeleton(3, 2, (1, 1, 1))
        assert c.ranks == (1, 3, 3)
        assert euler_char(c) == 1

    @pytest.mark.parametrize("k", range(2, 9))
    def test_euler_two_skeleton(self, k):
        assert euler_char(torus_skeleton(k, 2, [1] * k)) == (k - 1) * (k - 2) // 2

    def test_degenerate_weight(self):
        with pytest.raises(ComplexError, match="degenerate weight"):
            torus_skeleton(3, 2, (1, 0, 2))

    def test_bad_sizes(self):
        with pytest.raises(ComplexError):
            torus_skeleton(2, 3, (1, 1))
        with pytest.raises(ComplexError):
            torus_skeleton(3, 2, (1, 1))


class TestTensor:
    def test_point_is_identity(self):
        assert tensor(circle(1), point()) == circle(1)
        assert tensor(point(), circle(2)) == circle(2)

    def test_circles_give_fox_torus(self):
        assert tensor(circle(1), circle(0)) == fox_torus((1, 0))

    def test_euler_multiplies(self):
        rng = random.Random(3)
        for _ in range(20):
            a, b = random_model_complex(rng, 2), random_model_complex(rng, 2)
            assert euler_char(tensor(a, b)) == euler_char(a) * euler_char(b)

    def test_skeleton_of_product_torus(self):
        # the full k-torus is a product of circles; compare with the Koszul model
        prod = tensor(tensor(circle(1), circle(2)), circle(-1))
        kos = torus_skeleton(3, 3, (1, 2, -1))
        assert prod.ranks == kos.ranks == (1, 3, 3, 1)


def test_direct_sum_and_elementary():
    c = direct_sum(circle(1), elementary(2))
    assert c.ranks == (1, 2, 1)
    assert euler_char(c) == 0
    e = elementary(1)
    assert e.boundary(1) == ((ONE,),)
    with pytest.raises(ComplexError):
        elementary(0)


class TestValidation:
    def test_d_squared_witness(self):
        with pytest.raises(ComplexError, match=r"i=1, row=0, col=0"):
            TwistedComplex(ranks=(1, 1, 1), boundaries=(((T - 1,),), ((ONE,),)))

    def test_shape_mismatch(self):
        with pytest.raises(ComplexError):
            TwistedComplex(ranks=(1, 2), boundaries=(((T - 1,),),))

    def test_missing_boundary(self):
        with pytest.raises(ComplexError):
            TwistedComplex(ranks=(1, 1), boundaries=())


class TestJson:
    def test_round_trip(self, tmp_path):
        c = torus_skeleton(3, 2, (1, 1, 1))
        path = tmp_path / "c.json"
        save(c, path)
        back = load(path)
        assert back == c and back.label == c.label
        assert json.loads(path.read_text())["top_dim"] == 2

    def test_round_trip_with_empty_blocks(self, tmp_path):
        c = direct_sum(point(), elementary(3))
        path = tmp_path / "e.json"
        save(c, path)
        assert load(path) == c

    def test_d_squared_file(self, tmp_path):
        obj = {
            "top_dim": 2,
            "ranks": [1, 1, 1],
            "boundaries": [[[{"0": "-1", "1": "1"}]], [[{"0": "1"}]]],
            "label": "bad",
        }
        path = tmp_path / "bad.json"
        path.write_text(json.dumps(obj))
        with pytest.raises(ComplexError, match="row=0, col=0"):
            load(path)

    def test_non_integer_exponent(self, tmp_path):
        obj = {"top_dim": 1, "ranks": [1, 1], "boundaries": [[[{"0.5": "1"}]]], "label": ""}
        path = tmp_path / "bad.json"
        path.write_text(json.dumps(obj))
        with pytest.raises(ComplexError, match="exponent"):
            load(path)

    @pytest.mark.parametrize(
        "obj",
        [
            [],
            {"ranks": [1], "boundaries": []},
            {"top_dim": 3, "ranks": [1], "boundaries": []},
            {"top_dim": 0, "ranks": ["1"], "boundaries": []},
        ],
    )
    def test_schema_errors(self, obj):
        with pytest.raises(ComplexError):
            TwistedComplex.from_json(obj)

    def test_invalid_json(self, tmp_path):
        path = tmp_path / "x.json"
        path.write_text("{not json")
        with pytest.raises(ComplexError, match="invalid JSON"):
            load(path)


def test_random_models_are_valid_and_small():
    rng = random.Random(0)
    for _ in range(50):
        c = random_model_complex(rng)
        assert sum(c.ranks) <= 64
        assert euler_char(c) == sum((-1) ** i * r for i, r in enumerate(c.ranks))


def test_binomial_ranks():
    for k in range(1, 6):
        for n in range(1, k + 1):
            c = torus_skeleton(k, n, [1] * k)
            assert c.ranks == tuple(math.comb(k, i) for i in range(n + 1))
