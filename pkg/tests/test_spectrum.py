import cmath
import json
import math
import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from f1an import spectrum as sp
from f1an.errors import CounterexampleFound, InvalidElement, InvalidRadii
from f1an.numeric import NormValue

from .conftest import GOLDEN

HALF = Fraction(1, 2)


def test_eval_examples():
    assert sp.eval_point(sp.Prime(2, 1), 12) == Fraction(1, 4)
    v = sp.eval_point(sp.Arch(HALF), 12)
    assert v == NormValue.of(12) ** HALF and abs(float(v) - 3.464102) < 1e-6
    assert sp.eval_point(sp.Trivial(), 12) == 1
    assert sp.eval_point(sp.Prime(3, "inf"), 6) == 0
    assert sp.eval_point(sp.Prime(3, "inf"), 5) == 1


def test_validate_examples():
    rep = sp.validate_point(sp.Prime(3, 2), [2, 3, 6, 9])
    assert rep.pairs > 0
    sp.validate_point(sp.Trivial(), range(-20, 21))
    with pytest.raises(CounterexampleFound) as exc:
        sp.validate_point({2: HALF, 3: HALF, 6: 1, 4: Fraction(1, 4), 9: Fraction(1, 4)}, [2, 3])
    assert exc.value.witness["point"] == "table"


def test_arch_boundedness_fails_above_one():
    with pytest.raises(InvalidRadii):
        sp.Arch(2)
    with pytest.raises(CounterexampleFound):
        sp.validate_point(lambda n: NormValue.of(abs(n)) ** 2 if n else NormValue.zero(), [2, 3])


def test_parse_point_and_overlay():
    assert sp.parse_point("prime:5:inf") == sp.Prime(5, "inf")
    assert sp.parse_point("arch:1/2") == sp.Arch(HALF)
    with pytest.raises(InvalidElement):
        sp.parse_point("prime:4:1")
    o = sp.parse_overlay("padic:3:1/2:2")
    assert o.contains(sp.Prime(3, 1)) and not o.contains(sp.Prime(3, 2)) and not o.contains(sp.Prime(2, 1))


def test_zp_lower_endpoint_collapses():
    o = sp.parse_overlay("zp:3:1/2:2")
    assert o.contains(sp.Prime(3, Fraction(1, 10)))
    assert o.contains(sp.Trivial())
    assert not sp.parse_overlay("padic:3:1/2:2").contains(sp.Trivial())


def test_tree_structure():
    doc = json.loads(sp.export_tree(5, 5))
    labels = [b["label"] for b in doc["branches"]]
    assert labels == ["2", "3", "5", "inf"]
    doc = json.loads(sp.export_tree(5, 5, ["padic:3:1/2:2"]))
    three = next(b for b in doc["branches"] if b["label"] == "3")
    assert three["overlays"] and three["overlays"][0]["spec"] == "padic:3:1/2:2"


def test_export_is_deterministic_and_golden():
    a = sp.export_tree(5, 5, ["padic:3:1/2:2"])
    assert a == sp.export_tree(5, 5, ["padic:3:1/2:2"])
    assert a == (GOLDEN / "tree_p5_s5_overlay.json").read_text()
    assert sp.export_tree(7, 9, [], "svg") == (GOLDEN / "tree_p7_s9.svg").read_text()


def test_complex_eval_examples():
    assert abs(sp.complex_eval({1: 1}, -math.log(2)) - 0.5) < 1e-12
    assert sp.l1_at({1: 1}, 0.5) == 0.5
    assert sp.complex_eval({0: 1}, complex(-1, 3)) == 1
    v = sp.complex_eval({HALF: 1, 1: 1}, -2 * math.log(2))
    assert abs(v - 0.75) < 1e-12 and abs(sp.l1_at({HALF: 1, 1: 1}, 0.25) - 0.75) < 1e-12
    with pytest.raises(InvalidRadii):
        sp.complex_eval({1: 1}, 0.5)


def test_complex_eval_bound_many_cases():
    rng = random.Random(17)
    for _ in range(1000):
        f = {Fraction(rng.randint(-4, 12), rng.choice([1, 2, 3])): complex(rng.uniform(-3, 3), rng.uniform(-3, 3)) for _ in range(rng.randint(1, 5))}
        z = complex(-rng.uniform(0.01, 4), rng.uniform(-10, 10))
        v = sp.complex_eval(f, z)
        # independent evaluation with cmath only
        direct = sum(a * cmath.exp(float(q) * z) for q, a in f.items())
        assert abs(v - direct) < 1e-9 * max(1.0, abs(direct))
        assert abs(v) <= sp.l1_at(f, math.exp(z.real)) + 1e-9


@given(st.sampled_from([2, 3, 5, 7]), st.integers(1, 40), st.integers(0, 10))
def test_branch_positions_are_monotone(p, a, b):
    e1, e2 = Fraction(a, 4), Fraction(a, 4) + b
    assert sp.Prime(p, e1).position() <= sp.Prime(p, e2).position() < sp.Prime(p, "inf").position()


@given(st.integers(-300, 300).filter(bool), st.sampled_from([2, 3, 5]))
def test_prime_branch_continuity_dichotomy(n, p):
    # as eps grows |n| tends to 1 when p does not divide n and to 0 when it does
    far = sp.eval_point(sp.Prime(p, 10**6), n)
    limit = sp.eval_point(sp.Prime(p, "inf"), n)
    if n % p:
        assert far == limit == 1
    else:
        assert float(far) < 1e-300 or far.log2 < -1e5
        assert limit == 0


@given(st.integers(-200, 200), st.integers(-200, 200), st.fractions(min_value=Fraction(1, 10), max_value=1))
def test_arch_points_multiplicative(a, b, e):
    pt = sp.Arch(e)
    assert sp.eval_point(pt, a * b) == sp.eval_point(pt, a) * sp.eval_point(pt, b)
