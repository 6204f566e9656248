import math
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from f1an.errors import DivisionByZero, InvalidNorm
from f1an.numeric import NormValue, factor_int, nv_max, nv_min, nv_sum

pos_fracs = st.fractions(min_value=Fraction(1, 1000), max_value=1000)


def test_exact_irrational_equality():
    # 2^(1/2) * 2^(1/2) == 2 must hold exactly, not within tolerance
    a = NormValue.of(2) ** Fraction(1, 2)
    assert a * a == 2
    assert a.as_fraction() is None
    assert (a * a).as_fraction() == 2


def test_exact_distinguishes_close_values():
    # 3^(1/2) vs 1.7320508075688772 differ only beyond float precision of the tolerance path
    a = NormValue.of(3) ** Fraction(1, 2)
    b = NormValue.of(Fraction(17320508075688772, 10**16))
    assert a != b


def test_zero_and_errors():
    z = NormValue.zero()
    assert z < NormValue.of(Fraction(1, 10**30))
    assert (z**2).is_zero
    with pytest.raises(DivisionByZero):
        NormValue.one() / z
    with pytest.raises(InvalidNorm):
        NormValue.of(-1)
    with pytest.raises(InvalidNorm):
        NormValue.of(float("nan"))


def test_factor_int_oracle():
    for n in range(1, 500):
        prod = 1
        for b, e in factor_int(n):
            prod *= b**e
        assert prod == n


def test_log_base():
    assert NormValue.of(Fraction(1, 4)).log_base(NormValue.of(Fraction(1, 2))) == 2
    assert NormValue.of(Fraction(1, 2)).log_base(NormValue.of(Fraction(1, 2))) == 1


def test_sum_max_min():
    vals = [NormValue.of(Fraction(1, k)) for k in range(1, 6)]
    assert nv_sum(vals).as_fraction() == sum(Fraction(1, k) for k in range(1, 6))
    assert nv_max(vals) == 1
    assert nv_min(vals) == Fraction(1, 5)
    r = NormValue.of(2) ** Fraction(1, 3)
    assert nv_sum([r]).is_exact


@given(pos_fracs, pos_fracs)
def test_multiplication_matches_fraction(a, b):
    assert (NormValue.of(a) * NormValue.of(b)).as_fraction() == a * b


@given(pos_fracs, pos_fracs)
def test_order_matches_fraction(a, b):
    assert (NormValue.of(a) <= NormValue.of(b)) == (a <= b)


@given(pos_fracs, st.fractions(min_value=-4, max_value=4, max_denominator=6))
def test_power_log(a, e):
    v = NormValue.of(a) ** e
    assert math.isclose(v.log2, float(e) * math.log2(a), abs_tol=1e-9)


@given(st.lists(pos_fracs, min_size=1, max_size=6))
def test_float_sum_matches_fsum(xs):
    # irrational terms force the float path
    vals = [NormValue.of(x) ** Fraction(1, 2) for x in xs]
    expected = math.fsum(math.sqrt(x) for x in xs)
    assert math.isclose(float(nv_sum(vals)), expected, rel_tol=1e-9)
