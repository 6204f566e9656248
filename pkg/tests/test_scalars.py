from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from f1an.scalars import (
    ArchInt,
    Padic,
    PowerNorm,
    PrimeField,
    TwoSidedNorm,
    padic_from_integer,
    scalar_norm,
    teichmuller_lift,
)


def test_ring_op_examples():
    F2 = PrimeField(2)
    assert F2.make(1) + F2.make(1) == F2.make(0)
    Q2 = Padic(2, 8)
    x = Q2.make(3) * Q2.make(5)
    assert x.to_integer() == 15
    assert x.digits()[0][:4] == (1, 1, 1, 1)
    A = ArchInt()
    assert (A.make(-3) * A.make(4)).value == -12


def test_scalar_norm_examples():
    Q2 = Padic(2)
    assert scalar_norm(Q2.make(12)) == Fraction(1, 4)
    assert scalar_norm(Q2.make(12), TwoSidedNorm(Fraction(1, 2), 2)) == Fraction(1, 2)
    assert scalar_norm(ArchInt(Fraction(1, 2)).make(-9)) == 3
    assert scalar_norm(Q2.make(12), PowerNorm(2)) == Fraction(1, 16)


def test_padic_from_integer_examples():
    assert padic_from_integer(6, 2, 4).digits() == ((0, 1, 1, 0), 0)
    assert padic_from_integer(0, 2, 4).is_zero()
    assert padic_from_integer(-1, 2, 4).digits() == ((1, 1, 1, 1), 0)


def test_teichmuller_lift_is_root_of_unity():
    for p in (3, 5, 7):
        for a in range(1, p):
            t = teichmuller_lift(a, p, 12)
            assert t ** (p - 1) == 1
            assert t.to_integer() % p == a


def test_inverse_where_defined():
    Q3 = Padic(3, 10)
    x = Q3.make(Fraction(2, 9))
    assert x * x.inverse() == 1
    with pytest.raises(Exception):
        PrimeField(5).make(0).inverse()


def _v(m, p):
    k = 0
    while m % p == 0:
        m //= p
        k += 1
    return k


ints = st.integers(-10**6, 10**6).filter(bool)


@given(ints, ints, st.sampled_from([2, 3, 5, 7]))
def test_padic_norm_multiplicative_and_ultrametric(a, b, p):
    R = Padic(p, 40)
    x, y = R.make(a), R.make(b)
    assert scalar_norm(x * y) == scalar_norm(x) * scalar_norm(y)
    assert scalar_norm(x) == Fraction(1, p ** _v(a, p))
    if a + b:
        assert scalar_norm(x + y) <= max(scalar_norm(x), scalar_norm(y))


@given(ints, ints)
def test_archint_norm_multiplicative(a, b):
    A = ArchInt(Fraction(1, 2))
    assert scalar_norm(A.make(a) * A.make(b)) == scalar_norm(A.make(a)) * scalar_norm(A.make(b))


@given(ints, st.fractions(min_value=Fraction(1, 10), max_value=Fraction(9, 10)), st.fractions(min_value=Fraction(11, 10), max_value=10))
def test_two_sided_is_max_of_powers(a, s1, s2):
    x = Padic(2, 40).make(a)
    base = scalar_norm(x)
    assert scalar_norm(x, TwoSidedNorm(s1, s2)) == max(base**s1, base**s2)
