import random
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from f1an import witt as wt
from f1an.errors import InvalidRadii, TooLarge, Unsupported
from f1an.perfectoid import Lattice, PuiseuxPoly, t

HALF = Fraction(1, 2)


# independent oracle: solve the ghost identities with sympy


def sympy_witt_polys(p, n, op):
    X = sympy.symbols(f"X0:{n}")
    Y = sympy.symbols(f"Y0:{n}")

    def w(V, k):
        return sum(p**i * V[i] ** (p ** (k - i)) for i in range(k + 1))

    out = []
    for k in range(n):
        rhs = w(X, k) + w(Y, k) if op == "add" else w(X, k) * w(Y, k)
        lower = sum(p**i * out[i] ** (p ** (k - i)) for i in range(k))
        out.append(sympy.expand((rhs - lower) / sympy.Integer(p) ** k))
    return X, Y, out


def table_as_sympy(table, op, k, X, Y):
    expr = 0
    for c, vs in table.terms(op, k):
        m = sympy.Integer(c)
        for slot, e in vs:
            m *= (X if slot % 2 == 0 else Y)[slot // 2] ** e
        expr += m
    return sympy.expand(expr)


@pytest.mark.parametrize("p,n", [(2, 3), (3, 3), (5, 2), (7, 2)])
def test_tables_match_sympy_ghost_solve(p, n):
    X, Y, add = sympy_witt_polys(p, n, "add")
    _, _, mul = sympy_witt_polys(p, n, "mul")
    table = wt.gen_witt_polys(p, n)
    for k in range(n):
        assert sympy.expand(table_as_sympy(table, "add", k, X, Y) - add[k]) == 0
        assert sympy.expand(table_as_sympy(table, "mul", k, X, Y) - mul[k]) == 0
        assert all(c.is_integer for c in sympy.Poly(add[k], *X, *Y).coeffs())


def test_polynomial_formats():
    table = wt.gen_witt_polys(2, 2)
    assert table.format("add", 0) == "X0 + Y0"
    assert table.format("add", 1) == "X1 + Y1 - X0*Y0"
    assert table.format("mul", 0) == "X0*Y0"
    assert table.format("mul", 1) == "X0^2*Y1 + X1*Y0^2 + 2*X1*Y1"
    for p in (3, 5, 7):
        assert wt.gen_witt_polys(p, 1).format("add", 0) == "X0 + Y0"


def test_table_limits():
    with pytest.raises(TooLarge):
        wt.gen_witt_polys(2, wt.MAX_DEPTH + 1)
    with pytest.raises(TooLarge):
        wt.gen_witt_polys(5, 5, budget=10_000)


def test_fp_examples():
    x = wt.WittVector(2, [1, 0], "Fp")
    assert wt.witt_add(x, x).digits == (0, 1)
    z = wt.WittVector(2, [0, 0], "Fp")
    assert wt.witt_add(x, z) == x


def test_puiseux_examples():
    lat = Lattice("p-power", 8)
    a = t(2, HALF, lat)
    ta = wt.teichmuller(a, 2, 2)
    s = wt.witt_add(ta, ta)
    assert s.digits[0].is_zero() and s.digits[1] == t(2, 1, lat)
    prod = wt.witt_mul(ta, ta)
    assert prod == wt.teichmuller(t(2, 1, lat), 2, 2)


def test_teichmuller_examples():
    assert wt.teichmuller(1, 3, 3).digits == (1, 0, 0)
    assert wt.teichmuller(0, 3, 3).is_zero()


def test_alpha_norm_examples():
    x = wt.WittVector(2, [0, 1, 0], "Fp")
    assert wt.witt_alpha_norm(x, HALF) == HALF
    assert wt.witt_alpha_norm(wt.WittVector(2, [0, 0, 0], "Fp"), HALF) == 0
    lat = Lattice("p-power", 8)
    y = wt.WittVector(2, [PuiseuxPoly.constant(2, 1, lat), t(2, 1, lat), PuiseuxPoly.zero(2, lat)], "puiseux")
    assert wt.witt_alpha_norm(y, Fraction(1, 3), HALF) == 1
    assert wt.is_alpha_bounded(y, Fraction(1, 3), 1)
    with pytest.raises(InvalidRadii):
        wt.witt_alpha_norm(x, 0)


def test_from_integer_roundtrip_and_valuation():
    for p in (2, 3, 5):
        for m in range(0, 200):
            x = wt.witt_from_integer(m, p, 4)
            assert wt.witt_to_integer(x) == m % p**4
            if m % p**4:
                assert wt.witt_alpha_norm(x, Fraction(1, p)) == Fraction(1, p) ** wt.valuation(m, p)


def test_routes_agree_on_fp_digits():
    rng = random.Random(5)
    for p in (2, 3, 5):
        for n in (1, 2, 3):
            for _ in range(30):
                x = wt.WittVector(p, [rng.randrange(p) for _ in range(n)], "Fp")
                y = wt.WittVector(p, [rng.randrange(p) for _ in range(n)], "Fp")
                assert wt.witt_add(x, y, "table") == wt.witt_add(x, y, "series")
                assert wt.witt_mul(x, y, "table") == wt.witt_mul(x, y, "series")
                # F_p digits also match arithmetic in Z / p**n
                a, b = wt.witt_to_integer(x), wt.witt_to_integer(y)
                assert wt.witt_to_integer(wt.witt_add(x, y)) == (a + b) % p**n
                assert wt.witt_to_integer(wt.witt_mul(x, y)) == (a * b) % p**n


def test_long_vectors_use_series_route():
    # p = 5, n = 5 is beyond the table budget; the series route must still obey the ghost map
    rng = random.Random(9)
    x = wt.WittVector(5, [rng.randint(-9, 9) for _ in range(5)], "Z")
    y = wt.WittVector(5, [rng.randint(-9, 9) for _ in range(5)], "Z")
    gx, gy = x.ghost(), y.ghost()
    assert wt.witt_mul(x, y).ghost() == [a * b for a, b in zip(gx, gy)]


def test_frobenius_on_digits():
    assert wt.frobenius(wt.WittVector(3, [1, 2], "Fp")) == wt.WittVector(3, [1, 2], "Fp")
    with pytest.raises(Unsupported):
        wt.frobenius(wt.WittVector(3, [1, 2], "Z"))


# Puiseux digits: ring axioms in W_3

exps = st.fractions(min_value=0, max_value=6).map(lambda q: Fraction(round(q * 4), 4))


@st.composite
def puiseux(draw, p=2):
    lat = Lattice("p-power", 8)
    terms = {draw(exps): 1 for _ in range(draw(st.integers(0, 2)))}
    return PuiseuxPoly(p, terms, lat)


@st.composite
def witt3(draw):
    return wt.WittVector(2, [draw(puiseux()) for _ in range(3)], "puiseux")


@settings(max_examples=25, deadline=None)
@given(witt3(), witt3(), witt3())
def test_puiseux_witt_ring_axioms(x, y, z):
    assert wt.witt_add(x, y) == wt.witt_add(y, x)
    assert wt.witt_mul(x, y) == wt.witt_mul(y, x)
    assert wt.witt_add(wt.witt_add(x, y), z) == wt.witt_add(x, wt.witt_add(y, z))
    assert wt.witt_mul(x, wt.witt_add(y, z)) == wt.witt_add(wt.witt_mul(x, y), wt.witt_mul(x, z))
    assert wt.witt_add(x, wt.witt_neg(x)).is_zero()


@settings(max_examples=40, deadline=None)
@given(witt3(), witt3())
def test_digit_zero_is_a_ring_map(x, y):
    assert wt.witt_add(x, y).digits[0] == x.digits[0] + y.digits[0]
    assert wt.witt_mul(x, y).digits[0] == x.digits[0] * y.digits[0]


digits_z = st.lists(st.integers(-30, 30), min_size=1, max_size=4)


@settings(max_examples=60, deadline=None)
@given(digits_z, digits_z, st.sampled_from([2, 3, 5]))
def test_ghost_is_a_ring_map(dx, dy, p):
    n = min(len(dx), len(dy))
    x, y = wt.WittVector(p, dx[:n], "Z"), wt.WittVector(p, dy[:n], "Z")
    gx, gy = x.ghost(), y.ghost()
    assert wt.witt_add(x, y).ghost() == [a + b for a, b in zip(gx, gy)]
    assert wt.witt_mul(x, y).ghost() == [a * b for a, b in zip(gx, gy)]
    assert wt.witt_neg(x).ghost() == [-a for a in gx]


@given(st.integers(0, 10**6), st.integers(0, 10**6), st.sampled_from([2, 3, 7]))
def test_from_integer_is_additive(a, b, p):
    n = 5 if p < 7 else 3
    s = wt.witt_add(wt.witt_from_integer(a, p, n), wt.witt_from_integer(b, p, n))
    assert s == wt.witt_from_integer(a + b, p, n)


@given(st.integers(1, 10**6), st.integers(1, 10**6), st.sampled_from([2, 3]))
def test_alpha_norm_ultrametric(a, b, p):
    n = 6
    na = wt.witt_alpha_norm(wt.witt_from_integer(a, p, n), Fraction(1, p))
    nb = wt.witt_alpha_norm(wt.witt_from_integer(b, p, n), Fraction(1, p))
    s = wt.witt_from_integer(a + b, p, n)
    if not s.is_zero():
        assert wt.witt_alpha_norm(s, Fraction(1, p)) <= max(na, nb)


# FF elements


def test_ff_gauss_examples():
    lat = Lattice("p-power", 8)
    x = wt.FFElement(2, {-1: t(2, 2, lat), 0: PuiseuxPoly.constant(2, 1, lat)})
    assert wt.ff_gauss_norm(x, 1, HALF) == 1
    one = wt.FFElement(2, {0: 1})
    for rho in (HALF, 1, 3):
        assert wt.ff_gauss_norm(one, rho) == 1
        assert wt.ff_gauss_norm(wt.FFElement(2, {0: t(2, 1, lat)}), rho, HALF) == HALF


def test_ff_two_sided_examples():
    assert wt.ff_two_sided_norm(wt.FFElement(2, {1: 1}), 2) == Fraction(2) ** Fraction(-1, 2)
    assert wt.ff_two_sided_norm(wt.FFElement(2, {}), 2) == 0
    assert wt.ff_two_sided_norm(wt.FFElement(2, {-1: 1}), 2) == 4
    with pytest.raises(InvalidRadii):
        wt.ff_two_sided_norm(wt.FFElement(2, {0: 1}), HALF)


def test_ff_frobenius_examples():
    lat = Lattice("p-power", 8)
    x = wt.FFElement(2, {0: t(2, HALF, lat)})
    assert wt.frobenius(x, 1) == wt.FFElement(2, {0: t(2, 1, lat)})
    assert wt.frobenius(x, 0) == x
    y = wt.FFElement(2, {0: t(2, 1, lat)})
    assert wt.ff_gauss_norm(wt.frobenius(y), 2) == Fraction(1, 4) == wt.ff_gauss_norm(y, 1) ** 2


def test_ff_carry():
    # [1] + [1] = 2 = [1] p^1 when p = 2
    one = wt.FFElement(2, {0: 1})
    two = wt.ff_add(one, one)
    assert two.terms == wt.FFElement(2, {1: 1}).terms
    # the carry is computed inside a window and the rest is marked unknown
    assert two.prec == wt.default_window(2)
    assert wt.ff_add(one, wt.ff_neg(one)).is_zero()


@st.composite
def ff_elements(draw, p=2):
    idx = draw(st.lists(st.integers(-3, 3), min_size=1, max_size=3, unique=True))
    terms = {n: draw(puiseux(p)) for n in idx}
    return wt.FFElement(p, {n: a for n, a in terms.items() if not a.is_zero()})


@settings(max_examples=80, deadline=None)
@given(ff_elements(), st.sampled_from([HALF, Fraction(1), Fraction(2), Fraction(3, 2)]), st.integers(-2, 2))
def test_frobenius_norm_law_and_bijection(x, rho, m):
    assert wt.frobenius(wt.frobenius(x, m), -m) == x
    if not x.is_zero():
        scale = Fraction(2) ** m
        assert wt.ff_gauss_norm(wt.frobenius(x, m), rho * scale) == wt.ff_gauss_norm(x, rho) ** scale


# key transform and case bounds


def test_key_exponent_examples():
    assert wt.key_exponent_transform(1, HALF, Fraction(1, 4)) == HALF
    assert wt.key_exponent_transform(Fraction(3, 2), HALF, HALF) == Fraction(3, 2)
    from f1an.numeric import NormValue

    assert wt.key_exponent_transform(2, HALF, NormValue.of(2) ** Fraction(-1, 2)) == 4
    # a float radius goes through the float logarithm
    assert abs(wt.key_exponent_transform(2, HALF, 2**-0.5) - 4) < 1e-12


def test_key_report_basic_cases():
    from f1an.scalars import Padic

    Q2 = Padic(2, 30)
    rep = wt.key_inequality_check({Fraction(1): Q2.make(1)}, 1, HALF, Fraction(1, 4), Fraction(3, 4))
    assert rep.norms["r2"] == Fraction(3, 4) and rep.norms["r1"] == Fraction(1, 4)
    assert rep.norms["R_s1"] == HALF == rep.norms["R_s2"]
    empty = wt.key_inequality_check({}, 1, HALF, Fraction(1, 4), Fraction(3, 4))
    assert all(v.is_zero for v in empty.norms.values())


def test_stated_case_bound_counterexample():
    # |a_1| = 2^-10 with s1 = 1/2 breaks the first displayed bound
    from f1an.scalars import Padic

    a = {Fraction(1): Padic(2, 40).make(2**10)}
    rep = wt.key_inequality_check(a, 1, HALF, Fraction(1, 4), Fraction(3, 4))
    first = rep.stated[0]
    assert first.applicable and first.holds is False
    assert first.lhs == Fraction(1, 64) and first.rhs == Fraction(3, 4096)
    assert rep.corrected_ok


@settings(max_examples=150, deadline=None)
@given(st.data())
def test_corrected_bounds_and_identity(data):
    from f1an.suites import _KEY_GRID, random_key_sequence

    rng = random.Random(data.draw(st.integers(0, 10**9)))
    s, R, r1, r2 = data.draw(st.sampled_from(_KEY_GRID))
    a = random_key_sequence(rng, data.draw(st.sampled_from([2, 3])), data.draw(st.sampled_from([1, -1])), data.draw(st.booleans()))
    rep = wt.key_inequality_check(a, s, R, r1, r2)
    assert rep.corrected_ok
    assert rep.identity_ok


def test_sandwich_small_case():
    res = wt.sandwich_check({(Fraction(0), 0): 1, (Fraction(1), 1): 1}, 2, HALF, Fraction(1, 4), 2)
    assert res.ok
    assert res.sup_r == 1
    assert wt.sandwich_check({}, 2, HALF, Fraction(1, 4), 2).ok


@settings(max_examples=80, deadline=None)
@given(ff_elements(), ff_elements(), st.sampled_from([HALF, Fraction(1), Fraction(2)]))
def test_ff_gauss_norm_submultiplicative(x, y, rho):
    assert wt.ff_gauss_norm(wt.ff_mul(x, y), rho) <= wt.ff_gauss_norm(x, rho) * wt.ff_gauss_norm(y, rho)


@settings(max_examples=80, deadline=None)
@given(ff_elements(), ff_elements(), st.sampled_from([HALF, Fraction(1), Fraction(2)]))
def test_ff_gauss_norm_ultrametric(x, y, rho):
    s = wt.ff_add(x, y)
    assert wt.ff_gauss_norm(s, rho) <= max(wt.ff_gauss_norm(x, rho), wt.ff_gauss_norm(y, rho))
