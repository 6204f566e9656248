"""Named randomized verification suites used by ``f1an verify``.

Each suite takes a ``random.Random`` and returns a summary dict; a failed
check raises ``CounterexampleFound`` carrying the failing input.
"""

from __future__ import annotations

import random
from fractions import Fraction
from typing import Callable

from . import basechange as bc
from . import monoids as mo
from . import normcore as nc
from . import perfectoid as pf
from . import spectrum as sp
from . import witt as wt
from .errors import CounterexampleFound
from .numeric import NormValue
from .scalars import Padic, PrimeField

HALF = Fraction(1, 2)


def _fail(msg: str, **witness):
    raise CounterexampleFound(msg, {k: str(v) for k, v in witness.items()})


def _rand_set(rng: random.Random, k: int, values=(HALF, 1, 2)) -> nc.FiniteNormedSet:
    names = [f"x{i}" for i in range(k)]
    return nc.FiniteNormedSet(["*", *names], "*", {n: rng.choice(values) for n in names})


def suite_normcore(rng: random.Random) -> dict:
    cases = 0
    for _ in range(200):
        X = _rand_set(rng, rng.randint(0, 3))
        Y = _rand_set(rng, rng.randint(0, 3))
        Z = _rand_set(rng, rng.randint(0, 3))
        f = nc.PointedMap(X, Y, {x: rng.choice(Y.elements) for x in X.nonbase()})
        g = nc.PointedMap(Y, Z, {y: rng.choice(Z.elements) for y in Y.nonbase()})
        cf, cg, cgf = nc.bound_constant(f), nc.bound_constant(g), nc.bound_constant(g.compose(f))
        if not cgf <= cf * cg:
            _fail("bound constants are not submultiplicative", f=f, g=g)
        cases += 1
    for _ in range(3):
        X, Y, Z = (_rand_set(rng, rng.randint(1, 2)) for _ in range(3))
        cases += nc.currying_check(X, Y, Z)
    return {"cases": cases}


def suite_monoids(rng: random.Random) -> dict:
    cases = 0
    for _ in range(300):
        r = rng.choice([Fraction(1, 4), HALF, Fraction(9, 10)])
        p = rng.choice([2, 3])
        M = mo.GeometricMonoid("Q", r)
        f = mo.scale_by_p(M, p)
        q = Fraction(rng.randint(-40, 40), rng.randint(1, 12))
        if M.contains(q) and q != 0:
            if f.target.norm_of(f(q)) != M.norm_of(q):
                _fail("scaling is not isometric", q=q, r=r, p=p)
            if f.inverse.target.norm_of(f.inverse(q)) != f.target.norm_of(q):
                _fail("inverse scaling is not isometric", q=q, r=r, p=p)
        cases += 1
    for rp, r in [(Fraction(1, 4), HALF), (Fraction(1, 3), Fraction(2, 3))]:
        via = mo.cokernel_by_coequalizer(rp, r, 6)
        for n in range(0, 40):
            v = mo.quotient_cokernel_norm(rp, r, n)
            if n <= 6 and via[n] != v:
                _fail("cokernel routes disagree", n=n)
            cases += 1
    mo.frobenius_family_bound(mo.NormFamily.pairs([HALF, Fraction(3, 4)]), 2)
    return {"cases": cases}


def _rand_f1(rng, M, ring, k=3):
    return bc.F1Element(M, {Fraction(rng.randint(0, 6), rng.choice([1, 2])): rng.randint(-5, 5) for _ in range(k)}, ring)


def suite_basechange(rng: random.Random) -> dict:
    cases = 0
    M = mo.GeometricMonoid("Q+", HALF)
    for ring in (PrimeField(2), Padic(2, 24)):
        for _ in range(60):
            f, g, h = (_rand_f1(rng, M, ring) for _ in range(3))
            if bc.convolve(bc.convolve(f, g), h) != bc.convolve(f, bc.convolve(g, h)):
                _fail("convolution is not associative", f=f, g=g, h=h)
            if bc.convolve(f, g) != bc.convolve(g, f):
                _fail("convolution is not commutative", f=f, g=g)
            if not bc.bc_norm(bc.convolve(f, g)) <= bc.bc_norm(f) * bc.bc_norm(g):
                _fail("L1 norm is not submultiplicative", f=f, g=g)
            cases += 1
    X = _rand_set(rng, 3, (Fraction(1, 3), HALF, 2, 3))
    Y = _rand_set(rng, 3, (Fraction(1, 3), HALF, 2, 3))
    ring = Padic(2, 24)
    probes = []
    for _ in range(50):
        u = {x: rng.randint(1, 40) for x in rng.sample(X.nonbase(), 2)}
        v = {y: rng.randint(1, 40) for y in rng.sample(Y.nonbase(), 2)}
        probes.append((u, v))
    cases += bc.tensor_compat_check(X, Y, ring, probes).checked
    return {"cases": cases}


def suite_witt_ghost(rng: random.Random) -> dict:
    cases = 0
    for p in (2, 3, 5):
        for n in range(1, 5):
            for _ in range(8):
                x = wt.WittVector(p, [rng.randint(-20, 20) for _ in range(n)], "Z")
                y = wt.WittVector(p, [rng.randint(-20, 20) for _ in range(n)], "Z")
                s, m = wt.witt_add(x, y), wt.witt_mul(x, y)
                gx, gy = x.ghost(), y.ghost()
                if s.ghost() != [a + b for a, b in zip(gx, gy)]:
                    _fail("ghost map is not additive", p=p, x=x.digits, y=y.digits)
                if m.ghost() != [a * b for a, b in zip(gx, gy)]:
                    _fail("ghost map is not multiplicative", p=p, x=x.digits, y=y.digits)
                if wt.witt_add(x, y, "series") != s or wt.witt_mul(x, y, "series") != m:
                    _fail("table and series routes disagree", p=p, x=x.digits, y=y.digits)
                cases += 1
    return {"cases": cases}


def suite_witt_zp_isometry(rng: random.Random) -> dict:
    cases = 0
    for p in (2, 3):
        n = 1
        while p**n <= 1000:
            n += 1
        for m in range(1, 1001):
            x = wt.witt_from_integer(m, p, n)
            if wt.witt_alpha_norm(x, Fraction(1, p)) != NormValue.of(p) ** (-wt.valuation(m, p)):
                _fail("alpha norm differs from the p-adic norm", m=m, p=p)
            cases += 1
    return {"cases": cases}


def _rand_puiseux(rng, p=2, k=3, allow_zero=False):
    lat = pf.Lattice("p-power", 8)
    while True:
        f = pf.PuiseuxPoly(p, {Fraction(rng.randint(0, 16), rng.choice([1, 2, 4, 8])): rng.randint(1, p - 1) for _ in range(k)}, lat)
        if allow_zero or not f.is_zero():
            return f


def suite_ff_frobenius(rng: random.Random) -> dict:
    cases = 0
    for _ in range(200):
        x = wt.FFElement(2, {n: _rand_puiseux(rng) for n in rng.sample(range(-3, 4), 3)})
        rho = rng.choice([HALF, 1, 2])
        lhs = wt.ff_gauss_norm(wt.frobenius(x, 1), 2 * rho)
        rhs = wt.ff_gauss_norm(x, rho) ** 2
        if lhs != rhs:
            _fail("Frobenius norm law fails", x=x, rho=rho)
        cases += 1
    return {"cases": cases}


_KEY_GRID = [
    (1, HALF, Fraction(1, 4), Fraction(3, 4)),
    (2, HALF, Fraction(1, 3), Fraction(2, 3)),
    (HALF, Fraction(1, 3), Fraction(1, 4), HALF),
    (1, Fraction(2, 3), HALF, Fraction(3, 4)),
    (3, HALF, Fraction(1, 8), Fraction(7, 8)),
    (1, Fraction(9, 10), HALF, Fraction(19, 20)),
]


def random_key_sequence(rng: random.Random, p: int, side: int, unit: bool) -> dict:
    """A finite Q-indexed p-adic sequence supported on one sign, inside or outside the unit ball."""
    ring = Padic(p, 40)
    out = {}
    for _ in range(rng.randint(1, 4)):
        q = side * Fraction(rng.randint(1, 24), rng.choice([1, 2, 3, 4]))
        v = rng.randint(0, 6) if unit else -rng.randint(0, 6)
        out[q] = ring.make(Fraction(p) ** v * rng.choice([1, 2, 4, 5, 7]) if p != 2 else Fraction(p) ** v * rng.choice([1, 3, 5, 7]))
    return out


def suite_key_lemma(rng: random.Random) -> dict:
    """Checks the corrected case bounds and the power identity; counts how
    often the bounds with the unswapped exponents fail."""
    cases = stated_failures = 0
    for _ in range(120):
        s, R, r1, r2 = rng.choice(_KEY_GRID)
        a = random_key_sequence(rng, rng.choice([2, 3]), rng.choice([1, -1]), rng.random() < 0.5)
        rep = wt.key_inequality_check(a, s, R, r1, r2)
        if not rep.corrected_ok:
            _fail("corrected case bound fails", a=a, grid=(s, R, r1, r2))
        if not rep.identity_ok:
            _fail("power identity fails", a=a, grid=(s, R, r1, r2))
        stated_failures += not rep.stated_ok
        cases += 1
    return {"cases": cases, "unswapped_failures": stated_failures}


def suite_cofinality(rng: random.Random) -> dict:
    cases = 0
    for _ in range(300):
        rho = rng.choice([HALF, Fraction(2, 3), Fraction(9, 10)])
        rho_p = rho * Fraction(rng.randint(1, 9), 10)
        a = {n: Fraction(rng.randint(1, 9), rng.randint(1, 9)) for n in rng.sample(range(0, 30), rng.randint(1, 8))}
        bc.cofinality_check(a, rho, rho_p)
        cases += 1
    return {"cases": cases}


def suite_perfectoid(rng: random.Random) -> dict:
    cases = 0
    for _ in range(1000):
        f, g = _rand_puiseux(rng), _rand_puiseux(rng)
        if pf.pp_sup_norm(f * g, HALF) != pf.pp_sup_norm(f, HALF) * pf.pp_sup_norm(g, HALF):
            _fail("sup norm is not multiplicative", f=f, g=g)
        if pf.pp_root(f.frobenius(1)) != f:
            _fail("root does not invert Frobenius", f=f)
        cases += 1
    return {"cases": cases}


def suite_spectrum(rng: random.Random) -> dict:
    cases = 0
    for pt in sp.tree_points(5, 5):
        cases += sp.validate_point(pt, range(-20, 21)).pairs
    a = sp.export_tree(5, 5, ["padic:3:1/2:2"], "svg")
    b = sp.export_tree(5, 5, ["padic:3:1/2:2"], "svg")
    if a != b:
        _fail("export is not deterministic")
    return {"cases": cases}


SUITES: dict[str, Callable[[random.Random], dict]] = {
    "basechange": suite_basechange,
    "cofinality": suite_cofinality,
    "ff-frobenius": suite_ff_frobenius,
    "key-lemma": suite_key_lemma,
    "monoids": suite_monoids,
    "normcore": suite_normcore,
    "perfectoid": suite_perfectoid,
    "spectrum": suite_spectrum,
    "witt-ghost": suite_witt_ghost,
    "witt-zp-isometry": suite_witt_zp_isometry,
}


def run_suite(name: str, seed: int) -> dict:
    # each suite gets its own stream so results do not depend on which others ran
    rng = random.Random(f"{seed}:{name}")
    return SUITES[name](rng)
