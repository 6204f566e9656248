"""Base change of normed sets and geometric monoids along a normed ring.

An ``F1Element`` is a finite combination ``sum r_x delta_x``.  Its norm is
``sum |r_x| |x|`` (L1 mode) or ``max |r_x| |x|`` (Sup mode).  Over a geometric
monoid the weight ``|q| = r**q`` includes ``q = 0`` with weight 1, so the
exponent 0 is the unit of the monoid algebra.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping

from .errors import CounterexampleFound, InvalidElement, InvalidRadii, TagMismatch
from .monoids import GeometricMonoid, NormFamily
from .normcore import FiniteNormedSet, PointedMap, smash_tensor
from .numeric import NormValue, nv_max, nv_sum
from .scalars import PLAIN, NormSpec, PlainNorm, PowerNorm, Scalar, scalar_norm

L1 = "L1"
SUP = "Sup"


class F1Element:
    """``sum r_x delta_x`` over a FiniteNormedSet or a GeometricMonoid."""

    __slots__ = ("base", "ring", "support")

    def __init__(self, base, support: Mapping, ring=None):
        if not isinstance(base, (FiniteNormedSet, GeometricMonoid)):
            raise InvalidElement("the base must be a FiniteNormedSet or a GeometricMonoid")
        clean = {}
        for x, c in support.items():
            if isinstance(base, GeometricMonoid):
                x = Fraction(x)
                if not base.contains(x):
                    raise InvalidElement(f"{x} is not in {base.describe()}")
            else:
                if x not in base:
                    raise InvalidElement(f"{x!r} is not an element of the base")
                if x == base.basepoint:
                    # the basepoint spans the zero module
                    continue
            if not isinstance(c, Scalar):
                if ring is None:
                    raise InvalidElement("coefficients need a ring")
                c = ring.make(c)
            if ring is None:
                ring = c.ring
            elif c.ring != ring:
                raise TagMismatch(f"coefficients in {c.ring} and {ring}")
            if x in clean:
                c = clean[x] + c
            if c.is_zero():
                clean.pop(x, None)
            else:
                clean[x] = c
        self.base = base
        self.ring = ring
        self.support = clean

    @classmethod
    def delta(cls, base, x, coeff, ring=None) -> "F1Element":
        return cls(base, {x: coeff}, ring)

    def weight(self, x) -> NormValue:
        if isinstance(self.base, GeometricMonoid):
            return self.base.weight(x)
        return self.base.norm(x)

    def is_zero(self) -> bool:
        return not self.support

    def __add__(self, other: "F1Element") -> "F1Element":
        _same_base(self, other)
        out = dict(self.support)
        for x, c in other.support.items():
            out[x] = out[x] + c if x in out else c
        return F1Element(self.base, out, self.ring or other.ring)

    def __mul__(self, other: "F1Element") -> "F1Element":
        return convolve(self, other)

    def __eq__(self, other):
        if not isinstance(other, F1Element):
            return NotImplemented
        if set(self.support) != set(other.support):
            return False
        return all(self.support[x] == other.support[x] for x in self.support)

    __hash__ = None

    def __repr__(self) -> str:
        body = ", ".join(f"{x}: {c}" for x, c in self.support.items())
        return f"F1Element({{{body}}})"


def _same_base(f: F1Element, g: F1Element):
    a, b = f.base, g.base
    if isinstance(a, GeometricMonoid) and isinstance(b, GeometricMonoid):
        if not a.same_as(b):
            raise TagMismatch("different base monoids")
    elif a is not b and not (isinstance(a, FiniteNormedSet) and isinstance(b, FiniteNormedSet) and a.same_as(b)):
        raise TagMismatch("different bases")
    if f.ring is not None and g.ring is not None and f.ring != g.ring:
        raise TagMismatch(f"rings {f.ring} and {g.ring}")


@dataclass(frozen=True)
class GaussNormSpec:
    """How to measure an F1Element: L1 or Sup, a scalar norm, an optional radius.

    ``radius`` replaces the radii of a GeometricMonoid base; give one value
    or a ``(negative side, positive side)`` pair.
    """

    mode: str = L1
    scalar: NormSpec = PLAIN
    radius: object = None

    def __post_init__(self):
        if self.mode not in (L1, SUP):
            raise InvalidElement("mode is 'L1' or 'Sup'")


def _weights(e: F1Element, spec: GaussNormSpec) -> dict:
    if spec.radius is None or not isinstance(e.base, GeometricMonoid):
        return {x: e.weight(x) for x in e.support}
    rad = spec.radius
    if isinstance(rad, tuple):
        neg, pos = NormValue.of(rad[0]), NormValue.of(rad[1])
    else:
        neg = pos = NormValue.of(rad)
    return {q: (pos if q >= 0 else neg) ** q for q in e.support}


def bc_norm(e: F1Element, spec: GaussNormSpec = GaussNormSpec()) -> NormValue:
    w = _weights(e, spec)
    terms = [scalar_norm(c, spec.scalar) * w[x] for x, c in e.support.items()]
    return nv_sum(terms) if spec.mode == L1 else nv_max(terms)


def convolve(f: F1Element, g: F1Element) -> F1Element:
    """Cauchy product over the monoid operation."""
    _same_base(f, g)
    M = f.base
    if not isinstance(M, GeometricMonoid):
        raise TagMismatch("convolution needs a monoid base")
    out: dict = {}
    for a, ca in f.support.items():
        for b, cb in g.support.items():
            k = a + b
            out[k] = out[k] + ca * cb if k in out else ca * cb
    return F1Element(M, out, f.ring or g.ring)


def unit(M: GeometricMonoid, ring) -> F1Element:
    return F1Element(M, {0: ring.one()}, ring)


# monoidal compatibility


@dataclass
class TensorReport:
    checked: int
    max_log_gap: float
    rows: list = field(default_factory=list)


def codiagonal(u: F1Element, v: F1Element, S: FiniteNormedSet | None = None) -> F1Element:
    """Image of ``u (x) v`` in the base change of the smash product: ``c_(x,y) = u_x v_y``."""
    X, Y = u.base, v.base
    if u.ring is not None and v.ring is not None and u.ring != v.ring:
        raise TagMismatch("different rings")
    S = S or smash_tensor(X, Y)
    out = {}
    for x, a in u.support.items():
        for y, b in v.support.items():
            out[(x, y)] = a * b
    return F1Element(S, out, u.ring or v.ring)


def tensor_compat_check(X: FiniteNormedSet, Y: FiniteNormedSet, ring, probes: Iterable, scalar: NormSpec = PLAIN) -> TensorReport:
    """Compare ``(X (x) Y) (x) R`` with ``(X (x) R) (x)_R (Y (x) R)`` on probes.

    Each probe is a pair ``(u, v)`` of coefficient maps on X and Y (or
    F1Elements).  The left side is the L1 norm of the codiagonal image, the
    right side is ``|u|_1 |v|_1``; the Sup norms are compared the same way.
    """
    S = smash_tensor(X, Y)
    rows = []
    worst = 0.0
    n = 0
    for u, v in probes:
        u = u if isinstance(u, F1Element) else F1Element(X, u, ring)
        v = v if isinstance(v, F1Element) else F1Element(Y, v, ring)
        w = codiagonal(u, v, S)
        for mode in (L1, SUP):
            spec = GaussNormSpec(mode, scalar)
            left = bc_norm(w, spec)
            right = bc_norm(u, spec) * bc_norm(v, spec)
            gap = 0.0 if left == right else abs(left.log2 - right.log2)
            if left != right:
                raise CounterexampleFound(
                    f"{mode} norms differ on a probe",
                    {"u": repr(u), "v": repr(v), "left": left.describe(), "right": right.describe()},
                )
            worst = max(worst, gap)
            rows.append((mode, left, right))
        n += 1
    return TensorReport(n, worst, rows)


# cofinality


@dataclass
class CofinalityResult:
    l1_at_rho_prime: NormValue
    sup_at_rho: NormValue
    bound: NormValue
    support_bound: NormValue
    geometric: bool

    @property
    def ok(self) -> bool:
        return self.l1_at_rho_prime <= self.bound


def _coeff_norms(a, scalar: NormSpec | None) -> dict:
    if isinstance(a, F1Element):
        return {Fraction(q): scalar_norm(c, scalar) for q, c in a.support.items()}
    return {Fraction(q): NormValue.of(v) for q, v in a.items() if not NormValue.of(v).is_zero}


def cofinality_constant(support: Iterable, rho, rho_prime) -> NormValue:
    """``sum over the support of (rho'/rho) ** q``."""
    rho, rho_prime = NormValue.of(rho), NormValue.of(rho_prime)
    if rho_prime.is_zero or not rho_prime < rho:
        raise InvalidRadii("need 0 < rho' < rho")
    ratio = rho_prime / rho
    return nv_sum(ratio ** Fraction(q) for q in set(support))


def cofinality_check(a, rho, rho_prime, scalar: NormSpec | None = None, raise_on_failure: bool = True) -> CofinalityResult:
    """``|a|_{L1, rho'} <= |a|_{Sup, rho} * C`` with the cofinality constant ``C``.

    For support in N the constant is ``(1 - rho'/rho) ** -1``; for other finite
    supports it is ``sum over the support of (rho'/rho) ** q``.
    """
    rho, rho_prime = NormValue.of(rho), NormValue.of(rho_prime)
    if rho_prime.is_zero or not rho_prime < rho:
        raise InvalidRadii("need 0 < rho' < rho")
    norms = _coeff_norms(a, scalar)
    ratio = rho_prime / rho
    l1 = nv_sum(v * rho_prime**q for q, v in norms.items())
    sup = nv_max(v * rho**q for q, v in norms.items())
    support_bound = sup * cofinality_constant(norms, rho, rho_prime)
    geometric = all(q >= 0 and q.denominator == 1 for q in norms)
    if geometric:
        rf = ratio.as_fraction()
        tail = NormValue.of(1 / (1 - rf)) if rf is not None else NormValue.from_log2(-math.log2(1 - float(ratio)))
        bound = sup * tail
    else:
        bound = support_bound
    res = CofinalityResult(l1, sup, bound, support_bound, geometric)
    if raise_on_failure and not res.ok:
        raise CounterexampleFound(
            "cofinality bound violated", {"l1": l1.describe(), "bound": bound.describe(), "support": sorted(map(str, norms))}
        )
    return res


def nuclearity_certificate(a, radii: Iterable, scalar: NormSpec | None = None) -> list[CofinalityResult]:
    """For increasing radii ``rho_0 < rho_1 < ...``, the Sup norm at ``rho_k``
    dominates the L1 norm at ``rho_{k-1}`` up to the cofinality constant."""
    radii = [NormValue.of(r) for r in radii]
    return [cofinality_check(a, radii[k], radii[k - 1], scalar) for k in range(1, len(radii))]


# families


@dataclass
class FamilyReport:
    members: int
    probes: int
    norms: list
    max_log_gap: float


def _float_member_norm(c: Scalar, spec) -> float:
    """log2 of a member norm computed in floating point, independently of NormValue."""
    base = c.ring.native_norm(c.value).log2
    if spec is None or isinstance(spec, PlainNorm):
        return base
    if isinstance(spec, PowerNorm):
        return float(spec.s) * base
    return max(float(spec.s1) * base, float(spec.s2) * base)


def family_base_change(M, family, probes: Iterable, mode: str = L1) -> FamilyReport:
    """Member norms of probes computed two ways.

    Route A applies the member norm inside the exact Gauss norm.  Route B
    first maps coefficients to floating log-norms, then forms the weighted
    sum with ``math.fsum``.  They must agree within ``TAU`` for every member.
    """
    specs = list(family.members if isinstance(family, NormFamily) else family)
    rows = []
    worst = 0.0
    count = 0
    for probe in probes:
        e = probe if isinstance(probe, F1Element) else F1Element(M, probe)
        count += 1
        per = []
        for spec in specs:
            a = bc_norm(e, GaussNormSpec(mode, spec))
            logs = [_float_member_norm(c, spec) + e.weight(x).log2 for x, c in e.support.items()]
            if not logs:
                b = NormValue.zero()
            elif mode == L1:
                top = max(logs)
                b = NormValue.from_log2(top + math.log2(math.fsum(2.0 ** (v - top) for v in logs)))
            else:
                b = NormValue.from_log2(max(logs))
            if a != b:
                raise CounterexampleFound(
                    "member norms differ between the two routes", {"probe": repr(e), "spec": repr(spec)}
                )
            if not a.is_zero:
                worst = max(worst, abs(a.log2 - b.log2))
            per.append(a)
        rows.append(per)
    return FamilyReport(len(specs), count, rows, worst)


# functoriality


def pushforward(e: F1Element, f: PointedMap) -> F1Element:
    """Image of an element along a pointed map of the bases."""
    if f.source is not e.base and not f.source.same_as(e.base):
        raise TagMismatch("the map does not start at the element's base")
    out: dict = {}
    for x, c in e.support.items():
        y = f(x)
        out[y] = out[y] + c if y in out else c
    return F1Element(f.target, out, e.ring)


def linear_extension_bound(X: FiniteNormedSet, values: Mapping, scalar: NormSpec | None = None) -> tuple[NormValue, NormValue]:
    """Bound of a pointed map ``X -> R`` and of its linear extension on deltas.

    The map sends ``x`` to ``values[x]``; the first number is
    ``max |values[x]| / |x|``, the second the operator bound of
    ``sum r_x delta_x -> sum r_x values[x]`` measured on deltas.
    """
    direct = []
    on_deltas = []
    for x in X.nonbase():
        c = values.get(x)
        if c is None or c.is_zero():
            continue
        nx = X.norm(x)
        if nx.is_zero:
            raise CounterexampleFound("unbounded: a norm-zero element has a nonzero image", {"x": repr(x)})
        direct.append(scalar_norm(c, scalar) / nx)
        d = F1Element(X, {x: c.ring.one()}, c.ring)
        image = c * c.ring.one()
        on_deltas.append(scalar_norm(image, scalar) / bc_norm(d, GaussNormSpec(L1, scalar)))
    return nv_max(direct), nv_max(on_deltas)
