"""Puiseux polynomials over F_p with exponents in a declared lattice.

A ``Lattice`` is either ``p-power`` (denominators ``p**j`` with ``j <= bound``)
or ``fixed`` (exponents in ``(1/bound) Z``).  Every operation that would leave
the lattice raises ``LatticeOverflow`` instead of truncating.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping

from .errors import InvalidElement, InvalidRadii, LatticeOverflow, TagMismatch, Unsupported
from .numeric import NormValue, nv_sum
from .scalars import _check_prime

DEFAULT_BOUND = 8


@dataclass(frozen=True)
class Lattice:
    kind: str = "p-power"
    bound: int = DEFAULT_BOUND

    def __post_init__(self):
        if self.kind not in ("p-power", "fixed"):
            raise InvalidElement(f"unknown lattice kind {self.kind!r}")
        if self.bound < (0 if self.kind == "p-power" else 1):
            raise InvalidElement("invalid lattice bound")

    def admits(self, q: Fraction, p: int) -> bool:
        d = q.denominator
        if self.kind == "fixed":
            return self.bound % d == 0
        j = 0
        while d % p == 0:
            d //= p
            j += 1
        return d == 1 and j <= self.bound

    def join(self, other: "Lattice", p: int) -> "Lattice":
        if self == other:
            return self
        if self.kind != other.kind:
            raise TagMismatch("lattices of different kinds")
        if self.kind == "p-power":
            return Lattice("p-power", max(self.bound, other.bound))
        a, b = self.bound, other.bound
        from math import gcd

        return Lattice("fixed", a * b // gcd(a, b))

    def to_json(self) -> dict:
        return {"kind": self.kind, "bound": self.bound}


class PuiseuxPoly:
    """A finite sum ``sum c_q t**q`` with ``c_q`` in F_p and rational ``q``."""

    __slots__ = ("p", "terms", "lattice")

    def __init__(self, p: int, terms: Mapping | Iterable = (), lattice: Lattice | None = None):
        _check_prime(p)
        lattice = lattice or Lattice()
        items = terms.items() if isinstance(terms, Mapping) else terms
        clean: dict[Fraction, int] = {}
        for q, c in items:
            q = Fraction(q)
            c = int(c) % p
            if not lattice.admits(q, p):
                raise LatticeOverflow(f"exponent {q} is outside the lattice {lattice.to_json()}")
            v = (clean.get(q, 0) + c) % p
            if v:
                clean[q] = v
            else:
                clean.pop(q, None)
        self.p = p
        self.terms = clean
        self.lattice = lattice

    # constructors

    @classmethod
    def monomial(cls, p: int, q=0, c: int = 1, lattice: Lattice | None = None) -> "PuiseuxPoly":
        return cls(p, {Fraction(q): c}, lattice)

    @classmethod
    def constant(cls, p: int, c: int, lattice: Lattice | None = None) -> "PuiseuxPoly":
        return cls(p, {Fraction(0): c}, lattice)

    @classmethod
    def zero(cls, p: int, lattice: Lattice | None = None) -> "PuiseuxPoly":
        return cls(p, {}, lattice)

    # inspection

    def is_zero(self) -> bool:
        return not self.terms

    def min_exponent(self) -> Fraction | None:
        return min(self.terms) if self.terms else None

    def support(self) -> list[Fraction]:
        return sorted(self.terms)

    def _coerce(self, other) -> "PuiseuxPoly":
        if isinstance(other, PuiseuxPoly):
            if other.p != self.p:
                raise TagMismatch(f"characteristics {self.p} and {other.p}")
            return other
        if isinstance(other, int):
            return PuiseuxPoly.constant(self.p, other, self.lattice)
        raise TypeError(f"cannot combine PuiseuxPoly with {type(other).__name__}")

    # arithmetic

    def __add__(self, other) -> "PuiseuxPoly":
        other = self._coerce(other)
        lat = self.lattice.join(other.lattice, self.p)
        terms = dict(self.terms)
        for q, c in other.terms.items():
            terms[q] = terms.get(q, 0) + c
        return PuiseuxPoly(self.p, terms, lat)

    __radd__ = __add__

    def __neg__(self) -> "PuiseuxPoly":
        return PuiseuxPoly(self.p, {q: -c for q, c in self.terms.items()}, self.lattice)

    def __sub__(self, other) -> "PuiseuxPoly":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "PuiseuxPoly":
        return self._coerce(other) - self

    def __mul__(self, other) -> "PuiseuxPoly":
        return pp_mul(self, other)

    __rmul__ = __mul__

    def __pow__(self, e: int) -> "PuiseuxPoly":
        if not isinstance(e, int) or e < 0:
            raise Unsupported("only nonnegative integer powers; inversion is not implemented")
        # (sum c t^q)^(p^k) = sum c t^(p^k q) in characteristic p
        out = PuiseuxPoly.constant(self.p, 1, self.lattice)
        base = self
        while e:
            e, d = divmod(e, self.p)
            if d:
                for _ in range(d):
                    out = pp_mul(out, base)
            if e:
                base = base.frobenius(1)
        return out

    def frobenius(self, m: int = 1) -> "PuiseuxPoly":
        """``f -> f ** (p ** m)``; negative ``m`` takes roots."""
        if m >= 0:
            k = self.p**m
            return PuiseuxPoly(self.p, {q * k: c for q, c in self.terms.items()}, self.lattice)
        f = self
        for _ in range(-m):
            f = pp_root(f)
        return f

    def __eq__(self, other):
        if isinstance(other, int):
            other = PuiseuxPoly.constant(self.p, other, self.lattice)
        if not isinstance(other, PuiseuxPoly):
            return NotImplemented
        return self.p == other.p and self.terms == other.terms

    def __hash__(self):
        return hash((self.p, frozenset(self.terms.items())))

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __repr__(self) -> str:
        return f"PuiseuxPoly({self.p}, {self})"

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for q in sorted(self.terms):
            c = self.terms[q]
            mono = "1" if q == 0 else ("t" if q == 1 else f"t^{q}")
            parts.append(mono if c == 1 else (str(c) if q == 0 else f"{c}*{mono}"))
        return " + ".join(parts)

    def to_json(self) -> dict:
        return {
            "p": self.p,
            "lattice": self.lattice.to_json(),
            "terms": [
                {"exp": {"num": q.numerator, "den": q.denominator}, "c": c} for q, c in sorted(self.terms.items())
            ],
        }

    @classmethod
    def from_json(cls, obj: dict) -> "PuiseuxPoly":
        lat = obj.get("lattice")
        lattice = Lattice(lat.get("kind", "p-power"), int(lat.get("bound", DEFAULT_BOUND))) if lat else Lattice()
        terms = []
        for t in obj.get("terms", []):
            e = t["exp"]
            q = Fraction(e["num"], e.get("den", 1)) if isinstance(e, dict) else Fraction(str(e))
            terms.append((q, t.get("c", t.get("coeff", 1))))
        return cls(int(obj["p"]), terms, lattice)


def pp_mul(f: PuiseuxPoly, g) -> PuiseuxPoly:
    g = f._coerce(g)
    lat = f.lattice.join(g.lattice, f.p)
    p = f.p
    out: dict[Fraction, int] = {}
    for a, ca in f.terms.items():
        for b, cb in g.terms.items():
            k = a + b
            out[k] = (out.get(k, 0) + ca * cb) % p
    return PuiseuxPoly(p, out, lat)


def pp_root(f: PuiseuxPoly, p: int | None = None, widen: bool = False) -> PuiseuxPoly:
    """The unique ``g`` with ``g ** p == f``: exponents divided by ``p``.

    Coefficients are unchanged because Frobenius fixes F_p.  On request the
    lattice is widened by one factor of ``p`` instead of overflowing.
    """
    if p is not None and p != f.p:
        raise TagMismatch("root order must equal the characteristic")
    lat = f.lattice
    if widen:
        lat = Lattice(lat.kind, lat.bound * f.p if lat.kind == "fixed" else lat.bound + 1)
    return PuiseuxPoly(f.p, {q / f.p: c for q, c in f.terms.items()}, lat)


def _radius(r) -> NormValue:
    r = NormValue.of(r)
    if r.is_zero or not r < 1:
        raise InvalidRadii("need 0 < r < 1")
    return r


def pp_sup_norm(f: PuiseuxPoly, r) -> NormValue:
    """Multiplicative Gauss norm ``r ** (min exponent)``; 0 for the zero polynomial."""
    r = _radius(r)
    if f.is_zero():
        return NormValue.zero()
    return r ** f.min_exponent()


def pp_l1_norm(f: PuiseuxPoly, r) -> NormValue:
    """``sum r ** q`` over the support; submultiplicative, not multiplicative."""
    r = _radius(r)
    return nv_sum(r**q for q in f.terms)


def t(p: int, q=1, lattice: Lattice | None = None) -> PuiseuxPoly:
    """Shorthand for the monomial ``t ** q``."""
    return PuiseuxPoly.monomial(p, q, 1, lattice)
