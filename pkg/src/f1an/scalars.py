"""Ground rings with norms: F_p, Q_p at fixed absolute precision, Z with
archimedean powers, trivially valued Q, and real or complex floats."""

from __future__ import annotations

import math
import os
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

from .errors import DivisionByZero, InvalidElement, InvalidNorm, PrecisionExhausted, TagMismatch
from .numeric import NormValue, nv_max

DEFAULT_PRECISION = 32


def default_precision() -> int:
    """Working p-adic precision; ``F1AN_PRECISION`` overrides the default."""
    raw = os.environ.get("F1AN_PRECISION", "").strip()
    if not raw:
        return DEFAULT_PRECISION
    try:
        n = int(raw)
    except ValueError:
        raise InvalidElement(f"F1AN_PRECISION must be an integer, got {raw!r}") from None
    if n < 1:
        raise InvalidElement("F1AN_PRECISION must be positive")
    return n


def _check_prime(p: int) -> int:
    if not isinstance(p, int) or p < 2 or any(p % d == 0 for d in range(2, math.isqrt(p) + 1)):
        raise InvalidElement(f"{p!r} is not a prime")
    return p


def _rational(x, what: str) -> Fraction:
    try:
        return Fraction(x)
    except (TypeError, ValueError):
        raise InvalidElement(f"{what} must be rational, got {x!r}") from None


# norm choices


@dataclass(frozen=True)
class PlainNorm:
    """The ring's own absolute value."""


@dataclass(frozen=True)
class PowerNorm:
    s: Fraction

    def __post_init__(self):
        object.__setattr__(self, "s", _rational(self.s, "exponent"))
        if self.s <= 0:
            raise InvalidNorm("the exponent must be positive")


@dataclass(frozen=True)
class TwoSidedNorm:
    """``max(|x|**s1, |x|**s2)``."""

    s1: Fraction
    s2: Fraction

    def __post_init__(self):
        object.__setattr__(self, "s1", _rational(self.s1, "s1"))
        object.__setattr__(self, "s2", _rational(self.s2, "s2"))
        if not 0 < self.s1 < self.s2:
            raise InvalidNorm("TwoSidedNorm needs 0 < s1 < s2")


NormSpec = Union[PlainNorm, PowerNorm, TwoSidedNorm]
PLAIN = PlainNorm()


def apply_spec(native: NormValue, spec: NormSpec | None) -> NormValue:
    if spec is None or isinstance(spec, PlainNorm):
        return native
    if isinstance(spec, PowerNorm):
        return native**spec.s
    if isinstance(spec, TwoSidedNorm):
        return nv_max([native**spec.s1, native**spec.s2])
    raise InvalidNorm(f"unknown norm spec {spec!r}")


# ring tags


@dataclass(frozen=True)
class PrimeField:
    p: int

    def __post_init__(self):
        _check_prime(self.p)

    def make(self, v) -> "Scalar":
        if isinstance(v, Fraction):
            if v.denominator % self.p == 0:
                raise DivisionByZero("denominator divisible by p")
            v = v.numerator * pow(v.denominator, -1, self.p)
        return Scalar(self, int(v) % self.p)

    def zero(self):
        return Scalar(self, 0)

    def one(self):
        return Scalar(self, 1 % self.p)

    def add(self, a, b):
        return (a + b) % self.p

    def neg(self, a):
        return (-a) % self.p

    def mul(self, a, b):
        return (a * b) % self.p

    def inv(self, a):
        if a == 0:
            raise DivisionByZero("inverse of 0 in F_p")
        return pow(a, -1, self.p)

    def is_zero(self, a) -> bool:
        return a == 0

    def equal(self, a, b) -> bool:
        return a == b

    def native_norm(self, a) -> NormValue:
        return NormValue.zero() if a == 0 else NormValue.one()


@dataclass(frozen=True)
class RationalTrivial:
    def make(self, v) -> "Scalar":
        return Scalar(self, _rational(v, "value"))

    def zero(self):
        return Scalar(self, Fraction(0))

    def one(self):
        return Scalar(self, Fraction(1))

    def add(self, a, b):
        return a + b

    def neg(self, a):
        return -a

    def mul(self, a, b):
        return a * b

    def inv(self, a):
        if a == 0:
            raise DivisionByZero("inverse of 0")
        return 1 / a

    def is_zero(self, a) -> bool:
        return a == 0

    def equal(self, a, b) -> bool:
        return a == b

    def native_norm(self, a) -> NormValue:
        return NormValue.zero() if a == 0 else NormValue.one()


@dataclass(frozen=True)
class ArchInt:
    """Z with ``|x|_inf ** beta``."""

    beta: Fraction = Fraction(1)

    def __post_init__(self):
        object.__setattr__(self, "beta", _rational(self.beta, "beta"))
        if self.beta <= 0:
            raise InvalidNorm("beta must be positive")

    def make(self, v) -> "Scalar":
        if isinstance(v, Fraction) and v.denominator != 1:
            raise InvalidElement("ArchInt holds integers only")
        return Scalar(self, int(v))

    def zero(self):
        return Scalar(self, 0)

    def one(self):
        return Scalar(self, 1)

    def add(self, a, b):
        return a + b

    def neg(self, a):
        return -a

    def mul(self, a, b):
        return a * b

    def inv(self, a):
        if a == 0:
            raise DivisionByZero("inverse of 0")
        if abs(a) != 1:
            raise InvalidElement(f"{a} is not a unit of Z")
        return a

    def is_zero(self, a) -> bool:
        return a == 0

    def equal(self, a, b) -> bool:
        return a == b

    def native_norm(self, a) -> NormValue:
        return NormValue.of(abs(a)) ** self.beta


@dataclass(frozen=True)
class Real:
    """IEEE doubles with ``|x|_inf ** eps``."""

    eps: Fraction = Fraction(1)

    def __post_init__(self):
        object.__setattr__(self, "eps", _rational(self.eps, "eps"))
        if self.eps <= 0:
            raise InvalidNorm("eps must be positive")

    def make(self, v) -> "Scalar":
        return Scalar(self, float(v))

    def zero(self):
        return Scalar(self, 0.0)

    def one(self):
        return Scalar(self, 1.0)

    def add(self, a, b):
        return a + b

    def neg(self, a):
        return -a

    def mul(self, a, b):
        return a * b

    def inv(self, a):
        if a == 0:
            raise DivisionByZero("inverse of 0.0")
        return 1.0 / a

    def is_zero(self, a) -> bool:
        return a == 0

    def equal(self, a, b) -> bool:
        return a == b

    def native_norm(self, a) -> NormValue:
        return NormValue.of(abs(a)) ** self.eps


@dataclass(frozen=True)
class Complex(Real):
    def make(self, v) -> "Scalar":
        return Scalar(self, complex(v))

    def zero(self):
        return Scalar(self, 0j)

    def one(self):
        return Scalar(self, 1 + 0j)


@dataclass(frozen=True)
class Padic:
    """Q_p with elements known modulo ``p**N`` (absolute precision ``N``).

    Payload ``(val, unit, prec)``: the element is ``p**val * unit`` known
    modulo ``p**prec``, with ``unit`` prime to ``p`` and reduced modulo
    ``p**(prec - val)``.  An element indistinguishable from zero has
    ``val = None``.
    """

    p: int
    N: int = DEFAULT_PRECISION

    def __post_init__(self):
        _check_prime(self.p)
        if not isinstance(self.N, int) or self.N < 1:
            raise InvalidElement("precision N must be a positive integer")

    def _norm(self, val: int, m: int, prec: int):
        prec = min(prec, self.N)
        if val >= prec:
            return (None, 0, prec)
        m %= self.p ** (prec - val)
        if m == 0:
            return (None, 0, prec)
        while m % self.p == 0:
            m //= self.p
            val += 1
        return (val, m % self.p ** (prec - val), prec)

    def make(self, v) -> "Scalar":
        """Embed an integer or a rational number."""
        if isinstance(v, Scalar):
            if v.ring != self:
                raise TagMismatch("different rings")
            return v
        v = _rational(v, "value")
        if v == 0:
            return Scalar(self, (None, 0, self.N))
        num, den = v.numerator, v.denominator
        vd = 0
        while den % self.p == 0:
            den //= self.p
            vd += 1
        vn = 0
        while num % self.p == 0:
            num //= self.p
            vn += 1
        val = vn - vd
        if val >= self.N:
            return Scalar(self, (None, 0, self.N))
        mod = self.p ** (self.N - val)
        return Scalar(self, self._norm(val, num * pow(den, -1, mod), self.N))

    def from_digits(self, digits, val: int = 0) -> "Scalar":
        """``p**val * sum(d_i p**i)`` known modulo ``p**N``."""
        m = 0
        for i, d in enumerate(digits):
            if not (isinstance(d, int) and 0 <= d < self.p):
                raise InvalidElement(f"digit {d!r} outside [0, {self.p})")
            m += d * self.p**i
        if m == 0:
            return Scalar(self, (None, 0, self.N))
        return Scalar(self, self._norm(val, m, self.N))

    def zero(self):
        return Scalar(self, (None, 0, self.N))

    def one(self):
        return self.make(1)

    def add(self, a, b):
        va, ua, pa = a
        vb, ub, pb = b
        prec = min(pa, pb)
        ea = pa if va is None else va
        eb = pb if vb is None else vb
        e = min(ea, eb)
        if e >= prec:
            return (None, 0, prec)
        m = ua * self.p ** (ea - e) + ub * self.p ** (eb - e)
        return self._norm(e, m, prec)

    def neg(self, a):
        v, u, prec = a
        if v is None:
            return a
        return (v, (-u) % self.p ** (prec - v), prec)

    def mul(self, a, b):
        va, ua, pa = a
        vb, ub, pb = b
        ea = pa if va is None else va
        eb = pb if vb is None else vb
        prec = min(ea + pb, eb + pa)
        if va is None or vb is None:
            return (None, 0, min(prec, self.N))
        return self._norm(va + vb, ua * ub, prec)

    def inv(self, a):
        v, u, prec = a
        if v is None:
            raise DivisionByZero("inverse of a p-adic zero")
        rel = prec - v
        return self._norm(-v, pow(u, -1, self.p**rel), -v + rel)

    def is_zero(self, a) -> bool:
        return a[0] is None

    def equal(self, a, b) -> bool:
        return self.add(a, self.neg(b))[0] is None

    def native_norm(self, a) -> NormValue:
        v = a[0]
        if v is None:
            raise PrecisionExhausted(f"element is O({self.p}^{a[2]}); its norm is not determined")
        return NormValue.of(self.p) ** (-v)

    def valuation(self, a) -> int:
        if a[0] is None:
            raise PrecisionExhausted("valuation of an element indistinguishable from zero")
        return a[0]


Ring = Union[PrimeField, Padic, ArchInt, RationalTrivial, Real, Complex]


class Scalar:
    """An element of one of the ground rings; immutable."""

    __slots__ = ("ring", "value")

    def __init__(self, ring, value):
        self.ring = ring
        self.value = value

    def _other(self, other) -> "Scalar":
        if isinstance(other, Scalar):
            if other.ring != self.ring:
                raise TagMismatch(f"{self.ring} vs {other.ring}")
            return other
        if isinstance(other, (int, Fraction, float, complex)) and not isinstance(other, bool):
            return self.ring.make(other)
        raise TypeError(f"cannot combine Scalar with {type(other).__name__}")

    def __add__(self, other):
        o = self._other(other)
        return Scalar(self.ring, self.ring.add(self.value, o.value))

    __radd__ = __add__

    def __neg__(self):
        return Scalar(self.ring, self.ring.neg(self.value))

    def __sub__(self, other):
        return self + (-self._other(other))

    def __rsub__(self, other):
        return self._other(other) - self

    def __mul__(self, other):
        o = self._other(other)
        return Scalar(self.ring, self.ring.mul(self.value, o.value))

    __rmul__ = __mul__

    def inverse(self) -> "Scalar":
        return Scalar(self.ring, self.ring.inv(self.value))

    def __truediv__(self, other):
        return self * self._other(other).inverse()

    def __pow__(self, n: int):
        if not isinstance(n, int):
            raise TypeError("integer powers only")
        if n < 0:
            return self.inverse() ** (-n)
        out = self.ring.one()
        base = self
        while n:
            if n & 1:
                out = out * base
            n >>= 1
            if n:
                base = base * base
        return out

    def is_zero(self) -> bool:
        return self.ring.is_zero(self.value)

    def __eq__(self, other):
        try:
            o = self._other(other)
        except (TagMismatch, TypeError):
            return False
        return self.ring.equal(self.value, o.value)

    def __hash__(self):
        if isinstance(self.ring, Padic):
            # equality is up to the working precision, so only the ring is hashed
            return hash(self.ring)
        return hash((self.ring, self.value))

    def __repr__(self) -> str:
        return f"Scalar({self.ring}, {self.value!r})"

    # p-adic views

    def valuation(self) -> int:
        if not isinstance(self.ring, Padic):
            raise TagMismatch("valuation is defined for p-adic elements")
        return self.ring.valuation(self.value)

    def digits(self) -> tuple[tuple[int, ...], int]:
        """``(digits, offset)`` with ``x = p**offset * sum(d_i p**i)`` mod ``p**N``.

        The offset is ``min(val, 0)``, so for p-adic integers the digit
        vector is the plain base-p expansion of ``x mod p**N``.
        """
        if not isinstance(self.ring, Padic):
            raise TagMismatch("digits are defined for p-adic elements")
        p, N = self.ring.p, self.ring.N
        v, u, prec = self.value
        if v is None:
            return tuple(0 for _ in range(N)), 0
        offset = min(v, 0)
        m = u * p ** (v - offset)
        out = []
        for _ in range(N - offset):
            m, d = divmod(m, p)
            out.append(d)
        return tuple(out), offset

    def to_integer(self) -> int:
        """Representative in ``[0, p**N)`` of a p-adic integer."""
        if not isinstance(self.ring, Padic):
            raise TagMismatch("to_integer is for p-adic elements")
        v, u, _ = self.value
        if v is None:
            return 0
        if v < 0:
            raise InvalidElement("not a p-adic integer")
        return (u * self.ring.p**v) % self.ring.p**self.ring.N


def scalar_norm(x: Scalar, spec: NormSpec | None = None) -> NormValue:
    return apply_spec(x.ring.native_norm(x.value), spec)


def padic_from_integer(m: int, p: int, N: int | None = None) -> Scalar:
    return Padic(p, default_precision() if N is None else N).make(m)


def teichmuller_lift(a: int, p: int, N: int | None = None) -> Scalar:
    """The (p-1)-th root of unity in Z_p reducing to ``a`` mod p (or 0)."""
    ring = Padic(p, default_precision() if N is None else N)
    a %= p
    if a == 0:
        return ring.zero()
    mod = p**ring.N
    t = a
    # a -> a**p converges to the Teichmuller representative, one digit per step
    for _ in range(ring.N):
        t = pow(t, p, mod)
    return ring.make(t)
