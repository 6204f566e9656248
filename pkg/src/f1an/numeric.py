"""Norm values on a log2 scale, with an exact path for products of rational powers.

A value is either *exact*, meaning it is a finite product ``prod b_i ** e_i`` of
integers ``b_i >= 2`` raised to rational exponents, or it carries only a float
``log2``.  Exact values compare exactly: ``prod b_i ** e_i`` against 1 is decided
by clearing the exponent denominators and comparing two integers.  Float values
compare with relative tolerance ``TAU`` in the linear domain.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Union

from .errors import DivisionByZero, InvalidNorm

TAU = 1e-9
# |a - b| <= TAU * max(a, b) is the same as |log2 a - log2 b| <= LOG2_TOL
LOG2_TOL = -math.log2(1.0 - TAU)

_TRIAL_LIMIT = 1 << 16
_EXACT_BITS_CAP = 4_000_000

Number = Union[int, Fraction, float]


@lru_cache(maxsize=4096)
def factor_int(n: int) -> tuple[tuple[int, int], ...]:
    """Trial-division factorisation.

    A cofactor that survives trial division is kept as a single base; it may be
    composite, which only costs canonical form, never correctness.
    """
    if n < 1:
        raise ValueError("factor_int needs a positive integer")
    out = []
    d = 2
    while d * d <= n and d < _TRIAL_LIMIT:
        if n % d == 0:
            k = 0
            while n % d == 0:
                n //= d
                k += 1
            out.append((d, k))
        d += 1 if d == 2 else 2
    if n > 1:
        out.append((n, 1))
    return tuple(out)


def _factor_fraction(x: Fraction) -> dict[int, Fraction]:
    f: dict[int, Fraction] = {}
    for b, k in factor_int(x.numerator):
        f[b] = f.get(b, Fraction(0)) + k
    for b, k in factor_int(x.denominator):
        f[b] = f.get(b, Fraction(0)) - k
    return {b: e for b, e in f.items() if e}


def _merge(a, b, sign: int = 1) -> tuple:
    d = dict(a)
    for base, e in b:
        v = d.get(base, Fraction(0)) + sign * e
        if v:
            d[base] = v
        else:
            d.pop(base, None)
    return tuple(sorted(d.items()))


def _log2_of(factors) -> float:
    return math.fsum(float(e) * math.log2(b) for b, e in factors)


def _exact_sign(factors) -> int:
    """Sign of log(prod b**e), decided exactly."""
    if not factors:
        return 0
    lcm = 1
    for _, e in factors:
        lcm = lcm * e.denominator // math.gcd(lcm, e.denominator)
    bits = sum(abs(e) * lcm * math.log2(b) for b, e in factors)
    if bits > _EXACT_BITS_CAP:
        l2 = _log2_of(factors)
        return (l2 > 0) - (l2 < 0)
    num = 1
    den = 1
    for b, e in factors:
        k = int(e * lcm)
        if k > 0:
            num *= b ** k
        else:
            den *= b ** (-k)
    return (num > den) - (num < den)


class NormValue:
    """A nonnegative real used as a norm.

    ``log2`` is ``-inf`` exactly for zero.  Ordering operators honour the
    exact path when both operands are exact and the tolerance otherwise, so
    ``==`` on float values is "equal within TAU" and is not transitive.
    """

    __slots__ = ("_log2", "_exact")
    __hash__ = None  # tolerance equality cannot be hashed consistently

    def __init__(self, log2: float, exact=None):
        if math.isnan(log2) or log2 == math.inf:
            raise InvalidNorm(f"not a finite norm value (log2={log2})")
        self._log2 = float(log2)
        self._exact = exact

    # constructors

    @classmethod
    def zero(cls) -> "NormValue":
        return cls(-math.inf, ())

    @classmethod
    def one(cls) -> "NormValue":
        return cls(0.0, ())

    @classmethod
    def of(cls, x) -> "NormValue":
        """Build from a NormValue, int, Fraction, rational string or float."""
        if isinstance(x, NormValue):
            return x
        if isinstance(x, str):
            x = Fraction(x)
        if isinstance(x, bool):
            raise InvalidNorm("booleans are not norm values")
        if isinstance(x, (int, Fraction)):
            x = Fraction(x)
            if x < 0:
                raise InvalidNorm(f"negative norm {x}")
            if x == 0:
                return cls.zero()
            f = tuple(sorted(_factor_fraction(x).items()))
            return cls(_log2_of(f), f)
        x = float(x)
        if math.isnan(x) or x < 0 or math.isinf(x):
            raise InvalidNorm(f"invalid norm {x}")
        if x == 0.0:
            return cls.zero()
        return cls(math.log2(x))

    @classmethod
    def power(cls, base, exp) -> "NormValue":
        """``base ** exp`` with both rational stays exact."""
        return cls.of(base) ** exp

    @classmethod
    def from_log2(cls, log2: float) -> "NormValue":
        return cls(log2)

    # inspection

    @property
    def log2(self) -> float:
        return self._log2

    @property
    def is_zero(self) -> bool:
        return self._log2 == -math.inf

    @property
    def is_exact(self) -> bool:
        return self._exact is not None

    @property
    def factors(self) -> tuple | None:
        """``((base, exponent), ...)`` for exact nonzero values, else None."""
        if self.is_zero or self._exact is None:
            return None
        return self._exact

    def as_fraction(self) -> Fraction | None:
        if self.is_zero:
            return Fraction(0)
        if self._exact is None:
            return None
        if any(e.denominator != 1 for _, e in self._exact):
            return None
        v = Fraction(1)
        for b, e in self._exact:
            v *= Fraction(b) ** int(e)
        return v

    def __float__(self) -> float:
        if self.is_zero:
            return 0.0
        try:
            return 2.0 ** self._log2
        except OverflowError:
            return math.inf

    # arithmetic

    def __mul__(self, other) -> "NormValue":
        other = NormValue.of(other)
        if self.is_zero or other.is_zero:
            return NormValue.zero()
        if self._exact is not None and other._exact is not None:
            f = _merge(self._exact, other._exact)
            return NormValue(_log2_of(f), f)
        return NormValue(self._log2 + other._log2)

    __rmul__ = __mul__

    def __truediv__(self, other) -> "NormValue":
        other = NormValue.of(other)
        if other.is_zero:
            raise DivisionByZero("division by a zero norm")
        if self.is_zero:
            return NormValue.zero()
        if self._exact is not None and other._exact is not None:
            f = _merge(self._exact, other._exact, -1)
            return NormValue(_log2_of(f), f)
        return NormValue(self._log2 - other._log2)

    def __rtruediv__(self, other) -> "NormValue":
        return NormValue.of(other) / self

    def __pow__(self, e) -> "NormValue":
        if isinstance(e, float) and e.is_integer():
            e = int(e)
        if self.is_zero:
            if e > 0:
                return NormValue.zero()
            if e == 0:
                return NormValue.one()
            raise DivisionByZero("zero norm raised to a negative power")
        if isinstance(e, (int, Fraction)) and self._exact is not None:
            e = Fraction(e)
            f = tuple((b, x * e) for b, x in self._exact if x * e)
            return NormValue(_log2_of(f), f)
        return NormValue(self._log2 * float(e))

    def root(self, n: int) -> "NormValue":
        return self ** Fraction(1, n)

    def log_base(self, base: "NormValue"):
        """``log_base(self)`` as a Fraction when exactly rational, else a float."""
        base = NormValue.of(base)
        if self.is_zero or base.is_zero or base._log2 == 0.0:
            raise InvalidNorm("logarithm undefined for these arguments")
        if self._exact is not None and base._exact is not None:
            a = dict(self._exact)
            b = dict(base._exact)
            if set(a) == set(b) and b:
                ratios = {a[k] / b[k] for k in b}
                if len(ratios) == 1:
                    return ratios.pop()
            if not a:
                return Fraction(0)
        return self._log2 / base._log2

    # comparison

    def cmp(self, other) -> int:
        """-1, 0 or 1; 0 means exactly equal (exact path) or within TAU."""
        other = NormValue.of(other)
        if self.is_zero or other.is_zero:
            if self.is_zero and other.is_zero:
                return 0
            return -1 if self.is_zero else 1
        d = self._log2 - other._log2
        if self._exact is not None and other._exact is not None:
            scale = max(1.0, abs(self._log2), abs(other._log2))
            if abs(d) > 1e-9 * scale:
                return 1 if d > 0 else -1
            return _exact_sign(_merge(self._exact, other._exact, -1))
        if abs(d) <= LOG2_TOL:
            return 0
        return 1 if d > 0 else -1

    def __eq__(self, other):
        try:
            return self.cmp(other) == 0
        except (TypeError, ValueError, InvalidNorm):
            return NotImplemented

    def __ne__(self, other):
        r = self.__eq__(other)
        return r if r is NotImplemented else not r

    def __lt__(self, other):
        return self.cmp(other) < 0

    def __le__(self, other):
        return self.cmp(other) <= 0

    def __gt__(self, other):
        return self.cmp(other) > 0

    def __ge__(self, other):
        return self.cmp(other) >= 0

    def __repr__(self) -> str:
        return f"NormValue({self.describe()})"

    def describe(self) -> str:
        if self.is_zero:
            return "0"
        fr = self.as_fraction()
        if fr is not None:
            return str(fr)
        if self._exact is not None:
            return "*".join(f"{b}^({e})" for b, e in self._exact)
        return f"~{float(self):.12g}"


def nv_max(values: Iterable) -> NormValue:
    best = NormValue.zero()
    for v in values:
        v = NormValue.of(v)
        if v.cmp(best) > 0:
            best = v
    return best


def nv_min(values: Iterable) -> NormValue:
    best = None
    for v in values:
        v = NormValue.of(v)
        if best is None or v.cmp(best) < 0:
            best = v
    if best is None:
        raise ValueError("nv_min of an empty collection")
    return best


def nv_sum(values: Iterable) -> NormValue:
    """Sum of norm values.

    Rational terms are summed exactly.  Otherwise the terms are rescaled by
    the largest one and added with ``math.fsum``, which keeps tiny terms from
    underflowing and the rounding error compensated.
    """
    vals = [NormValue.of(v) for v in values]
    vals = [v for v in vals if not v.is_zero]
    if not vals:
        return NormValue.zero()
    if len(vals) == 1:
        return vals[0]
    fracs = [v.as_fraction() for v in vals]
    if all(f is not None for f in fracs):
        if sum(f.numerator.bit_length() + f.denominator.bit_length() for f in fracs) < 20000:
            return NormValue.of(sum(fracs, Fraction(0)))
    top = max(v.log2 for v in vals)
    s = math.fsum(2.0 ** (v.log2 - top) for v in vals)
    return NormValue(top + math.log2(s))
