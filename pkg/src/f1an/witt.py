"""Truncated p-typical Witt vectors, their Fargues-Fontaine style norms and Frobenius.

Two independent routes compute sums and products:

* ``table``: the Witt polynomials ``S_k``, ``P_k`` are solved from the ghost
  identities over Z and evaluated in the digit algebra (reduced mod p in
  characteristic p).
* ``series``: digits of integer vectors are encoded as the power series
  ``prod_i (1 - x_i T**(p**i)) ** -1`` truncated at ``T**(p**(n-1) + 1)``, where
  addition is multiplication of series; the p-typical digits are read off by
  peeling factors ``(1 - s_m T**m)`` one degree at a time.

The table blows up quickly (``S_3`` at p = 5 already has 37760 terms), so the
``auto`` route uses tables only where they are cheap and falls back to series
for integer and F_p digits.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping

from .errors import (
    InternalError,
    InvalidElement,
    InvalidRadii,
    TagMismatch,
    TooLarge,
    Unsupported,
)
from .numeric import NormValue, nv_max
from .perfectoid import Lattice, PuiseuxPoly, pp_sup_norm
from .scalars import Scalar, _check_prime, teichmuller_lift

# Exponent slots are 12 bits wide; X_i sits in slot 2i and Y_i in slot 2i + 1
# so a table for depth n extends to depth n + 1 without repacking.
_BITS = 12
_MASK = (1 << _BITS) - 1
MAX_DEPTH = 6
DEFAULT_BUDGET = 60_000_000

# largest length n for which the auto route builds tables
_AUTO_TABLE = {2: 5, 3: 4, 5: 3}


def _auto_table_limit(p: int) -> int:
    return _AUTO_TABLE.get(p, 2)


# sparse integer polynomials keyed by packed exponent vectors


class _Budget:
    def __init__(self, limit: int):
        self.left = limit

    def spend(self, k: int):
        self.left -= k
        if self.left < 0:
            raise TooLarge("Witt polynomial expansion exceeds its product budget")


def _pmul(a: dict, b: dict, budget: _Budget) -> dict:
    budget.spend(len(a) * len(b))
    r: dict = {}
    g = r.get
    for ma, ca in a.items():
        for mb, cb in b.items():
            k = ma + mb
            r[k] = g(k, 0) + ca * cb
    return {m: c for m, c in r.items() if c}


def _ppow(a: dict, e: int, budget: _Budget) -> dict:
    r = {0: 1}
    b = a
    while e:
        if e & 1:
            r = _pmul(r, b, budget)
        e >>= 1
        if e:
            b = _pmul(b, b, budget)
    return r


def _padd(a: dict, b: dict, scale: int = 1) -> dict:
    r = dict(a)
    for m, c in b.items():
        v = r.get(m, 0) + scale * c
        if v:
            r[m] = v
        else:
            r.pop(m, None)
    return r


def _var(slot: int) -> dict:
    return {1 << (_BITS * slot): 1}


def _unpack(key: int) -> tuple:
    out = []
    slot = 0
    while key:
        e = key & _MASK
        if e:
            out.append((slot, e))
        key >>= _BITS
        slot += 1
    return tuple(out)


_POLYS: dict[tuple[int, str], list] = {}


def _extend(p: int, op: str, n: int, budget: _Budget) -> list:
    polys = _POLYS.setdefault((p, op), [])
    X = [_var(2 * i) for i in range(n)]
    Y = [_var(2 * i + 1) for i in range(n)]

    def ghost(V, k):
        r: dict = {}
        for i in range(k + 1):
            r = _padd(r, _ppow(V[i], p ** (k - i), budget), p**i)
        return r

    for k in range(len(polys), n):
        if op == "add":
            w = _padd(ghost(X, k), ghost(Y, k))
        else:
            w = _pmul(ghost(X, k), ghost(Y, k), budget)
        for i in range(k):
            w = _padd(w, _ppow(polys[i], p ** (k - i), budget), -(p**i))
        pk = p**k
        s = {}
        for m, c in w.items():
            q, rem = divmod(c, pk)
            if rem:
                raise InternalError(f"non-integral Witt coefficient at p={p}, k={k}")
            s[m] = q
        polys.append(s)
    return polys[:n]


@dataclass
class WittPolyTable:
    """``S_k`` and ``P_k`` for ``k < n`` as sparse integer polynomials."""

    p: int
    n: int
    S: list = field(repr=False)
    P: list = field(repr=False)
    _terms: dict = field(default_factory=dict, repr=False)

    def poly(self, op: str, k: int) -> dict:
        return (self.S if op == "add" else self.P)[k]

    def terms(self, op: str, k: int) -> list:
        """``[(coeff, ((slot, exp), ...)), ...]`` with slot ``2i`` for X_i, ``2i+1`` for Y_i."""
        key = (op, k)
        if key not in self._terms:
            self._terms[key] = [(c, _unpack(m)) for m, c in self.poly(op, k).items()]
        return self._terms[key]

    def format(self, op: str, k: int) -> str:
        def mono(vs):
            parts = []
            for slot, e in sorted(vs, key=lambda v: (v[0] % 2, v[0])):
                name = ("X" if slot % 2 == 0 else "Y") + str(slot // 2)
                parts.append(name if e == 1 else f"{name}^{e}")
            return "*".join(parts) or "1"

        # positive terms first, then by coefficient size, then alphabetically
        items = sorted((c, mono(vs)) for c, vs in self.terms(op, k))
        items.sort(key=lambda t: (t[0] < 0, abs(t[0]), t[1]))
        out = ""
        for c, m in items:
            body = m if abs(c) == 1 else f"{abs(c)}*{m}"
            if not out:
                out = body if c > 0 else f"-{body}"
            else:
                out += (" + " if c > 0 else " - ") + body
        return out or "0"


def gen_witt_polys(p: int, n: int, ops: Iterable[str] = ("add", "mul"), budget: int = DEFAULT_BUDGET) -> WittPolyTable:
    """Solve the Witt polynomials for ``k < n`` from the ghost identities.

    ``budget`` caps the number of monomial products; exceeding it raises
    ``TooLarge`` rather than running for minutes.
    """
    _check_prime(p)
    if not isinstance(n, int) or n < 1:
        raise InvalidElement("depth must be a positive integer")
    if n > MAX_DEPTH:
        raise TooLarge(f"depth {n} exceeds {MAX_DEPTH}")
    ops = tuple(ops)
    b = _Budget(budget)
    S = _extend(p, "add", n, b) if "add" in ops else []
    P = _extend(p, "mul", n, b) if "mul" in ops else []
    return WittPolyTable(p, n, S, P)


# digit algebras


class _IntAlg:
    kind = "Z"

    def __init__(self, p):
        self.p = p

    def const(self, c):
        return c

    def zero(self):
        return 0

    def one(self):
        return 1

    def is_zero(self, a):
        return a == 0

    def pow(self, a, e):
        return a**e

    def norm_digit(self, a):
        return a


class _FpAlg(_IntAlg):
    kind = "Fp"

    def const(self, c):
        return c % self.p

    def pow(self, a, e):
        return pow(a, e, self.p)

    def norm_digit(self, a):
        return a % self.p


class _PuiseuxAlg:
    kind = "puiseux"

    def __init__(self, p, lattice):
        self.p = p
        self.lattice = lattice

    def const(self, c):
        return PuiseuxPoly.constant(self.p, c, self.lattice)

    def zero(self):
        return PuiseuxPoly.zero(self.p, self.lattice)

    def one(self):
        return self.const(1)

    def is_zero(self, a):
        return a.is_zero()

    def pow(self, a, e):
        return a**e

    def norm_digit(self, a):
        return a


def _evaluate(terms: list, values: list, alg, modulus: int | None):
    """Evaluate a packed polynomial at ``values`` indexed by slot."""
    zero = [alg.is_zero(v) for v in values]
    cache: dict = {}
    acc = None
    for c, vs in terms:
        if modulus is not None:
            c %= modulus
            if not c:
                continue
        if any(zero[s] for s, _ in vs):
            continue
        m = None
        for s, e in vs:
            key = (s, e)
            v = cache.get(key)
            if v is None:
                v = cache[key] = alg.pow(values[s], e)
            m = v if m is None else m * v
        if m is None:
            term = alg.const(c)
        elif c == 1:
            term = m
        else:
            term = alg.const(c) * m
        acc = term if acc is None else acc + term
    if acc is None:
        return alg.zero()
    if modulus is not None and alg.kind == "Fp":
        acc %= modulus
    return acc


# vectors


_KINDS = ("Z", "Fp", "puiseux")


class WittVector:
    """A length-``n`` Witt vector ``(d_0, ..., d_{n-1})``, 0-based digit index.

    ``kind`` is ``"Z"`` (integer digits, characteristic 0), ``"Fp"`` (digits
    in ``range(p)``) or ``"puiseux"`` (PuiseuxPoly digits).
    """

    __slots__ = ("p", "digits", "kind")

    def __init__(self, p: int, digits: Iterable, kind: str | None = None):
        _check_prime(p)
        digits = list(digits)
        if not digits:
            raise InvalidElement("a Witt vector needs at least one digit")
        if kind is None:
            kind = "puiseux" if any(isinstance(d, PuiseuxPoly) for d in digits) else "Fp"
        if kind not in _KINDS:
            raise InvalidElement(f"unknown digit kind {kind!r}")
        if kind == "puiseux":
            lat = None
            for d in digits:
                if isinstance(d, PuiseuxPoly):
                    if d.p != p:
                        raise TagMismatch("digit characteristic differs from p")
                    lat = d.lattice if lat is None else lat.join(d.lattice, p)
            lat = lat or Lattice()
            digits = [d if isinstance(d, PuiseuxPoly) else PuiseuxPoly.constant(p, int(d), lat) for d in digits]
        elif kind == "Fp":
            digits = [int(d) % p for d in digits]
        else:
            digits = [int(d) for d in digits]
        self.p = p
        self.digits = tuple(digits)
        self.kind = kind

    @property
    def n(self) -> int:
        return len(self.digits)

    def _alg(self):
        if self.kind == "Z":
            return _IntAlg(self.p)
        if self.kind == "Fp":
            return _FpAlg(self.p)
        lat = self.digits[0].lattice
        for d in self.digits[1:]:
            lat = lat.join(d.lattice, self.p)
        return _PuiseuxAlg(self.p, lat)

    def _check(self, other: "WittVector"):
        if not isinstance(other, WittVector):
            raise TypeError("expected a WittVector")
        if other.p != self.p or other.n != self.n or other.kind != self.kind:
            raise TagMismatch(
                f"Witt vectors differ: ({self.p}, {self.n}, {self.kind}) vs ({other.p}, {other.n}, {other.kind})"
            )

    def is_zero(self) -> bool:
        alg = self._alg()
        return all(alg.is_zero(d) for d in self.digits)

    def __add__(self, other):
        return witt_add(self, other)

    def __mul__(self, other):
        return witt_mul(self, other)

    def __neg__(self):
        return witt_neg(self)

    def __sub__(self, other):
        return witt_add(self, witt_neg(other))

    def __eq__(self, other):
        if not isinstance(other, WittVector):
            return NotImplemented
        return (self.p, self.kind, self.digits) == (other.p, other.kind, other.digits)

    def __hash__(self):
        return hash((self.p, self.kind, self.digits))

    def __repr__(self) -> str:
        return f"WittVector(p={self.p}, {self.kind}, ({', '.join(str(d) for d in self.digits)}))"

    def ghost(self) -> list[int]:
        """Ghost components ``w_k = sum_i p**i d_i**(p**(k-i))`` of an integer vector."""
        if self.kind != "Z":
            raise Unsupported("ghost components are taken on integer digits")
        return ghost(self.digits, self.p)

    def to_json(self) -> dict:
        if self.kind == "puiseux":
            digits = [d.to_json() for d in self.digits]
        else:
            digits = list(self.digits)
        return {"p": self.p, "kind": self.kind, "digits": digits}

    @classmethod
    def from_json(cls, obj: dict) -> "WittVector":
        p = int(obj["p"])
        raw = obj["digits"]
        kind = obj.get("kind")
        if any(isinstance(d, dict) for d in raw):
            digits = [PuiseuxPoly.from_json({"p": p, **d}) if isinstance(d, dict) else d for d in raw]
            return cls(p, digits, "puiseux")
        return cls(p, raw, kind or "Fp")


def ghost(digits: Iterable[int], p: int) -> list[int]:
    d = list(digits)
    return [sum(p**i * d[i] ** (p ** (k - i)) for i in range(k + 1)) for k in range(len(d))]


# series route


def _series_peel(f: list, p: int, n: int) -> list:
    """Read the p-typical digits off a truncated power series with constant term 1."""
    f = list(f)
    L = len(f)
    out = {}
    wanted = {p**i for i in range(n)}
    for m in range(1, L):
        s = f[m]
        if m in wanted:
            out[m] = s
        if s:
            # f[k - m] vanishes for 0 < k - m < m, so only k >= 2m changes
            for k in range(L - 1, 2 * m - 1, -1):
                fk = f[k - m]
                if fk:
                    f[k] -= s * fk
            f[m] = 0
    return [out[p**i] for i in range(n)]


def _series_of(digits: list, p: int, L: int, f: list | None = None) -> list:
    if f is None:
        f = [0] * L
        f[0] = 1
    for i, a in enumerate(digits):
        if a:
            m = p**i
            for k in range(m, L):
                f[k] += a * f[k - m]
    return f


def _series_add(x: list, y: list, p: int) -> list:
    n = len(x)
    L = p ** (n - 1) + 1
    f = _series_of(x, p, L)
    f = _series_of(y, p, L, f)
    return _series_peel(f, p, n)


def _series_mul(x: list, y: list, p: int) -> list:
    n = len(x)
    L = p ** (n - 1) + 1
    f = [0] * L
    f[0] = 1
    for i in range(n):
        if not x[i]:
            continue
        for j in range(n):
            if not y[j]:
                continue
            lo = min(i, j)
            M = p ** max(i, j)
            g = p**lo
            if M >= L:
                continue
            c = x[i] ** (p ** (j - lo)) * y[j] ** (p ** (i - lo))
            # multiply by (1 - c T^M) ** -g
            if g * M <= L:
                for _ in range(g):
                    for k in range(M, L):
                        f[k] += c * f[k - M]
            else:
                h = [(M * k, math.comb(g + k - 1, k) * c**k) for k in range(1, (L - 1) // M + 1)]
                nf = list(f)
                for k in range(L):
                    fk = f[k]
                    if fk:
                        for d, cc in h:
                            if k + d >= L:
                                break
                            nf[k + d] += fk * cc
                f = nf
    return _series_peel(f, p, n)


def _series_neg(x: list, p: int) -> list:
    n = len(x)
    L = p ** (n - 1) + 1
    f = [0] * L
    f[0] = 1
    # (prod (1 - x_i T^(p^i))^-1)^-1 is a finite product
    for i, a in enumerate(x):
        if a:
            m = p**i
            for k in range(L - 1, m - 1, -1):
                f[k] -= a * f[k - m]
    return _series_peel(f, p, n)


# arithmetic


def _pick_route(x: WittVector, route: str) -> str:
    if route not in ("auto", "table", "series"):
        raise InvalidElement("route is 'auto', 'table' or 'series'")
    if route == "series" and x.kind == "puiseux":
        raise Unsupported("the series route needs integer or F_p digits")
    if route != "auto":
        return route
    if x.kind == "puiseux" or x.n <= _auto_table_limit(x.p):
        return "table"
    return "series"


def _via_table(x: WittVector, y: WittVector, op: str) -> WittVector:
    p, n = x.p, x.n
    table = gen_witt_polys(p, n, (op,))
    alg = x._alg()
    values = []
    for a, b in zip(x.digits, y.digits):
        values.extend((a, b))
    mod = p if x.kind == "Fp" else None
    out = [_evaluate(table.terms(op, k), values, alg, mod) for k in range(n)]
    return WittVector(p, out, x.kind)


def _via_series(x: WittVector, y: WittVector, op: str) -> WittVector:
    fn = _series_add if op == "add" else _series_mul
    out = fn(list(x.digits), list(y.digits), x.p)
    return WittVector(x.p, out, x.kind)


def witt_add(x: WittVector, y: WittVector, route: str = "auto") -> WittVector:
    x._check(y)
    if _pick_route(x, route) == "table":
        return _via_table(x, y, "add")
    return _via_series(x, y, "add")


def witt_mul(x: WittVector, y: WittVector, route: str = "auto") -> WittVector:
    x._check(y)
    if _pick_route(x, route) == "table":
        return _via_table(x, y, "mul")
    return _via_series(x, y, "mul")


def witt_neg(x: WittVector) -> WittVector:
    """Additive inverse, solved digit by digit from ``S_k(x, y) = 0`` or by series."""
    if x.kind != "puiseux":
        return WittVector(x.p, _series_neg(list(x.digits), x.p), x.kind)
    p, n = x.p, x.n
    table = gen_witt_polys(p, n, ("add",))
    alg = x._alg()
    y = [alg.zero() for _ in range(n)]
    for k in range(n):
        values = []
        for a, b in zip(x.digits, y):
            values.extend((a, b))
        # S_k = X_k + Y_k + (terms in lower digits), so y_k = -(S_k at y_k = 0)
        y[k] = -_evaluate(table.terms("add", k), values, alg, p)
    return WittVector(p, y, "puiseux")


def teichmuller(a, p: int, n: int, kind: str | None = None) -> WittVector:
    """``[a] = (a, 0, ..., 0)``."""
    if isinstance(a, PuiseuxPoly):
        zero = PuiseuxPoly.zero(p, a.lattice)
        return WittVector(p, [a] + [zero] * (n - 1), "puiseux")
    return WittVector(p, [a] + [0] * (n - 1), kind or "Fp")


def witt_from_integer(m: int, p: int, n: int) -> WittVector:
    """Digits of ``m`` in ``W_n(F_p) = Z / p**n``.

    Over F_p every digit is its own ``p**i``-th root, so the digits are the
    Teichmüller digits: ``m = sum [d_i] p**i``.
    """
    _check_prime(p)
    N = p**n
    r = m % N
    out = []
    for i in range(n):
        a = r % p
        out.append(a)
        tau = teichmuller_lift(a, p, n).to_integer() if a else 0
        r = ((r - tau) // p) % N
    return WittVector(p, out, "Fp")


def witt_to_integer(x: WittVector) -> int:
    """Inverse of ``witt_from_integer``: ``sum [d_i] p**i mod p**n``."""
    if x.kind != "Fp":
        raise Unsupported("only F_p digits map to Z / p**n")
    p, n = x.p, x.n
    total = 0
    for i, d in enumerate(x.digits):
        if d:
            total += teichmuller_lift(d, p, n).to_integer() * p**i
    return total % p**n


def valuation(m: int, p: int) -> int:
    if m == 0:
        raise InvalidElement("valuation of 0")
    v = 0
    while m % p == 0:
        m //= p
        v += 1
    return v


def witt_alpha_norm(x: WittVector, alpha, r=Fraction(1, 2)) -> NormValue:
    """``max_i |d_i| alpha**i`` with the 0-based index; Puiseux digits use the sup norm at ``r``."""
    a = NormValue.of(alpha)
    if a.is_zero:
        raise InvalidRadii("alpha must be positive")
    if x.kind == "Z":
        raise Unsupported("the alpha norm is defined for characteristic-p digits")
    vals = []
    for i, d in enumerate(x.digits):
        if x.kind == "Fp":
            if d:
                vals.append(a**i)
        elif not d.is_zero():
            vals.append(pp_sup_norm(d, r) * a**i)
    return nv_max(vals)


def is_alpha_bounded(x: WittVector, alpha, bound, r=Fraction(1, 2)) -> bool:
    return witt_alpha_norm(x, alpha, r) <= NormValue.of(bound)


# Fargues-Fontaine style elements


_FF_WINDOW = {2: 4, 3: 3}


def default_window(p: int) -> int:
    return _FF_WINDOW.get(p, 2)


class FFElement:
    """A finite sum ``sum_n [a_n] p**n`` with PuiseuxPoly coefficients.

    ``prec`` is an absolute index: terms at ``n >= prec`` are unknown after a
    carry was truncated.  ``None`` means the element is exact.
    """

    __slots__ = ("p", "terms", "prec")

    def __init__(self, p: int, terms: Mapping | Iterable = (), prec: int | None = None, lattice: Lattice | None = None):
        _check_prime(p)
        items = terms.items() if isinstance(terms, Mapping) else terms
        clean: dict[int, PuiseuxPoly] = {}
        for n, a in items:
            n = int(n)
            if not isinstance(a, PuiseuxPoly):
                a = PuiseuxPoly.constant(p, int(a), lattice)
            elif a.p != p:
                raise TagMismatch("coefficient characteristic differs from p")
            if n in clean:
                raise InvalidElement(f"duplicate index {n}; combine terms with ff_add")
            if prec is not None and n >= prec:
                continue
            if not a.is_zero():
                clean[n] = a
        self.p = p
        self.terms = clean
        self.prec = prec

    def is_zero(self) -> bool:
        return not self.terms

    def min_index(self) -> int | None:
        return min(self.terms) if self.terms else None

    def __add__(self, other):
        return ff_add(self, other)

    def __mul__(self, other):
        return ff_mul(self, other)

    def __neg__(self):
        return ff_neg(self)

    def __sub__(self, other):
        return ff_add(self, ff_neg(other))

    def __eq__(self, other):
        if not isinstance(other, FFElement):
            return NotImplemented
        return self.p == other.p and self.terms == other.terms and self.prec == other.prec

    def __hash__(self):
        return hash((self.p, frozenset(self.terms.items()), self.prec))

    def __repr__(self) -> str:
        body = " + ".join(f"[{a}]p^{n}" for n, a in sorted(self.terms.items())) or "0"
        tail = "" if self.prec is None else f" + O(p^{self.prec})"
        return f"FFElement(p={self.p}, {body}{tail})"

    def to_json(self) -> dict:
        out = {"p": self.p, "terms": [{"n": n, "coeff": a.to_json()} for n, a in sorted(self.terms.items())]}
        if self.prec is not None:
            out["prec"] = self.prec
        return out

    @classmethod
    def from_json(cls, obj: dict) -> "FFElement":
        p = int(obj["p"])
        terms = []
        for t in obj.get("terms", []):
            c = t["coeff"]
            terms.append((t["n"], PuiseuxPoly.from_json({"p": p, **c}) if isinstance(c, dict) else c))
        return cls(p, terms, obj.get("prec"))


def _check_ff(x: FFElement, y: FFElement):
    if not isinstance(y, FFElement):
        raise TypeError("expected an FFElement")
    if x.p != y.p:
        raise TagMismatch(f"primes {x.p} and {y.p}")


def _min_prec(*ps):
    known = [q for q in ps if q is not None]
    return min(known) if known else None


def _normalize(p: int, buckets: dict, prec: int | None, window: int) -> FFElement:
    """Resolve indices holding several Teichmüller terms by Witt addition.

    The sum of the terms at index ``n`` is a Witt vector ``(c_0, c_1, ...)``
    which equals ``sum_i [c_i ** (1/p**i)] p**(n+i)``; only ``window`` digits are
    computed, which caps the precision at ``n + window``.
    """
    top = prec
    out: dict[int, PuiseuxPoly] = {}
    while buckets:
        n = min(buckets)
        items = [a for a in buckets.pop(n) if not a.is_zero()]
        if not items or (top is not None and n >= top):
            continue
        if len(items) == 1:
            out[n] = items[0]
            continue
        L = window if top is None else min(window, top - n)
        acc = teichmuller(items[0], p, L)
        for a in items[1:]:
            acc = witt_add(acc, teichmuller(a, p, L))
        top = n + L if top is None else min(top, n + L)
        for i, c in enumerate(acc.digits):
            if c.is_zero():
                continue
            if i == 0:
                out[n] = c
            else:
                buckets.setdefault(n + i, []).append(c.frobenius(-i))
    return FFElement(p, out, top)


def ff_add(x: FFElement, y: FFElement, window: int | None = None) -> FFElement:
    _check_ff(x, y)
    buckets: dict = {}
    for el in (x, y):
        for n, a in el.terms.items():
            buckets.setdefault(n, []).append(a)
    return _normalize(x.p, buckets, _min_prec(x.prec, y.prec), window or default_window(x.p))


def ff_mul(x: FFElement, y: FFElement, window: int | None = None) -> FFElement:
    """Product with carries; ``[a][b] = [ab]`` so only collisions need Witt addition."""
    _check_ff(x, y)
    buckets: dict = {}
    for n, a in x.terms.items():
        for m, b in y.terms.items():
            buckets.setdefault(n + m, []).append(a * b)
    precs = []
    if x.prec is not None:
        precs.append(x.prec + (y.min_index() if y.terms else x.prec))
    if y.prec is not None:
        precs.append(y.prec + (x.min_index() if x.terms else y.prec))
    if x.is_zero() or y.is_zero():
        return FFElement(x.p, {}, _min_prec(*precs))
    return _normalize(x.p, buckets, _min_prec(*precs), window or default_window(x.p))


def ff_neg(x: FFElement, window: int | None = None) -> FFElement:
    p = x.p
    if x.is_zero():
        return FFElement(p, {}, x.prec)
    if p != 2:
        # (-1)^p = -1, so -1 is its own Teichmüller lift
        return FFElement(p, {n: -a for n, a in x.terms.items()}, x.prec)
    w = window or default_window(p)
    minus_one = FFElement(p, {i: 1 for i in range(w)}, w)
    return ff_mul(x, minus_one, w)


def ff_gauss_norm(x: FFElement, rho, r=Fraction(1, 2)) -> NormValue:
    """``max_n |a_n|_r p**(-rho n)`` over the support."""
    rho_nv = NormValue.of(rho)
    if rho_nv.is_zero:
        raise InvalidRadii("rho must be positive")
    pv = NormValue.of(x.p)
    vals = []
    for n, a in x.terms.items():
        scale = pv ** (-Fraction(rho) * n) if isinstance(rho, (int, Fraction)) else NormValue(-float(rho) * n * pv.log2)
        vals.append(pp_sup_norm(a, r) * scale)
    return nv_max(vals)


def ff_two_sided_norm(x: FFElement, rho, r=Fraction(1, 2)) -> NormValue:
    rho_q = Fraction(rho) if isinstance(rho, (int, Fraction, str)) else rho
    if rho_q < 1:
        raise InvalidRadii("the two-sided norm needs rho >= 1")
    inv = 1 / rho_q
    return nv_max([ff_gauss_norm(x, rho_q, r), ff_gauss_norm(x, inv, r)])


def frobenius(x, m: int = 1):
    """Coefficientwise ``a -> a ** (p ** m)``; negative ``m`` takes roots."""
    if not isinstance(m, int):
        raise InvalidElement("m must be an integer")
    if isinstance(x, FFElement):
        return FFElement(x.p, {n: a.frobenius(m) for n, a in x.terms.items()}, x.prec)
    if isinstance(x, WittVector):
        if x.kind == "Fp":
            return x
        if x.kind == "Z":
            raise Unsupported("integer digits are not a perfect algebra")
        return WittVector(x.p, [d.frobenius(m) for d in x.digits], "puiseux")
    if isinstance(x, PuiseuxPoly):
        return x.frobenius(m)
    raise TypeError("frobenius acts on FFElement, WittVector or PuiseuxPoly")


# exponent transform relating the two norm families


def _unit_radius(v, name: str) -> NormValue:
    nv = NormValue.of(v)
    if nv.is_zero or not nv < 1:
        if nv == 1:
            raise InvalidRadii(f"{name} = 1 makes the logarithm degenerate")
        raise InvalidRadii(f"{name} must lie in (0, 1)")
    return nv


def key_exponent_transform(s, R, r):
    """``s / log_R(r)``: a Fraction when the logarithm is rational, else a float."""
    R = _unit_radius(R, "R")
    r = _unit_radius(r, "r")
    if isinstance(s, (int, Fraction)) and Fraction(s) <= 0 or not isinstance(s, (int, Fraction)) and s <= 0:
        raise InvalidElement("s must be positive")
    lg = r.log_base(R)
    if isinstance(lg, Fraction) and isinstance(s, (int, Fraction)):
        return Fraction(s) / lg
    return float(s) / float(lg)


@dataclass
class CaseResult:
    name: str
    statement: str
    applicable: bool
    lhs: NormValue | None = None
    rhs: NormValue | None = None

    @property
    def holds(self) -> bool | None:
        if not self.applicable:
            return None
        return self.lhs <= self.rhs


@dataclass
class KeyReport:
    s1: object
    s2: object
    norms: dict
    stated: list
    corrected: list
    identity_ok: bool
    constants: dict

    @property
    def stated_ok(self) -> bool:
        return all(c.holds is not False for c in self.stated)

    @property
    def corrected_ok(self) -> bool:
        return all(c.holds is not False for c in self.corrected)

    def failures(self) -> list:
        return [c for c in self.stated if c.holds is False]


def _abs(v) -> NormValue:
    if isinstance(v, Scalar):
        if v.is_zero():
            return NormValue.zero()
        return v.ring.native_norm(v.value)
    return NormValue.of(v)


def _sup(items) -> NormValue:
    return nv_max(items)


def key_inequality_check(a: Mapping, s, R, r1, r2) -> KeyReport:
    """Evaluate both norm pairs of a finite Q-indexed sequence and the case bounds.

    ``a`` maps rationals to p-adic scalars (or to their absolute values).  The
    report carries

    * ``norms``: ``sup |a_q|**s r_i**q`` and ``sup |a_q|**s_i R**q`` for i = 1, 2;
    * ``stated``: the four bounds with exponent ``s_1`` on the unit-ball part and
      ``s_2`` when some coefficient has ``|a_q| >= 1``, each only where its
      hypothesis holds;
    * ``corrected``: the same bounds with the exponents exchanged, which hold
      term by term;
    * ``identity_ok``: ``|a_q|**s_i R**q == (|a_q|**s r_i**q) ** (1 / log_R r_i)``.
    """
    Rn = _unit_radius(R, "R")
    r1n = _unit_radius(r1, "r1")
    r2n = _unit_radius(r2, "r2")
    if not (r1n < Rn < r2n):
        raise InvalidRadii("need r1 < R < r2")
    s1 = key_exponent_transform(s, R, r1)
    s2 = key_exponent_transform(s, R, r2)
    vals = {Fraction(q): _abs(v) for q, v in a.items()}
    vals = {q: v for q, v in vals.items() if not v.is_zero}

    def w(v, e, rad, q):
        return (v**e) * (rad**q)

    norms = {
        "r1": _sup(w(v, s, r1n, q) for q, v in vals.items()),
        "r2": _sup(w(v, s, r2n, q) for q, v in vals.items()),
        "R_s1": _sup(w(v, s1, Rn, q) for q, v in vals.items()),
        "R_s2": _sup(w(v, s2, Rn, q) for q, v in vals.items()),
    }

    pos = {q: v for q, v in vals.items() if q > 0}
    neg = {q: v for q, v in vals.items() if q < 0}
    one = NormValue.one()

    def case(name, part, rad, e, hyp, statement):
        if not part or not hyp(part):
            return CaseResult(name, statement, False)
        lhs = _sup(w(v, e, Rn, q) for q, v in part.items())
        rhs = _sup(w(v, s, rad, q) for q, v in part.items())
        return CaseResult(name, statement, True, lhs, rhs)

    def all_small(part):
        return all(v <= one for v in part.values())

    def some_big(part):
        return any(v >= one for v in part.values())

    def all_big(part):
        return all(v >= one for v in part.values())

    stated = [
        case("pos_unit", pos, r2n, s1, all_small, "q>0, all |a_q|<=1: sup |a_q|^s1 R^q <= sup |a_q|^s r2^q"),
        case("pos_big", pos, r2n, s2, some_big, "q>0, some |a_q|>=1: sup |a_q|^s2 R^q <= sup |a_q|^s r2^q"),
        case("neg_big", neg, r1n, s2, some_big, "q<0, some |a_q|>=1: sup |a_q|^s2 R^q <= sup |a_q|^s r1^q"),
        case("neg_unit", neg, r1n, s1, all_small, "q<0, all |a_q|<=1: sup |a_q|^s1 R^q <= sup |a_q|^s r1^q"),
    ]
    corrected = [
        case("pos_unit", pos, r2n, s2, all_small, "q>0, all |a_q|<=1: sup |a_q|^s2 R^q <= sup |a_q|^s r2^q"),
        case("pos_big", pos, r2n, s1, all_big, "q>0, all |a_q|>=1: sup |a_q|^s1 R^q <= sup |a_q|^s r2^q"),
        case("neg_big", neg, r1n, s1, all_big, "q<0, all |a_q|>=1: sup |a_q|^s1 R^q <= sup |a_q|^s r1^q"),
        case("neg_unit", neg, r1n, s2, all_small, "q<0, all |a_q|<=1: sup |a_q|^s2 R^q <= sup |a_q|^s r1^q"),
    ]

    identity_ok = True
    for idx, (rad, e) in enumerate(((r1n, s1), (r2n, s2))):
        lg = rad.log_base(Rn)
        for q, v in vals.items():
            left = w(v, e, Rn, q)
            right = w(v, s, rad, q) ** (1 / lg if isinstance(lg, Fraction) else 1.0 / lg)
            if left != right:
                identity_ok = False

    constants = {}
    for name, (num, den) in {"s1_vs_r1": ("R_s1", "r1"), "s2_vs_r2": ("R_s2", "r2")}.items():
        if not norms[den].is_zero:
            constants[name] = norms[num] / norms[den]
    return KeyReport(s1, s2, norms, stated, corrected, identity_ok, constants)


# the two norm families on double arrays


@dataclass
class SandwichResult:
    sup_r: NormValue
    l1_r: NormValue
    l1_r_prime: NormValue
    constant: NormValue

    @property
    def lower_ok(self) -> bool:
        return self.sup_r <= self.l1_r

    @property
    def upper_ok(self) -> bool:
        return self.l1_r_prime <= self.constant * self.sup_r

    @property
    def ok(self) -> bool:
        return self.lower_ok and self.upper_ok


def sandwich_check(c: Mapping, p: int, r, r_prime, rho, N: int | None = None) -> SandwichResult:
    """Compare the L1 route and the Witt sup route on a double array.

    ``c`` maps ``(q, n)`` to a digit in F_p, with ``q`` a nonnegative rational
    and ``n`` an integer.  The L1 route builds ``A_q = sum_n [c_{q,n}] p**n`` in
    Q_p from Teichmüller lifts and takes ``sum_q r**q max(|A_q|**rho, |A_q|**(1/rho))``.
    The sup route builds ``sum_n [a_n] p**n`` with ``a_n = sum_q c_{q,n} t**q``
    and takes its two-sided norm at ``rho``.  The certified constant is
    ``sum over the q-support of (r'/r)**q``.
    """
    from .basechange import L1, F1Element, GaussNormSpec, bc_norm, cofinality_constant
    from .monoids import GeometricMonoid
    from .scalars import Padic, TwoSidedNorm

    rho = Fraction(rho)
    if rho < 1:
        raise InvalidRadii("rho must be at least 1")
    cells = {(Fraction(q), int(n)): int(v) % p for (q, n), v in c.items() if int(v) % p}
    if not cells:
        z = NormValue.zero()
        return SandwichResult(z, z, z, z)
    ns = [n for _, n in cells]
    span = max(ns) - min(0, min(ns)) + 2
    N = N or span + 8
    ring = Padic(p, N)

    # L1 route through Q_p
    A: dict = {}
    for (q, n), v in cells.items():
        term = teichmuller_lift(v, p, N) * ring.make(Fraction(p) ** n)
        A[q] = A[q] + term if q in A else term
    spec = TwoSidedNorm(1 / rho, rho) if rho > 1 else None

    def l1_at(rad):
        M = GeometricMonoid("Q+", rad)
        e = F1Element(M, A, ring)
        return bc_norm(e, GaussNormSpec(L1, spec) if spec else GaussNormSpec(L1))

    # sup route through the Witt side
    lat = Lattice("fixed", math.lcm(*[q.denominator for q, _ in cells]))
    coeffs: dict = {}
    for (q, n), v in cells.items():
        coeffs.setdefault(n, {})[q] = v
    x = FFElement(p, {n: PuiseuxPoly(p, d, lat) for n, d in coeffs.items()})
    sup_r = ff_two_sided_norm(x, rho, r)

    K = cofinality_constant((q for q, _ in cells), r, r_prime)
    return SandwichResult(sup_r, l1_at(r), l1_at(r_prime), K)
