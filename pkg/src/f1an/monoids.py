"""Geometric monoids: additive monoids of numbers normed by ``r ** q``.

``GeometricMonoid`` covers N, Z, (1/n)N, (1/n)Z, the nonnegative rationals and
all rationals, with one radius or with separate radii for the negative and
positive halves.  As a pointed normed set the exponent 0 is the basepoint and
has norm 0; the monoid-ring weight ``r ** 0 = 1`` is exposed separately as
``weight``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable

from .errors import CounterexampleFound, InvalidElement, InvalidRadii, NotBounded, Unsupported
from .numeric import NormValue, nv_max, nv_min

CARRIERS = ("N", "Z", "Q+", "Q")


def default_probes(k: int = 8) -> list[Fraction]:
    out = {Fraction(0)}
    for j in range(1, k + 1):
        for q in (Fraction(j), Fraction(1, j)):
            out.add(q)
            out.add(-q)
    return sorted(out)


class GeometricMonoid:
    """A geometric monoid; the radii are NormValues so radicals stay exact."""

    def __init__(self, carrier: str, radius, neg_radius=None, denominator: int = 1, prime: int | None = None):
        if carrier not in CARRIERS:
            raise InvalidElement(f"unknown carrier {carrier!r}")
        if not isinstance(denominator, int) or denominator < 1:
            raise InvalidElement("denominator must be a positive integer")
        if denominator != 1 and carrier not in ("N", "Z"):
            raise InvalidElement("a denominator applies to the N and Z carriers")
        r = NormValue.of(radius)
        if r.is_zero:
            raise InvalidRadii("radii must be positive")
        s = r if neg_radius is None else NormValue.of(neg_radius)
        if s.is_zero:
            raise InvalidRadii("radii must be positive")
        if neg_radius is not None:
            if carrier in ("N", "Q+"):
                raise InvalidRadii("two radii need a carrier with negative elements")
            # |a + b| <= |a||b| across the sign change forces neg <= pos
            if s > r:
                raise InvalidRadii("the negative-side radius must not exceed the positive-side radius")
        self.carrier = carrier
        self.radius = r
        self.neg_radius = s
        self.two_sided = neg_radius is not None
        self.denominator = denominator
        self.prime = prime

    @classmethod
    def two_radius(cls, carrier: str, r1, r2, **kw) -> "GeometricMonoid":
        """``|q| = r1**q`` for ``q < 0`` and ``r2**q`` for ``q > 0``."""
        return cls(carrier, r2, neg_radius=r1, **kw)

    @classmethod
    def pair(cls, r) -> "GeometricMonoid":
        """Q with ``r**q`` on the positive half and ``(1 - r)**q`` on the negative half."""
        r = Fraction(r)
        if not Fraction(1, 2) <= r < 1:
            raise InvalidRadii("pair members need 1/2 <= r < 1")
        return cls("Q", r, neg_radius=1 - r)

    def radii(self) -> tuple[NormValue, NormValue]:
        return self.neg_radius, self.radius

    def contains(self, q) -> bool:
        try:
            q = Fraction(q)
        except (TypeError, ValueError):
            return False
        if self.carrier in ("N", "Q+") and q < 0:
            return False
        if self.carrier in ("N", "Z"):
            return (q * self.denominator).denominator == 1
        if self.prime is not None:
            d = q.denominator
            while d % self.prime == 0:
                d //= self.prime
            return d == 1
        return True

    def _check(self, q) -> Fraction:
        if not self.contains(q):
            raise InvalidElement(f"{q} is not in the carrier {self.describe()}")
        return Fraction(q)

    def weight(self, q) -> NormValue:
        """``r ** q`` including ``q = 0``; the norm used by monoid algebras."""
        q = self._check(q)
        return (self.radius if q >= 0 else self.neg_radius) ** q

    def norm_of(self, q) -> NormValue:
        """The pointed-set norm: 0 at the basepoint 0, ``weight(q)`` elsewhere."""
        q = self._check(q)
        if q == 0:
            return NormValue.zero()
        return self.weight(q)

    norm = norm_of

    @property
    def divisible_by(self) -> Callable[[int], bool]:
        def ok(p: int) -> bool:
            if self.carrier in ("N", "Z"):
                return False
            return self.prime is None or self.prime == p

        return ok

    def same_as(self, other: "GeometricMonoid") -> bool:
        return (
            self.carrier == other.carrier
            and self.denominator == other.denominator
            and self.prime == other.prime
            and self.two_sided == other.two_sided
            and self.radius == other.radius
            and self.neg_radius == other.neg_radius
        )

    def describe(self) -> str:
        c = self.carrier if self.denominator == 1 else f"(1/{self.denominator}){self.carrier}"
        if self.two_sided:
            return f"{c}[{self.neg_radius.describe()}, {self.radius.describe()}]"
        return f"{c}[{self.radius.describe()}]"

    def __repr__(self) -> str:
        return f"GeometricMonoid({self.describe()})"


@dataclass
class MonoidMap:
    source: GeometricMonoid
    target: GeometricMonoid
    fn: Callable[[Fraction], Fraction]
    inverse: "MonoidMap | None" = None
    label: str = ""

    def __call__(self, q):
        return self.fn(Fraction(q))

    def isometry_defect(self, probes: Iterable) -> float:
        """Largest ``|log2 |f(q)| - log2 |q||`` over the probes in the source."""
        worst = 0.0
        for q in probes:
            if not self.source.contains(q) or Fraction(q) == 0:
                continue
            a = self.target.norm_of(self(q))
            b = self.source.norm_of(q)
            if a != b:
                worst = max(worst, abs(a.log2 - b.log2))
        return worst


def scale_by_p(M: GeometricMonoid, p: int) -> MonoidMap:
    """``q -> p q`` as an isometry onto the monoid with radii ``r ** (1/p)``.

    On carriers divisible by ``p`` the inverse ``q -> q / p`` is attached.
    """
    if p < 2:
        raise Unsupported("scaling needs p >= 2")
    kw = dict(denominator=M.denominator, prime=M.prime)
    r = M.radius ** Fraction(1, p)
    if M.two_sided:
        T = GeometricMonoid(M.carrier, r, neg_radius=M.neg_radius ** Fraction(1, p), **kw)
    else:
        T = GeometricMonoid(M.carrier, r, **kw)
    fwd = MonoidMap(M, T, lambda q: p * q, label=f"times {p}")
    if M.divisible_by(p):
        fwd.inverse = MonoidMap(T, M, lambda q: q / p, inverse=fwd, label=f"divide by {p}")
    return fwd


def divide_pair_by_p(r, p: int) -> MonoidMap:
    """``q -> q / p`` from the pair monoid at ``r`` onto radii ``(r**p, (1-r)**p)``.

    Checking ``|q/p| = |q|`` on both halves forces the negative radius of the
    target to be ``(1 - r) ** p``.
    """
    M = GeometricMonoid.pair(r)
    r = Fraction(r)
    T = GeometricMonoid("Q", NormValue.of(r) ** p, neg_radius=NormValue.of(1 - r) ** p)
    return MonoidMap(M, T, lambda q: q / p, label=f"divide by {p}")


def quotient_cokernel_norm(r_prime, r, n: int) -> NormValue:
    """Norm of the class of ``n`` in the cokernel of the two face maps.

    The class of ``n`` in the quotient of ``N[r'] x N[r]`` by
    ``(a + b, c) ~ (a, b + c)`` is ``{(a, b) : a + b = n}``; its norm is the
    infimum of ``r'**a r**b``, which is ``r'**n`` when ``r' < r``.  The class
    of 0 is the basepoint.
    """
    rp, rr = NormValue.of(r_prime), NormValue.of(r)
    if rp.is_zero or rr.is_zero:
        raise InvalidRadii("radii must be positive")
    if not rp < rr:
        raise InvalidRadii("need r' < r")
    if not isinstance(n, int) or n < 0:
        raise InvalidElement("n must be a nonnegative integer")
    if n == 0:
        return NormValue.zero()
    value = nv_min(rp**a * rr ** (n - a) for a in range(n + 1))
    expected = rp**n
    if value != expected:
        raise CounterexampleFound("cokernel norm differs from r'^n", {"n": n, "got": value.describe()})
    return value


def cokernel_by_coequalizer(r_prime, r, n_max: int) -> dict[int, NormValue]:
    """The same class norms, computed with the generic coequalizer.

    The relation is truncated to totals ``<= n_max``; pairs and triples with
    total 0 are the basepoints.
    """
    from . import normcore as nc

    rp, rr = NormValue.of(r_prime), NormValue.of(r)
    pairs = [(a, b) for a in range(n_max + 1) for b in range(n_max + 1 - a)]
    Y = nc.FiniteNormedSet(pairs, (0, 0), {(a, b): rp**a * rr**b for a, b in pairs if a + b})
    triples = [(a, b, c) for a in range(n_max + 1) for b in range(n_max + 1 - a) for c in range(n_max + 1 - a - b)]
    X = nc.FiniteNormedSet(
        triples, (0, 0, 0), {t: rp ** (t[0] + t[1]) * rr ** t[2] for t in triples if sum(t)}
    )
    d0 = nc.PointedMap(X, Y, lambda t: (t[0] + t[1], t[2]))
    d1 = nc.PointedMap(X, Y, lambda t: (t[0], t[1] + t[2]))
    Q, q = nc.coequalizer(d0, d1)
    out = {}
    for a, b in pairs:
        out[a + b] = Q.norm(q((a, b)))
    return out


# families


@dataclass
class NormFamily:
    """Finitely many norms on one carrier, indexed as a projective or inductive system.

    For a projective family of pair monoids, member ``i + 1`` must dominate
    member ``i``: the identity from member ``i + 1`` to member ``i`` is bounded.
    """

    members: list
    kind: str = "projective"
    labels: list = field(default_factory=list)

    def __post_init__(self):
        if self.kind not in ("projective", "inductive"):
            raise InvalidElement("kind is 'projective' or 'inductive'")
        if not self.members:
            raise InvalidElement("a family needs at least one member")
        if not self.labels:
            self.labels = [str(i) for i in range(len(self.members))]
        if all(isinstance(m, GeometricMonoid) for m in self.members) and self.kind == "projective":
            for i in range(len(self.members) - 1):
                if not dominates(self.members[i + 1], self.members[i]):
                    raise InvalidRadii(f"member {i + 1} does not dominate member {i}")

    def __len__(self) -> int:
        return len(self.members)

    @classmethod
    def pairs(cls, radii: Iterable) -> "NormFamily":
        radii = [Fraction(r) for r in radii]
        for r in radii:
            if not r < 1:
                raise InvalidRadii("pair families need r < 1")
        return cls([GeometricMonoid.pair(r) for r in radii], "projective", [str(r) for r in radii])


def _slopes_ok(target: GeometricMonoid, source: GeometricMonoid, c: Fraction) -> tuple[bool, bool]:
    """Whether ``|c q|_target / |q|_source`` stays bounded as ``q -> +inf`` and ``-inf``.

    On each half-line the log of the ratio is linear in ``q``, so the tails are
    decided by comparing radii exactly.
    """
    if c > 0:
        up = target.radius**c <= source.radius
        down = target.neg_radius**c >= source.neg_radius
    elif c == 0:
        up = source.radius >= 1
        down = source.neg_radius <= 1
    else:
        up = target.neg_radius**c <= source.radius
        down = target.radius**c >= source.neg_radius
    return up, down


def dominates(a: GeometricMonoid, b: GeometricMonoid) -> bool:
    """The identity ``a -> b`` is bounded, i.e. ``|q|_b <= C |q|_a`` for all q."""
    up, down = _slopes_ok(b, a, Fraction(1))
    return up and down


@dataclass
class ScalingCertificate:
    factor: Fraction
    entries: list  # (target index, source description, C)

    def constants(self) -> list[NormValue]:
        return [e[2] for e in self.entries]


def _probe_constant(target, source, c, probes) -> tuple[NormValue, Fraction | None]:
    best = NormValue.zero()
    arg = None
    for q in probes:
        q = Fraction(q)
        if q == 0 or not source.contains(q) or not target.contains(c * q):
            continue
        ratio = target.weight(c * q) / source.weight(q)
        if ratio > best or arg is None:
            best, arg = nv_max([best, ratio]), q
    return best, arg


def _system_source(target: GeometricMonoid, c: Fraction) -> Fraction:
    """A rational index ``rho`` of the pair system whose member dominates the
    pullback of ``target`` along ``q -> c q``."""
    r = target.radius
    s = target.neg_radius

    def good(rho: Fraction) -> bool:
        cand = GeometricMonoid.pair(rho)
        up, down = _slopes_ok(target, cand, c)
        return up and down

    # goodness is monotone in rho; take the coarsest dyadic level that has a
    # good index, then refine a few levels for a tighter constant
    for k in range(1, 200):
        if good(1 - Fraction(1, 2**k)):
            lo, hi = 2 ** (k + 5) // 2, 2 ** (k + 5) - 2**5
            while lo < hi:
                mid = (lo + hi) // 2
                if good(Fraction(mid, 2 ** (k + 5))):
                    hi = mid
                else:
                    lo = mid + 1
            return Fraction(hi, 2 ** (k + 5))
    raise NotBounded("no member of the pair system dominates the target", {"radii": (s.describe(), r.describe())})


def certify_scaling(family: NormFamily, factor, probes=None, sources: str = "system") -> ScalingCertificate:
    """Certify that ``q -> factor * q`` is bounded as a map of projective systems.

    For every target member a source is exhibited together with the constant
    ``C = max |factor q|_target / |q|_source`` over the probes.  Boundedness
    beyond the probes is decided exactly from the tails.  ``sources="system"``
    draws sources from the whole pair system ``{Q[1-rho, rho] : 1/2 <= rho < 1}``;
    ``sources="family"`` restricts them to the declared members.
    """
    c = Fraction(factor)
    probes = default_probes() if probes is None else [Fraction(q) for q in probes]
    entries = []
    for j, T in enumerate(family.members):
        if sources == "system":
            rho = _system_source(T, c)
            S = GeometricMonoid.pair(rho)
            C, _ = _probe_constant(T, S, c, probes)
            entries.append((j, f"pair {rho}", C))
            continue
        if sources != "family":
            raise InvalidElement("sources is 'system' or 'family'")
        best = None
        failure = None
        for i, S in enumerate(family.members):
            up, down = _slopes_ok(T, S, c)
            if not (up and down):
                if failure is None:
                    pos = [q for q in probes if q > 0]
                    neg = [q for q in probes if q < 0]
                    failure = {
                        "target": family.labels[j],
                        "source": family.labels[i],
                        "direction": "q -> +inf" if not up else "q -> -inf",
                        "probe": str(max(pos) if not up else min(neg)),
                    }
                continue
            C, _ = _probe_constant(T, S, c, probes)
            if best is None or C < best[2]:
                best = (j, family.labels[i], C)
        if best is None:
            raise NotBounded(f"no member dominates target {family.labels[j]} under q -> {c} q", failure)
        entries.append(best)
    return ScalingCertificate(c, entries)


def frobenius_family_bound(family: NormFamily, p: int, probes=None, sources: str = "system") -> dict:
    """Certificates for ``q -> p q`` and ``q -> q / p`` on a pair family."""
    for m in family.members:
        if not (m.carrier == "Q" and m.two_sided):
            raise Unsupported("frobenius_family_bound needs a family of pair monoids")
    return {
        "times_p": certify_scaling(family, p, probes, sources),
        "divide_p": certify_scaling(family, Fraction(1, p), probes, sources),
    }
