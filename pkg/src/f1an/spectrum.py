"""Points of the spectrum of Z, interval subrings, tree export and strip evaluation.

Branch conventions: a prime branch is parameterized by ``eps`` in ``(0, inf]``,
where ``inf`` is the residue seminorm (``|n| = 0`` if ``p | n``, else 1); the
archimedean branch by ``eps`` in ``(0, 1]``; the trivial norm sits at the
centre.  Along each branch a point is drawn at position ``t`` in ``(0, 1]``
with ``t = eps / (1 + eps)`` on prime branches and ``t = eps`` on the
archimedean branch.
"""

from __future__ import annotations

import cmath
import hashlib
import json
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Mapping

from .errors import CounterexampleFound, InternalError, InvalidElement, InvalidRadii
from .numeric import NormValue
from .scalars import _check_prime

INF = math.inf


def _eps(e):
    if e is None or e == INF or e == "inf":
        return INF
    if isinstance(e, float):
        return e
    return Fraction(e)


@dataclass(frozen=True)
class SpectrumPoint:
    branch: str  # "trivial", "prime" or "arch"
    p: int | None = None
    eps: object = None

    def __post_init__(self):
        if self.branch == "trivial":
            return
        if self.branch == "prime":
            _check_prime(self.p)
            e = _eps(self.eps)
            if not e > 0:
                raise InvalidRadii("prime points need eps in (0, inf]")
            object.__setattr__(self, "eps", e)
            return
        if self.branch == "arch":
            e = _eps(self.eps)
            if not 0 < e <= 1:
                raise InvalidRadii("archimedean points need eps in (0, 1]")
            object.__setattr__(self, "eps", e)
            return
        raise InvalidElement(f"unknown branch {self.branch!r}")

    @property
    def label(self) -> str:
        if self.branch == "trivial":
            return "trivial"
        e = "inf" if self.eps == INF else str(self.eps)
        return f"{self.branch}:{self.p}:{e}" if self.branch == "prime" else f"arch:{e}"

    def position(self) -> float:
        """Distance from the centre along the branch, in ``[0, 1]``."""
        if self.branch == "trivial":
            return 0.0
        if self.branch == "arch":
            return float(self.eps)
        if self.eps == INF:
            return 1.0
        return float(self.eps / (1 + self.eps))


def Trivial() -> SpectrumPoint:
    return SpectrumPoint("trivial")


def Prime(p: int, eps=1) -> SpectrumPoint:
    return SpectrumPoint("prime", p, eps)


def Arch(eps=1) -> SpectrumPoint:
    return SpectrumPoint("arch", None, eps)


def parse_point(text: str) -> SpectrumPoint:
    """``trivial``, ``prime:P:EPS`` (EPS may be ``inf``) or ``arch:EPS``."""
    parts = text.split(":")
    try:
        if parts[0] == "trivial" and len(parts) == 1:
            return Trivial()
        if parts[0] == "prime" and len(parts) == 3:
            return Prime(int(parts[1]), parts[2] if parts[2] == "inf" else Fraction(parts[2]))
        if parts[0] == "arch" and len(parts) == 2:
            return Arch(Fraction(parts[1]))
    except (ValueError, ZeroDivisionError):
        pass
    raise InvalidElement(f"cannot parse point {text!r}")


def eval_point(pt: SpectrumPoint, n: int) -> NormValue:
    if n == 0:
        return NormValue.zero()
    if pt.branch == "trivial":
        return NormValue.one()
    if pt.branch == "arch":
        return NormValue.of(abs(n)) ** pt.eps
    p = pt.p
    v = 0
    m = abs(n)
    while m % p == 0:
        m //= p
        v += 1
    if pt.eps == INF:
        return NormValue.zero() if v else NormValue.one()
    if v == 0:
        return NormValue.one()
    return NormValue.of(p) ** (-v * pt.eps)


@dataclass
class PointReport:
    label: str
    pairs: int
    samples: int


def validate_point(pt, samples: Iterable[int]) -> PointReport:
    """Check multiplicativity on all sample pairs and the boundedness clause.

    ``pt`` may also be a mapping ``n -> value`` or a callable, which is how a
    fabricated table is checked; such a table is held to the non-archimedean
    clause ``|n| <= 1``.
    """
    samples = sorted(set(int(s) for s in samples))
    if isinstance(pt, SpectrumPoint):
        f: Callable = lambda n: eval_point(pt, n)
        label, arch = pt.label, pt.branch == "arch"
    elif isinstance(pt, Mapping):
        table = {int(k): NormValue.of(v) for k, v in pt.items()}
        f = lambda n: table[n]
        label, arch = "table", False
    else:
        f, label, arch = pt, "callable", False
    cache: dict = {}

    def val(n):
        if n not in cache:
            cache[n] = f(n)
        return cache[n]

    for n in samples:
        v = val(n)
        bound = NormValue.of(abs(n)) if arch else NormValue.one()
        if n != 0 and not v <= bound:
            raise CounterexampleFound("boundedness fails", {"point": label, "n": n, "value": v.describe()})
    pairs = 0
    for i, a in enumerate(samples):
        for b in samples[i:]:
            try:
                lhs = val(a * b)
            except KeyError:
                continue
            rhs = val(a) * val(b)
            pairs += 1
            if lhs != rhs:
                raise CounterexampleFound(
                    "multiplicativity fails",
                    {"point": label, "a": a, "b": b, "|ab|": lhs.describe(), "|a||b|": rhs.describe()},
                )
    return PointReport(label, pairs, len(samples))


@dataclass(frozen=True)
class IntervalRingSpec:
    """``kind`` is ``padic`` (Q_p with eps in (r1, r2)), ``zp`` (Z_p, where the
    lower endpoint collapses to 0) or ``real``."""

    kind: str
    r1: Fraction
    r2: Fraction
    p: int | None = None
    closed_left: bool = False
    closed_right: bool = False

    def __post_init__(self):
        if self.kind not in ("padic", "zp", "real"):
            raise InvalidElement(f"unknown interval kind {self.kind!r}")
        if self.kind != "real":
            _check_prime(self.p)
        object.__setattr__(self, "r1", Fraction(self.r1))
        object.__setattr__(self, "r2", Fraction(self.r2))
        if not 0 <= self.r1 < self.r2:
            raise InvalidRadii("need 0 <= r1 < r2")

    @property
    def label(self) -> str:
        head = "real" if self.kind == "real" else f"{self.kind}:{self.p}"
        return f"{head}:{self.r1}:{self.r2}"

    def effective(self) -> tuple[Fraction, Fraction, bool, bool]:
        if self.kind == "zp":
            return Fraction(0), self.r2, True, self.closed_right
        return self.r1, self.r2, self.closed_left, self.closed_right

    def _in(self, e) -> bool:
        lo, hi, cl, cr = self.effective()
        above = e >= lo if cl else e > lo
        below = e <= hi if cr else e < hi
        return above and below

    def contains(self, pt: SpectrumPoint) -> bool:
        if pt.branch == "trivial":
            # eps = 0 on every branch
            return self._in(Fraction(0))
        if self.kind == "real":
            return pt.branch == "arch" and self._in(pt.eps)
        return pt.branch == "prime" and pt.p == self.p and self._in(pt.eps)


def parse_overlay(text: str) -> IntervalRingSpec:
    """``padic:P:R1:R2``, ``zp:P:R1:R2`` or ``real:R1:R2``."""
    parts = text.split(":")
    try:
        if parts[0] in ("padic", "zp") and len(parts) == 4:
            return IntervalRingSpec(parts[0], Fraction(parts[2]), Fraction(parts[3]), int(parts[1]))
        if parts[0] == "real" and len(parts) == 3:
            return IntervalRingSpec("real", Fraction(parts[1]), Fraction(parts[2]))
    except (ValueError, ZeroDivisionError):
        pass
    raise InvalidElement(f"cannot parse overlay {text!r}")


def primes_up_to(n: int) -> list[int]:
    if n < 2:
        return []
    sieve = bytearray([1]) * (n + 1)
    sieve[0:2] = b"\x00\x00"
    for i in range(2, int(n**0.5) + 1):
        if sieve[i]:
            sieve[i * i :: i] = bytearray(len(sieve[i * i :: i]))
    return [i for i in range(n + 1) if sieve[i]]


def branch_points(branch: str, samples: int, p: int | None = None) -> list[SpectrumPoint]:
    """``samples`` points; prime branches use ``eps_k = k / (S - k)`` and end at
    ``eps = inf``, the archimedean branch uses ``eps_k = k / S``."""
    S = samples
    if S < 1:
        raise InvalidElement("need at least one sample per branch")
    if branch == "arch":
        return [Arch(Fraction(k, S)) for k in range(1, S + 1)]
    return [Prime(p, Fraction(k, S - k) if k < S else INF) for k in range(1, S + 1)]


def _eps_str(e) -> str:
    return "inf" if e == INF else str(e)


def tree_points(max_prime: int, samples: int) -> list[SpectrumPoint]:
    pts = [Trivial()]
    for p in primes_up_to(max_prime):
        pts.extend(branch_points("prime", samples, p))
    pts.extend(branch_points("arch", samples))
    return pts


def _overlay_span(spec: IntervalRingSpec) -> tuple[float, float]:
    lo, hi, _, _ = spec.effective()
    if spec.kind == "real":
        return float(lo), float(min(hi, 1))
    return float(lo / (1 + lo)), float(hi / (1 + hi))


def _tree(max_prime: int, samples: int, overlays: list) -> dict:
    branches = []
    labels = [(str(p), "prime", p) for p in primes_up_to(max_prime)] + [("inf", "arch", None)]
    for label, kind, p in labels:
        pts = branch_points(kind, samples, p)
        entry = {
            "label": label,
            "kind": kind,
            "p": p,
            "samples": [{"eps": _eps_str(pt.eps), "t": round(pt.position(), 6)} for pt in pts],
            "overlays": [],
        }
        for spec in overlays:
            if (spec.kind == "real") != (kind == "arch") or (kind == "prime" and spec.p != p):
                continue
            lo, hi = _overlay_span(spec)
            entry["overlays"].append(
                {
                    "spec": spec.label,
                    "t_range": [round(lo, 6), round(hi, 6)],
                    "members": [_eps_str(pt.eps) for pt in pts if spec.contains(pt)],
                }
            )
        branches.append(entry)
    return {"center": {"label": "trivial"}, "max_prime": max_prime, "samples": samples, "branches": branches}


def _angle(label: str) -> float:
    h = hashlib.sha256(label.encode()).hexdigest()
    return (int(h[:8], 16) % 3600) / 10.0


def _svg(doc: dict) -> str:
    size, c, length = 400, 200.0, 160.0
    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" viewBox="0 0 {size} {size}">',
        f'<circle cx="{c:.2f}" cy="{c:.2f}" r="4.00" fill="black"/>',
    ]
    for br in doc["branches"]:
        a = math.radians(_angle(br["label"]))
        dx, dy = math.cos(a), math.sin(a)

        def at(t):
            return c + length * t * dx, c + length * t * dy

        x1, y1 = at(1.0)
        out.append(f'<line x1="{c:.2f}" y1="{c:.2f}" x2="{x1:.2f}" y2="{y1:.2f}" stroke="gray" stroke-width="1.50"/>')
        for ov in br["overlays"]:
            lo, hi = ov["t_range"]
            xa, ya = at(lo)
            xb, yb = at(hi)
            out.append(
                f'<line x1="{xa:.2f}" y1="{ya:.2f}" x2="{xb:.2f}" y2="{yb:.2f}" stroke="crimson" stroke-width="5.00" opacity="0.60"/>'
            )
        for s in br["samples"]:
            x, y = at(s["t"])
            out.append(f'<circle cx="{x:.2f}" cy="{y:.2f}" r="2.50" fill="steelblue"/>')
        lx, ly = at(1.12)
        name = "R" if br["kind"] == "arch" else f"p={br['label']}"
        out.append(f'<text x="{lx:.2f}" y="{ly:.2f}" font-size="12" text-anchor="middle">{name}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def export_tree(max_prime: int = 5, samples: int = 5, overlays: Iterable = (), fmt: str = "json") -> str:
    """Deterministic JSON or SVG rendering of the sampled tree."""
    overlays = [parse_overlay(o) if isinstance(o, str) else o for o in overlays]
    doc = _tree(max_prime, samples, overlays)
    if fmt == "json":
        return json.dumps(doc, sort_keys=True, indent=2) + "\n"
    if fmt == "svg":
        return _svg(doc)
    raise InvalidElement("format is 'json' or 'svg'")


def complex_eval(f, z: complex) -> complex:
    """``sum a_q exp(q z)`` for ``Re z < 0``, checked against the L1 norm at ``exp(Re z)``."""
    z = complex(z)
    if not z.real < 0:
        raise InvalidRadii("need Re z < 0")
    terms = _complex_terms(f)
    value = sum((a * cmath.exp(q * z) for q, a in terms), 0j)
    rho = math.exp(z.real)
    bound = math.fsum(abs(a) * rho ** float(q) for q, a in terms)
    if abs(value) > bound + 1e-9:
        raise InternalError(f"|f(z)| = {abs(value)} exceeds the L1 bound {bound}")
    return value


def _complex_terms(f) -> list[tuple[Fraction, complex]]:
    from .basechange import F1Element

    if isinstance(f, F1Element):
        return [(Fraction(q), complex(c.value)) for q, c in f.support.items()]
    return [(Fraction(q), complex(a)) for q, a in f.items() if a]


def l1_at(f, rho: float) -> float:
    return math.fsum(abs(a) * rho ** float(q) for q, a in _complex_terms(f))
