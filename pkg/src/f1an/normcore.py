"""Finite pointed normed sets, bounded maps, and the finite limits and colimits.

A finite normed set is a finite set with a distinguished basepoint of norm 0
and a norm ``X -> [0, inf)``.  When no element other than the basepoint has
norm zero the set is *normed*, otherwise it is *semi-normed*.  Morphisms are
pointed maps ``f`` with ``|f(x)| <= C |x|`` for some constant ``C``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Hashable, Iterable, Mapping

import numpy as np

from .errors import CounterexampleFound, InvalidElement, InvalidNorm, TooLarge, Unbounded
from .numeric import LOG2_TOL, NormValue, nv_max, nv_min

BASE = "*"
HOM_CAP = 10**5


class FiniteNormedSet:
    """A finite pointed set with a norm; the basepoint always has norm 0."""

    def __init__(self, elements: Iterable[Hashable], basepoint: Hashable, norms: Mapping):
        elems = list(elements)
        if basepoint not in elems:
            elems.insert(0, basepoint)
        members = set(elems)
        if len(members) != len(elems):
            raise InvalidElement("duplicate elements")
        for k in norms:
            if k not in members:
                raise InvalidElement(f"norm given for unknown element {k!r}")
        table = {}
        for x in elems:
            if x == basepoint:
                if x in norms and not NormValue.of(norms[x]).is_zero:
                    raise InvalidNorm("the basepoint must have norm 0")
                table[x] = NormValue.zero()
                continue
            if x not in norms:
                raise InvalidNorm(f"missing norm for {x!r}")
            table[x] = NormValue.of(norms[x])
        elems.remove(basepoint)
        self.basepoint = basepoint
        self.elements = (basepoint, *elems)
        self._norm = table

    def norm(self, x) -> NormValue:
        try:
            return self._norm[x]
        except KeyError:
            raise InvalidElement(f"{x!r} is not an element") from None

    norm_of = norm

    def nonbase(self) -> tuple:
        return self.elements[1:]

    @property
    def kind(self) -> str:
        if any(self._norm[x].is_zero for x in self.nonbase()):
            return "semi-normed"
        return "normed"

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __contains__(self, x) -> bool:
        return x in self._norm

    def same_as(self, other: "FiniteNormedSet") -> bool:
        """Identical carrier, basepoint and norms (exact where possible)."""
        return (
            self.basepoint == other.basepoint
            and set(self.elements) == set(other.elements)
            and all(self.norm(x) == other.norm(x) for x in self.elements)
        )

    def __repr__(self) -> str:
        body = ", ".join(f"{x!r}: {self._norm[x].describe()}" for x in self.nonbase())
        return f"FiniteNormedSet(base={self.basepoint!r}, {{{body}}})"


def point() -> FiniteNormedSet:
    return FiniteNormedSet([BASE], BASE, {})


class PointedMap:
    def __init__(self, source: FiniteNormedSet, target: FiniteNormedSet, mapping: Mapping | Callable):
        table = {}
        for x in source.elements:
            if callable(mapping):
                y = mapping(x)
            elif x in mapping:
                y = mapping[x]
            elif x == source.basepoint:
                y = target.basepoint
            else:
                raise InvalidElement(f"no image given for {x!r}")
            if y not in target:
                raise InvalidElement(f"image {y!r} of {x!r} is not in the target")
            table[x] = y
        if table[source.basepoint] != target.basepoint:
            raise InvalidElement("pointed maps send basepoint to basepoint")
        self.source = source
        self.target = target
        self.table = table

    def __call__(self, x):
        return self.table[x]

    def compose(self, inner: "PointedMap") -> "PointedMap":
        """``self o inner``."""
        return PointedMap(inner.source, self.target, lambda x: self.table[inner.table[x]])

    def is_injective(self) -> bool:
        return len(set(self.table.values())) == len(self.table)

    def is_surjective(self) -> bool:
        return set(self.table.values()) == set(self.target.elements)


def identity(X: FiniteNormedSet) -> PointedMap:
    return PointedMap(X, X, lambda x: x)


def bound_constant(f: PointedMap) -> NormValue:
    """Least ``C`` with ``|f(x)| <= C |x|``; raises Unbounded when none exists."""
    ratios = []
    for x in f.source.nonbase():
        nx = f.source.norm(x)
        ny = f.target.norm(f(x))
        if nx.is_zero:
            if not ny.is_zero:
                raise Unbounded(f"{x!r} has norm 0 but its image has norm {ny.describe()}")
            continue
        ratios.append(ny / nx)
    return nv_max(ratios)


def is_bounded(f: PointedMap) -> bool:
    try:
        bound_constant(f)
    except Unbounded:
        return False
    return True


def is_contracting(f: PointedMap) -> bool:
    return bound_constant(f) <= 1


# separation


def separation(X: FiniteNormedSet) -> tuple[FiniteNormedSet, PointedMap]:
    """Collapse the norm-zero elements onto the basepoint."""
    keep = [x for x in X.nonbase() if not X.norm(x).is_zero]
    S = FiniteNormedSet([X.basepoint, *keep], X.basepoint, {x: X.norm(x) for x in keep})
    q = PointedMap(X, S, lambda x: x if x in S else X.basepoint)
    return S, q


def factor_through_separation(f: PointedMap) -> PointedMap:
    """The unique map from the separation through which ``f`` factors.

    Needs a normed target: a bounded map then sends every norm-zero element to
    the basepoint.
    """
    if f.target.kind != "normed":
        raise InvalidNorm("the target must be normed")
    bound_constant(f)
    S, _ = separation(f.source)
    return PointedMap(S, f.target, f.table)


# limits


def product(X: FiniteNormedSet, Y: FiniteNormedSet) -> FiniteNormedSet:
    """Cartesian product with the max norm."""
    elems = [(x, y) for x in X.elements for y in Y.elements]
    base = (X.basepoint, Y.basepoint)
    norms = {(x, y): nv_max([X.norm(x), Y.norm(y)]) for x, y in elems if (x, y) != base}
    return FiniteNormedSet(elems, base, norms)


def product_projections(X, Y, P) -> tuple[PointedMap, PointedMap]:
    return PointedMap(P, X, lambda e: e[0]), PointedMap(P, Y, lambda e: e[1])


def pairing(f: PointedMap, g: PointedMap, P: FiniteNormedSet) -> PointedMap:
    """The map into the product induced by ``f`` and ``g`` with a common source."""
    return PointedMap(f.source, P, lambda t: (f(t), g(t)))


def equalizer(f: PointedMap, g: PointedMap) -> tuple[FiniteNormedSet, PointedMap]:
    """``{x : f(x) = g(x)}`` with the restricted norm."""
    X = f.source
    keep = [x for x in X.nonbase() if f(x) == g(x)]
    E = FiniteNormedSet([X.basepoint, *keep], X.basepoint, {x: X.norm(x) for x in keep})
    return E, PointedMap(E, X, lambda x: x)


def fiber_product(f: PointedMap, g: PointedMap) -> tuple[FiniteNormedSet, PointedMap, PointedMap]:
    """Pullback of ``f: X -> Z`` and ``g: Y -> Z`` inside the product."""
    P = product(f.source, g.source)
    keep = [e for e in P.nonbase() if f(e[0]) == g(e[1])]
    F = FiniteNormedSet([P.basepoint, *keep], P.basepoint, {e: P.norm(e) for e in keep})
    return F, PointedMap(F, f.source, lambda e: e[0]), PointedMap(F, g.source, lambda e: e[1])


# colimits


def coproduct(*sets: FiniteNormedSet) -> FiniteNormedSet:
    """Wedge sum: disjoint union of the sets with the basepoints glued."""
    elems = [BASE]
    norms = {}
    for i, X in enumerate(sets):
        for x in X.nonbase():
            elems.append((i, x))
            norms[(i, x)] = X.norm(x)
    return FiniteNormedSet(elems, BASE, norms)


def coproduct_injection(sets, i: int, W: FiniteNormedSet) -> PointedMap:
    X = sets[i]
    return PointedMap(X, W, lambda x: W.basepoint if x == X.basepoint else (i, x))


def copairing(maps: list[PointedMap], W: FiniteNormedSet) -> PointedMap:
    """The map out of the wedge induced by maps with a common target."""
    target = maps[0].target

    def f(e):
        if e == W.basepoint:
            return target.basepoint
        i, x = e
        return maps[i](x)

    return PointedMap(W, target, f)


class _UnionFind:
    def __init__(self, items):
        self.parent = {x: x for x in items}

    def find(self, x):
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[rb] = ra


def quotient_by_relation(Y: FiniteNormedSet, pairs, separate: bool = False) -> tuple[FiniteNormedSet, PointedMap]:
    """Quotient of ``Y`` by the equivalence generated by ``pairs``.

    A class is a frozenset of elements; its norm is the infimum over the class,
    so the basepoint class has norm 0.
    """
    uf = _UnionFind(Y.elements)
    for a, b in pairs:
        uf.union(a, b)
    members: dict = {}
    for y in Y.elements:
        members.setdefault(uf.find(y), []).append(y)
    cls_of = {}
    for group in members.values():
        c = frozenset(group)
        for y in group:
            cls_of[y] = c
    base = cls_of[Y.basepoint]
    classes = [base] + [c for c in dict.fromkeys(cls_of[y] for y in Y.elements) if c != base]
    norms = {c: nv_min(Y.norm(y) for y in c) for c in classes[1:]}
    Q = FiniteNormedSet(classes, base, norms)
    q = PointedMap(Y, Q, lambda y: cls_of[y])
    if separate:
        S, s = separation(Q)
        return S, s.compose(q)
    return Q, q


def coequalizer(f: PointedMap, g: PointedMap, separate: bool = False) -> tuple[FiniteNormedSet, PointedMap]:
    """Coequalizer of parallel maps ``X -> Y`` with the quotient norm.

    With ``separate=True`` the result is additionally separated, which is the
    coequalizer in the category of normed (rather than semi-normed) sets.
    """
    if f.source is not g.source and not f.source.same_as(g.source):
        raise InvalidElement("coequalizer needs parallel maps")
    return quotient_by_relation(f.target, [(f(x), g(x)) for x in f.source.elements], separate)


def pushout(f: PointedMap, g: PointedMap, separate: bool = False):
    """Pushout of ``f: X -> Y`` and ``g: X -> Z`` as a quotient of the wedge."""
    W = coproduct(f.target, g.target)
    il = coproduct_injection([f.target, g.target], 0, W)
    ir = coproduct_injection([f.target, g.target], 1, W)
    Q, q = coequalizer(il.compose(f), ir.compose(g), separate)
    return Q, q.compose(il), q.compose(ir)


# tensor and hom


def smash_tensor(X: FiniteNormedSet, Y: FiniteNormedSet) -> FiniteNormedSet:
    """``X x Y`` with the axes collapsed; ``|(x, y)| = |x| |y|``."""
    elems = [BASE] + [(x, y) for x in X.nonbase() for y in Y.nonbase()]
    norms = {(x, y): X.norm(x) * Y.norm(y) for x in X.nonbase() for y in Y.nonbase()}
    return FiniteNormedSet(elems, BASE, norms)


def smash_pair(X, Y, S, x, y):
    """The element of ``X ^ Y`` represented by ``(x, y)``."""
    if x == X.basepoint or y == Y.basepoint:
        return S.basepoint
    return (x, y)


def hom_count(X: FiniteNormedSet, Y: FiniteNormedSet) -> int:
    return len(Y) ** (len(X) - 1)


def internal_hom(X: FiniteNormedSet, Y: FiniteNormedSet, cap: int = HOM_CAP) -> FiniteNormedSet:
    """Bounded pointed maps ``X -> Y`` normed by their bound constant.

    An element is the tuple of images of ``X.nonbase()`` in order.
    """
    n = hom_count(X, Y)
    if n > cap:
        raise TooLarge(f"Hom would enumerate {n} maps (cap {cap})")
    xs = X.nonbase()
    elems = []
    norms = {}
    for images in itertools.product(Y.elements, repeat=len(xs)):
        ratios = []
        ok = True
        for x, y in zip(xs, images):
            nx, ny = X.norm(x), Y.norm(y)
            if nx.is_zero:
                if not ny.is_zero:
                    ok = False
                    break
                continue
            ratios.append(ny / nx)
        if not ok:
            continue
        elems.append(images)
        norms[images] = nv_max(ratios)
    base = tuple(Y.basepoint for _ in xs)
    norms.pop(base, None)
    return FiniteNormedSet(elems, base, norms)


def hom_element(X: FiniteNormedSet, Y: FiniteNormedSet, f: PointedMap) -> tuple:
    return tuple(f(x) for x in X.nonbase())


def hom_map(X: FiniteNormedSet, Y: FiniteNormedSet, h: tuple) -> PointedMap:
    return PointedMap(X, Y, dict(zip(X.nonbase(), h)))


def curry(f: PointedMap, X: FiniteNormedSet, Y: FiniteNormedSet, H: FiniteNormedSet | None = None) -> PointedMap:
    """``X ^ Y -> Z`` becomes ``X -> Hom(Y, Z)``."""
    Z = f.target
    if H is None:
        H = internal_hom(Y, Z)
    S = f.source

    def image(x):
        if x == X.basepoint:
            return H.basepoint
        return tuple(f(smash_pair(X, Y, S, x, y)) for y in Y.nonbase())

    return PointedMap(X, H, image)


def uncurry(g: PointedMap, X: FiniteNormedSet, Y: FiniteNormedSet, Z: FiniteNormedSet) -> PointedMap:
    S = smash_tensor(X, Y)
    ys = Y.nonbase()

    def image(e):
        if e == S.basepoint:
            return Z.basepoint
        x, y = e
        return g(x)[ys.index(y)]

    return PointedMap(S, Z, image)


def _logs(X: FiniteNormedSet) -> np.ndarray:
    return np.array([X.norm(x).log2 for x in X.nonbase()], dtype=float)


@lru_cache(maxsize=32)
def _map_table(cells: int, base: int, start: int, stop: int) -> np.ndarray:
    ids = np.arange(start, stop, dtype=np.int64)
    weights = base ** np.arange(cells, dtype=np.int64)
    table = ((ids[:, None] // weights[None, :]) % base).astype(np.intp)
    table.flags.writeable = False
    return table


def currying_check(X: FiniteNormedSet, Y: FiniteNormedSet, Z: FiniteNormedSet, chunk: int = 1 << 18) -> int:
    """Compare both bound constants for every map ``X ^ Y -> Z``.

    The bound of ``f`` on the smash product is ``max |f(x,y)| / (|x||y|)``;
    the bound of its curried form is ``max_x (max_y |f(x,y)| / |y|) / |x|``.
    Both depend on ``f`` only through the norms of its values, so the maps are
    enumerated by their norm profile: one row per assignment of a norm value
    of ``Z`` (or the basepoint) to each cell.  Every map is covered by exactly
    one row.  Returns the number of maps covered; a mismatch raises
    CounterexampleFound.
    """
    if X.kind != "normed" or Y.kind != "normed":
        raise InvalidNorm("currying_check needs normed X and Y")
    lx, ly = _logs(X), _logs(Y)
    z_logs = _logs(Z)
    kx, ky = len(lx), len(ly)
    cells = kx * ky
    total = len(Z) ** cells
    if cells == 0:
        return total
    levels = np.concatenate([[-np.inf], np.unique(z_logs)])
    allv = np.concatenate([lx, ly, z_logs])
    integral = bool(np.all(np.isfinite(allv)) and np.all(allv == np.round(allv)) and np.all(np.abs(allv) < 1e6))
    if integral:
        # exact integer path; the sentinel sits far below any reachable sum
        sentinel = -(10**9)
        lx = lx.astype(np.int64)
        ly = ly.astype(np.int64)
        levels = np.concatenate([[sentinel], levels[1:].astype(np.int64)])
        tol = 0
    else:
        tol = LOG2_TOL
    base = len(levels)
    cell_scale = (lx[:, None] + ly[None, :]).reshape(-1)
    y_scale = np.tile(ly, kx)
    rows = base**cells
    for start in range(0, rows, chunk):
        idx = _map_table(cells, base, start, min(rows, start + chunk))
        z = levels[idx]
        smash = (z - cell_scale).max(axis=1)
        inner = (z - y_scale).reshape(len(idx), kx, ky).max(axis=2)
        curried = (inner - lx[None, :]).max(axis=1)
        if integral:
            zero_s = smash < sentinel // 2
            zero_c = curried < sentinel // 2
            bad = np.flatnonzero((zero_s != zero_c) | (~zero_s & (smash != curried)))
        else:
            zero_s = np.isneginf(smash)
            zero_c = np.isneginf(curried)
            with np.errstate(invalid="ignore"):
                diff = np.where(zero_s & zero_c, 0.0, np.abs(smash - curried))
            bad = np.flatnonzero(~(diff <= tol))
        if bad.size:
            row = int(bad[0])
            raise CounterexampleFound(
                "currying changed a bound constant",
                {"profile_row": start + row, "levels": [int(v) for v in idx[row]],
                 "smash_log2": float(smash[row]), "curried_log2": float(curried[row])},
            )
    return total


# morphism classes


def equivalence_constants(a, b) -> tuple[NormValue, NormValue]:
    """``(N1, N2)`` with ``|k|_a <= N1 |k|_b`` and ``|k|_b <= N2 |k|_a``.

    Arguments are FiniteNormedSets on one carrier or plain norm mappings.
    Both must be normed.
    """
    na = _as_norm_table(a)
    nb = _as_norm_table(b)
    if set(na) != set(nb):
        raise InvalidElement("equivalence_constants needs one carrier")
    r1, r2 = [], []
    for k in na:
        x, y = na[k], nb[k]
        if x.is_zero or y.is_zero:
            raise InvalidNorm(f"{k!r} has norm zero; both norms must be normed")
        r1.append(x / y)
        r2.append(y / x)
    return nv_max(r1), nv_max(r2)


def _as_norm_table(a) -> dict:
    if isinstance(a, FiniteNormedSet):
        return {x: a.norm(x) for x in a.nonbase()}
    return {k: NormValue.of(v) for k, v in a.items()}


def image(f: PointedMap) -> tuple[FiniteNormedSet, PointedMap]:
    """Equalizer of the two inclusions ``Y -> Y +_X Y``."""
    _, il, ir = pushout(f, f)
    return equalizer(il, ir)


def coimage(f: PointedMap, separate: bool = True) -> tuple[FiniteNormedSet, PointedMap]:
    """Coequalizer of the kernel pair ``X x_Y X => X``."""
    _, p1, p2 = fiber_product(f, f)
    return coequalizer(p1, p2, separate)


def _iso_constants(g: PointedMap):
    """Bound constants of a bijection and of its inverse, or None if unbounded."""
    try:
        fwd = bound_constant(g)
        inv = PointedMap(g.target, g.source, {y: x for x, y in g.table.items()})
        back = bound_constant(inv)
    except Unbounded:
        return None
    return fwd, back


@dataclass(frozen=True)
class MorphismClass:
    mono: bool
    epi: bool
    strict_mono: bool
    strict_epi: bool
    strict: bool
    iso: bool
    constants: tuple | None = None


def classify_morphism(f: PointedMap) -> MorphismClass:
    """Classify a bounded map.

    Monos are the injective maps and epis the surjective ones.  A map is
    strict when the canonical map from its coimage to its image is an
    isomorphism, i.e. a bijection whose inverse is also bounded.
    """
    bound_constant(f)
    mono = f.is_injective()
    epi = f.is_surjective()
    Im, inc = image(f)
    Co, q = coimage(f)
    rep = {}
    for x in f.source.elements:
        rep.setdefault(q(x), f(x))
    canon = PointedMap(Co, Im, rep)
    strict = canon.is_injective() and canon.is_surjective() and _iso_constants(canon) is not None
    strict_mono = False
    if mono:
        to_im = PointedMap(f.source, Im, f.table)
        strict_mono = _iso_constants(to_im) is not None
    strict_epi = epi and strict
    iso = mono and epi and _iso_constants(f) is not None
    return MorphismClass(
        mono=mono,
        epi=epi,
        strict_mono=strict_mono,
        strict_epi=strict_epi,
        strict=strict,
        iso=iso,
        constants=_iso_constants(f) if iso else None,
    )
