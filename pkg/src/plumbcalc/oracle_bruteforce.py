"""Exhaustive reference implementations, used to cross-check the optimized code.

Nothing here is clever on purpose: every box is enumerated point by point
and every formula is evaluated literally with exact rationals.
"""
from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterator, Sequence

import numpy as np

from .graphcore import ChernClass, Cycle, IntersectionLattice, PlumbingError
from .lattice_opt import MinChiResult
from .relative import DominanceReport, H1Oracle, SubStructure, TowerSpec

__all__ = [
    "BoxIterator",
    "BoxTooLarge",
    "BruteTowerOracle",
    "brute_min_chi",
    "brute_dominant",
    "brute_relative_h1",
    "brute_nested",
    "MAX_POINTS",
]

MAX_POINTS = 10**8
_CHUNK = 1 << 20


class BoxTooLarge(PlumbingError):
    pass


class BoxIterator:
    """All integral points of ``[0, bound]``, lexicographically (last coordinate fastest)."""

    def __init__(self, bound: Sequence[int] | Cycle):
        if isinstance(bound, Cycle):
            if not (bound.integral and bound.effective):
                raise PlumbingError("box bound must be effective and integral")
            bound = bound.as_ints()
        self.bound = tuple(int(b) for b in bound)
        if any(b < 0 for b in self.bound):
            raise PlumbingError("box bound must be effective")

    def __len__(self) -> int:
        return math.prod(b + 1 for b in self.bound)

    def __iter__(self) -> Iterator[tuple[int, ...]]:
        n = len(self.bound)
        cur = [0] * n
        while True:
            yield tuple(cur)
            i = n - 1
            while i >= 0 and cur[i] == self.bound[i]:
                cur[i] = 0
                i -= 1
            if i < 0:
                return
            cur[i] += 1


def _guard(size: int, limit: int) -> None:
    if size > limit:
        raise BoxTooLarge(f"box has {size} points, over the limit of {limit}")


def brute_min_chi(
    lat: IntersectionLattice, base: Cycle, box: Cycle, *, limit: int = MAX_POINTS
) -> MinChiResult:
    """min chi(base + l) over 0 <= l <= box by full enumeration (numpy, int64)."""
    it = BoxIterator(box)
    size = len(it)
    _guard(size, limit)
    n = lat.n
    # 2 chi(base + l) - 2 chi(base) = l^T(-I)l + (k - 2 p).l
    m = -np.array(lat.form, dtype=np.int64).reshape(n, n)
    p = lat.pairings(base)
    lin = [Fraction(e + 2) - 2 * q for e, q in zip(lat.graph.eulers, p)]
    if any(x.denominator != 1 for x in lin):
        raise PlumbingError("base must lie in L'")
    lin = np.array([int(x) for x in lin], dtype=np.int64)
    shape = tuple(b + 1 for b in it.bound)
    best_val, best_idx = None, None
    for start in range(0, size, _CHUNK):
        flat = np.arange(start, min(size, start + _CHUNK), dtype=np.int64)
        pts = np.stack(np.unravel_index(flat, shape), axis=1).astype(np.int64) if n else np.zeros((len(flat), 0), np.int64)
        vals = np.einsum("ij,jk,ik->i", pts, m, pts) + pts @ lin
        j = int(np.argmin(vals))
        if best_val is None or vals[j] < best_val:
            best_val, best_idx = int(vals[j]), int(flat[j])
    arg = tuple(int(x) for x in np.unravel_index(best_idx, shape)) if n else ()
    return MinChiResult(lat.chi(base) + Fraction(best_val, 2), lat.cycle(arg), size)


def _min_cycle(a: Cycle, b: Cycle) -> Cycle:
    return Cycle(a.ids, tuple(min(x, y) for x, y in zip(a.coeffs, b.coeffs)))


def brute_dominant(
    lat: IntersectionLattice,
    z: Cycle,
    l: ChernClass,
    oracle: H1Oracle,
    v1=frozenset(),
    *,
    limit: int = MAX_POINTS,
) -> DominanceReport:
    """Literal check of the strict dominance inequality at every 0 < l <= Z.

    The witness is the first violating point in lexicographic order; the
    margin is the least slack over all points.
    """
    if isinstance(v1, SubStructure):
        v1 = v1.v1
    it = BoxIterator(z)
    _guard(len(it), limit)
    z1 = lat.truncate_cycle(z, v1)
    lhs = lat.chi(-l) - oracle.evaluate(z1, l)
    margin = None
    witness = None
    for pt in it:
        if not any(pt):
            continue
        x = lat.cycle(pt)
        rhs = lat.chi(-l + x) - oracle.evaluate(_min_cycle(z - x, z1), l - x)
        slack = rhs - lhs
        if margin is None or slack < margin:
            margin = slack
        if witness is None and not lhs < rhs:
            witness = x
    if margin is not None:
        margin = int(margin)
    return DominanceReport(witness is None, witness, margin)


def _nested(lat: IntersectionLattice, prefixes, k: int, a: Cycle, t: ChernClass) -> int:
    """Level-k value of the layer recursion, expanded literally."""
    idx = [frozenset(lat.index(v) for v in w) for w in prefixes]
    return _nested_ints(lat.form, lat.graph.eulers, idx, k, a.as_ints(), tuple(lat.pairing_ints(t)))


def _nested_ints(form, eulers, prefixes, k, a, p) -> int:
    # Integer form of the recursion: with p = ((t, E_v))_v,
    # chi(-t+x) - chi(-t) = chi(x) + p.x and (t - x, E_v) = p_v - (I x)_v.
    if k == 0 or not any(a):
        return 0
    n = len(a)
    a1 = tuple(c if i in prefixes[k - 1] else 0 for i, c in enumerate(a))
    best = None
    for x in BoxIterator(a):
        ix = [sum(form[i][j] * x[j] for j in range(n)) for i in range(n)]
        two_chi = -sum(x[i] * ix[i] for i in range(n)) + sum((eulers[i] + 2) * x[i] for i in range(n))
        rest = tuple(min(a[i] - x[i], a1[i]) for i in range(n))
        inner = _nested_ints(form, eulers, prefixes, k - 1, rest, tuple(p[i] - ix[i] for i in range(n)))
        val = two_chi + 2 * sum(p[i] * x[i] for i in range(n)) - 2 * inner
        if best is None or val < best:
            best = val
    assert best % 2 == 0
    return -best // 2


class BruteTowerOracle(H1Oracle):
    """The tower oracle with no memo, no component splitting and no pruning."""

    kind = "generic-recursive"
    scope = "ambient"

    def __init__(self, lat: IntersectionLattice, layers):
        super().__init__(lat)
        self.layers = [frozenset(w) for w in layers]
        self.prefixes = [frozenset().union(*self.layers[:k]) for k in range(len(self.layers) + 1)]

    def h1(self, a, p):
        cyc = self.lat.cycle(a)
        if not cyc.support() <= self.prefixes[-1]:
            raise PlumbingError("cycle outside the sub-structure")
        return _nested(self.lat, self.prefixes, len(self.layers), cyc, self.lat.from_pairings(p))


def brute_relative_h1(
    lat: IntersectionLattice, z: Cycle, l: ChernClass, oracle: H1Oracle, v1=frozenset(), *, limit: int = MAX_POINTS
) -> tuple[int, Cycle]:
    """``chi(-l') - min_{0<=l<=Z} (chi(-l'+l) - O(min(Z-l, Z_1), l'-l))`` by enumeration.

    Returns the value and the lexicographically first minimizer.
    """
    if isinstance(v1, SubStructure):
        v1 = v1.v1
    it = BoxIterator(z)
    _guard(len(it), limit)
    z1 = lat.truncate_cycle(z, v1)
    best = None
    for pt in it:
        x = lat.cycle(pt)
        val = lat.chi(-l + x) - oracle.evaluate(_min_cycle(z - x, z1), l - x)
        if best is None or val < best[0]:
            best = (val, x)
    return int(lat.chi(-l) - best[0]), best[1]


def brute_nested(
    lat: IntersectionLattice, tower: TowerSpec, z: Cycle, l: ChernClass, *, limit: int = 10**6
) -> int:
    """h^1 on Z of the natural bundle of class l' for a relatively generic tower.

    Direct expansion of the layer recursion with no memoization: the value
    at level k minimizes chi(-t+l) - h1_{k-1}(min(A-l, A_{k-1}), t-l) over
    0 <= l <= A, with h1_0 = 0.
    """
    tower.validate(lat)
    if len(tower.layers) > 3:
        raise BoxTooLarge("brute_nested handles at most 3 layers")
    _guard(len(BoxIterator(z)) ** len(tower.layers), limit)
    prefixes = [tower.prefix(k) for k in range(len(tower.layers) + 1)]
    return _nested(lat, prefixes, len(tower.layers), z, l)
