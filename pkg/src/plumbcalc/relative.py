"""Relative cohomology: bundles over a structure whose restriction to a
sub-graph is fixed.

A :class:`SubStructure` pairs a vertex subset V1 with an :class:`H1Oracle`
that knows h^1 of restricted bundles on cycles supported in V1. All the
formulas here minimize

    g(l) = chi(l) + (l', l) - oracle(min(Z - l, Z_1), l' - l)

over integral boxes, where twists are carried as pairing vectors
``p_v = (l', E_v)`` so that everything stays in integers.
"""
from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Mapping, Sequence

from .graphcore import ChernClass, Cycle, IntersectionLattice, PlumbingError
from .generic_inv import chi_sheaf
from .lattice_opt import (
    BoxQuadratic,
    _q,
    _solve_parallel,
    chi_int2,
    laufer_saturate,
    min_chi_positive,
    sublevel_box,
)

__all__ = [
    "OracleError",
    "HypothesisError",
    "StabilizationError",
    "BoxTooLargeError",
    "H1Oracle",
    "ZeroOracle",
    "GenericOracle",
    "TableOracle",
    "SubStructure",
    "TowerSpec",
    "DominanceReport",
    "RelativeH1",
    "RelgenResult",
    "SemigroupReport",
    "NaturalH1",
    "EcaDims",
    "EllipticLemmaReport",
    "parse_tower",
    "load_table_oracle",
    "relative_dominant",
    "h1_relative_bundle",
    "h0_relative_bundle",
    "relgen_natural",
    "h1_OZ_relgen",
    "pg_relgen",
    "san_member",
    "semigroup_report",
    "h1_natural",
    "relatively_rational",
    "eca_dims",
    "elliptic_dominance_check",
]

DEFAULT_MAX_BOX = 10**7


class OracleError(PlumbingError):
    """An oracle could not value a (cycle, twist) query."""

    def __init__(self, message: str, cycle=None, twist=None):
        self.cycle = cycle
        self.twist = twist
        super().__init__(message)


class HypothesisError(PlumbingError):
    def __init__(self, vertices: Sequence[str], relation: str):
        self.vertices = tuple(vertices)
        super().__init__(
            f"hypothesis not satisfied: coefficient a_v {relation} at {', '.join(self.vertices)}"
        )


class StabilizationError(RuntimeError):
    """The doubling check did not settle within the allowed rounds."""


class BoxTooLargeError(PlumbingError):
    pass


# ---------------------------------------------------------------------------
# oracles


class H1Oracle:
    """h^1 of restricted bundles on cycles supported in a fixed sub-structure.

    ``scope`` says what part of the twist a value can depend on:
    ``"none"`` (constant), ``"support"`` (only the pairings with E_v for v
    in the cycle's support) or ``"ambient"`` (the whole class).
    """

    kind = "abstract"
    scope = "ambient"

    def __init__(self, lat: IntersectionLattice):
        self.lat = lat

    def h1(self, a: tuple[int, ...], p: tuple[int, ...]) -> int:  # pragma: no cover
        raise NotImplementedError

    def evaluate(self, cycle: Cycle, twist: ChernClass) -> int:
        """h^1(A, O(twist)|A), with the twist in the ambient lattice."""
        if not (cycle.integral and cycle.effective):
            raise PlumbingError("oracle cycle must be effective and integral")
        return self.h1(cycle.as_ints(), self.lat.pairing_ints(twist))


class ZeroOracle(H1Oracle):
    kind = "zero"
    scope = "none"

    def h1(self, a, p):
        return 0


class GenericOracle(H1Oracle):
    """Values for a tower of relatively generic layers W_1, ..., W_k.

    Layer k is treated as relatively generic over W_1 u ... u W_{k-1}, so
    h^1 on a cycle A is the relative minimum formula evaluated with the
    oracle of the shorter tower. Values are additive over connected
    components of |A| and memoized per component.

    Every fresh evaluation replaces a restricted natural bundle by the
    generic bundle of the same restricted class; ``substitutions`` counts
    them (the extra hypothesis that licenses this is not checked).
    """

    kind = "generic-recursive"
    scope = "support"

    def __init__(self, lat: IntersectionLattice, layers: Sequence[Iterable[str]]):
        super().__init__(lat)
        self.layers = tuple(tuple(v for v in lat.ids if v in set(w)) for w in layers)
        if not self.layers:
            raise PlumbingError("a generic oracle needs at least one layer")
        seen: set[str] = set()
        for w in self.layers:
            if seen & set(w):
                raise PlumbingError("tower layers must be disjoint")
            seen |= set(w)
        self.vertices = frozenset(seen)
        self._idx = frozenset(lat.index(v) for v in seen)
        inner_vertices = frozenset().union(*map(set, self.layers[:-1]))
        self.inner_vertices = inner_vertices
        self.inner: H1Oracle = (
            GenericOracle(lat, self.layers[:-1]) if len(self.layers) > 1 else ZeroOracle(lat)
        )
        self._inner_idx = frozenset(lat.index(v) for v in inner_vertices)
        self._memo: dict = {}
        self.substitutions = 0

    def h1(self, a, p):
        support = [i for i, x in enumerate(a) if x]
        if not support:
            return 0
        if not self._idx.issuperset(support):
            raise OracleError(
                f"cycle outside the sub-structure: {_cycle_str(self.lat, a)}",
                cycle=a,
                twist=p,
            )
        if self._inner_idx.issuperset(support):
            return self.inner.h1(a, p)
        ids = self.lat.ids
        total = 0
        for comp in self.lat.components(ids[i] for i in support):
            idx = [self.lat.index(v) for v in comp]
            ac = [0] * len(a)
            pc = [0] * len(a)
            for i in idx:
                ac[i] = a[i]
                pc[i] = p[i]
            key = (tuple(ac), tuple(pc))
            val = self._memo.get(key)
            if val is None:
                val = self._fresh(key[0], key[1])
                self._memo[key] = val
            total += val
        return total

    def _fresh(self, a, p):
        self.substitutions += 1
        if self._inner_idx.issuperset(i for i, x in enumerate(a) if x):
            return self.inner.h1(a, p)
        val, _, _ = relative_min(
            self.lat, self.inner_vertices, self.inner, (0,) * len(a), a, p
        )
        return -val


class TableOracle(H1Oracle):
    """Explicit h^1 values keyed by (cycle, ambient twist in E*-coordinates)."""

    kind = "table"
    scope = "ambient"

    def __init__(self, lat: IntersectionLattice, entries: Mapping[tuple, int]):
        super().__init__(lat)
        self.entries = dict(entries)
        self.queries = 0

    def h1(self, a, p):
        if not any(a):
            return 0
        self.queries += 1
        key = (tuple(a), tuple(-x for x in p))
        try:
            return self.entries[key]
        except KeyError:
            estar = ",".join(f"{v}:{x}" for v, x in zip(self.lat.ids, key[1]) if x)
            raise OracleError(
                f"oracle table has no entry for cycle {{{_cycle_str(self.lat, a)}}} "
                f"with twist_estar {{{estar}}}",
                cycle=a,
                twist=key[1],
            ) from None

    def supports(self) -> frozenset[str]:
        out: set[str] = set()
        for a, _ in self.entries:
            out |= {v for v, x in zip(self.lat.ids, a) if x}
        return frozenset(out)


def _cycle_str(lat, a) -> str:
    return ",".join(f"{v}:{x}" for v, x in zip(lat.ids, a) if x)


def load_table_oracle(lat: IntersectionLattice, text: str) -> TableOracle:
    """Parse an ``h1table/1`` document."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise PlumbingError(f"oracle table: {exc.msg} at line {exc.lineno}") from None
    if not isinstance(doc, dict) or doc.get("format") != "h1table/1":
        raise PlumbingError("oracle table: expected format 'h1table/1'")
    entries = {}
    for i, e in enumerate(doc.get("entries", [])):
        try:
            a = lat.cycle(e["cycle"])
            t = e["twist_estar"]
            h1 = e["h1"]
        except (KeyError, TypeError):
            raise PlumbingError(f"oracle table: malformed entries[{i}]") from None
        if not (a.integral and a.effective):
            raise PlumbingError(f"oracle table: entries[{i}].cycle must be effective and integral")
        if isinstance(h1, bool) or not isinstance(h1, int) or h1 < 0:
            raise PlumbingError(f"oracle table: entries[{i}].h1 must be a non-negative integer")
        for v in t:
            lat.index(v)
        key = (a.as_ints(), tuple(int(t.get(v, 0)) for v in lat.ids))
        if key in entries and entries[key] != h1:
            raise PlumbingError(f"oracle table: conflicting duplicate entries[{i}]")
        entries[key] = h1
    return TableOracle(lat, entries)


# ---------------------------------------------------------------------------
# structures and towers


@dataclass(frozen=True)
class SubStructure:
    v1: frozenset
    oracle: H1Oracle

    @classmethod
    def empty(cls, lat: IntersectionLattice) -> "SubStructure":
        return cls(frozenset(), ZeroOracle(lat))

    @classmethod
    def generic(cls, lat: IntersectionLattice, v1: Iterable[str]) -> "SubStructure":
        """V1 carries a generic structure (one-layer tower)."""
        v1 = frozenset(v1)
        for v in v1:
            lat.index(v)
        if not v1:
            return cls.empty(lat)
        return cls(v1, GenericOracle(lat, [v1]))

    @classmethod
    def from_tower(cls, lat: IntersectionLattice, tower: "TowerSpec", j: int) -> "SubStructure":
        """The structure on W_1 u ... u W_{j-1}, for evaluating layer j."""
        layers = tower.layers[: j - 1]
        if not layers:
            return cls.empty(lat)
        oracle = GenericOracle(lat, layers)
        return cls(oracle.vertices, oracle)

    @classmethod
    def with_table(cls, lat: IntersectionLattice, v1: Iterable[str], oracle: TableOracle) -> "SubStructure":
        v1 = frozenset(v1)
        for v in v1:
            lat.index(v)
        stray = oracle.supports() - v1
        if stray:
            raise PlumbingError(f"oracle table mentions vertices outside the sub-graph: {sorted(stray)}")
        return cls(v1, oracle)

    def z1(self, lat: IntersectionLattice, z: Cycle) -> Cycle:
        return lat.truncate_cycle(z, self.v1)


@dataclass(frozen=True)
class TowerSpec:
    layers: tuple[tuple[str, ...], ...]

    def validate(self, lat: IntersectionLattice) -> None:
        seen: list[str] = []
        for w in self.layers:
            for v in w:
                lat.index(v)
            seen.extend(w)
        if len(seen) != len(set(seen)):
            raise PlumbingError("tower layers are not disjoint")
        if set(seen) != set(lat.ids):
            missing = sorted(set(lat.ids) - set(seen))
            raise PlumbingError(f"tower layers do not cover the graph (missing {missing})")

    def prefix(self, j: int) -> frozenset[str]:
        return frozenset(v for w in self.layers[:j] for v in w)


def parse_tower(text: str, lat: IntersectionLattice | None = None) -> TowerSpec:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise PlumbingError(f"tower: {exc.msg} at line {exc.lineno}") from None
    if not isinstance(doc, dict) or doc.get("format") != "tower/1":
        raise PlumbingError("tower: expected format 'tower/1'")
    layers = doc.get("layers")
    if not isinstance(layers, list) or not all(
        isinstance(w, list) and w and all(isinstance(v, str) for v in w) for w in layers
    ):
        raise PlumbingError("tower: 'layers' must be a list of non-empty vertex lists")
    tower = TowerSpec(tuple(tuple(w) for w in layers))
    if lat is not None:
        tower.validate(lat)
    return tower


# ---------------------------------------------------------------------------
# the evaluator


def _box_quadratic(lat: IntersectionLattice, free: tuple[int, ...]) -> BoxQuadratic:
    cache = lat.__dict__.setdefault("_bq_sub", {})
    bq = cache.get(free)
    if bq is None:
        bq = BoxQuadratic([[-lat.form[i][j] for j in free] for i in free])
        cache[free] = bq
    return bq


def relative_min(
    lat: IntersectionLattice,
    v1: Iterable[str],
    oracle: H1Oracle,
    lo: Sequence[int],
    hi: Sequence[int],
    p: Sequence[int],
    *,
    exclude_zero: bool = False,
    workers: int = 1,
    max_box: int = DEFAULT_MAX_BOX,
) -> tuple[int | None, tuple[int, ...] | None, int]:
    """min over integral lo <= l <= hi of
    ``chi(l) + p.l - oracle((hi - l)|V1, p - I l)``.

    Returns ``(value, argmin, explored)``; ties go to the lexicographically
    smallest l. Coordinates the oracle can see are enumerated, the rest are
    handed to the branch and bound.
    """
    n = lat.n
    form = lat.form
    lo = [int(x) for x in lo]
    hi = [int(x) for x in hi]
    p = [int(x) for x in p]
    if any(a > b for a, b in zip(lo, hi)) or any(a < 0 for a in lo):
        raise PlumbingError("empty or negative box")
    s1 = [lat.index(v) for v in lat.ids if v in set(v1)]
    s1 = [i for i in s1 if hi[i] > 0]
    if oracle.scope == "none" or not s1:
        seen: set[int] = set()
        s1 = []
    elif oracle.scope == "support":
        seen = set(s1)
        for i in s1:
            seen.update(j for j in range(n) if form[i][j] and j != i)
    else:
        seen = set(range(n))
    free = tuple(i for i in range(n) if i not in seen and hi[i] > lo[i])
    enum = [i for i in range(n) if i not in free]
    size = math.prod(hi[i] - lo[i] + 1 for i in enum)
    if size > max_box:
        raise BoxTooLargeError(f"{size} oracle-visible box points exceed the limit {max_box}")
    bq = _box_quadratic(lat, free) if free else None
    span = [hi[i] - lo[i] for i in free]
    k = [e + 2 for e in lat.graph.eulers]
    trivial = not s1
    best = None
    explored = 0
    for vals in itertools.product(*(range(lo[i], hi[i] + 1) for i in enum)):
        l0 = list(lo)
        for i, x in zip(enum, vals):
            l0[i] = x
        il0 = [sum(form[r][j] * l0[j] for j in range(n) if l0[j]) for r in range(n)]
        base2 = chi_int2(lat, l0) + 2 * sum(a * b for a, b in zip(p, l0))
        if bq is not None:
            b = [k[r] + 2 * p[r] - 2 * il0[r] for r in free]
            ez = exclude_zero and not any(l0)
            if workers > 1 and len(free) > 1 and size == 1 and span[0] > 0:
                v2, y, nodes = _solve_parallel(bq, b, span, ez, workers)
            else:
                v2, y, nodes = bq.solve(b, span, ez)
            explored += nodes
            if v2 is None:
                continue
            l = l0
            for i, dy in zip(free, y):
                l[i] += dy
        else:
            explored += 1
            if exclude_zero and not any(l0):
                continue
            v2, l = 0, l0
        if trivial:
            o = 0
        else:
            a = [0] * n
            for i in s1:
                a[i] = hi[i] - l[i]
            if any(a):
                il = [sum(form[r][j] * l[j] for j in range(n) if l[j]) for r in range(n)]
                if oracle.scope == "support":
                    q = [0] * n
                    for i in s1:
                        q[i] = p[i] - il[i]
                else:
                    q = [p[r] - il[r] for r in range(n)]
                o = oracle.h1(tuple(a), tuple(q))
            else:
                o = 0
        g2 = base2 + v2
        assert g2 % 2 == 0
        key = (g2 // 2 - o, tuple(l))
        if best is None or key < best:
            best = key
    if best is None:
        return None, None, explored
    return best[0], best[1], explored


# ---------------------------------------------------------------------------
# result records


def _cyc(lat, t) -> dict | None:
    return None if t is None else lat.cycle(t).as_dict()


@dataclass(frozen=True)
class DominanceReport:
    dominant: bool
    witness: Cycle | None
    margin: int | None  # None when the range 0 < l <= Z is empty

    def to_json(self) -> dict:
        return {
            "dominant": self.dominant,
            "witness": None if self.witness is None else self.witness.as_dict(),
            "margin": self.margin,
        }


@dataclass(frozen=True)
class RelativeH1:
    h1: int
    argmin: Cycle
    explored: int


@dataclass(frozen=True)
class RelgenResult:
    h1: int
    h0reg_nonempty: bool
    argmin: Cycle
    dominance: DominanceReport


@dataclass(frozen=True)
class SemigroupReport:
    member: bool
    reason: str
    witness: Cycle | None = None
    margin: int | None = None
    box: Cycle | None = None

    def to_json(self) -> dict:
        return {
            "member": self.member,
            "reason": self.reason,
            "witness": None if self.witness is None else self.witness.as_dict(),
            "margin": self.margin,
            "box": None if self.box is None else self.box.as_dict(),
        }


@dataclass(frozen=True)
class NaturalH1:
    h1: int
    saturation: ChernClass
    d: int | None
    box: Cycle


@dataclass(frozen=True)
class EcaDims:
    eca: int
    eca_rel: int
    fiber: int
    nonempty: bool

    def to_json(self) -> dict:
        return {"eca": self.eca, "eca_rel": self.eca_rel, "fiber": self.fiber, "nonempty": self.nonempty}


@dataclass(frozen=True)
class EllipticLemmaReport:
    vertex: str
    rows: tuple[tuple[int, bool, int | None], ...]
    passed: bool

    def to_json(self) -> dict:
        return {
            "vertex": self.vertex,
            "rows": [{"N": n, "dominant": d, "margin": m} for n, d, m in self.rows],
            "passed": self.passed,
        }


# ---------------------------------------------------------------------------
# operations on a fixed cycle


def _check_z(z: Cycle) -> tuple[int, ...]:
    if not (z.integral and z.effective):
        raise PlumbingError("cycle must be effective and integral")
    return z.as_ints()


def _z1(sub: SubStructure, lat, z: tuple[int, ...]) -> tuple[int, ...]:
    return tuple(x if v in sub.v1 else 0 for v, x in zip(lat.ids, z))


def relative_dominant(
    lat: IntersectionLattice, z: Cycle, l: ChernClass, sub: SubStructure, **kw
) -> DominanceReport:
    """Is (l', L) relatively dominant on Z?

    Checks ``chi(-l') - O(Z_1, l') < chi(-l'+l) - O((Z-l)_1, l'-l)`` for
    all integral 0 < l <= Z. ``margin`` is the least value of right side
    minus left side; the witness is the (lexicographically first) l where
    it is attained.
    """
    hi = _check_z(z)
    p = lat.pairing_ints(l)
    if not any(hi):
        return DominanceReport(True, None, None)
    lhs = -sub.oracle.h1(_z1(sub, lat, hi), p)
    val, arg, _ = relative_min(lat, sub.v1, sub.oracle, (0,) * lat.n, hi, p, exclude_zero=True, **kw)
    margin = val - lhs
    dominant = margin > 0
    return DominanceReport(dominant, None if dominant else lat.cycle(arg), margin)


def h1_relative_bundle(
    lat: IntersectionLattice, z: Cycle, l: ChernClass, sub: SubStructure, **kw
) -> RelativeH1:
    """``chi(-l') - min_{0<=l<=Z} (chi(-l'+l) - O((Z-l)_1, l'-l))``."""
    hi = _check_z(z)
    p = lat.pairing_ints(l)
    val, arg, explored = relative_min(lat, sub.v1, sub.oracle, (0,) * lat.n, hi, p, **kw)
    return RelativeH1(-val, lat.cycle(arg), explored)


def h0_relative_bundle(lat: IntersectionLattice, z: Cycle, l: ChernClass, sub: SubStructure, **kw) -> int:
    h0 = chi_sheaf(lat, z, l) + h1_relative_bundle(lat, z, l, sub, **kw).h1
    assert h0 >= 0
    return h0


def relgen_natural(
    lat: IntersectionLattice,
    z: Cycle,
    l: ChernClass,
    tower: TowerSpec,
    j: int | None = None,
    *,
    hypothesis: str = "positive",
    **kw,
) -> RelgenResult:
    """h^1 of the natural bundle O(l') on Z at layer j of a relatively generic tower.

    ``hypothesis`` selects the coefficient condition on W_j meet |Z|, where
    l' = -sum a_v E_v: ``"positive"`` (a_v > 0) or ``"nonzero"`` (a_v != 0).
    """
    tower.validate(lat)
    if j is None:
        j = len(tower.layers)
    if not 1 <= j <= len(tower.layers):
        raise PlumbingError(f"layer index {j} out of range")
    _check_z(z)
    outside = z.support() - tower.prefix(j)
    if outside:
        raise PlumbingError(f"cycle is not supported in the first {j} layers: {sorted(outside)}")
    top = set(tower.layers[j - 1]) & z.support()
    if hypothesis == "positive":
        bad = [v for v in lat.ids if v in top and -l[v] <= 0]
        rel = "<= 0"
    elif hypothesis == "nonzero":
        bad = [v for v in lat.ids if v in top and l[v] == 0]
        rel = "= 0"
    else:
        raise ValueError(f"unknown hypothesis {hypothesis!r}")
    if bad:
        raise HypothesisError(bad, rel)
    sub = SubStructure.from_tower(lat, tower, j)
    res = h1_relative_bundle(lat, z, l, sub, **kw)
    dom = relative_dominant(lat, z, l, sub, **kw)
    return RelgenResult(res.h1, dom.dominant, res.argmin, dom)


def h1_OZ_relgen(lat: IntersectionLattice, z: Cycle, sub: SubStructure, **kw) -> int:
    """``1 - min_{E<=l<=Z} (chi(l) - O((Z-l)_1, -l))``, summed over components of |Z|."""
    hi_all = _check_z(z)
    total = 0
    for comp in lat.components(z.support()):
        keep = set(comp)
        lo = tuple(int(v in keep) for v in lat.ids)
        hi = tuple(x if v in keep else 0 for v, x in zip(lat.ids, hi_all))
        val, _, _ = relative_min(lat, sub.v1, sub.oracle, lo, hi, (0,) * lat.n, **kw)
        total += 1 - val
    return total


def relatively_rational(lat: IntersectionLattice, z: Cycle, sub: SubStructure, **kw) -> DominanceReport:
    """The strict inequality ``-h1(O_{Z_1}) < chi(l) - h1(O_{(Z-l)_1}(-l))`` for all 0 < l <= Z.

    This is dominance of the trivial class; ``report.dominant`` is the verdict.
    """
    return relative_dominant(lat, z, lat.chern([0] * lat.n), sub, **kw)


def eca_dims(lat: IntersectionLattice, z: Cycle, l: ChernClass, sub: SubStructure, **kw) -> EcaDims:
    hi = _check_z(z)
    p = lat.pairing_ints(l)
    lz = lat.pairing(l, z)
    assert lz.denominator == 1
    lz = int(lz)
    z1 = _z1(sub, lat, hi)
    rel = sub.oracle.h1(z1, p) - sub.oracle.h1(z1, (0,) * lat.n) + lz
    h1 = h1_relative_bundle(lat, z, l, sub, **kw).h1
    h1_oz = h1_OZ_relgen(lat, z, sub, **kw)
    return EcaDims(lz, rel, lz + h1 - h1_oz, lat.lipman_contains(-l))


# ---------------------------------------------------------------------------
# statements about the whole resolution (Z large)


def _stabilized(lat: IntersectionLattice, start: Sequence[int], compute: Callable, rounds: int = 4):
    """Evaluate ``compute(box)`` on ``start`` and its doubling until two agree.

    ``compute`` returns ``(key, result)``; the result for the smaller box
    of the first agreeing pair is returned with that box.
    """
    z = tuple(max(1, int(x)) for x in start)
    key, res = compute(z)
    for _ in range(rounds):
        z2 = tuple(2 * x for x in z)
        key2, res2 = compute(z2)
        if key2 == key:
            return res, lat.cycle(z)
        z, key, res = z2, key2, res2
    raise StabilizationError(f"no stabilization up to box {lat.cycle(z).as_dict()}")


def _dominant_large(lat, l: ChernClass, sub: SubStructure, **kw):
    p = lat.pairing_ints(l)

    def run(z):
        rep = relative_dominant(lat, lat.cycle(z), l, sub, **kw)
        return (rep.dominant, rep.margin), rep

    return _stabilized(lat, sublevel_box(lat, p, 0), run)


def pg_relgen(lat: IntersectionLattice, sub: SubStructure, **kw) -> int:
    """Geometric genus of the relatively generic structure."""

    def run(z):
        v = h1_OZ_relgen(lat, lat.cycle(z), sub, **kw)
        return v, v

    val, _ = _stabilized(lat, sublevel_box(lat, [0] * lat.n, 1), run)
    return val


def semigroup_report(lat: IntersectionLattice, l: ChernClass, sub: SubStructure, **kw) -> SemigroupReport:
    """Membership of l' in the analytic semigroup.

    For l' in S' the test is relative dominance of the class -l' (the
    Chern class of O(-l')) on a large cycle.
    """
    p = lat.pairing_ints(l)
    if not any(p):
        return SemigroupReport(True, "zero class")
    if any(x > 0 for x in p):
        return SemigroupReport(False, "outside Lipman cone")
    rep, box = _dominant_large(lat, -l, sub, **kw)
    if rep.dominant:
        return SemigroupReport(True, "relatively dominant", None, rep.margin, box)
    return SemigroupReport(False, "dominance inequality fails", rep.witness, rep.margin, box)


def san_member(lat: IntersectionLattice, l: ChernClass, sub: SubStructure, **kw) -> bool:
    return semigroup_report(lat, l, sub, **kw).member


def h1_natural(lat: IntersectionLattice, l: ChernClass, sub: SubStructure, **kw) -> NaturalH1:
    """h^1(O(l')) on the whole resolution for the relatively generic structure.

    With s = s(-l') the Lipman saturation, the value is
    ``chi(-l') - chi(s) + h1(O(-s))``, plus the correction D when l' is an
    effective integral cycle.
    """
    lat.pairing_ints(l)
    s = laufer_saturate(lat, -l)
    ps = lat.pairing_ints(-s)

    def run(z):
        val, _, _ = relative_min(lat, sub.v1, sub.oracle, (0,) * lat.n, z, ps, **kw)
        return -val, -val

    t, box = _stabilized(lat, sublevel_box(lat, ps, 0), run)
    base = lat.chi(-l) - lat.chi(s)
    assert base.denominator == 1
    h1 = int(base) + t
    d = None
    if l.integral and l.effective:
        rep, _ = _dominant_large(lat, lat.chern([0] * lat.n), sub, **kw)
        d = 0 if rep.dominant else 1
        h1 += d
    return NaturalH1(h1, s, d, box)


def elliptic_dominance_check(
    lat: IntersectionLattice, v: str, nmax: int, sub: SubStructure, **kw
) -> EllipticLemmaReport:
    """Dominance of (-N E*_v, O_{X_1}) for N = 1..nmax; passes when
    dominance at any N implies dominance at N = 1."""
    lat.index(v)
    if v in sub.v1:
        raise PlumbingError(f"vertex {v!r} lies in the sub-graph")
    if nmax < 1:
        raise PlumbingError("Nmax must be at least 1")
    if min_chi_positive(lat).value < 0:
        raise PlumbingError("precondition failed: graph is neither rational nor elliptic (min chi < 0)")
    estar = lat.dual_basis(v)
    rows = []
    for n in range(1, nmax + 1):
        rep, _ = _dominant_large(lat, -n * estar, sub, **kw)
        rows.append((n, rep.dominant, rep.margin))
    passed = rows[0][1] or not any(d for _, d, _ in rows)
    return EllipticLemmaReport(v, tuple(rows), passed)
