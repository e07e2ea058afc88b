"""Plumbing graphs and their intersection lattices, in exact arithmetic.

Everything here is exact: determinants and inverses are computed with
fraction-free (Bareiss) elimination over Python integers, and rational
coordinates are :class:`fractions.Fraction`.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

__all__ = [
    "PlumbingError",
    "GraphSyntaxError",
    "GraphStructureError",
    "NotNegativeDefiniteError",
    "Vertex",
    "PlumbingGraph",
    "Cycle",
    "ChernClass",
    "IntersectionLattice",
    "parse_graph",
    "graph_to_json",
    "build_lattice",
    "bareiss",
    "solve_exact",
]

GRAPH_FORMAT = "plumbing/1"


class PlumbingError(ValueError):
    """Base class for all input errors raised by this package."""


class GraphSyntaxError(PlumbingError):
    """The graph document is malformed (bad JSON, wrong field types)."""

    def __init__(self, message: str, location: str = ""):
        self.location = location
        super().__init__(f"{location}: {message}" if location else message)


class GraphStructureError(PlumbingError):
    """The graph is well formed but is not a valid plumbing tree."""

    def __init__(self, message: str, location: str = ""):
        self.location = location
        super().__init__(f"{location}: {message}" if location else message)


class NotNegativeDefiniteError(PlumbingError):
    def __init__(self, minor_index: int, minor_value: int):
        self.minor_index = minor_index
        self.minor_value = minor_value
        super().__init__(
            f"not negative definite: leading minor {minor_index} of -I is {minor_value}"
        )


# ---------------------------------------------------------------------------
# exact linear algebra


def bareiss(matrix: Sequence[Sequence[int]]) -> list[int]:
    """Leading principal minors of an integer matrix, by Bareiss elimination.

    Returns ``[d_1, ..., d_n]`` where ``d_k`` is the k-th leading principal
    minor. Elimination stops (and the list is truncated) at the first zero
    pivot, since no row exchanges are performed.
    """
    a = [list(map(int, row)) for row in matrix]
    n = len(a)
    minors: list[int] = []
    prev = 1
    for k in range(n):
        pivot = a[k][k]
        minors.append(pivot)
        if pivot == 0:
            break
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * pivot - a[i][k] * a[k][j]) // prev
            a[i][k] = 0
        prev = pivot
    return minors


def solve_exact(
    matrix: Sequence[Sequence[int]], rhs: Sequence[Sequence[int]]
) -> tuple[int, list[list[Fraction]]]:
    """Solve ``matrix @ X = rhs`` exactly for an integer system.

    Forward elimination is fraction-free with partial pivoting on nonzero
    entries; back substitution divides once per entry. Returns
    ``(det, X)``; raises ``ZeroDivisionError`` for singular input.
    """
    n = len(matrix)
    m = len(rhs[0]) if n else 0
    a = [list(map(int, matrix[i])) + list(map(int, rhs[i])) for i in range(n)]
    prev = 1
    sign = 1
    for k in range(n):
        piv_row = next((r for r in range(k, n) if a[r][k] != 0), None)
        if piv_row is None:
            raise ZeroDivisionError("singular matrix")
        if piv_row != k:
            a[k], a[piv_row] = a[piv_row], a[k]
            sign = -sign
        pivot = a[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, n + m):
                a[i][j] = (a[i][j] * pivot - a[i][k] * a[k][j]) // prev
            a[i][k] = 0
        prev = pivot
    det = sign * prev if n else 1
    x = [[Fraction(0)] * m for _ in range(n)]
    for col in range(m):
        for i in range(n - 1, -1, -1):
            acc = Fraction(a[i][n + col])
            for j in range(i + 1, n):
                acc -= a[i][j] * x[j][col]
            x[i][col] = acc / a[i][i]
    return det, x


# ---------------------------------------------------------------------------
# graphs


@dataclass(frozen=True)
class Vertex:
    id: str
    euler: int
    genus: int = 0


@dataclass(frozen=True)
class PlumbingGraph:
    """A decorated plumbing graph. Vertex order fixes the matrix order."""

    vertices: tuple[Vertex, ...]
    edges: tuple[tuple[str, str], ...]

    @property
    def ids(self) -> tuple[str, ...]:
        return tuple(v.id for v in self.vertices)

    @property
    def eulers(self) -> tuple[int, ...]:
        return tuple(v.euler for v in self.vertices)

    def __len__(self) -> int:
        return len(self.vertices)

    def validate(self, forest: bool = False) -> None:
        """Check the structural invariants; raise GraphStructureError."""
        seen: dict[str, int] = {}
        for i, v in enumerate(self.vertices):
            if v.id in seen:
                raise GraphStructureError(f"duplicate vertex id {v.id!r}", f"vertices[{i}]")
            seen[v.id] = i
            if v.genus != 0:
                raise GraphStructureError(
                    f"vertex {v.id!r} has genus {v.genus}; only genus 0 is supported",
                    f"vertices[{i}].genus",
                )
        pairs = set()
        for i, (a, b) in enumerate(self.edges):
            for end in (a, b):
                if end not in seen:
                    raise GraphStructureError(f"unknown vertex {end!r}", f"edges[{i}]")
            if a == b:
                raise GraphStructureError(f"self-loop at {a!r}", f"edges[{i}]")
            key = frozenset((a, b))
            if key in pairs:
                raise GraphStructureError(f"not a tree: repeated edge {a!r}-{b!r}", f"edges[{i}]")
            pairs.add(key)
        if not self.vertices:
            if not forest:
                raise GraphStructureError("graph has no vertices", "vertices")
            return
        comps = self.components()
        n_comp = len(comps)
        if len(self.edges) != len(self.vertices) - n_comp:
            raise GraphStructureError("not a tree: graph contains a cycle", "edges")
        if not forest and n_comp != 1:
            raise GraphStructureError("not a tree: graph is disconnected", "edges")

    def neighbours(self) -> dict[str, list[str]]:
        adj: dict[str, list[str]] = {v.id: [] for v in self.vertices}
        for a, b in self.edges:
            adj[a].append(b)
            adj[b].append(a)
        return adj

    def components(self, subset: Iterable[str] | None = None) -> list[tuple[str, ...]]:
        """Connected components of the subgraph induced on ``subset``.

        Components are listed in file order of their first vertex, and each
        component's vertices in file order.
        """
        keep = set(self.ids) if subset is None else set(subset)
        adj = self.neighbours()
        order = {vid: i for i, vid in enumerate(self.ids)}
        seen: set[str] = set()
        out = []
        for vid in self.ids:
            if vid not in keep or vid in seen:
                continue
            stack, comp = [vid], []
            seen.add(vid)
            while stack:
                u = stack.pop()
                comp.append(u)
                for w in adj[u]:
                    if w in keep and w not in seen:
                        seen.add(w)
                        stack.append(w)
            out.append(tuple(sorted(comp, key=order.__getitem__)))
        return out

    def induced(self, subset: Iterable[str]) -> "PlumbingGraph":
        keep = set(subset)
        verts = tuple(v for v in self.vertices if v.id in keep)
        edges = tuple((a, b) for a, b in self.edges if a in keep and b in keep)
        return PlumbingGraph(verts, edges)


def parse_graph(text: str) -> PlumbingGraph:
    """Parse and validate a ``plumbing/1`` JSON document."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise GraphSyntaxError(exc.msg, f"line {exc.lineno} column {exc.colno}") from None
    if not isinstance(doc, dict):
        raise GraphSyntaxError("top level must be a JSON object")
    fmt = doc.get("format", GRAPH_FORMAT)
    if fmt != GRAPH_FORMAT:
        raise GraphSyntaxError(f"unsupported format {fmt!r}", "format")
    raw_vertices = doc.get("vertices")
    if not isinstance(raw_vertices, list):
        raise GraphSyntaxError("missing or non-list 'vertices'", "vertices")
    vertices = []
    for i, rv in enumerate(raw_vertices):
        loc = f"vertices[{i}]"
        if not isinstance(rv, dict):
            raise GraphSyntaxError("vertex must be an object", loc)
        vid = rv.get("id")
        if not isinstance(vid, str) or not vid:
            raise GraphSyntaxError("vertex id must be a non-empty string", loc + ".id")
        euler = rv.get("euler")
        if isinstance(euler, bool) or not isinstance(euler, int):
            raise GraphSyntaxError("euler must be an integer", loc + ".euler")
        genus = rv.get("genus", 0)
        if isinstance(genus, bool) or not isinstance(genus, int) or genus < 0:
            raise GraphSyntaxError("genus must be a non-negative integer", loc + ".genus")
        vertices.append(Vertex(vid, euler, genus))
    raw_edges = doc.get("edges", [])
    if not isinstance(raw_edges, list):
        raise GraphSyntaxError("'edges' must be a list", "edges")
    edges = []
    for i, re_ in enumerate(raw_edges):
        if (
            not isinstance(re_, list)
            or len(re_) != 2
            or not all(isinstance(x, str) for x in re_)
        ):
            raise GraphSyntaxError("edge must be a pair of vertex ids", f"edges[{i}]")
        edges.append((re_[0], re_[1]))
    g = PlumbingGraph(tuple(vertices), tuple(edges))
    g.validate()
    return g


def graph_to_json(g: PlumbingGraph) -> str:
    """Canonical serialization (stable key order, no whitespace variance)."""
    doc = {
        "format": GRAPH_FORMAT,
        "vertices": [{"id": v.id, "euler": v.euler, "genus": v.genus} for v in g.vertices],
        "edges": [list(e) for e in g.edges],
    }
    return json.dumps(doc, sort_keys=True, separators=(",", ":"))


# ---------------------------------------------------------------------------
# cycles and Chern classes


def _frac_str(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


@dataclass(frozen=True)
class Cycle:
    """A rational cycle sum(n_v E_v), coordinates in lattice vertex order."""

    ids: tuple[str, ...]
    coeffs: tuple[Fraction, ...]

    def __post_init__(self):
        if len(self.ids) != len(self.coeffs):
            raise ValueError("ids/coeffs length mismatch")
        object.__setattr__(self, "coeffs", tuple(Fraction(c) for c in self.coeffs))

    @classmethod
    def zero(cls, ids: Sequence[str]):
        return cls(tuple(ids), (Fraction(0),) * len(ids))

    @classmethod
    def from_dict(cls, ids: Sequence[str], coeffs: Mapping[str, object]):
        unknown = set(coeffs) - set(ids)
        if unknown:
            raise PlumbingError(f"unknown vertices {sorted(unknown)}")
        return cls(tuple(ids), tuple(Fraction(coeffs.get(v, 0)) for v in ids))

    def __getitem__(self, vid: str) -> Fraction:
        return self.coeffs[self.ids.index(vid)]

    def __len__(self) -> int:
        return len(self.coeffs)

    @property
    def integral(self) -> bool:
        return all(c.denominator == 1 for c in self.coeffs)

    @property
    def effective(self) -> bool:
        return all(c >= 0 for c in self.coeffs)

    def support(self) -> frozenset[str]:
        return frozenset(v for v, c in zip(self.ids, self.coeffs) if c != 0)

    def as_ints(self) -> tuple[int, ...]:
        if not self.integral:
            raise PlumbingError("cycle is not integral")
        return tuple(int(c) for c in self.coeffs)

    def as_dict(self, nonzero: bool = False) -> dict[str, str]:
        return {
            v: _frac_str(c) for v, c in zip(self.ids, self.coeffs) if c != 0 or not nonzero
        }

    def _check(self, other: "Cycle") -> None:
        if self.ids != other.ids:
            raise PlumbingError("dimension mismatch: cycles live on different lattices")

    def _result_type(self, other):
        return ChernClass if isinstance(self, ChernClass) or isinstance(other, ChernClass) else Cycle

    def __add__(self, other: "Cycle"):
        self._check(other)
        return self._result_type(other)(self.ids, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other: "Cycle"):
        self._check(other)
        return self._result_type(other)(self.ids, tuple(a - b for a, b in zip(self.coeffs, other.coeffs)))

    def __neg__(self):
        return type(self)(self.ids, tuple(-a for a in self.coeffs))

    def __mul__(self, k):
        return type(self)(self.ids, tuple(a * k for a in self.coeffs))

    __rmul__ = __mul__

    def __le__(self, other: "Cycle") -> bool:
        self._check(other)
        return all(a <= b for a, b in zip(self.coeffs, other.coeffs))

    def __ge__(self, other: "Cycle") -> bool:
        self._check(other)
        return all(a >= b for a, b in zip(self.coeffs, other.coeffs))

    def __repr__(self) -> str:
        body = ", ".join(f"{v}: {s}" for v, s in self.as_dict(nonzero=True).items())
        return f"{type(self).__name__}({{{body}}})"


class ChernClass(Cycle):
    """An element of L' written in the E_v basis (rational coordinates)."""


# ---------------------------------------------------------------------------
# lattices


@dataclass(eq=False)
class IntersectionLattice:
    """Intersection form of a (possibly disconnected) plumbing forest.

    ``form[i][j] = (E_i, E_j)``; ``inverse`` is the exact inverse matrix;
    ``det_h = |det(-I)|`` is the order of L'/L; ``zk`` is Z_K.
    """

    graph: PlumbingGraph
    form: tuple[tuple[int, ...], ...] = field(init=False)
    inverse: tuple[tuple[Fraction, ...], ...] = field(init=False)
    det_h: int = field(init=False)
    zk: ChernClass = field(init=False)
    minors: tuple[int, ...] = field(init=False)

    def __post_init__(self):
        g = self.graph
        ids = g.ids
        n = len(ids)
        index = {v: i for i, v in enumerate(ids)}
        form = [[0] * n for _ in range(n)]
        for i, v in enumerate(g.vertices):
            form[i][i] = v.euler
        for a, b in g.edges:
            form[index[a]][index[b]] = 1
            form[index[b]][index[a]] = 1
        self.form = tuple(tuple(r) for r in form)
        self._index = index

        minors = bareiss([[-x for x in row] for row in form])
        for k, d in enumerate(minors):
            if d <= 0:
                raise NotNegativeDefiniteError(k + 1, d)
        self.minors = tuple(minors)
        self.det_h = minors[-1] if n else 1

        # one elimination gives both I^{-1} and Z_K (I z = e_v + 2)
        rhs = [[int(i == j) for j in range(n)] + [form[i][i] + 2] for i in range(n)]
        _, sol = solve_exact(form, rhs) if n else (1, [])
        self.inverse = tuple(tuple(sol[i][:n]) for i in range(n))
        self.zk = ChernClass(ids, tuple(sol[i][n] for i in range(n)))
        self._sub_cache: dict[frozenset, IntersectionLattice] = {}

    # -- basic accessors -------------------------------------------------

    @property
    def ids(self) -> tuple[str, ...]:
        return self.graph.ids

    @property
    def n(self) -> int:
        return len(self.graph.vertices)

    def index(self, vid: str) -> int:
        try:
            return self._index[vid]
        except KeyError:
            raise PlumbingError(f"unknown vertex {vid!r}") from None

    def E(self, vid: str | None = None) -> Cycle:
        """The curve E_v, or the reduced exceptional cycle E when ``vid`` is None."""
        if vid is None:
            return Cycle(self.ids, (Fraction(1),) * self.n)
        i = self.index(vid)
        return Cycle(self.ids, tuple(Fraction(int(j == i)) for j in range(self.n)))

    def cycle(self, coeffs: Mapping[str, object] | Sequence | None = None) -> Cycle:
        if coeffs is None:
            return Cycle.zero(self.ids)
        if isinstance(coeffs, Mapping):
            return Cycle.from_dict(self.ids, coeffs)
        return Cycle(self.ids, tuple(coeffs))

    def reduced(self, vertices: Iterable[str]) -> Cycle:
        """E_I, the reduced cycle of a vertex subset."""
        keep = set(vertices)
        for v in keep:
            self.index(v)
        return Cycle(self.ids, tuple(Fraction(int(v in keep)) for v in self.ids))

    # -- Chern classes ---------------------------------------------------

    def chern(self, coeffs: Mapping[str, object] | Sequence) -> ChernClass:
        """Chern class from rational E-coordinates; checks membership in L'."""
        c = self.cycle(coeffs)
        x = ChernClass(c.ids, c.coeffs)
        if any(p.denominator != 1 for p in self._pair_vector(x.coeffs)):
            raise PlumbingError(f"{x!r} is not in L' (non-integral pairing with some E_v)")
        return x

    def chern_from_estar(self, coords: Mapping[str, int] | Sequence[int]) -> ChernClass:
        """sum_v a_v E*_v for integer a_v."""
        if isinstance(coords, Mapping):
            for v in coords:
                self.index(v)
            a = [int(coords.get(v, 0)) for v in self.ids]
        else:
            a = [int(x) for x in coords]
        return self.from_pairings([-x for x in a])

    def from_pairings(self, p: Sequence[int]) -> ChernClass:
        """The unique l' with (l', E_v) = p_v."""
        n = self.n
        inv = self.inverse
        return ChernClass(
            self.ids, tuple(sum((inv[i][j] * p[j] for j in range(n)), Fraction(0)) for i in range(n))
        )

    def estar_coords(self, x: Cycle) -> tuple[int, ...]:
        """Integer a_v with x = sum a_v E*_v."""
        return tuple(-int(p) for p in self.pairings(x))

    def dual_basis(self, vid: str) -> ChernClass:
        """E*_v: column v of -I^{-1}, so that (E*_v, E_w) = -delta_vw."""
        j = self.index(vid)
        return ChernClass(self.ids, tuple(-self.inverse[i][j] for i in range(self.n)))

    # -- the form --------------------------------------------------------

    def _pair_vector(self, coeffs) -> list[Fraction]:
        f = self.form
        return [sum((f[i][j] * coeffs[j] for j in range(self.n)), Fraction(0)) for i in range(self.n)]

    def pairings(self, x: Cycle) -> tuple[Fraction, ...]:
        """((x, E_v))_v."""
        self._own(x)
        return tuple(self._pair_vector(x.coeffs))

    def pairing_ints(self, x: Cycle) -> tuple[int, ...]:
        p = self.pairings(x)
        if any(q.denominator != 1 for q in p):
            raise PlumbingError(f"{x!r} is not in L'")
        return tuple(int(q) for q in p)

    def pairing(self, a: Cycle, b: Cycle) -> Fraction:
        self._own(a)
        self._own(b)
        pa = self._pair_vector(a.coeffs)
        return sum((x * y for x, y in zip(pa, b.coeffs)), Fraction(0))

    def chi(self, x: Cycle) -> Fraction:
        """chi(x) = -(x, x - Z_K) / 2."""
        return -self.pairing(x, x - self.zk) / 2

    def _own(self, x: Cycle) -> None:
        if x.ids != self.ids:
            raise PlumbingError("dimension mismatch: element belongs to a different lattice")

    # -- classes, cones, restriction ----------------------------------

    def class_rep(self, x: ChernClass) -> ChernClass:
        """Representative of [x] in L'/L with all coordinates in [0, 1)."""
        self._own(x)
        return ChernClass(self.ids, tuple(c - (c.numerator // c.denominator) for c in x.coeffs))

    def lipman_contains(self, x: Cycle) -> bool:
        return all(p <= 0 for p in self.pairings(x))

    def in_lattice(self, x: Cycle) -> bool:
        return x.integral

    def truncate_cycle(self, z: Cycle, vertices: Iterable[str]) -> Cycle:
        self._own(z)
        keep = set(vertices)
        return type(z)(z.ids, tuple(c if v in keep else Fraction(0) for v, c in zip(z.ids, z.coeffs)))

    def sublattice(self, vertices: Iterable[str]) -> "IntersectionLattice":
        """Lattice of the induced (possibly disconnected, possibly empty) subgraph."""
        key = frozenset(vertices)
        for v in key:
            self.index(v)
        if key not in self._sub_cache:
            sub = self.graph.induced(key)
            self._sub_cache[key] = IntersectionLattice(sub)
        return self._sub_cache[key]

    def restrict_class(self, x: ChernClass, vertices: Iterable[str]) -> ChernClass:
        """Cohomological restriction R_1: E*_v(T) -> E*_v(T_1) on V_1, 0 elsewhere."""
        sub = self.sublattice(vertices)
        a = self.estar_coords(x)
        return sub.chern_from_estar({v: a[self.index(v)] for v in sub.ids})

    def restrict_cycle(self, z: Cycle, vertices: Iterable[str]) -> Cycle:
        """Coordinates of z on V_1 as a cycle of the sublattice."""
        sub = self.sublattice(vertices)
        return Cycle(sub.ids, tuple(z[v] for v in sub.ids))

    def components(self, vertices: Iterable[str] | None = None) -> list[tuple[str, ...]]:
        return self.graph.components(vertices)


def build_lattice(g: PlumbingGraph) -> IntersectionLattice:
    """Validate ``g`` as a plumbing tree and assemble its lattice."""
    g.validate()
    return IntersectionLattice(g)
