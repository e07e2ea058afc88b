"""Exact minimization of chi over lattice boxes, Laufer sequences, classification.

The workhorse is :class:`BoxQuadratic`, an exact branch-and-bound minimizer
of ``y^T M y + b.y`` over an integer box, M positive definite. All objective
values are doubled so they stay integral: ``2 chi(l) = l^T(-I)l + k.l`` with
``k_v = e_v + 2``.
"""
from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .graphcore import ChernClass, Cycle, IntersectionLattice, PlumbingError

__all__ = [
    "BoxQuadratic",
    "MinChiResult",
    "ComputationSequence",
    "min_chi_box",
    "min_chi_positive",
    "sublevel_box",
    "laufer_zmin",
    "laufer_saturate",
    "classify",
    "numerically_gorenstein",
]


def _adjugate_and_det(m: list[list[int]]) -> tuple[list[list[int]], int]:
    """Integer adjugate and determinant of a small positive-definite matrix."""
    from .graphcore import solve_exact

    n = len(m)
    if n == 0:
        return [], 1
    det, inv = solve_exact(m, [[int(i == j) for j in range(n)] for i in range(n)])
    adj = [[int(inv[i][j] * det) for j in range(n)] for i in range(n)]
    return adj, det


class BoxQuadratic:
    """Minimize ``q(y) = y^T M y + b.y`` over integral ``0 <= y <= hi``.

    Depth-first search over coordinates in the given order, values ascending,
    so the first minimizer found is the lexicographically smallest one. A
    node is pruned when the exact continuous minimum of q over the affine
    slice (free coordinates unconstrained) cannot beat the incumbent.
    """

    def __init__(self, m: Sequence[Sequence[int]]):
        self.m = [list(map(int, r)) for r in m]
        n = self.n = len(self.m)
        # trailing blocks M[i:, i:], for the slice bounds at each depth
        self._adj = []
        self._det = []
        for i in range(n):
            block = [row[i:] for row in self.m[i:]]
            adj, det = _adjugate_and_det(block)
            if det <= 0:
                raise PlumbingError("quadratic form is not positive definite")
            self._adj.append(adj)
            self._det.append(det)

    def value(self, y: Sequence[int], b: Sequence[int]) -> int:
        m = self.m
        n = self.n
        return sum(y[i] * m[i][j] * y[j] for i in range(n) for j in range(n)) + sum(
            bi * yi for bi, yi in zip(b, y)
        )

    def solve(self, b, hi, exclude_zero=False, first=None):
        """Return ``(value, argmin, explored)``, or ``(None, None, explored)`` if infeasible.

        ``first`` restricts coordinate 0 to the given ascending values (used
        to split work across processes).
        """
        n = self.n
        b = [int(x) for x in b]
        hi = [int(x) for x in hi]
        if any(h < 0 for h in hi):
            raise PlumbingError("box bound must be effective")
        if n == 0:
            return (None, None, 1) if exclude_zero else (0, (), 1)
        m = self.m
        best: list = [None, None]  # value, argmin
        nodes = 0
        x = [0] * n
        s = [0] * n  # s[j] = sum over fixed k of m[j][k] * x[k]

        def leaf(const, allzero, values):
            nonlocal nodes
            i = n - 1
            a = m[i][i]
            g = b[i] + 2 * s[i]
            lo = 1 if (exclude_zero and allzero) else 0
            if values is None:
                if lo > hi[i]:
                    return
                c = (-g) // (2 * a)
                cands = [y for y in (lo, c, c + 1, hi[i]) if lo <= y <= hi[i]]
            else:
                cands = [y for y in values if y >= lo]
                if not cands:
                    return
            y = min(cands, key=lambda t: (a * t * t + g * t, t))
            val = const + a * y * y + g * y
            nodes += 1
            if best[0] is None or val < best[0]:
                x[i] = y
                best[0] = val
                best[1] = tuple(x)
                x[i] = 0

        def lower_bound(i, const):
            # continuous min over free y_i.. with x_<i fixed, as num / den
            adj = self._adj[i]
            g = [b[j] + 2 * s[j] for j in range(i, n)]
            quad = 0
            for r, gr in enumerate(g):
                if gr:
                    row = adj[r]
                    quad += gr * sum(row[c] * gc for c, gc in enumerate(g) if gc)
            det = self._det[i]
            return 4 * det * const - quad, 4 * det

        def rec(i, const, allzero):
            nonlocal nodes
            nodes += 1
            values = first if (i == 0 and first is not None) else range(hi[i] + 1)
            prev_lb = None
            for a in values:
                new_const = const + m[i][i] * a * a + 2 * a * s[i] + b[i] * a
                for j in range(i + 1, n):
                    s[j] += m[j][i] * a
                x[i] = a
                num, den = lower_bound(i + 1, new_const)
                pruned = best[0] is not None and num > den * (best[0] - 1)
                if not pruned:
                    if i + 1 == n - 1:
                        leaf(new_const, allzero and a == 0, None)
                    else:
                        rec(i + 1, new_const, allzero and a == 0)
                for j in range(i + 1, n):
                    s[j] -= m[j][i] * a
                lb = Fraction(num, den)
                # the slice bound is convex in a: once pruned on the rising side, stop
                if pruned and prev_lb is not None and lb >= prev_lb:
                    break
                prev_lb = lb
            x[i] = 0

        if n == 1:
            leaf(0, True, None if first is None else list(first))
        else:
            rec(0, 0, True)
        return best[0], best[1], nodes


def _solve_chunk(args):
    m, b, hi, exclude_zero, values = args
    return BoxQuadratic(m).solve(b, hi, exclude_zero, first=values)


def _solve_parallel(bq: BoxQuadratic, b, hi, exclude_zero, workers: int):
    vals = list(range(int(hi[0]) + 1))
    chunks = [vals[k::workers] for k in range(workers) if vals[k::workers]]
    with ProcessPoolExecutor(max_workers=len(chunks)) as ex:
        results = list(ex.map(_solve_chunk, [(bq.m, b, hi, exclude_zero, c) for c in chunks]))
    feasible = [r for r in results if r[0] is not None]
    explored = sum(r[2] for r in results)
    if not feasible:
        return None, None, explored
    best = min(feasible, key=lambda r: (r[0], r[1]))
    return best[0], best[1], explored


# ---------------------------------------------------------------------------
# chi over lattices


@dataclass(frozen=True)
class MinChiResult:
    value: Fraction
    argmin: Cycle
    explored: int
    certificate: Cycle | None = None

    def to_json(self) -> dict:
        out = {
            "value": _q(self.value),
            "argmin": self.argmin.as_dict(),
            "explored": self.explored,
        }
        if self.certificate is not None:
            out["certificate_box"] = self.certificate.as_dict()
        return out


def _q(x: Fraction) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def neg_form(lat: IntersectionLattice) -> list[list[int]]:
    return [[-v for v in row] for row in lat.form]


def _kvec(lat: IntersectionLattice) -> list[int]:
    return [e + 2 for e in lat.graph.eulers]


def _quadratic(lat: IntersectionLattice) -> BoxQuadratic:
    cached = getattr(lat, "_bq", None)
    if cached is None:
        cached = BoxQuadratic(neg_form(lat))
        lat._bq = cached
    return cached


def chi_int2(lat: IntersectionLattice, l: Sequence[int]) -> int:
    """2 chi(l) for an integral cycle given as an int vector."""
    f = lat.form
    n = lat.n
    quad = sum(l[i] * f[i][j] * l[j] for i in range(n) for j in range(n) if l[i] and l[j])
    return -quad + sum((e + 2) * x for e, x in zip(lat.graph.eulers, l))


def min_chi_box(
    lat: IntersectionLattice, base: Cycle, box: Cycle, *, workers: int = 1, exclude_zero: bool = False
) -> MinChiResult:
    """Exact min of chi(base + l) over integral 0 <= l <= box.

    Ties are broken toward the lexicographically smallest l (file vertex
    order). With ``exclude_zero`` the point l = 0 is left out.
    """
    if not (box.integral and box.effective):
        raise PlumbingError("box must be an effective integral cycle")
    hi = box.as_ints()
    # chi(base + l) = chi(base) + chi(l) - (base, l)
    p = lat.pairings(base)
    b = [k - 2 * q for k, q in zip(_kvec(lat), p)]
    if any(x.denominator != 1 for x in b):
        raise PlumbingError("base must lie in L'")
    b = [int(x) for x in b]
    bq = _quadratic(lat)
    if workers > 1 and lat.n > 1 and hi[0] > 0:
        val2, arg, explored = _solve_parallel(bq, b, hi, exclude_zero, workers)
    else:
        val2, arg, explored = bq.solve(b, hi, exclude_zero)
    if val2 is None:
        raise PlumbingError("empty domain: box = 0 with zero excluded")
    return MinChiResult(lat.chi(base) + Fraction(val2, 2), lat.cycle(arg), explored)


def sublevel_box(lat: IntersectionLattice, p: Sequence, c) -> tuple[int, ...]:
    """Integer box containing every real x >= 0 with chi(x) + p.x <= c.

    Uses the exact ellipsoid: centre x* = (-I)^{-1}(-(k/2 + p)) and
    half-widths sqrt(2 (c - f(x*)) (-I)^{-1}_vv), rounded outward.
    Returns the zero box when the sublevel set is empty.
    """
    n = lat.n
    minv = [[-x for x in row] for row in lat.inverse]  # (-I)^{-1}
    lin = [Fraction(e + 2, 2) + Fraction(q) for e, q in zip(lat.graph.eulers, p)]
    centre = [-sum((minv[i][j] * lin[j] for j in range(n)), Fraction(0)) for i in range(n)]
    fmin = sum((lin[i] * centre[i] for i in range(n)), Fraction(0)) / 2
    slack = Fraction(c) - fmin
    if slack < 0:
        return (0,) * n
    out = []
    for i in range(n):
        r = 2 * slack * minv[i][i]
        half = math.isqrt(math.ceil(r)) + 1
        out.append(max(0, math.ceil(centre[i]) + half))
    return tuple(out)


def min_chi_positive(lat: IntersectionLattice, *, workers: int = 1) -> MinChiResult:
    """min chi(l) over all integral l > 0, with a certificate box.

    Every integral l >= 0 outside ``[0, certificate]`` has chi(l) > value.
    """
    if lat.n == 0:
        raise PlumbingError("empty lattice")
    box = sublevel_box(lat, [0] * lat.n, 1)  # chi(E_v) = 1, so min <= 1
    res = min_chi_box(lat, lat.cycle(), lat.cycle(box), workers=workers, exclude_zero=True)
    cert = sublevel_box(lat, [0] * lat.n, res.value)
    cert = tuple(min(a, b) for a, b in zip(cert, box))
    return MinChiResult(res.value, res.argmin, res.explored, lat.cycle(cert))


# ---------------------------------------------------------------------------
# Laufer sequences


@dataclass(frozen=True)
class ComputationSequence:
    steps: tuple[tuple[Cycle, str], ...]
    terminal: Cycle

    def __len__(self) -> int:
        return len(self.steps)


def _laufer(lat: IntersectionLattice, start: Cycle, max_steps: int):
    x = list(start.coeffs)
    form = lat.form
    n = lat.n
    steps = []
    pair = [sum((form[i][j] * x[j] for j in range(n)), Fraction(0)) for i in range(n)]
    for _ in range(max_steps):
        v = next((i for i in range(n) if pair[i] > 0), None)
        if v is None:
            return steps, type(start)(lat.ids, tuple(x))
        steps.append((type(start)(lat.ids, tuple(x)), lat.ids[v]))
        x[v] += 1
        for i in range(n):
            pair[i] += form[i][v]
    raise PlumbingError("computation sequence did not terminate")


def laufer_zmin(lat: IntersectionLattice, max_steps: int = 10**6) -> ComputationSequence:
    """Laufer's algorithm from E: add E_v while (x, E_v) > 0 (smallest v first)."""
    if len(lat.components()) != 1:
        raise PlumbingError("laufer_zmin needs a connected graph")
    steps, term = _laufer(lat, lat.E(), max_steps)
    return ComputationSequence(tuple(steps), term)


def laufer_saturate(lat: IntersectionLattice, x: ChernClass, max_steps: int = 10**6) -> ChernClass:
    """Smallest s in the Lipman cone with s >= x and s - x in L."""
    lat.pairing_ints(x)
    _, term = _laufer(lat, ChernClass(x.ids, x.coeffs), max_steps)
    return term


def laufer_saturate_sequence(lat: IntersectionLattice, x: ChernClass, max_steps: int = 10**6):
    steps, term = _laufer(lat, ChernClass(x.ids, x.coeffs), max_steps)
    return ComputationSequence(tuple(steps), term)


# ---------------------------------------------------------------------------
# classification


def classify(lat: IntersectionLattice, *, workers: int = 1) -> str | Fraction:
    """'rational' (min chi over l > 0 is 1), 'elliptic' (it is 0), else the value."""
    v = min_chi_positive(lat, workers=workers).value
    if v == 1:
        return "rational"
    if v == 0:
        return "elliptic"
    return v


def numerically_gorenstein(lat: IntersectionLattice) -> bool:
    return lat.zk.integral
