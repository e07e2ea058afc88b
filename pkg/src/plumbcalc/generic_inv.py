"""Cohomology numbers of generic analytic structures and generic line bundles.

For a generic structure (or a generic bundle of fixed Chern class) these
numbers are topological: they are minima of chi over boxes of cycles.
"""
from __future__ import annotations

import warnings
from typing import Iterable

from .graphcore import ChernClass, Cycle, IntersectionLattice, PlumbingError
from .lattice_opt import min_chi_box, min_chi_positive

__all__ = [
    "RealizabilityWarning",
    "h1_generic_cycle",
    "pg_generic",
    "h1_generic_bundle",
    "h0_generic_bundle",
    "chi_sheaf",
    "estar_support",
    "e_z",
    "realizable",
]


class RealizabilityWarning(UserWarning):
    """The Chern class is not in -S', so no effective divisor realizes it."""


def _as_box(z: Cycle) -> Cycle:
    if not (z.integral and z.effective):
        raise PlumbingError("cycle must be effective and integral")
    return z


def h1_generic_cycle(lat: IntersectionLattice, z: Cycle, *, workers: int = 1) -> int:
    """h^1(O_Z) for a generic structure: sum over components C of |Z| of
    ``1 - min_{E_C <= l <= Z_C} chi(l)``."""
    _as_box(z)
    total = 0
    for comp in lat.components(z.support()):
        base = lat.reduced(comp)
        top = lat.truncate_cycle(z, comp) - base
        res = min_chi_box(lat, base, top, workers=workers)
        total += 1 - int(res.value)
    return total


def pg_generic(lat: IntersectionLattice, *, workers: int = 1) -> int:
    return 1 - int(min_chi_positive(lat, workers=workers).value)


def realizable(lat: IntersectionLattice, l: ChernClass) -> bool:
    """l' in -S', the condition for ECa^{l'}(Z) to be nonempty."""
    return lat.lipman_contains(-l)


def h1_generic_bundle(lat: IntersectionLattice, z: Cycle, l: ChernClass, *, workers: int = 1) -> int:
    """``chi(-l') - min_{0<=l<=Z} chi(-l'+l)``: h^1 of a generic bundle in Pic^{l'}(Z).

    Emits :class:`RealizabilityWarning` when l' is outside -S'; the value is
    returned regardless.
    """
    _as_box(z)
    lat.pairing_ints(l)
    if not realizable(lat, l):
        warnings.warn(f"{l!r} is not in -S' (class not divisor-realizable)", RealizabilityWarning, stacklevel=2)
    res = min_chi_box(lat, -l, z, workers=workers)
    return int(lat.chi(-l) - res.value)


def chi_sheaf(lat: IntersectionLattice, z: Cycle, l: ChernClass) -> int:
    """Euler characteristic h^0 - h^1 of any bundle of Chern class l' on Z."""
    if not z.integral:
        raise PlumbingError("cycle must be integral")
    val = lat.chi(-l + z) - lat.chi(-l)
    assert val.denominator == 1
    return int(val)


def h0_generic_bundle(lat: IntersectionLattice, z: Cycle, l: ChernClass, *, workers: int = 1) -> int:
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RealizabilityWarning)
        h1 = h1_generic_bundle(lat, z, l, workers=workers)
    h0 = chi_sheaf(lat, z, l) + h1
    assert h0 >= 0, f"negative h0 ({h0}) for Z={z!r}, l'={l!r}"
    return h0


def estar_support(lat: IntersectionLattice, l: ChernClass) -> frozenset[str]:
    """I(l'): the vertices with nonzero E*-coordinate."""
    return frozenset(v for v, p in zip(lat.ids, lat.pairing_ints(l)) if p != 0)


def e_z(lat: IntersectionLattice, z: Cycle, which: ChernClass | Iterable[str]) -> int:
    """``h1(O_Z) - h1(O_{Z|V minus I})`` with both terms for the generic structure.

    ``which`` is either a Chern class (its E*-support is used) or a vertex
    subset I directly.
    """
    if isinstance(which, Cycle):
        support = estar_support(lat, which)
    else:
        support = frozenset(which)
        for v in support:
            lat.index(v)
    rest = [v for v in lat.ids if v not in support]
    return h1_generic_cycle(lat, z) - h1_generic_cycle(lat, lat.truncate_cycle(z, rest))

