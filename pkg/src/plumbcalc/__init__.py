"""Exact invariants of plumbing graphs: lattices, generic and relatively
generic cohomology numbers, and brute-force references for all of them."""

from .graphcore import (
    ChernClass,
    Cycle,
    GraphStructureError,
    GraphSyntaxError,
    IntersectionLattice,
    NotNegativeDefiniteError,
    PlumbingError,
    PlumbingGraph,
    Vertex,
    build_lattice,
    graph_to_json,
    parse_graph,
)
from .lattice_opt import (
    BoxQuadratic,
    MinChiResult,
    classify,
    laufer_saturate,
    laufer_zmin,
    min_chi_box,
    min_chi_positive,
    numerically_gorenstein,
)
from .generic_inv import (
    RealizabilityWarning,
    chi_sheaf,
    e_z,
    estar_support,
    h0_generic_bundle,
    h1_generic_bundle,
    h1_generic_cycle,
    pg_generic,
)
from .relative import (
    DominanceReport,
    GenericOracle,
    SubStructure,
    TableOracle,
    TowerSpec,
    ZeroOracle,
    eca_dims,
    elliptic_dominance_check,
    h0_relative_bundle,
    h1_natural,
    h1_OZ_relgen,
    h1_relative_bundle,
    pg_relgen,
    relative_dominant,
    relatively_rational,
    relgen_natural,
    san_member,
)

__version__ = "0.1.0"
