"""
A tour of the corpus lattices
=============================

Load each bundled graph, print its canonical cycle, the minimal cycle found
by Laufer's algorithm, and the generic geometric genus.
"""
from plumbcalc import build_lattice, corpus
from plumbcalc.generic_inv import pg_generic
from plumbcalc.lattice_opt import classify, laufer_zmin, min_chi_positive

for name in corpus.NAMES:
    lat = build_lattice(corpus.load(name))
    zmin = laufer_zmin(lat)
    print(f"{name:8s} det={lat.det_h:<2d} Z_K={lat.zk.as_dict(nonzero=True)}")
    print(f"         Z_min={zmin.terminal.as_ints()} after {len(zmin.steps)} steps")
    print(f"         {classify(lat)}, p_g={pg_generic(lat)}")

# The star with Euler numbers (-1; -2, -3, -7) is the classic minimally
# elliptic example.  min chi over l > 0 is 0, reached at Z_min = (6, 3, 2, 1)
# and also at (2, 1, 1, 1).
star = build_lattice(corpus.load("star237"))
res = min_chi_positive(star)
print("star237: min chi", res.value, "at", res.argmin.as_ints(), "within", res.certificate.as_ints())

# Dual basis vectors: columns of -I^{-1}.  For a unimodular lattice they
# are integral cycles.
for v in star.ids:
    print(v, star.dual_basis(v).as_ints())
