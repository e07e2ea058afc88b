"""
Branch and bound against enumeration
====================================

The optimized minimizers are checked against plain enumeration on random
small trees.  Everything is exact, so the comparison is equality.
"""
import random
import time

from plumbcalc import build_lattice, corpus
from plumbcalc.lattice_opt import min_chi_box
from plumbcalc.oracle_bruteforce import brute_min_chi, brute_nested
from plumbcalc.relative import TowerSpec, relgen_natural

rng = random.Random(1)
t0 = time.perf_counter()
agree = 0
for _ in range(200):
    lat = build_lattice(corpus.random_tree(rng.randrange(10**6), rng.randint(1, 5)))
    base = lat.chern_from_estar([rng.randint(-2, 2) for _ in lat.ids])
    box = lat.cycle([rng.randint(0, 4) for _ in lat.ids])
    fast, slow = min_chi_box(lat, base, box), brute_min_chi(lat, base, box)
    agree += (fast.value, fast.argmin) == (slow.value, slow.argmin)
print(f"{agree}/200 instances agree ({time.perf_counter() - t0:.1f} s)")

# A two-layer tower on D4: centre first, then the legs.
d4 = build_lattice(corpus.load("d4"))
tower = TowerSpec((("v0",), ("v1", "v2", "v3")))
l = -d4.chern_from_estar([1, 1, 0, 1])
z = d4.cycle([2, 2, 1, 2])
print("tower h1:", relgen_natural(d4, z, l, tower).h1, "brute:", brute_nested(d4, tower, z, l))
