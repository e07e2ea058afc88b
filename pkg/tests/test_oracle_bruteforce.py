import pytest

from plumbcalc.generic_inv import h1_generic_bundle, h1_generic_cycle
from plumbcalc.graphcore import PlumbingError
from plumbcalc.oracle_bruteforce import (
    BoxIterator,
    BoxTooLarge,
    BruteTowerOracle,
    brute_dominant,
    brute_min_chi,
    brute_nested,
    brute_relative_h1,
)
from plumbcalc.relative import TowerSpec, ZeroOracle

from _instances import lattice


def test_box_iterator_order_and_count():
    pts = list(BoxIterator([1, 2]))
    assert pts == [(0, 0), (0, 1), (0, 2), (1, 0), (1, 1), (1, 2)]
    assert len(BoxIterator([1, 2])) == 6
    assert list(BoxIterator([])) == [()]
    assert len(BoxIterator([3, 0, 4])) == 20


def test_box_iterator_rejects_bad_bounds():
    with pytest.raises(PlumbingError):
        BoxIterator([-1])
    with pytest.raises(PlumbingError):
        BoxIterator(lattice("a2").cycle([1, -1]))


def test_brute_min_chi_zero_box():
    lat = lattice("d4")
    res = brute_min_chi(lat, lat.cycle(), lat.cycle())
    assert (res.value, res.argmin, res.explored) == (0, lat.cycle(), 1)


def test_brute_min_chi_a1():
    a1 = lattice("a1")
    res = brute_min_chi(a1, a1.cycle(), 3 * a1.E())
    # chi(nE) = n^2: minimum at the origin
    assert (res.value, res.argmin.as_ints(), res.explored) == (0, (0,), 4)


def test_brute_min_chi_star():
    star = lattice("star237")
    res = brute_min_chi(star, star.E(), star.cycle([5, 2, 1, 0]))
    # chi(E) = 1 and chi(E + E_v0) = chi((2,1,1,1)) = 0
    assert (res.value, res.argmin.as_ints()) == (0, (1, 0, 0, 0))


def test_brute_min_chi_limit():
    lat = lattice("a3")
    with pytest.raises(BoxTooLarge, match="over the limit"):
        brute_min_chi(lat, lat.cycle(), lat.cycle([9, 9, 9]), limit=999)


def test_brute_dominant_examples():
    a1 = lattice("a1")
    rep = brute_dominant(a1, 2 * a1.E(), -a1.dual_basis("v0"), ZeroOracle(a1))
    assert (rep.dominant, rep.witness, rep.margin) == (True, None, 2)
    # l' = E: chi(-E + E) = 0 is not above chi(-E) = 1
    rep = brute_dominant(a1, 2 * a1.E(), a1.chern([1]), ZeroOracle(a1))
    assert (rep.dominant, rep.witness.as_ints(), rep.margin) == (False, (1,), -1)
    rep = brute_dominant(a1, a1.cycle(), a1.chern([0]), ZeroOracle(a1))
    assert rep.dominant and rep.margin is None


def test_brute_relative_h1_with_empty_sub_is_generic():
    star = lattice("star237")
    z = star.cycle([3, 2, 1, 1])
    for v in star.ids:
        l = -star.dual_basis(v)
        assert brute_relative_h1(star, z, l, ZeroOracle(star))[0] == h1_generic_bundle(star, z, l)


def test_brute_tower_oracle_one_layer_is_generic():
    d4 = lattice("d4")
    oracle = BruteTowerOracle(d4, [d4.ids])
    z = d4.cycle([2, 1, 1, 1])
    for v in d4.ids:
        l = -d4.dual_basis(v)
        assert oracle.evaluate(z, l) == h1_generic_bundle(d4, z, l)
    with pytest.raises(PlumbingError, match="outside"):
        BruteTowerOracle(d4, [["v1"]]).evaluate(z, d4.chern([0] * 4))


def test_brute_nested_one_layer():
    star = lattice("star237")
    tower = TowerSpec((tuple(star.ids),))
    z = star.cycle([2, 1, 1, 1])
    assert brute_nested(star, tower, z, star.chern([0] * 4)) == h1_generic_bundle(star, z, star.chern([0] * 4))


def test_brute_nested_a2_two_layers_frozen():
    a2 = lattice("a2")
    tower = TowerSpec((("v0",), ("v1",)))
    assert brute_nested(a2, tower, a2.E(), a2.chern([-1, -1])) == 0
    assert brute_nested(a2, tower, a2.cycle([2, 2]), a2.chern([0, 0])) == 0


def test_brute_nested_three_vertex_chain():
    a3 = lattice("a3")
    tower = TowerSpec((("v1",), ("v0",), ("v2",)))
    z = a3.cycle([1, 2, 1])
    val = brute_nested(a3, tower, z, a3.chern([0, 0, 0]))
    # trivial class on a rational chain: no cohomology on any cycle
    assert val == 0
    assert h1_generic_cycle(a3, z) == 0


def test_brute_nested_guards():
    a3 = lattice("a3")
    four = TowerSpec((("v0",), ("v1",), ("v2",)))
    with pytest.raises(BoxTooLarge):
        brute_nested(a3, four, a3.cycle([9, 9, 9]), a3.chern([0, 0, 0]), limit=100)
