import io
import json
from fractions import Fraction
from pathlib import Path

import pytest

from plumbcalc.cli import run
from plumbcalc.generic_inv import pg_generic
from plumbcalc.lattice_opt import laufer_zmin
from plumbcalc.oracle_bruteforce import BoxIterator, BruteTowerOracle, brute_dominant, brute_relative_h1
from plumbcalc.relative import GenericOracle, ZeroOracle

from _golden_cases import CASES
from _instances import lattice

GOLDEN = Path(__file__).parent / "golden"


def call(argv, capsys=None):
    buf = io.StringIO()
    code = run(argv, buf)
    return code, buf.getvalue()


def report(argv):
    code, text = call(argv)
    return code, json.loads(text)


# -- golden reports ------------------------------------------------------------


@pytest.mark.parametrize("name", sorted(CASES))
def test_golden_report(name):
    _, text = call(CASES[name])
    assert text == (GOLDEN / f"{name}.json").read_text()


@pytest.mark.parametrize("name", ["a1", "a2", "d4", "minus3", "star237"])
def test_golden_invariants_against_brute(name):
    lat = lattice(name)
    res = json.loads((GOLDEN / f"invariants-{name}.json").read_text())["results"]
    zmin = lat.cycle({v: Fraction(c) for v, c in res["zmin"].items()})
    assert zmin == laufer_zmin(lat).terminal
    # min chi over 0 < l <= Z_min + 1 by enumeration
    wide = lat.cycle([c + 1 for c in zmin.as_ints()])
    best = min(lat.chi(lat.cycle(pt)) for pt in BoxIterator(wide) if any(pt))
    assert Fraction(res["min_chi"]) == best
    assert res["classify"] == ("rational" if best == 1 else "elliptic")
    assert res["pg_generic"] == pg_generic(lat)


def test_golden_h1_star_arms_against_brute():
    star = lattice("star237")
    res = json.loads((GOLDEN / "h1-star237-arms.json").read_text())["results"]
    z, l = star.cycle([6, 3, 2, 1]), -star.dual_basis("v0")
    oracle = BruteTowerOracle(star, [["v1", "v2", "v3"]])
    v1 = {"v1", "v2", "v3"}
    h1, arg = brute_relative_h1(star, z, l, oracle, v1)
    assert res["h1"] == h1 and res["argmin"] == arg.as_dict()
    dom = brute_dominant(star, z, l, oracle, v1)
    assert res["dominance"] == dom.to_json()


def test_golden_dominant_star_against_brute():
    star = lattice("star237")
    res = json.loads((GOLDEN / "dominant-star237.json").read_text())["results"]
    ref = brute_dominant(star, star.cycle([6, 3, 2, 1]), star.chern([0] * 4), ZeroOracle(star))
    assert res["witness"] == ref.witness.as_dict() and res["margin"] == ref.margin


# -- exit codes and errors -------------------------------------------------------


def test_validate_ok():
    code, rep = report(["validate", "corpus:e8"])
    assert code == 0 and rep["results"] == {"valid": True, "vertices": 8, "detH": 1}


def test_validate_missing_file(tmp_path, capsys):
    code, text = call(["validate", str(tmp_path / "nope.json")])
    assert code == 2 and text == ""
    err = json.loads(capsys.readouterr().err)["error"]
    assert err["type"] == "OSError" and "cannot read" in err["message"]


def test_validate_non_tree(tmp_path):
    path = tmp_path / "tri.json"
    path.write_text(
        '{"vertices":[{"id":"a","euler":-2},{"id":"b","euler":-2},{"id":"c","euler":-2}],'
        '"edges":[["a","b"],["b","c"],["c","a"]]}'
    )
    code, rep = report(["validate", str(path)])
    assert code == 1 and not rep["results"]["valid"]
    assert "not a tree" in rep["results"]["reason"]


def test_syntax_error_has_location(tmp_path, capsys):
    path = tmp_path / "bad.json"
    path.write_text('{"vertices": [{"id": "a", "euler": "x"}]}')
    assert call(["invariants", str(path)])[0] == 2
    err = json.loads(capsys.readouterr().err)["error"]
    assert err["type"] == "GraphSyntaxError" and err["location"] == "vertices[0].euler"


def test_not_negative_definite_is_reported(tmp_path):
    path = tmp_path / "pos.json"
    path.write_text('{"vertices":[{"id":"a","euler":-1},{"id":"b","euler":-1}],"edges":[["a","b"]]}')
    code, rep = report(["validate", str(path)])
    assert code == 1 and "negative definite" in rep["results"]["reason"]


@pytest.mark.parametrize(
    "extra, fragment",
    [
        (["--tower", "t.json", "--subgraph", "v0"], "mutually exclusive"),
        (["--oracle", "o.json"], "requires --subgraph"),
        (["--tower", "t.json", "--oracle", "o.json", "--subgraph", "v0"], "mutually exclusive"),
        (["--chern-e", "v0:1"], "exactly one"),
    ],
)
def test_flag_conflicts(extra, fragment, capsys):
    argv = ["h1", "corpus:a2", "--cycle", "E", "--chern-estar", "v0:-1", *extra]
    assert call(argv)[0] == 2
    assert fragment in json.loads(capsys.readouterr().err)["error"]["message"]


def test_missing_cycle_and_bad_coordinates(capsys):
    assert call(["h1", "corpus:a2", "--chern-estar", "v0:-1"])[0] == 2
    assert "--cycle is required" in capsys.readouterr().err
    assert call(["h1", "corpus:a2", "--cycle", "v0:1/2", "--chern-estar", "v0:-1"])[0] == 2
    assert call(["h1", "corpus:a2", "--cycle", "E", "--chern-estar", "zz:-1"])[0] == 2
    assert call(["h1", "corpus:a2", "--cycle", "E", "--chern-e", "v0:1/2"])[0] == 2
    assert call(["invariants", "corpus:nosuch"])[0] == 2


def test_hypothesis_error_lists_vertices(tmp_path, capsys):
    tower = tmp_path / "t.json"
    tower.write_text('{"format": "tower/1", "layers": [["v0"], ["v1"]]}')
    code, rep = report(["h1", "corpus:a2", "--cycle", "E", "--chern-estar", "v0:-1,v1:-1", "--tower", str(tower)])
    assert code == 0 and rep["results"]["relgen_hypothesis"] == {"positive": True, "nonzero": True}
    assert rep["results"]["sub"]["kind"] == "tower"


# -- commands -------------------------------------------------------------------


def test_predicate_exit_codes():
    assert report(["dominant", "corpus:a1", "--cycle", "v0:2", "--chern-estar", "v0:-1"])[0] == 0
    assert report(["dominant", "corpus:a1", "--cycle", "v0:2", "--chern-e", "v0:1"])[0] == 1
    assert report(["rational", "corpus:d4", "--cycle", "E"])[0] == 0
    assert report(["rational", "corpus:star237", "--cycle", "v0:6,v1:3,v2:2,v3:1"])[0] == 1
    assert report(["semigroup", "corpus:a1", "--chern-estar", "v0:-1"])[0] == 1
    assert report(["elliptic-lemma", "corpus:d4", "--vertex", "v0", "--nmax", "2"])[0] == 0


def test_pg_and_classify():
    assert report(["pg", "corpus:star237"])[1]["results"]["pg"] == 1
    assert report(["pg", "corpus:d4", "--subgraph", "v1,v2"])[1]["results"]["pg"] == 0
    assert report(["classify", "corpus:e7"])[1]["results"]["classify"] == "rational"


def test_h0_and_eca_commands():
    _, rep = report(["h0", "corpus:a1", "--cycle", "v0:2", "--chern-estar", "v0:-1"])
    assert (rep["results"]["h0"], rep["results"]["h1"]) == (6, 0)
    _, rep = report(["eca", "corpus:a1", "--cycle", "v0:2", "--chern-estar", "v0:-1"])
    assert rep["results"]["eca"] == 2


def test_random_corpus_graph_needs_seed_for_reproducibility():
    a = call(["invariants", "corpus:random:5", "--seed", "7"])[1]
    b = call(["invariants", "corpus:random:5", "--seed", "7"])[1]
    assert a == b


def test_table_oracle_from_file(tmp_path):
    a2 = lattice("a2")
    generic = GenericOracle(a2, [["v0"]])
    zero = a2.chern([0, 0])
    entries = []
    # every (cycle on v0, twist) the evaluator can ask for with Z = E, l' = 0
    for x in BoxIterator(a2.E()):
        t = zero - a2.cycle(x)
        entries.append(
            {
                "cycle": {"v0": 1},
                "twist_estar": dict(zip(a2.ids, a2.estar_coords(t))),
                "h1": generic.evaluate(a2.E("v0"), t),
            }
        )
    path = tmp_path / "table.json"
    path.write_text(json.dumps({"format": "h1table/1", "entries": entries}))
    base = ["h1", "corpus:a2", "--cycle", "E", "--chern-estar", "", "--subgraph", "v0"]
    _, with_table = report([*base, "--oracle", str(path)])
    _, generic_rep = report(base)
    for key in ("h1", "h0", "argmin", "dominance"):
        assert with_table["results"][key] == generic_rep["results"][key]
    assert with_table["results"]["sub"]["kind"] == "table"


def test_timing_is_opt_in():
    argv = ["h1", "corpus:star237", "--cycle", "E", "--chern-estar", "v0:-1"]
    _, plain = report(argv)
    assert "seconds" not in plain["diagnostics"] and "explored" not in plain["diagnostics"]
    _, timed = report([*argv, "--timing"])
    assert {"seconds", "explored", "workers"} <= set(timed["diagnostics"])


def test_workers_do_not_change_output():
    argv = ["invariants", "corpus:star237"]
    outs = {call(argv)[1] for _ in range(2)} | {call([*argv, "--workers", "2"])[1]}
    assert len(outs) == 1
    assert call([*argv, "--workers", "0"])[0] == 2
