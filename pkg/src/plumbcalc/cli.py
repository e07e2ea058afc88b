"""Command-line front end: ``plumbcalc <command> GRAPH [options]``.

GRAPH is a path to a ``plumbing/1`` JSON file or ``corpus:NAME`` for a
bundled graph (``corpus:a5`` and ``corpus:random:6 --seed 3`` also work).
Reports are JSON on stdout; errors are JSON on stderr.
"""
from __future__ import annotations

import argparse
import hashlib
import json
import sys
import time
from fractions import Fraction
from pathlib import Path

from . import corpus
from .generic_inv import chi_sheaf, pg_generic
from .graphcore import (
    GraphStructureError,
    IntersectionLattice,
    NotNegativeDefiniteError,
    PlumbingError,
    parse_graph,
)
from .lattice_opt import _q, classify, laufer_zmin, min_chi_positive, numerically_gorenstein
from .relative import (
    DEFAULT_MAX_BOX,
    HypothesisError,
    SubStructure,
    eca_dims,
    elliptic_dominance_check,
    h1_relative_bundle,
    load_table_oracle,
    parse_tower,
    pg_relgen,
    relative_dominant,
    relatively_rational,
    semigroup_report,
)

REPORT_FORMAT = "plumbcalc-report/1"


class UsageError(PlumbingError):
    pass


class _Timer:
    def __init__(self):
        self.t0 = time.perf_counter()

    def seconds(self) -> float:
        return round(time.perf_counter() - self.t0, 6)


# ---------------------------------------------------------------------------
# input helpers


def _read_graph(spec: str, seed):
    if spec.startswith("corpus:"):
        try:
            g, text = corpus.resolve(spec[len("corpus:"):], seed)
        except KeyError as exc:
            raise UsageError(str(exc.args[0])) from None
        data = text.encode()
    else:
        try:
            data = Path(spec).read_bytes()
        except OSError as exc:
            raise OSError(f"cannot read {spec}: {exc.strerror}") from None
        g = None
    digest = hashlib.sha256(data).hexdigest()
    return g, data, digest


def _load(args):
    g, data, digest = _read_graph(args.graph, args.seed)
    if g is None:
        g = parse_graph(data.decode("utf-8", errors="replace"))
    lat = IntersectionLattice(g)
    return lat, digest


def _parse_coords(lat: IntersectionLattice, text: str, flag: str) -> dict[str, Fraction]:
    out: dict[str, Fraction] = {}
    for part in filter(None, (s.strip() for s in (text or "").split(","))):
        vid, sep, val = part.partition(":")
        if not sep:
            raise UsageError(f"{flag}: expected v:value, got {part!r}")
        lat.index(vid.strip())
        try:
            out[vid.strip()] = Fraction(val.strip())
        except ValueError:
            raise UsageError(f"{flag}: bad number {val!r}") from None
    return out


def _cycle(lat, args):
    if args.cycle is None:
        raise UsageError("--cycle is required")
    if args.cycle.strip() in ("E", "reduced"):
        return lat.E()
    z = lat.cycle(_parse_coords(lat, args.cycle, "--cycle"))
    if not (z.integral and z.effective):
        raise UsageError("--cycle must be effective and integral")
    return z


def _chern(lat, args, required=True):
    if args.chern_estar is not None and args.chern_e is not None:
        raise UsageError("give exactly one of --chern-estar and --chern-e")
    if args.chern_estar is not None:
        coords = _parse_coords(lat, args.chern_estar, "--chern-estar")
        if any(c.denominator != 1 for c in coords.values()):
            raise UsageError("--chern-estar takes integer coordinates")
        return lat.chern_from_estar({v: int(c) for v, c in coords.items()})
    if args.chern_e is not None:
        return lat.chern(_parse_coords(lat, args.chern_e, "--chern-e"))
    if required:
        raise UsageError("one of --chern-estar and --chern-e is required")
    return lat.chern([0] * lat.n)


def _sub(lat, args) -> tuple[SubStructure, dict]:
    tower_file = getattr(args, "tower", None)
    oracle_file = getattr(args, "oracle", None)
    subgraph = getattr(args, "subgraph", None)
    if tower_file and oracle_file:
        raise UsageError("--tower and --oracle are mutually exclusive")
    if oracle_file and subgraph is None:
        raise UsageError("--oracle requires --subgraph")
    if tower_file and subgraph is not None:
        raise UsageError("--tower and --subgraph are mutually exclusive")
    v1 = [] if subgraph is None else _vertex_list(lat, subgraph)
    if tower_file:
        tower = parse_tower(Path(tower_file).read_text(), lat)
        sub = SubStructure.from_tower(lat, tower, len(tower.layers))
        return sub, {"kind": "tower", "layers": [list(w) for w in tower.layers]}
    if oracle_file:
        table = load_table_oracle(lat, Path(oracle_file).read_text())
        sub = SubStructure.with_table(lat, v1, table)
        return sub, {"kind": "table", "v1": sorted(sub.v1, key=lat.index)}
    sub = SubStructure.generic(lat, v1)
    return sub, {"kind": "generic" if v1 else "empty", "v1": sorted(sub.v1, key=lat.index)}


def _vertex_list(lat, text: str) -> list[str]:
    out = []
    for v in filter(None, (s.strip() for s in text.split(","))):
        lat.index(v)
        out.append(v)
    return out


def _kw(args) -> dict:
    return {"workers": args.workers, "max_box": args.max_box}


# ---------------------------------------------------------------------------
# commands; each returns (results, diagnostics, exit_code)


def cmd_validate(args):
    try:
        lat, digest = _load(args)
    except (GraphStructureError, NotNegativeDefiniteError) as exc:
        return {"valid": False, "reason": str(exc)}, {}, 1
    return {"valid": True, "vertices": lat.n, "detH": lat.det_h}, {}, 0


def cmd_invariants(args):
    lat = args._lat
    seq = laufer_zmin(lat)
    mc = min_chi_positive(lat, workers=args.workers)
    cls = classify(lat, workers=args.workers)
    res = {
        "zk": lat.zk.as_dict(),
        "detH": lat.det_h,
        "zmin": seq.terminal.as_dict(),
        "classify": cls if isinstance(cls, str) else _q(cls),
        "numerically_gorenstein": numerically_gorenstein(lat),
        "pg_generic": 1 - int(mc.value),
        "min_chi": _q(mc.value),
    }
    return res, {"laufer_steps": len(seq), "explored": mc.explored}, 0


def cmd_classify(args):
    lat = args._lat
    mc = min_chi_positive(lat, workers=args.workers)
    cls = classify(lat, workers=args.workers)
    return (
        {
            "classify": cls if isinstance(cls, str) else _q(cls),
            "min_chi": _q(mc.value),
            "argmin": mc.argmin.as_dict(),
            "certificate_box": mc.certificate.as_dict(),
        },
        {"explored": mc.explored},
        0,
    )


def cmd_h1(args):
    lat = args._lat
    z = _cycle(lat, args)
    l = _chern(lat, args)
    sub, sub_desc = _sub(lat, args)
    kw = _kw(args)
    r = h1_relative_bundle(lat, z, l, sub, **kw)
    dom = relative_dominant(lat, z, l, sub, **kw)
    eca = eca_dims(lat, z, l, sub, **kw)
    res = {
        "cycle": z.as_dict(),
        "chern": {"e": l.as_dict(), "estar": dict(zip(lat.ids, lat.estar_coords(l)))},
        "sub": sub_desc,
        "h1": r.h1,
        "h0": chi_sheaf(lat, z, l) + r.h1,
        "argmin": r.argmin.as_dict(),
        "dominance": dom.to_json(),
        "eca": eca.to_json(),
        "realizable": lat.lipman_contains(-l),
    }
    if sub_desc["kind"] == "tower" and args.tower:
        res["relgen_hypothesis"] = _hypothesis_status(lat, z, l, args)
    return res, {"explored": r.explored}, 0


def _hypothesis_status(lat, z, l, args):
    tower = parse_tower(Path(args.tower).read_text(), lat)
    top = set(tower.layers[-1]) & z.support()
    return {
        "positive": all(-l[v] > 0 for v in top),
        "nonzero": all(l[v] != 0 for v in top),
    }


def cmd_h0(args):
    res, diag, code = cmd_h1(args)
    keep = ("cycle", "chern", "sub", "h0", "h1", "argmin")
    return {k: res[k] for k in keep}, diag, code


def cmd_dominant(args):
    lat = args._lat
    z = _cycle(lat, args)
    l = _chern(lat, args)
    sub, sub_desc = _sub(lat, args)
    rep = relative_dominant(lat, z, l, sub, **_kw(args))
    return {"sub": sub_desc, **rep.to_json()}, {}, 0 if rep.dominant else 1


def cmd_rational(args):
    lat = args._lat
    z = _cycle(lat, args) if args.cycle is not None else None
    sub, sub_desc = _sub(lat, args)
    if z is None:
        raise UsageError("--cycle is required")
    rep = relatively_rational(lat, z, sub, **_kw(args))
    res = {"sub": sub_desc, "relatively_rational": rep.dominant, **rep.to_json()}
    del res["dominant"]
    return res, {}, 0 if rep.dominant else 1


def cmd_semigroup(args):
    lat = args._lat
    l = _chern(lat, args)
    sub, sub_desc = _sub(lat, args)
    rep = semigroup_report(lat, l, sub, **_kw(args))
    return {"sub": sub_desc, **rep.to_json()}, {}, 0 if rep.member else 1


def cmd_pg(args):
    lat = args._lat
    sub, sub_desc = _sub(lat, args)
    if not sub.v1:
        val = pg_generic(lat, workers=args.workers)
    else:
        val = pg_relgen(lat, sub, **_kw(args))
    return {"sub": sub_desc, "pg": val}, {}, 0


def cmd_eca(args):
    lat = args._lat
    z = _cycle(lat, args)
    l = _chern(lat, args)
    sub, sub_desc = _sub(lat, args)
    rep = eca_dims(lat, z, l, sub, **_kw(args))
    return {"sub": sub_desc, **rep.to_json()}, {}, 0


def cmd_elliptic_lemma(args):
    lat = args._lat
    sub, sub_desc = _sub(lat, args)
    rep = elliptic_dominance_check(lat, args.vertex, args.nmax, sub, **_kw(args))
    return {"sub": sub_desc, **rep.to_json()}, {}, 0 if rep.passed else 1


COMMANDS = {
    "validate": cmd_validate,
    "invariants": cmd_invariants,
    "h1": cmd_h1,
    "h0": cmd_h0,
    "semigroup": cmd_semigroup,
    "dominant": cmd_dominant,
    "rational": cmd_rational,
    "pg": cmd_pg,
    "classify": cmd_classify,
    "eca": cmd_eca,
    "elliptic-lemma": cmd_elliptic_lemma,
}


# ---------------------------------------------------------------------------
# argument parsing and report assembly


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="JSON output (the default and only format)")
    common.add_argument("--seed", type=int, default=None, help="seed for generated corpus graphs")
    common.add_argument("--max-box", type=int, default=DEFAULT_MAX_BOX, help="limit on enumerated box points")
    common.add_argument("--workers", type=int, default=1, help="processes for box searches")
    common.add_argument("--timing", action="store_true", help="add timing and search statistics")

    parser = argparse.ArgumentParser(prog="plumbcalc", description=__doc__.splitlines()[0])
    subs = parser.add_subparsers(dest="command", required=True)

    def add(name, *, cycle=False, chern=False, sub=False, help=None):
        sp = subs.add_parser(name, parents=[common], help=help)
        sp.add_argument("graph", help="graph file or corpus:NAME")
        if cycle:
            sp.add_argument("--cycle", help="cycle as v:n,... (or E for the reduced cycle)")
        if chern:
            sp.add_argument("--chern-estar", help="Chern class in integer E*-coordinates, v:a,...")
            sp.add_argument("--chern-e", help="Chern class in rational E-coordinates, v:p/q,...")
        if sub:
            sp.add_argument("--subgraph", help="comma-separated sub-graph vertices V1")
            sp.add_argument("--tower", help="tower/1 file")
            sp.add_argument("--oracle", help="h1table/1 file (needs --subgraph)")
        return sp

    add("validate", help="check the graph")
    add("invariants", help="Z_K, det, Z_min, classification, generic p_g")
    add("classify", help="rational / elliptic / min chi")
    add("h1", cycle=True, chern=True, sub=True, help="h1, h0, dominance and ECa dimensions")
    add("h0", cycle=True, chern=True, sub=True, help="h0 of a (relatively) generic bundle")
    add("dominant", cycle=True, chern=True, sub=True, help="relative dominance test")
    add("rational", cycle=True, sub=True, help="relative rationality test")
    add("semigroup", chern=True, sub=True, help="analytic semigroup membership")
    add("pg", sub=True, help="geometric genus of the (relatively) generic structure")
    add("eca", cycle=True, chern=True, sub=True, help="ECa dimension numbers")
    lemma = add("elliptic-lemma", sub=True, help="dominance of -N E*_v for N = 1..Nmax")
    lemma.add_argument("--vertex", required=True)
    lemma.add_argument("--nmax", type=int, default=5)
    return parser


def _echo(args) -> dict:
    skip = {"command", "timing", "json", "workers"}
    opts = {k: v for k, v in sorted(vars(args).items()) if not k.startswith("_") and k not in skip and v is not None}
    return {"name": args.command, "options": opts}


def _error(exc: BaseException, code: int) -> int:
    err = {"type": type(exc).__name__, "message": str(exc)}
    loc = getattr(exc, "location", None)
    if loc:
        err["location"] = loc
    if isinstance(exc, HypothesisError):
        err["vertices"] = list(exc.vertices)
    sys.stderr.write(json.dumps({"error": err}, sort_keys=True) + "\n")
    return code


def run(argv=None, out=None) -> int:
    out = sys.stdout if out is None else out
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.workers < 1:
        return _error(UsageError("--workers must be at least 1"), 2)
    timer = _Timer()
    try:
        if args.command == "validate":
            _, _, digest = _read_graph(args.graph, args.seed)
            args._digest = digest
            results, diag, code = cmd_validate(args)
        else:
            args._lat, args._digest = _load(args)
            results, diag, code = COMMANDS[args.command](args)
    except (OSError, PlumbingError, RuntimeError) as exc:
        return _error(exc, 2)
    stats = {k: diag.pop(k) for k in list(diag) if k == "explored"}
    if args.timing:
        diag = dict(diag, seconds=timer.seconds(), workers=args.workers, **stats)
    report = {
        "format": REPORT_FORMAT,
        "command": _echo(args),
        "input": {"sha256": args._digest},
        "results": results,
        "diagnostics": diag,
    }
    out.write(json.dumps(report, sort_keys=True, indent=2) + "\n")
    return code


def main(argv=None) -> None:
    sys.exit(run(argv))


if __name__ == "__main__":  # pragma: no cover
    main()
