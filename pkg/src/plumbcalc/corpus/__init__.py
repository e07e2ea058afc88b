"""Bundled example graphs and small graph generators."""
from __future__ import annotations

import random
from importlib import resources

from ..graphcore import (
    NotNegativeDefiniteError,
    PlumbingGraph,
    Vertex,
    graph_to_json,
    parse_graph,
)

NAMES = ("a1", "a2", "a3", "d4", "e6", "e7", "e8", "minus3", "star237")

__all__ = ["NAMES", "corpus_text", "load", "a_n", "random_tree", "resolve"]


def corpus_text(name: str) -> str:
    if name not in NAMES:
        raise KeyError(f"unknown corpus graph {name!r}")
    return resources.files(__name__).joinpath(f"{name}.json").read_text()


def load(name: str) -> PlumbingGraph:
    return parse_graph(corpus_text(name))


def a_n(n: int) -> PlumbingGraph:
    """The A_n chain: n vertices of Euler number -2."""
    if n < 1:
        raise ValueError("A_n needs n >= 1")
    verts = tuple(Vertex(f"v{i}", -2) for i in range(n))
    edges = tuple((f"v{i}", f"v{i + 1}") for i in range(n - 1))
    return PlumbingGraph(verts, edges)


def _negative_definite(g: PlumbingGraph) -> bool:
    from ..graphcore import IntersectionLattice

    try:
        IntersectionLattice(g)
    except NotNegativeDefiniteError:
        return False
    return True


def random_tree(seed: int, n: int, *, low: int = -5) -> PlumbingGraph:
    """A random negative-definite plumbing tree on n vertices.

    Euler numbers are drawn from [low, -1]; while the form is not negative
    definite a random vertex has its Euler number lowered by one.
    """
    rng = random.Random(seed)
    parents = [rng.randrange(i) for i in range(1, n)]
    weights = {-1: 1, -2: 6, -3: 3}
    pool = [e for e in range(low, 0) for _ in range(weights.get(e, 1))]
    eulers = [rng.choice(pool) for _ in range(n)]
    edges = tuple((f"v{p}", f"v{i + 1}") for i, p in enumerate(parents))
    while True:
        g = PlumbingGraph(tuple(Vertex(f"v{i}", e) for i, e in enumerate(eulers)), edges)
        if _negative_definite(g):
            return g
        eulers[rng.randrange(n)] -= 1


def resolve(spec: str, seed: int | None = None) -> tuple[PlumbingGraph, str]:
    """Resolve ``NAME``, ``aN`` or ``random:N`` (with ``seed``) to a graph and its JSON text."""
    if spec in NAMES:
        text = corpus_text(spec)
        return parse_graph(text), text
    if spec.startswith("a") and spec[1:].isdigit():
        g = a_n(int(spec[1:]))
    elif spec.startswith("random:") and spec[7:].isdigit():
        g = random_tree(0 if seed is None else seed, int(spec[7:]))
    else:
        raise KeyError(f"unknown corpus graph {spec!r}")
    return g, graph_to_json(g)
