"""Graph and formula generators for exhaustive sweeps and random testing."""

from __future__ import annotations

import random
from functools import lru_cache
from typing import Iterator, List, Optional, Sequence, Tuple

from .formula import Formula, and_, or_, var
from .graph import LabelledGraph

NAMES = "abcdefghijklmnopqrstuvwxyz"


@lru_cache(maxsize=None)
def _atlas() -> Tuple[Tuple[int, Tuple[Tuple[int, int], ...]], ...]:
    # networkx ships every graph on up to 7 nodes, one per isomorphism class
    from networkx.generators.atlas import graph_atlas_g

    return tuple((len(g), tuple(g.edges())) for g in graph_atlas_g())


def graphs_up_to_iso(max_nodes: int, min_nodes: int = 1) -> Iterator[LabelledGraph]:
    """One linear graph per isomorphism class, nodes named a, b, c, ..."""
    if max_nodes > 7:
        raise ValueError("the graph atlas only covers graphs on at most 7 nodes")
    for n, edges in _atlas():
        if min_nodes <= n <= max_nodes:
            ids = NAMES[:n]
            yield LabelledGraph(ids, [(ids[u], ids[v]) for u, v in edges])


def all_graphs(nodes: Sequence[str]) -> Iterator[LabelledGraph]:
    """Every graph on the given node ids (not up to isomorphism)."""
    pairs = [(u, w) for i, u in enumerate(nodes) for w in nodes[i + 1 :]]
    for mask in range(1 << len(pairs)):
        yield LabelledGraph(nodes, [p for k, p in enumerate(pairs) if mask >> k & 1])


def random_graph(
    rng: random.Random, n: int, p: Optional[float] = None, labels: Optional[Sequence[str]] = None, prefix: str = ""
) -> LabelledGraph:
    """G(n, p) with ids ``prefix + a..``; labels drawn from ``labels`` when given."""
    p = rng.random() if p is None else p
    ids = [prefix + (NAMES[i] if i < 26 else f"n{i}") for i in range(n)]
    edges = [(u, w) for i, u in enumerate(ids) for w in ids[i + 1 :] if rng.random() < p]
    lab = {u: rng.choice(labels) for u in ids} if labels else None
    return LabelledGraph(ids, edges, lab)


def random_read_once(rng: random.Random, variables: Sequence[str]) -> Formula:
    """A random formula using each variable exactly once, with fan-in 2 or 3."""
    vs: List[str] = list(variables)
    rng.shuffle(vs)

    def build(names: List[str], kind: str) -> Formula:
        if len(names) == 1:
            return var(names[0])
        k = min(len(names), rng.choice((2, 2, 3)))
        cuts = sorted(rng.sample(range(1, len(names)), k - 1))
        groups = [names[a:b] for a, b in zip([0] + cuts, cuts + [len(names)])]
        flip = "and" if kind == "or" else "or"
        kids = [build(g, flip) for g in groups]
        return or_(*kids) if kind == "or" else and_(*kids)

    return build(vs, rng.choice(("or", "and")))
