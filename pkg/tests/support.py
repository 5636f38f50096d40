"""Shared helpers for the test-suite: hypothesis strategies, brute-force oracles
and a generator of random rule applications."""

from __future__ import annotations

import random
from itertools import combinations, product
from typing import Dict, FrozenSet, Iterator, List, Optional, Sequence

import networkx as nx
from hypothesis import strategies as st

from bgl import games
from bgl.decomposition import decompose
from bgl.errors import InputError
from bgl.generators import random_graph
from bgl.graph import (
    LabelledGraph,
    complement,
    components_within,
    disjoint_union,
    induced_subgraph,
    join,
    relabel_nodes,
    substitute,
)
from bgl.proofs import SYSTEM, _splits, instance

IDS = "abcdefgh"


# -- hypothesis strategies ------------------------------------------------------


@st.composite
def graphs(draw, min_nodes: int = 0, max_nodes: int = 7, labels: Optional[str] = None):
    """Graphs on ids a.. with an arbitrary edge set; ``labels`` draws repeated labels."""
    n = draw(st.integers(min_nodes, max_nodes))
    ids = IDS[:n]
    pairs = [(u, w) for i, u in enumerate(ids) for w in ids[i + 1 :]]
    mask = draw(st.lists(st.booleans(), min_size=len(pairs), max_size=len(pairs)))
    lab = None
    if labels:
        lab = {u: draw(st.sampled_from(labels)) for u in ids}
    return LabelledGraph(ids, [p for p, keep in zip(pairs, mask) if keep], lab)


def assignments(labels: Sequence[str]) -> Iterator[FrozenSet[str]]:
    labels = list(labels)
    for bits in product((0, 1), repeat=len(labels)):
        yield frozenset(l for l, b in zip(labels, bits) if b)


# -- oracles built on networkx ----------------------------------------------------------


def to_nx(g: LabelledGraph) -> nx.Graph:
    h = nx.Graph()
    h.add_nodes_from(g.nodes)
    h.add_edges_from(g.edges)
    return h


def nx_cliques(g: LabelledGraph):
    if len(g) == 0:
        return set()
    return {frozenset(c) for c in nx.find_cliques(to_nx(g))}


def nx_stable_sets(g: LabelledGraph):
    if len(g) == 0:
        return set()
    return {frozenset(c) for c in nx.find_cliques(nx.complement(to_nx(g)))}


def oracle_eval(g: LabelledGraph, x) -> set:
    """Outputs from the definition: 1 via a clique inside x, 0 via a stable set avoiding x."""
    x = set(x)
    lab = g.label
    out = set()
    if any({lab(v) for v in c} <= x for c in nx_cliques(g)):
        out.add(1)
    if any(not ({lab(v) for v in s} & x) for s in nx_stable_sets(g)):
        out.add(0)
    return out


def oracle_is_module(g: LabelledGraph, xs) -> bool:
    xs = set(xs)
    outside = [v for v in g.nodes if v not in xs]
    return all(len({g.has_edge(z, u) for u in xs}) <= 1 for z in outside)


def oracle_is_prime(g: LabelledGraph) -> bool:
    n = len(g)
    if n < 3:
        return False
    for k in range(2, n):
        for xs in combinations(g.nodes, k):
            if oracle_is_module(g, xs):
                return False
    return True


def oracle_has_p4(g: LabelledGraph) -> bool:
    return any(
        sorted(d for _, d in nx.subgraph(to_nx(g), quad).degree()) == [1, 1, 2, 2]
        and nx.is_connected(nx.subgraph(to_nx(g), quad))
        for quad in combinations(g.nodes, 4)
    )


# -- games: strategy-pair enumeration ------------------------------------------------


def brute_static(g: LabelledGraph, x, player: str, goal: str) -> bool:
    """Some static strategy reaches the goal against every static opponent."""
    opp = games.other(player)
    mine = list(games.strategies(g, player, games.STATIC))
    theirs = list(games.strategies(g, opp, games.STATIC))
    return any(all(_ok(g, x, s, t, player, goal, None) for t in theirs) for s in mine)


def brute_reactionary(g: LabelledGraph, x, player: str, goal: str) -> bool:
    """Some reactionary strategy (moving second) reaches the goal against every static opponent."""
    opp = games.other(player)
    mine = list(games.strategies(g, player, games.REACTIONARY))
    theirs = list(games.strategies(g, opp, games.STATIC))
    return any(all(_ok(g, x, s, t, player, goal, player) for t in theirs) for s in mine)


def _ok(g, x, s, t, player, goal, second) -> bool:
    e, a = (s, t) if player == games.ELOISE else (t, s)
    result = games.winner(games.play(g, e, a, second), x)
    return result == player or (goal == games.DRAW_OR_WIN and result == games.DRAW)


# -- random rule applications -------------------------------------------------------------


def _covers(g: LabelledGraph) -> List[FrozenSet[str]]:
    return [t.cover for _, t in decompose(g).walk()]


def _block(rng: random.Random, n: int, tag: str, labels) -> LabelledGraph:
    return random_graph(rng, n, labels=labels, prefix=tag)


def _copy_of(g: LabelledGraph, sub: LabelledGraph, tag: str) -> LabelledGraph:
    return relabel_nodes(sub, {v: f"{tag}{v}" for v in sub.nodes})


def _app_w_r(rng, g, flavor, labels):
    m = rng.choice(_covers(g))
    part = _block(rng, rng.randint(1, 2), "p", labels)
    return instance(g, "w_r", module=m, part=part)


def _app_w_l(rng, g, flavor, labels):
    ands = [t for _, t in decompose(g).walk() if t.kind == "and"]
    if not ands:
        return None
    t = rng.choice(ands)
    k = rng.randint(1, len(t.children) - 1)
    keep = frozenset().union(*(c.cover for c in rng.sample(t.children, k)))
    return instance(g, "w_l", module=t.cover, keep=keep)


def _app_c_r(rng, g, flavor, labels):
    m = rng.choice(_covers(g))
    sub = induced_subgraph(g, m)
    twin = _copy_of(g, sub, "t")
    if twin.node_set & g.node_set:
        return None
    g2 = substitute(g, m, disjoint_union(sub, twin))
    return instance(g2, "c_r", module=m | twin.node_set, keep=m)


def _app_c_l(rng, g, flavor, labels):
    return instance(g, "c_l", module=rng.choice(_covers(g)))


def _random_split(rng, h: LabelledGraph, v: str):
    options = list(_splits(h, v))
    comps = components_within(h, h.neighbours(v))
    if not comps:
        options.append((frozenset(), frozenset()))
    if len(comps) >= 2:
        first = rng.randrange(1, 2 ** len(comps) - 1)
        r0 = frozenset().union(*(c for i, c in enumerate(comps) if first >> i & 1))
        r1 = frozenset().union(*(c for i, c in enumerate(comps) if not first >> i & 1))
        options.append((r0, r1))
    return rng.choice(options) if options else None


def _app_d(rng, g, flavor, labels):
    h = g if flavor == "and" else complement(g)
    nodes = list(h.nodes)
    rng.shuffle(nodes)
    for v in nodes:
        split = _random_split(rng, h, v)
        if split is not None:
            break
    else:
        return None
    rule = "d_and" if flavor == "and" else "d_or"
    return instance(g, rule, pivot=v, r0=split[0], r1=split[1])


def _app_d_inv(rng, g, flavor, labels):
    st0 = _app_d(rng, g, flavor, labels)
    if st0 is None:
        return None
    v = next(iter(st0.location["pivot"]))
    (new,) = st0.location["copy"].values()
    return instance(st0.target, f"d_{flavor}_inv", keep=v, merge={new: v})


def prime_medial_source(rng: random.Random, labels, max_nodes: int = 8):
    """A graph P[G1..Gn] beside P[G1'..Gn'] (P an edge, a non-edge or P4), plus blocks."""
    n = rng.choice((2, 2, 4))
    shape = [(0, 1)] if n == 2 and rng.random() < 0.5 else []
    if n == 4:
        shape = [(0, 1), (1, 2), (2, 3)]
    budget = max_nodes - 2 * n
    sizes = [1] * (2 * n)
    while budget > 0 and rng.random() < 0.6:
        sizes[rng.randrange(2 * n)] += 1
        budget -= 1
    blocks = [_block(rng, sizes[i], f"{'lr'[i // n]}{i % n}_", labels) for i in range(2 * n)]
    left, right = blocks[:n], blocks[n:]

    def assemble(parts):
        g = disjoint_union(*parts)
        edges = list(g.edges)
        for i, j in shape:
            edges.extend((u, w) for u in parts[i].nodes for w in parts[j].nodes)
        return LabelledGraph(g.nodes, edges, g.labels)

    g = disjoint_union(assemble(left), assemble(right))
    return g, [b.node_set for b in left], [b.node_set for b in right]


def module_split_source(rng: random.Random, labels, max_nodes: int = 8):
    """M0 joined to M1, both joined to every node of R0 and R1; R0, R1 non-adjacent."""
    while True:
        sizes = [rng.randint(1, 2), rng.randint(1, 2), rng.randint(0, 2), rng.randint(0, 2)]
        if sum(sizes) <= max_nodes:
            break
    m0, m1, r0, r1 = (_block(rng, k, f"{t}_", labels) for k, t in zip(sizes, ("m", "n", "r", "s")))
    m = join(m0, m1)
    g = disjoint_union(m, r0, r1)
    edges = list(g.edges)
    edges.extend((u, w) for u in m.nodes for w in list(r0.nodes) + list(r1.nodes))
    g = LabelledGraph(g.nodes, edges, g.labels)
    return g, m0.node_set, m1.node_set, r0.node_set, r1.node_set


def _app_prime_medial(rng, g, flavor, labels):
    src, left, right = prime_medial_source(rng, labels)
    return instance(src, "prime_medial", left=left, right=right)


def _app_module_split(rng, g, flavor, labels):
    src, m0, m1, r0, r1 = module_split_source(rng, labels)
    return instance(src, "module_split", m0=m0, m1=m1, r0=r0, r1=r1)


_MAKERS = {
    "w_r": _app_w_r,
    "w_l": _app_w_l,
    "c_r": _app_c_r,
    "c_l": _app_c_l,
    "d_and": _app_d,
    "d_or": _app_d,
    "d_and_inv": _app_d_inv,
    "d_or_inv": _app_d_inv,
    "prime_medial": _app_prime_medial,
    "module_split": _app_module_split,
}


def random_application(rng: random.Random, flavor: str, rule: Optional[str] = None):
    """A random valid rule instance of the given system, on a small random graph."""
    name = rule or rng.choice(sorted(SYSTEM[flavor]))
    while True:
        labels = "abcd" if rng.random() < 0.3 else None
        g = random_graph(rng, rng.randint(1, 6), labels=labels)
        try:
            st0 = _MAKERS[name](rng, g, flavor, labels)
        except InputError:
            continue
        if st0 is not None:
            return st0


def counts(items) -> Dict[str, int]:
    out: Dict[str, int] = {}
    for i in items:
        out[i] = out.get(i, 0) + 1
    return out
