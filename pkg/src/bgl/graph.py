"""Labelled simple graphs and their basic combinatorics.

A graph has opaque string node ids, an undirected loop-free edge set and a
label (variable name) on every node.  Labels may repeat; a graph whose labels
are pairwise distinct is called linear.

Everything set-valued is returned in a canonical order: nodes sort by
``(label, id)`` and node sets sort by the sorted tuple of their node keys.
"""

from __future__ import annotations

from itertools import combinations
from pathlib import Path
from typing import Dict, Iterable, Iterator, List, Mapping, Optional, Sequence, Tuple

from .errors import InputError, ParseError

NodeSet = frozenset


class LabelledGraph:
    """Immutable labelled graph.

    ``nodes`` may be any iterable of ids (coerced to ``str``).  ``labels``
    maps ids to variable names; missing entries default to the id itself.
    """

    def __init__(
        self,
        nodes: Iterable = (),
        edges: Iterable[Tuple] = (),
        labels: Optional[Mapping] = None,
    ):
        labels = labels or {}
        adj: Dict[str, set] = {}
        lab: Dict[str, str] = {}
        for v in nodes:
            v = str(v)
            adj.setdefault(v, set())
        for v in adj:
            lab[v] = str(labels.get(v, v))
        extra = set(map(str, labels)) - adj.keys()
        if extra:
            raise InputError(f"labels given for unknown nodes: {sorted(extra)}")
        for e in edges:
            u, w = (str(x) for x in e)
            if u == w:
                raise InputError(f"self-loop on node {u!r}")
            if u not in adj or w not in adj:
                missing = u if u not in adj else w
                raise InputError(f"edge endpoint {missing!r} is not a declared node")
            adj[u].add(w)
            adj[w].add(u)
        self._adj: Dict[str, frozenset] = {v: frozenset(n) for v, n in adj.items()}
        self._labels = lab
        self._order = tuple(sorted(adj, key=lambda v: (lab[v], v)))
        self._rank = {v: i for i, v in enumerate(self._order)}
        self._cache: dict = {}

    @classmethod
    def from_edges(cls, edges: Iterable[Tuple], nodes: Iterable = (), labels=None) -> "LabelledGraph":
        """Build a graph whose node set is ``nodes`` plus every edge endpoint."""
        edges = [tuple(map(str, e)) for e in edges]
        allnodes = list(map(str, nodes))
        for u, w in edges:
            allnodes.extend((u, w))
        return cls(dict.fromkeys(allnodes), edges, labels)

    # -- basic accessors -------------------------------------------------

    @property
    def nodes(self) -> Tuple[str, ...]:
        return self._order

    @property
    def node_set(self) -> frozenset:
        return frozenset(self._adj)

    @property
    def labels(self) -> Dict[str, str]:
        return dict(self._labels)

    def label(self, v: str) -> str:
        return self._labels[v]

    def key(self, v: str) -> Tuple[str, str]:
        return (self._labels[v], v)

    def neighbours(self, v: str) -> frozenset:
        return self._adj[v]

    def has_edge(self, u: str, v: str) -> bool:
        return v in self._adj[u]

    def degree(self, v: str) -> int:
        return len(self._adj[v])

    @property
    def edges(self) -> Tuple[Tuple[str, str], ...]:
        rank = self._rank
        out = []
        for u in self._order:
            for w in self._adj[u]:
                if rank[u] < rank[w]:
                    out.append((u, w))
        out.sort(key=lambda e: (rank[e[0]], rank[e[1]]))
        return tuple(out)

    def edge_set(self) -> frozenset:
        return frozenset(frozenset(e) for e in self.edges)

    def is_linear(self) -> bool:
        return len(set(self._labels.values())) == len(self._labels)

    def label_values(self) -> Tuple[str, ...]:
        """Distinct labels, sorted."""
        return tuple(sorted(set(self._labels.values())))

    def sort_nodes(self, xs: Iterable[str]) -> Tuple[str, ...]:
        return tuple(sorted(xs, key=self._rank.__getitem__))

    def least(self, xs: Iterable[str]) -> str:
        return min(xs, key=self._rank.__getitem__)

    def set_key(self, xs: Iterable[str]) -> Tuple[int, ...]:
        return tuple(sorted(self._rank[v] for v in xs))

    def sort_sets(self, sets: Iterable[Iterable[str]]) -> Tuple[frozenset, ...]:
        return tuple(sorted((frozenset(s) for s in sets), key=self.set_key))

    def check_nodes(self, xs: Iterable[str]) -> frozenset:
        xs = frozenset(map(str, xs))
        unknown = xs - self._adj.keys()
        if unknown:
            raise InputError(f"unknown node ids: {sorted(unknown)}")
        return xs

    def __len__(self) -> int:
        return len(self._adj)

    def __iter__(self) -> Iterator[str]:
        return iter(self._order)

    def __contains__(self, v) -> bool:
        return v in self._adj

    def __eq__(self, other) -> bool:
        if not isinstance(other, LabelledGraph):
            return NotImplemented
        return self._labels == other._labels and self._adj == other._adj

    def __hash__(self) -> int:
        return hash((frozenset(self._labels.items()), self.edge_set()))

    def __repr__(self) -> str:
        parts = []
        for v in self._order:
            lab = self._labels[v]
            parts.append(v if lab == v else f"{v}:{lab}")
        es = " ".join(f"{u}-{w}" for u, w in self.edges)
        return f"LabelledGraph([{' '.join(parts)}] {{{es}}})"


# -- constructions -------------------------------------------------------


def complement(g: LabelledGraph) -> LabelledGraph:
    """Same nodes and labels; an edge exactly where ``g`` has none."""
    nodes = g.nodes
    edges = [(u, w) for u, w in combinations(nodes, 2) if not g.has_edge(u, w)]
    return LabelledGraph(nodes, edges, g.labels)


def induced_subgraph(g: LabelledGraph, xs: Iterable[str]) -> LabelledGraph:
    xs = g.check_nodes(xs)
    edges = [(u, w) for u, w in g.edges if u in xs and w in xs]
    return LabelledGraph(xs, edges, {v: g.label(v) for v in xs})


def disjoint_union(*graphs: LabelledGraph) -> LabelledGraph:
    return _combine(graphs, joined=False)


def join(*graphs: LabelledGraph) -> LabelledGraph:
    """Disjoint union plus every edge between different operands."""
    return _combine(graphs, joined=True)


def _combine(graphs: Sequence[LabelledGraph], joined: bool) -> LabelledGraph:
    nodes: List[str] = []
    labels: Dict[str, str] = {}
    edges: List[Tuple[str, str]] = []
    for g in graphs:
        clash = labels.keys() & g.node_set
        if clash:
            raise InputError(f"node ids shared between operands: {sorted(clash)}")
        if joined:
            edges.extend((u, w) for u in nodes for w in g.nodes)
        nodes.extend(g.nodes)
        labels.update(g.labels)
        edges.extend(g.edges)
    return LabelledGraph(nodes, edges, labels)


def relabel_nodes(g: LabelledGraph, mapping: Mapping[str, str]) -> LabelledGraph:
    """Rename node ids (labels are kept); unmapped ids stay as they are."""
    new = {v: mapping.get(v, v) for v in g.nodes}
    if len(set(new.values())) != len(new):
        raise InputError("renaming is not injective")
    return LabelledGraph(
        new.values(),
        [(new[u], new[w]) for u, w in g.edges],
        {new[v]: g.label(v) for v in g.nodes},
    )


def substitute(g: LabelledGraph, module: Iterable[str], replacement: LabelledGraph) -> LabelledGraph:
    """Replace the module ``module`` of ``g`` by ``replacement``.

    Every node of the replacement inherits the module's outside neighbourhood.
    """
    m = g.check_nodes(module)
    if not is_module(g, m):
        raise InputError("substitution target is not a module")
    rest = [v for v in g.nodes if v not in m]
    clash = set(rest) & replacement.node_set
    if clash:
        raise InputError(f"replacement reuses outside node ids: {sorted(clash)}")
    outside = external_neighbours(g, m)
    edges = [(u, w) for u, w in g.edges if u not in m and w not in m]
    edges.extend(replacement.edges)
    edges.extend((r, z) for r in replacement.nodes for z in outside)
    labels = {v: g.label(v) for v in rest}
    labels.update(replacement.labels)
    return LabelledGraph(rest + list(replacement.nodes), edges, labels)


# -- cliques and stable sets --------------------------------------------


def is_clique(g: LabelledGraph, xs: Iterable[str]) -> bool:
    xs = list(xs)
    return all(g.has_edge(u, w) for u, w in combinations(xs, 2))


def is_stable(g: LabelledGraph, xs: Iterable[str]) -> bool:
    xs = list(xs)
    return not any(g.has_edge(u, w) for u, w in combinations(xs, 2))


def _bron_kerbosch(adj: Mapping[str, frozenset], nodes: Iterable[str]) -> List[frozenset]:
    out: List[frozenset] = []

    def expand(r: frozenset, p: set, x: set) -> None:
        if not p and not x:
            out.append(r)
            return
        pivot = max(p | x, key=lambda u: len(p & adj[u]))
        for v in list(p - adj[pivot]):
            expand(r | {v}, p & adj[v], x & adj[v])
            p.discard(v)
            x.add(v)

    nodes = set(nodes)
    if nodes:
        expand(frozenset(), nodes, set())
    return out


def max_cliques(g: LabelledGraph) -> Tuple[frozenset, ...]:
    """All inclusion-maximal cliques, canonically ordered (empty graph: none)."""
    if "mc" not in g._cache:
        g._cache["mc"] = g.sort_sets(_bron_kerbosch(g._adj, g.nodes))
    return g._cache["mc"]


def max_stable_sets(g: LabelledGraph) -> Tuple[frozenset, ...]:
    """All inclusion-maximal stable sets, i.e. the maximal cliques of the complement."""
    if "ms" not in g._cache:
        every = g.node_set
        co_adj = {v: every - g.neighbours(v) - {v} for v in g.nodes}
        g._cache["ms"] = g.sort_sets(_bron_kerbosch(co_adj, g.nodes))
    return g._cache["ms"]


def label_set(g: LabelledGraph, xs: Iterable[str]) -> frozenset:
    return frozenset(g.label(v) for v in xs)


# -- connectivity --------------------------------------------------------


def _components(nodes: Iterable[str], adjacent) -> List[frozenset]:
    todo = set(nodes)
    comps = []
    while todo:
        start = todo.pop()
        comp = {start}
        stack = [start]
        while stack:
            v = stack.pop()
            for w in adjacent(v):
                if w in todo:
                    todo.discard(w)
                    comp.add(w)
                    stack.append(w)
        comps.append(frozenset(comp))
    return comps


def connected_components(g: LabelledGraph) -> Tuple[frozenset, ...]:
    return g.sort_sets(_components(g.nodes, g.neighbours))


def co_components(g: LabelledGraph) -> Tuple[frozenset, ...]:
    """Connected components of the complement."""
    every = g.node_set
    return g.sort_sets(_components(g.nodes, lambda v: every - g.neighbours(v) - {v}))


def components_within(g: LabelledGraph, xs: Iterable[str]) -> Tuple[frozenset, ...]:
    """Connected components of the subgraph induced by ``xs``."""
    xs = frozenset(xs)
    return g.sort_sets(_components(xs, lambda v: g.neighbours(v) & xs))


def is_connected(g: LabelledGraph) -> bool:
    return len(connected_components(g)) <= 1


def is_co_connected(g: LabelledGraph) -> bool:
    return len(co_components(g)) <= 1


# -- modules -------------------------------------------------------------


def is_module(g: LabelledGraph, xs: Iterable[str]) -> bool:
    m = g.check_nodes(xs)
    if len(m) <= 1:
        return True
    first = next(iter(m))
    outside = g.neighbours(first) - m
    return all(g.neighbours(v) - m == outside for v in m)


def external_neighbours(g: LabelledGraph, xs: Iterable[str]) -> frozenset:
    """Nodes outside the module adjacent to it (hence to all of it)."""
    m = frozenset(xs)
    if not m:
        return frozenset()
    return g.neighbours(next(iter(m))) - m


def module_closure(g: LabelledGraph, seed: Iterable[str]) -> frozenset:
    """The least module containing ``seed``."""
    m = set(g.check_nodes(seed))
    if len(m) <= 1:
        return frozenset(m)
    changed = True
    while changed:
        changed = False
        size = len(m)
        for z in g.nodes:
            if z in m:
                continue
            k = len(g.neighbours(z) & m)
            if 0 < k < size:
                m.add(z)
                size += 1
                changed = True
    return frozenset(m)


def quotient(g: LabelledGraph, partition: Iterable[Iterable[str]]) -> LabelledGraph:
    """Quotient by a modular partition.

    Each block becomes one node whose id and label are those of the block's
    least node.
    """
    blocks = [g.check_nodes(b) for b in partition]
    seen: set = set()
    for b in blocks:
        if not b:
            raise InputError("empty block in partition")
        if seen & b:
            raise InputError("blocks overlap")
        seen |= b
        if not is_module(g, b):
            raise InputError(f"block {sorted(b)} is not a module")
    if seen != g.node_set:
        raise InputError("blocks do not cover the graph")
    reps = [g.least(b) for b in blocks]
    edges = [
        (reps[i], reps[j])
        for i, j in combinations(range(len(blocks)), 2)
        if g.has_edge(reps[i], reps[j])
    ]
    return LabelledGraph(reps, edges, {r: g.label(r) for r in reps})


def find_induced_p4(g: LabelledGraph) -> Optional[Tuple[str, str, str, str]]:
    """Some induced path a-b-c-d, or None if the graph is P4-free."""
    for b, c in g.edges:
        for mid1, mid2 in ((b, c), (c, b)):
            nb, nc = g.neighbours(mid1), g.neighbours(mid2)
            left = [a for a in g.sort_nodes(nb - nc) if a != mid2]
            right = [d for d in g.sort_nodes(nc - nb) if d != mid1]
            for a in left:
                for d in right:
                    if not g.has_edge(a, d):
                        return (a, mid1, mid2, d)
    return None


def is_p4_free(g: LabelledGraph) -> bool:
    return find_induced_p4(g) is None


def is_prime(g: LabelledGraph) -> bool:
    """True iff the graph has at least 3 nodes and only trivial modules."""
    n = len(g)
    if n < 3:
        return False
    every = g.node_set
    return all(module_closure(g, pair) == every for pair in combinations(g.nodes, 2))


# -- isomorphism ---------------------------------------------------------


def find_isomorphism(
    g: LabelledGraph, h: LabelledGraph, respect_labels: bool = False
) -> Optional[Dict[str, str]]:
    """A node bijection preserving adjacency (and labels if asked), or None."""
    if len(g) != len(h) or len(g.edges) != len(h.edges):
        return None

    def sig(graph, v):
        return (graph.degree(v), graph.label(v) if respect_labels else "")

    gsig = sorted(sig(g, v) for v in g.nodes)
    hsig = sorted(sig(h, v) for v in h.nodes)
    if gsig != hsig:
        return None
    by_sig: Dict[tuple, List[str]] = {}
    for w in h.nodes:
        by_sig.setdefault(sig(h, w), []).append(w)

    # visit g's nodes so that each one (after the first) touches earlier ones
    order: List[str] = []
    placed: set = set()
    remaining = list(g.nodes)
    while remaining:
        best = max(
            remaining,
            key=lambda v: (len(g.neighbours(v) & placed), -len(by_sig[sig(g, v)]), g.degree(v)),
        )
        order.append(best)
        placed.add(best)
        remaining.remove(best)

    mapping: Dict[str, str] = {}
    used: set = set()

    def extend(i: int) -> bool:
        if i == len(order):
            return True
        v = order[i]
        for w in by_sig[sig(g, v)]:
            if w in used:
                continue
            if all(g.has_edge(v, a) == h.has_edge(w, b) for a, b in mapping.items()):
                mapping[v] = w
                used.add(w)
                if extend(i + 1):
                    return True
                del mapping[v]
                used.discard(w)
        return False

    return dict(mapping) if extend(0) else None


def is_isomorphic(g: LabelledGraph, h: LabelledGraph, respect_labels: bool = False) -> bool:
    """Graph isomorphism by backtracking; labels are ignored unless asked."""
    return find_isomorphism(g, h, respect_labels) is not None


# -- text format ---------------------------------------------------------


def parse_graph(text: str) -> LabelledGraph:
    """Parse the line-based graph format (``node id [label]`` / ``edge u v``)."""
    nodes: Dict[str, str] = {}
    edges: List[Tuple[str, str]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        toks = line.split()
        if not toks:
            continue
        col = raw.index(toks[0]) + 1
        kind = toks[0]
        if kind == "node":
            if len(toks) not in (2, 3):
                raise ParseError("expected 'node <id> [<label>]'", lineno, col)
            if toks[1] in nodes:
                raise ParseError(f"node {toks[1]!r} declared twice", lineno, col)
            nodes[toks[1]] = toks[2] if len(toks) == 3 else toks[1]
        elif kind == "edge":
            if len(toks) != 3:
                raise ParseError("expected 'edge <id> <id>'", lineno, col)
            u, w = toks[1], toks[2]
            if u == w:
                raise ParseError(f"self-loop on node {u!r}", lineno, col)
            for x in (u, w):
                if x not in nodes:
                    raise ParseError(f"edge mentions undeclared node {x!r}", lineno, col)
            edges.append((u, w))
        else:
            raise ParseError(f"unknown directive {kind!r}", lineno, col)
    return LabelledGraph(nodes, edges, nodes)


def format_graph(g: LabelledGraph) -> str:
    lines = []
    for v in g.nodes:
        lab = g.label(v)
        lines.append(f"node {v}" if lab == v else f"node {v} {lab}")
    lines.extend(f"edge {u} {w}" for u, w in g.edges)
    return "\n".join(lines) + "\n"


def read_graph(path) -> LabelledGraph:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from exc
    return parse_graph(text)
