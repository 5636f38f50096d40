"""Modular decomposition: classification, prime quotients and decomposition trees."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from itertools import product
from typing import Iterator, List, Optional, Tuple

from .errors import InputError
from .graph import (
    LabelledGraph,
    co_components,
    complement,
    connected_components,
    induced_subgraph,
    is_isomorphic,
    max_cliques,
    max_stable_sets,
    module_closure,
    quotient,
)


class Shape(enum.Enum):
    SINGLETON = "singleton"
    DISCONNECTED = "disconnected"
    CO_DISCONNECTED = "co-disconnected"
    BICONNECTED = "biconnected"


@dataclass(frozen=True)
class Classification:
    shape: Shape
    parts: Tuple[frozenset, ...]


def classify(g: LabelledGraph) -> Classification:
    """Exactly one of: a single node, disconnected, co-disconnected, or neither."""
    if len(g) == 0:
        raise InputError("cannot classify the empty graph")
    if len(g) == 1:
        return Classification(Shape.SINGLETON, (g.node_set,))
    comps = connected_components(g)
    if len(comps) > 1:
        return Classification(Shape.DISCONNECTED, comps)
    cocomps = co_components(g)
    if len(cocomps) > 1:
        return Classification(Shape.CO_DISCONNECTED, cocomps)
    return Classification(Shape.BICONNECTED, ())


def prime_quotient(g: LabelledGraph) -> Tuple[frozenset, ...]:
    """The maximal proper modules of a connected, co-connected graph.

    Two nodes share a maximal proper module exactly when the least module
    containing both is proper, so one closure per (node, block) pair suffices.
    """
    if classify(g).shape is not Shape.BICONNECTED:
        raise InputError("prime quotient needs a connected and co-connected graph")
    every = g.node_set
    blocks: List[List[str]] = []
    for v in g.nodes:
        for block in blocks:
            if module_closure(g, (v, block[0])) != every:
                block.append(v)
                break
        else:
            blocks.append([v])
    return g.sort_sets(blocks)


@dataclass(frozen=True)
class Tree:
    """A node of a decomposition tree.

    ``kind`` is one of ``leaf``, ``or``, ``and``, ``prime``.  Children are
    ordered by the least node they cover.  For a prime node, child ``i``
    corresponds to ``quotient.nodes[i]``, whose id is that child's least node.
    """

    kind: str
    cover: frozenset
    children: Tuple["Tree", ...] = ()
    node: Optional[str] = None
    label: Optional[str] = None
    quotient: Optional[LabelledGraph] = field(default=None, compare=False)

    @property
    def is_leaf(self) -> bool:
        return self.kind == "leaf"

    def walk(self, path: Tuple[int, ...] = ()) -> Iterator[Tuple[Tuple[int, ...], "Tree"]]:
        """Pre-order traversal yielding ``(path, subtree)``."""
        yield path, self
        for i, c in enumerate(self.children):
            yield from c.walk(path + (i,))

    def at(self, path: Tuple[int, ...]) -> "Tree":
        t = self
        for i in path:
            t = t.children[i]
        return t

    def leaves(self) -> Iterator["Tree"]:
        for _, t in self.walk():
            if t.is_leaf:
                yield t


def decompose(g: LabelledGraph) -> Tree:
    if len(g) == 0:
        raise InputError("cannot decompose the empty graph")
    if "tree" not in g._cache:
        g._cache["tree"] = _decompose(g, g, g.node_set)
    return g._cache["tree"]


def _decompose(root: LabelledGraph, g: LabelledGraph, cover: frozenset) -> Tree:
    c = classify(g)
    if c.shape is Shape.SINGLETON:
        (v,) = g.nodes
        return Tree("leaf", cover, node=v, label=g.label(v))
    if c.shape is Shape.BICONNECTED:
        parts = prime_quotient(g)
        kind = "prime"
    else:
        parts = c.parts
        kind = "or" if c.shape is Shape.DISCONNECTED else "and"
    children = tuple(_decompose(root, induced_subgraph(g, p), p) for p in parts)
    q = quotient(g, parts) if kind == "prime" else None
    return Tree(kind, cover, children, quotient=q)


def compose(t: Tree) -> LabelledGraph:
    """Rebuild the graph a decomposition tree describes."""
    nodes, labels, edges = [], {}, []

    def build(t: Tree) -> None:
        if t.is_leaf:
            nodes.append(t.node)
            labels[t.node] = t.label
            return
        for c in t.children:
            build(c)
        kids = t.children
        for i in range(len(kids)):
            for j in range(i + 1, len(kids)):
                if t.kind == "and":
                    linked = True
                elif t.kind == "prime":
                    q = t.quotient
                    linked = q.has_edge(q.nodes[i], q.nodes[j])
                else:
                    linked = False
                if linked:
                    edges.extend((u, w) for u in kids[i].cover for w in kids[j].cover)

    build(t)
    return LabelledGraph(nodes, edges, labels)


def max_cliques_via_tree(g: LabelledGraph) -> Tuple[frozenset, ...]:
    """Maximal cliques assembled from the decomposition tree."""
    if len(g) == 0:
        return ()
    return g.sort_sets(_via_tree(decompose(g), cliques=True))


def max_stable_sets_via_tree(g: LabelledGraph) -> Tuple[frozenset, ...]:
    if len(g) == 0:
        return ()
    return g.sort_sets(_via_tree(decompose(g), cliques=False))


def _via_tree(t: Tree, cliques: bool) -> List[frozenset]:
    if t.is_leaf:
        return [frozenset([t.node])]
    parts = [_via_tree(c, cliques) for c in t.children]
    union_kind = "or" if cliques else "and"
    if t.kind == union_kind:
        return [s for p in parts for s in p]
    if t.kind in ("or", "and"):
        return [frozenset().union(*combo) for combo in product(*parts)]
    q = t.quotient
    pick = max_cliques(q) if cliques else max_stable_sets(q)
    index = {v: i for i, v in enumerate(q.nodes)}
    out = []
    for s in pick:
        chosen = [parts[index[v]] for v in q.sort_nodes(s)]
        out.extend(frozenset().union(*combo) for combo in product(*chosen))
    return out


# -- rendering -----------------------------------------------------------


def _named_shapes():
    def path(n):
        return LabelledGraph.from_edges([(str(i), str(i + 1)) for i in range(n - 1)])

    p5 = path(5)
    c5 = LabelledGraph.from_edges([(str(i), str((i + 1) % 5)) for i in range(5)])
    bull = LabelledGraph.from_edges([("0", "1"), ("0", "2"), ("1", "2"), ("1", "3"), ("2", "4")])
    return [("P4", path(4)), ("P5", p5), ("C5", c5), ("coP5", complement(p5)), ("bull", bull)]


_SHAPES = None


def shape_name(q: LabelledGraph) -> str:
    """A short name for a prime quotient: a known shape or its edge list."""
    global _SHAPES
    if _SHAPES is None:
        _SHAPES = _named_shapes()
    for name, shape in _SHAPES:
        if len(shape) == len(q) and is_isomorphic(shape, q):
            return name
    pos = {v: i + 1 for i, v in enumerate(q.nodes)}
    es = ",".join(f"{pos[u]}-{pos[w]}" for u, w in q.edges)
    return f"Q{len(q)}[{es}]"


def render(t: Tree) -> str:
    """S-expression such as ``(or (and a b) (prime P4 c d e (and f g)))``."""
    if t.is_leaf:
        return t.node if t.node == t.label else f"{t.node}:{t.label}"
    inner = " ".join(render(c) for c in t.children)
    if t.kind == "prime":
        return f"(prime {shape_name(t.quotient)} {inner})"
    return f"({t.kind} {inner})"
