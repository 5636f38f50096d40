"""Relational evaluation of graphs, entailment, and the determinism/totality checks."""

from __future__ import annotations

from itertools import combinations, product
from typing import Dict, FrozenSet, Iterable, Iterator, List, Optional, Sequence, Tuple

from .decomposition import Tree, decompose
from .errors import InputError, ResourceError
from .graph import LabelledGraph, label_set, max_cliques, max_stable_sets

TOTALITY_LABEL_LIMIT = 20


class EvalResult(frozenset):
    """A subset of ``{0, 1}``: the outputs a graph relates an assignment to."""

    def __new__(cls, bits: Iterable[int] = ()):
        bits = frozenset(bits)
        if not bits <= {0, 1}:
            raise ValueError(f"not a set of bits: {set(bits)}")
        return super().__new__(cls, bits)

    def __str__(self) -> str:
        return "{" + ",".join(str(b) for b in sorted(self)) + "}"

    __repr__ = __str__


def parse_assignment(text: str) -> FrozenSet[str]:
    """Comma separated variable names; the empty string is the empty assignment."""
    names = [t.strip() for t in text.split(",")]
    if names == [""]:
        return frozenset()
    if any(not n or any(ch.isspace() for ch in n) for n in names):
        raise InputError(f"malformed assignment {text!r}")
    return frozenset(names)


def _label_sets(g: LabelledGraph, sets: Iterable[frozenset]) -> List[frozenset]:
    return [label_set(g, s) for s in sets]


def clique_labels(g: LabelledGraph) -> Tuple[frozenset, ...]:
    """Label sets of the maximal cliques (duplicates removed, sorted)."""
    return tuple(sorted(set(_label_sets(g, max_cliques(g))), key=sorted))


def stable_labels(g: LabelledGraph) -> Tuple[frozenset, ...]:
    return tuple(sorted(set(_label_sets(g, max_stable_sets(g))), key=sorted))


def evaluate(g: LabelledGraph, x: Iterable[str]) -> EvalResult:
    x = frozenset(x)
    bits = set()
    if any(s <= x for s in clique_labels(g)):
        bits.add(1)
    if any(not (t & x) for t in stable_labels(g)):
        bits.add(0)
    return EvalResult(bits)


def evaluate_recursive(g: LabelledGraph, x: Iterable[str]) -> EvalResult:
    """Evaluate bottom-up over the decomposition tree."""
    x = frozenset(x)
    one, zero = node_values(decompose(g), x)[()]
    return EvalResult(b for b, ok in ((1, one), (0, zero)) if ok)


def node_values(t: Tree, x: FrozenSet[str]) -> Dict[Tuple[int, ...], Tuple[bool, bool]]:
    """For every tree position, whether that module relates ``x`` to 1 and to 0."""
    out: Dict[Tuple[int, ...], Tuple[bool, bool]] = {}

    def go(t: Tree, path: Tuple[int, ...]) -> Tuple[bool, bool]:
        if t.is_leaf:
            res = (t.label in x, t.label not in x)
        else:
            kids = [go(c, path + (i,)) for i, c in enumerate(t.children)]
            ones = [k[0] for k in kids]
            zeros = [k[1] for k in kids]
            if t.kind == "or":
                res = (any(ones), all(zeros))
            elif t.kind == "and":
                res = (all(ones), any(zeros))
            else:
                q = t.quotient
                pos = {v for v, k in zip(q.nodes, kids) if k[0]}
                neg = {v for v, k in zip(q.nodes, kids) if not k[1]}
                res = (
                    any(s <= pos for s in max_cliques(q)),
                    any(not (s & neg) for s in max_stable_sets(q)),
                )
        out[path] = res
        return res

    go(t, ())
    return out


def entails_and(g: LabelledGraph, h: LabelledGraph) -> bool:
    """Every maximal clique of ``g`` contains (label-wise) one of ``h``."""
    hs = clique_labels(h)
    return all(any(t <= s for t in hs) for s in clique_labels(g))


def entails_or(g: LabelledGraph, h: LabelledGraph) -> bool:
    """Every maximal stable set of ``h`` contains (label-wise) one of ``g``."""
    gs = stable_labels(g)
    return all(any(t <= s for t in gs) for s in stable_labels(h))


def entails(g: LabelledGraph, h: LabelledGraph, flavor: str) -> bool:
    if flavor == "and":
        return entails_and(g, h)
    if flavor == "or":
        return entails_or(g, h)
    raise InputError(f"unknown entailment flavor {flavor!r}")


def is_cis(g: LabelledGraph) -> bool:
    """Every maximal clique meets every maximal stable set."""
    return all(s & t for s in max_cliques(g) for t in max_stable_sets(g))


def is_deterministic(g: LabelledGraph) -> bool:
    """No assignment is related to both 0 and 1.

    That happens exactly when some maximal clique and maximal stable set have
    disjoint label sets (take the clique's labels as the assignment), so for
    linear graphs this coincides with the CIS property.
    """
    return all(s & t for s in clique_labels(g) for t in stable_labels(g))


def _assignments(labels: Sequence[str]) -> Iterator[FrozenSet[str]]:
    for bits in product((False, True), repeat=len(labels)):
        yield frozenset(l for l, b in zip(labels, bits) if b)


def nontotal_witnesses(g: LabelledGraph, limit: int = TOTALITY_LABEL_LIMIT) -> Iterator[FrozenSet[str]]:
    """Assignments related to nothing, in order of increasing size."""
    labels = g.label_values()
    if len(labels) > limit:
        raise ResourceError(f"totality check over {len(labels)} labels exceeds the limit of {limit}")
    bit = {l: 1 << i for i, l in enumerate(labels)}

    def mask(s):
        m = 0
        for l in s:
            m |= bit[l]
        return m

    cms = [mask(s) for s in clique_labels(g)]
    sms = [mask(t) for t in stable_labels(g)]
    n = len(labels)
    for size in range(n + 1):
        for combo in combinations(range(n), size):
            x = 0
            for i in combo:
                x |= 1 << i
            if not any(c & ~x == 0 for c in cms) and all(t & x for t in sms):
                yield frozenset(labels[i] for i in combo)


def is_total(g: LabelledGraph, limit: int = TOTALITY_LABEL_LIMIT) -> bool:
    """Every assignment over the graph's labels is related to 0 or 1."""
    return next(nontotal_witnesses(g, limit), None) is None


def find_nontotal_witness(g: LabelledGraph) -> Optional[FrozenSet[str]]:
    return next(nontotal_witnesses(g), None)


# -- selections and coverings --------------------------------------------


def is_selection(g: LabelledGraph, y: Iterable[str], sel: Iterable[Iterable[str]]) -> bool:
    """``sel`` picks, for each x in y, a maximal stable set meeting y exactly in x."""
    y = g.check_nodes(y)
    sel = [frozenset(t) for t in sel]
    ms = set(max_stable_sets(g))
    if any(t not in ms for t in sel):
        return False
    hits = []
    for t in sel:
        meet = t & y
        if len(meet) != 1:
            return False
        hits.append(next(iter(meet)))
    return len(hits) == len(y) and set(hits) == set(y)


def is_covering(g: LabelledGraph, y: Iterable[str], sel: Iterable[Iterable[str]]) -> bool:
    """A selection whose union contains a maximal stable set avoiding y."""
    y = g.check_nodes(y)
    sel = [frozenset(t) for t in sel]
    if not is_selection(g, y, sel):
        return False
    union = frozenset().union(*sel) if sel else frozenset()
    return any(d <= union and not (d & y) for d in max_stable_sets(g))


def selections(g: LabelledGraph, y: Iterable[str]) -> Iterator[Tuple[frozenset, ...]]:
    """Every selection with respect to ``y``, one stable set per node of y in canonical order."""
    y = g.sort_nodes(g.check_nodes(y))
    ys = frozenset(y)
    options = [[t for t in max_stable_sets(g) if t & ys == {v}] for v in y]
    for combo in product(*options):
        yield tuple(combo)
