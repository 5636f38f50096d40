"""Rewriting rules on graphs, normal forms and checkable derivations.

Structural rules act on modules.  The copying rule ``d_and`` splits a pivot
node v in two: its neighbours are covered by parts R0 and R1, the original
keeps R0 and a fresh, non-adjacent copy takes R1.  The classic instance has
R0 and R1 disjoint with no edges between them.  Overlapping parts are also
accepted as long as every maximal clique around v lies in exactly one part
and neither part has a maximal clique of its own; both kinds keep the label
sets of maximal cliques unchanged.  ``d_or`` is the same rule on complements.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from itertools import combinations
from typing import Dict, Iterable, Iterator, List, Mapping, Optional, Sequence, Tuple

from .errors import BglError, InputError, ParseError, ResourceError
from .graph import (
    LabelledGraph,
    complement,
    components_within,
    disjoint_union,
    external_neighbours,
    find_isomorphism,
    format_graph,
    induced_subgraph,
    is_clique,
    is_module,
    is_prime,
    max_cliques,
    max_stable_sets,
    parse_graph,
    quotient,
    substitute,
)
from .semantics import entails, entails_and, entails_or

STRUCTURAL = ("w_r", "w_l", "c_r", "c_l")
RULES = STRUCTURAL + ("d_and", "d_or", "d_and_inv", "d_or_inv", "prime_medial", "module_split")
SYSTEM = {
    "and": frozenset(STRUCTURAL + ("d_and", "d_and_inv", "prime_medial", "module_split")),
    "or": frozenset(STRUCTURAL + ("d_or", "d_or_inv", "prime_medial", "module_split")),
}
DEFAULT_BUDGET = 2000


class NormalizationStuck(BglError):
    """No copying redex exists although the graph is not yet in normal form."""


# -- fresh identifiers ---------------------------------------------------

_SUFFIX = re.compile(r"(.+)\.(\d+)")


def fresh_ids(g: LabelledGraph, nodes: Iterable[str], reserved: Iterable[str] = ()) -> Dict[str, str]:
    """Map each node to a new id ``base.k`` unused in ``g`` and ``reserved``."""
    taken = set(g.nodes) | set(reserved)
    out = {}
    for u in g.sort_nodes(nodes):
        m = _SUFFIX.fullmatch(u)
        base = m.group(1) if m else u
        k = 1
        while f"{base}.{k}" in taken:
            k += 1
        out[u] = f"{base}.{k}"
        taken.add(out[u])
    return out


# -- rule applications ---------------------------------------------------


def _module(g: LabelledGraph, xs: Iterable[str], what: str = "location") -> frozenset:
    m = g.check_nodes(xs)
    if not is_module(g, m):
        raise InputError(f"{what} {sorted(m)} is not a module")
    return m


def _without(g: LabelledGraph, drop: Iterable[str]) -> LabelledGraph:
    drop = frozenset(drop)
    return induced_subgraph(g, g.node_set - drop)


def _copy_module(g: LabelledGraph, m: frozenset, copy: Mapping[str, str], attach: Iterable[str], extra_edges=()) -> LabelledGraph:
    """Add a copy of g[m] (ids from ``copy``) adjacent to every node in ``attach``."""
    if set(copy) != set(m):
        raise InputError("copy map must cover exactly the copied nodes")
    new = list(copy.values())
    if len(set(new)) != len(new) or set(new) & g.node_set:
        raise InputError("copy ids must be distinct and fresh")
    attach = list(attach)
    edges = list(g.edges)
    edges.extend((copy[u], copy[w]) for u, w in g.edges if u in m and w in m)
    edges.extend((c, z) for c in new for z in attach)
    edges.extend(extra_edges)
    labels = g.labels
    labels.update({copy[u]: g.label(u) for u in m})
    return LabelledGraph(list(g.nodes) + new, edges, labels)


def apply_w_r(g: LabelledGraph, module: Iterable[str], part: LabelledGraph) -> LabelledGraph:
    """Weakening on the right: the module M becomes M beside ``part``, with no edges between."""
    m = _module(g, module)
    return substitute(g, m, disjoint_union(induced_subgraph(g, m), part))


def apply_w_l(g: LabelledGraph, module: Iterable[str], keep: Iterable[str]) -> LabelledGraph:
    """Weakening on the left: a module joined from ``keep`` and the rest loses the rest."""
    m = _module(g, module)
    keep = g.check_nodes(keep)
    drop = m - keep
    if not keep or not drop or not keep < m:
        raise InputError("w_l needs the kept part to be a nonempty proper subset of the module")
    if not all(g.has_edge(u, w) for u in keep for w in drop):
        raise InputError("w_l module is not joined between kept and dropped parts")
    return _without(g, drop)


def apply_c_r(g: LabelledGraph, module: Iterable[str], keep: Iterable[str]) -> LabelledGraph:
    """Contraction on the right: two unlinked label-isomorphic halves become one."""
    m = _module(g, module)
    keep = g.check_nodes(keep)
    drop = m - keep
    if not keep or not drop or not keep < m:
        raise InputError("c_r needs two nonempty halves")
    if any(g.has_edge(u, w) for u in keep for w in drop):
        raise InputError("c_r halves must have no edges between them")
    if find_isomorphism(induced_subgraph(g, keep), induced_subgraph(g, drop), True) is None:
        raise InputError("c_r halves are not label-isomorphic")
    return _without(g, drop)


def apply_c_l(g: LabelledGraph, module: Iterable[str], copy: Optional[Mapping[str, str]] = None) -> LabelledGraph:
    """Contraction on the left (read upwards): the module M becomes M joined to a copy of M."""
    m = _module(g, module)
    if not m:
        raise InputError("c_l needs a nonempty module")
    copy = dict(copy) if copy is not None else fresh_ids(g, m)
    return _copy_module(g, m, copy, m | external_neighbours(g, m))


def _copy_split(g, pivot, r0, r1, copy, dual: bool) -> LabelledGraph:
    h = complement(g) if dual else g
    (v,) = h.check_nodes([pivot]) if isinstance(pivot, str) else _single(h, pivot)
    r0, r1 = h.check_nodes(r0), h.check_nodes(r1)
    around = h.neighbours(v)
    if r0 | r1 != around:
        word = "non-neighbours" if dual else "neighbours"
        raise InputError(f"R0 and R1 must cover exactly the pivot's {word}")
    problem = split_problem(h, v, r0, r1)
    if problem:
        raise InputError(problem)
    if copy is None:
        copy = fresh_ids(h, [v])
    copy = dict(copy)
    if set(copy) != {v}:
        raise InputError("copy map must name the pivot only")
    new = copy[v]
    if new in h.node_set:
        raise InputError(f"copy id {new!r} is already used")
    edges = [e for e in h.edges if not (v in e and (e[0] in r1 - r0 or e[1] in r1 - r0))]
    edges.extend((new, z) for z in r1)
    labels = h.labels
    labels[new] = h.label(v)
    out = LabelledGraph(list(h.nodes) + [new], edges, labels)
    return complement(out) if dual else out


def _single(g: LabelledGraph, xs) -> frozenset:
    xs = g.check_nodes(xs)
    if len(xs) != 1:
        raise InputError("the pivot must be a single node")
    return xs


def split_problem(g: LabelledGraph, v: str, r0: frozenset, r1: frozenset) -> Optional[str]:
    """Why splitting ``v``'s neighbourhood into R0, R1 is not allowed (None if it is).

    Each maximal clique of the neighbourhood must lie inside exactly one part,
    and each part must have no maximal clique of its own that is not maximal
    in the whole neighbourhood.  Disjoint parts with no edges between them
    qualify.  One part may be empty only if the other is too (an isolated
    pivot): otherwise one copy would become a clique of its own.
    """
    if bool(r0) != bool(r1):
        return "R0 and R1 must be both empty or both nonempty"
    around = r0 | r1
    if not (r0 & r1) and not any(g.has_edge(u, w) for u in r0 for w in r1):
        return None
    local = max_cliques(induced_subgraph(g, around))
    for k in local:
        if (k <= r0) == (k <= r1):
            return "every maximal clique among the neighbours must lie in exactly one part"
    ok = set(local)
    for part in (r0, r1):
        if any(k not in ok for k in max_cliques(induced_subgraph(g, part))):
            return "a part has a maximal clique that is not maximal among all neighbours"
    return None


def apply_d_and(
    g: LabelledGraph,
    pivot: str,
    r0: Iterable[str],
    r1: Iterable[str],
    copy: Optional[Mapping[str, str]] = None,
) -> LabelledGraph:
    """Split node ``pivot`` in two: the original keeps R0, a fresh copy takes R1.

    The two copies carry the same label and are not adjacent.
    """
    return _copy_split(g, pivot, r0, r1, copy, dual=False)


def apply_d_or(g: LabelledGraph, pivot: str, r0, r1, copy=None) -> LabelledGraph:
    """Dual split: R0 and R1 cover the pivot's non-neighbours; the copies are adjacent."""
    return _copy_split(g, pivot, r0, r1, copy, dual=True)


def _as_set(x) -> frozenset:
    return frozenset([x]) if isinstance(x, str) else frozenset(x)


def _merge_copies(g, keep, merge, dual: bool) -> LabelledGraph:
    h = complement(g) if dual else g
    (v,) = _single(h, _as_set(keep))
    merge = {str(k): str(x) for k, x in merge.items()}
    if len(merge) != 1 or list(merge.values()) != [v]:
        raise InputError("merge map must send one copy onto the kept node")
    (other,) = h.check_nodes(merge)
    if other == v or h.label(other) != h.label(v):
        raise InputError("the merged nodes must be distinct and carry the same label")
    r0 = h.neighbours(v) - {other}
    r1 = h.neighbours(other) - {v}
    rest = h.node_set - {other}
    edges = [e for e in h.edges if other not in e]
    edges.extend((v, z) for z in r1)
    merged = LabelledGraph(rest, edges, {x: h.label(x) for x in rest})
    try:
        again = _copy_split(merged, v, r0, r1, {v: other}, dual=False)
    except InputError as exc:
        raise InputError(f"not the result of a copying step: {exc}") from None
    if again != h:
        raise InputError("not the result of a copying step at this location")
    return complement(merged) if dual else merged


def apply_d_and_inv(g: LabelledGraph, keep: str, merge: Mapping[str, str]) -> LabelledGraph:
    """Undo ``d_and``: fold the copy (the key of ``merge``) back into ``keep``."""
    return _merge_copies(g, keep, merge, dual=False)


def apply_d_or_inv(g: LabelledGraph, keep: str, merge: Mapping[str, str]) -> LabelledGraph:
    return _merge_copies(g, keep, merge, dual=True)


def apply_prime_medial(g: LabelledGraph, left: Sequence[Iterable[str]], right: Sequence[Iterable[str]]) -> LabelledGraph:
    """P[G1..Gn] beside P[G1'..Gn'] becomes P[G1 beside G1', ..., Gn beside Gn']."""
    left = [g.check_nodes(b) for b in left]
    right = [g.check_nodes(b) for b in right]
    n = len(left)
    if n < 2 or len(right) != n or not all(left) or not all(right):
        raise InputError("prime_medial needs two lists of the same number (>= 2) of nonempty blocks")
    a = frozenset().union(*left)
    b = frozenset().union(*right)
    if sum(map(len, left)) != len(a) or sum(map(len, right)) != len(b) or a & b:
        raise InputError("prime_medial blocks must be pairwise disjoint")
    _module(g, a | b)
    if any(g.has_edge(u, w) for u in a for w in b):
        raise InputError("the two sides of prime_medial must have no edges between them")
    ga, gb = induced_subgraph(g, a), induced_subgraph(g, b)
    qa, qb = quotient(ga, left), quotient(gb, right)
    ra, rb = [ga.least(x) for x in left], [gb.least(x) for x in right]
    for i, j in combinations(range(n), 2):
        if qa.has_edge(ra[i], ra[j]) != qb.has_edge(rb[i], rb[j]):
            raise InputError("the two sides do not share the same quotient shape")
    if n > 2 and not is_prime(qa):
        raise InputError("the shared quotient shape must be prime")
    edges = list(g.edges)
    for i, j in combinations(range(n), 2):
        if qa.has_edge(ra[i], ra[j]):
            edges.extend((u, w) for u in left[i] for w in right[j])
            edges.extend((u, w) for u in right[i] for w in left[j])
    return LabelledGraph(g.nodes, edges, g.labels)


def apply_module_split(g: LabelledGraph, m0, m1, r0, r1) -> LabelledGraph:
    """A joined module M0+M1 whose neighbours split as R0, R1 becomes M0-R0 beside M1-R1."""
    m0, m1, r0, r1 = (g.check_nodes(x) for x in (m0, m1, r0, r1))
    if not m0 or not m1 or m0 & m1:
        raise InputError("module_split needs two disjoint nonempty halves")
    m = _module(g, m0 | m1)
    if not all(g.has_edge(u, w) for u in m0 for w in m1):
        raise InputError("module_split halves must be joined")
    if r0 & r1 or r0 | r1 != external_neighbours(g, m):
        raise InputError("R0 and R1 must partition the module's neighbours")
    if any(g.has_edge(u, w) for u in r0 for w in r1):
        raise InputError("R0 and R1 must be non-adjacent")
    bad = set()
    for u in m0:
        bad |= {frozenset((u, w)) for w in m1 | r1}
    for u in m1:
        bad |= {frozenset((u, w)) for w in r0}
    edges = [e for e in g.edges if frozenset(e) not in bad]
    return LabelledGraph(g.nodes, edges, g.labels)


# -- rule instances and derivations ------------------------------------------


@dataclass(frozen=True)
class RuleInstance:
    rule: str
    location: Dict[str, object] = field(hash=False)
    source: LabelledGraph = field(repr=False)
    target: LabelledGraph = field(repr=False)


def apply_rule(g: LabelledGraph, rule: str, location: Mapping[str, object]) -> LabelledGraph:
    loc = dict(location)
    try:
        if rule == "w_r":
            return apply_w_r(g, loc["module"], loc["part"])
        if rule == "w_l":
            return apply_w_l(g, loc["module"], loc["keep"])
        if rule == "c_r":
            return apply_c_r(g, loc["module"], loc["keep"])
        if rule == "c_l":
            return apply_c_l(g, loc["module"], loc.get("copy"))
        if rule in ("d_and", "d_or"):
            fn = apply_d_and if rule == "d_and" else apply_d_or
            return fn(g, loc["pivot"], loc["r0"], loc["r1"], loc.get("copy"))
        if rule in ("d_and_inv", "d_or_inv"):
            fn = apply_d_and_inv if rule == "d_and_inv" else apply_d_or_inv
            return fn(g, loc["keep"], loc["merge"])
        if rule == "prime_medial":
            return apply_prime_medial(g, loc["left"], loc["right"])
        if rule == "module_split":
            return apply_module_split(g, loc["m0"], loc["m1"], loc["r0"], loc["r1"])
    except KeyError as exc:
        raise InputError(f"rule {rule} is missing location field {exc.args[0]!r}") from None
    raise InputError(f"unknown rule {rule!r}")


def instance(g: LabelledGraph, rule: str, **location) -> RuleInstance:
    """Apply a rule, filling in any fresh ids so the step is re-derivable."""
    loc = {}
    for k, v in location.items():
        if v is None:
            continue
        if isinstance(v, (LabelledGraph, dict)):
            loc[k] = v
        elif k in ("left", "right"):
            loc[k] = tuple(frozenset(b) for b in v)
        else:
            loc[k] = _as_set(v)
    if rule in ("c_l", "d_and", "d_or") and "copy" not in loc:
        what = loc["module"] if rule == "c_l" else loc["pivot"]
        loc["copy"] = fresh_ids(g, what)
    return RuleInstance(rule, loc, g, apply_rule(g, rule, loc))


@dataclass(frozen=True)
class Derivation:
    start: LabelledGraph
    steps: Tuple[RuleInstance, ...] = ()

    @property
    def graphs(self) -> Tuple[LabelledGraph, ...]:
        return (self.start,) + tuple(s.target for s in self.steps)

    @property
    def end(self) -> LabelledGraph:
        return self.steps[-1].target if self.steps else self.start

    def then(self, other: "Derivation") -> "Derivation":
        if other.start != self.end:
            raise InputError("derivations do not compose: endpoint mismatch")
        return Derivation(self.start, self.steps + other.steps)

    def __len__(self) -> int:
        return len(self.steps)


@dataclass(frozen=True)
class CheckResult:
    ok: bool
    step: Optional[int] = None
    message: str = ""

    def __bool__(self) -> bool:
        return self.ok


def check_derivation(d: Derivation, flavor: Optional[str] = None) -> CheckResult:
    """Re-apply every step; with a flavor also check rule membership and soundness.

    Failing step indices are 1-based.
    """
    current = d.start
    for i, st in enumerate(d.steps, start=1):
        if st.source != current:
            return CheckResult(False, i, "source graph differs from the previous graph")
        if flavor is not None and st.rule not in SYSTEM[flavor]:
            return CheckResult(False, i, f"rule {st.rule} does not belong to the {flavor} system")
        try:
            target = apply_rule(current, st.rule, st.location)
        except InputError as exc:
            return CheckResult(False, i, f"rule {st.rule} does not apply: {exc}")
        if target != st.target:
            return CheckResult(False, i, f"recorded graph differs from the result of {st.rule}")
        if flavor is not None and not entails(current, target, flavor):
            return CheckResult(False, i, f"step is not sound for the {flavor} entailment")
        current = target
    return CheckResult(True)


# -- normal forms -----------------------------------------------------------


def _pairwise_disjoint(sets: Sequence[frozenset]) -> bool:
    seen: set = set()
    for s in sets:
        if seen & s:
            return False
        seen |= s
    return True


def is_dnf(g: LabelledGraph) -> bool:
    """All maximal cliques are pairwise disjoint."""
    return _pairwise_disjoint(max_cliques(g))


def is_cnf(g: LabelledGraph) -> bool:
    """All maximal stable sets are pairwise disjoint."""
    return _pairwise_disjoint(max_stable_sets(g))


def _is_cluster(g: LabelledGraph, xs: frozenset) -> bool:
    return all(is_clique(g, c) for c in components_within(g, xs))


def _splits(g: LabelledGraph, v: str) -> Iterator[Tuple[frozenset, frozenset]]:
    """Candidate (R0, R1) splits of v's neighbourhood that give a valid step.

    Maximal cliques of the neighbourhood are shared out between the two parts;
    the part holding the first clique is R0.  Smaller R0 groupings come first.
    """
    around = g.neighbours(v)
    local = max_cliques(induced_subgraph(g, around))
    rest = local[1:]
    for size in range(len(rest)):
        for extra in combinations(range(len(rest)), size):
            side0 = [local[0]] + [rest[i] for i in extra]
            side1 = [k for i, k in enumerate(rest) if i not in extra]
            r0 = frozenset().union(*side0)
            r1 = frozenset().union(*side1)
            if split_problem(g, v, r0, r1) is None:
                yield r0, r1


def find_redex(g: LabelledGraph) -> Optional[Tuple[str, frozenset, frozenset]]:
    """A ``d_and`` step that separates two maximal cliques, or None in a DNF.

    Nodes whose neighbourhood falls apart are preferred: R0 is then the first
    component and R1 the others.  Otherwise the first node (in canonical order)
    that admits a split of its neighbourhood's maximal cliques is used.
    """
    crowded = [v for v in g.nodes if sum(v in s for s in max_cliques(g)) >= 2]
    for v in crowded:
        comps = components_within(g, g.neighbours(v))
        if len(comps) >= 2:
            return v, comps[0], frozenset().union(*comps[1:])
    for v in crowded:
        for r0, r1 in _splits(g, v):
            return v, r0, r1
    return None


def to_dnf(g: LabelledGraph) -> Tuple[LabelledGraph, Derivation]:
    """Rewrite with ``d_and`` until all maximal cliques are disjoint."""
    start, steps = g, []
    while not is_dnf(g):
        redex = find_redex(g)
        if redex is None:
            raise NormalizationStuck("no copying step applies although the graph is not a DNF")
        v, r0, r1 = redex
        st = instance(g, "d_and", pivot=v, r0=r0, r1=r1)
        steps.append(st)
        g = st.target
    return g, Derivation(start, tuple(steps))


def to_cnf(g: LabelledGraph) -> Tuple[LabelledGraph, Derivation]:
    """Rewrite with ``d_or`` until all maximal stable sets are disjoint."""
    dual, d = to_dnf(complement(g))
    steps = tuple(
        RuleInstance("d_or", st.location, complement(st.source), complement(st.target)) for st in d.steps
    )
    return complement(dual), Derivation(g, steps)


def normal_form_size(g: LabelledGraph, flavor: str) -> int:
    """Node count of the DNF (flavor and) or CNF (flavor or) of ``g``."""
    sets = max_cliques(g) if flavor == "and" else max_stable_sets(g)
    return sum(len(s) for s in sets)


# -- the completeness construction ------------------------------------------


class _Builder:
    def __init__(self, g: LabelledGraph, reserved: Iterable[str]):
        self.g = g
        self.reserved = set(reserved)
        self.steps: List[RuleInstance] = []

    def do(self, rule: str, **loc) -> RuleInstance:
        st = instance(self.g, rule, **loc)
        self.steps.append(st)
        self.g = st.target
        return st

    def fresh(self, u: str) -> str:
        return fresh_ids(self.g, [u], self.reserved)[u]

    def rename_away(self, clashing: Iterable[str]) -> Dict[str, str]:
        """Move nodes to fresh ids via c_l then w_l (a renaming made of rules)."""
        moved = {}
        for u in self.g.sort_nodes(clashing):
            new = self.fresh(u)
            self.do("c_l", module=[u], copy={u: new})
            self.do("w_l", module=[u, new], keep=[new])
            moved[u] = new
        return moved


def derive_dnf_to_dnf(a: LabelledGraph, b: LabelledGraph) -> Derivation:
    """Structural derivation from DNF ``a`` to DNF ``b`` when ``a`` entails ``b``."""
    if not (is_dnf(a) and is_dnf(b)):
        raise InputError("both graphs must be DNFs")
    if not entails_and(a, b):
        raise InputError("the first DNF does not entail the second")
    run = _Builder(a, b.nodes)
    moved = run.rename_away(a.node_set & b.node_set)
    terms = [frozenset(moved.get(v, v) for v in s) for s in max_cliques(a)]
    targets = max_cliques(b)
    tlabels = [frozenset(b.label(v) for v in t) for t in targets]
    f = []
    for s in terms:
        labs = frozenset(run.g.label(v) for v in s)
        f.append(next(j for j, t in enumerate(tlabels) if t <= labs))
    keeper = {}
    for i, j in enumerate(f):
        keeper.setdefault(j, i)
    built = []
    for i, s in enumerate(terms):
        j = f[i]
        made = []
        for t in b.sort_nodes(targets[j]):
            src = run.g.least(v for v in s if run.g.label(v) == b.label(t))
            new = t if keeper[j] == i else run.fresh(t)
            run.do("c_l", module=[src], copy={src: new})
            made.append(new)
        run.do("w_l", module=s | set(made), keep=made)
        built.append(frozenset(made))
    for i, j in enumerate(f):
        if keeper[j] != i:
            run.do("c_r", module=built[keeper[j]] | built[i], keep=built[keeper[j]])
    for j, t in enumerate(targets):
        if j not in keeper:
            run.do("w_r", module=run.g.node_set, part=induced_subgraph(b, t))
    if run.g != b:
        raise AssertionError("structural construction did not reach the target DNF")
    return Derivation(a, tuple(run.steps))


def derive_cnf_to_cnf(a: LabelledGraph, b: LabelledGraph) -> Derivation:
    """Structural derivation from CNF ``a`` to CNF ``b`` when ``a`` disjunctively entails ``b``."""
    if not (is_cnf(a) and is_cnf(b)):
        raise InputError("both graphs must be CNFs")
    if not entails_or(a, b):
        raise InputError("the first CNF does not entail the second")
    if len(b) == 0:
        raise InputError("the target CNF is empty")
    run = _Builder(a, b.nodes)
    moved = run.rename_away(a.node_set & b.node_set)
    clauses = [frozenset(moved.get(v, v) for v in t) for t in max_stable_sets(a)]
    targets = max_stable_sets(b)
    labs = [frozenset(run.g.label(v) for v in c) for c in clauses]
    users: Dict[int, List[int]] = {}
    for j, t in enumerate(targets):
        tl = frozenset(b.label(v) for v in t)
        users.setdefault(next(i for i, l in enumerate(labs) if l <= tl), []).append(j)
    assigned: Dict[int, frozenset] = {}
    for i, c in enumerate(clauses):
        js = users.get(i, [])
        if not js:
            continue
        assigned[js[0]] = c
        for j in js[1:]:
            st = run.do("c_l", module=c, copy=fresh_ids(run.g, c, run.reserved))
            assigned[j] = frozenset(st.location["copy"].values())
    for i, c in enumerate(clauses):
        if i not in users:
            run.do("w_l", module=run.g.node_set, keep=run.g.node_set - c)
    for j, t in enumerate(targets):
        d = assigned[j]
        run.do("w_r", module=d, part=induced_subgraph(b, t))
        for u in run.g.sort_nodes(d):
            mate = b.least(v for v in t if b.label(v) == run.g.label(u))
            run.do("c_r", module=[u, mate], keep=[mate])
    if run.g != b:
        raise AssertionError("structural construction did not reach the target CNF")
    return Derivation(a, tuple(run.steps))


def _inverse(st: RuleInstance) -> RuleInstance:
    copy = st.location["copy"]
    loc = {
        "keep": frozenset(copy),
        "merge": {c: p for p, c in copy.items()},
    }
    return RuleInstance(st.rule + "_inv", loc, st.target, st.source)


def derive_entailment(g: LabelledGraph, h: LabelledGraph, flavor: str, budget: int = DEFAULT_BUDGET) -> Derivation:
    """Normal form of g, structural bridge, then the normal form of h undone."""
    if flavor not in SYSTEM:
        raise InputError(f"unknown flavor {flavor!r}")
    if not entails(g, h, flavor):
        raise InputError(f"the first graph does not {flavor}-entail the second")
    if g == h:
        return Derivation(g)
    if len(g) == 0 or len(h) == 0:
        raise InputError("derivations between empty and nonempty graphs are not supported")
    sizes = (normal_form_size(g, flavor), normal_form_size(h, flavor))
    if max(sizes) > budget:
        raise ResourceError(f"normal forms have {sizes[0]} and {sizes[1]} nodes; budget is {budget}")
    normal = to_dnf if flavor == "and" else to_cnf
    bridge = derive_dnf_to_dnf if flavor == "and" else derive_cnf_to_cnf
    a, first = normal(g)
    b, last = normal(h)
    middle = bridge(a, b)
    back = Derivation(b, tuple(_inverse(st) for st in reversed(last.steps)))
    return first.then(middle).then(back)


# -- derivation text format ---------------------------------------------------


def format_derivation(d: Derivation) -> str:
    out = ["start", format_graph(d.start).rstrip("\n"), "end"]
    for i, st in enumerate(d.steps, start=1):
        out.append(f"step {i} {st.rule}")
        for key in sorted(st.location):
            val = st.location[key]
            if isinstance(val, LabelledGraph):
                out.extend(f"{key} {line}" for line in format_graph(val).splitlines())
            elif isinstance(val, dict):
                out.append(f"{key} " + " ".join(f"{k}={val[k]}" for k in sorted(val)))
            elif isinstance(val, tuple):
                out.append(f"{key} " + " | ".join(" ".join(sorted(b)) for b in val))
            else:
                out.append(f"{key} {' '.join(sorted(val))}".rstrip())
        out.append("graph")
        out.append(format_graph(st.target).rstrip("\n"))
        out.append("end")
    return "\n".join(line for line in out if line != "") + "\n"


def parse_derivation(text: str) -> Derivation:
    lines = text.splitlines()
    pos = 0

    def err(msg: str, k: int) -> ParseError:
        return ParseError(msg, k + 1, 1)

    def skip():
        nonlocal pos
        while pos < len(lines) and not lines[pos].split("#", 1)[0].strip():
            pos += 1

    def graph_block(k_start: int) -> LabelledGraph:
        nonlocal pos
        body = []
        while pos < len(lines) and lines[pos].strip() != "end":
            body.append(lines[pos])
            pos += 1
        if pos == len(lines):
            raise err("graph block is missing 'end'", k_start)
        pos += 1
        try:
            return parse_graph("\n".join(body))
        except ParseError as exc:
            raise ParseError(str(exc).split(": ", 1)[-1], k_start + 1 + exc.line, exc.column) from None

    skip()
    if pos >= len(lines) or lines[pos].strip() != "start":
        raise err("expected 'start'", pos)
    pos += 1
    start = graph_block(pos - 1)
    steps = []
    prev = start
    while True:
        skip()
        if pos >= len(lines):
            break
        head = lines[pos].split()
        if len(head) != 3 or head[0] != "step":
            raise err("expected 'step <n> <rule>'", pos)
        if head[1] != str(len(steps) + 1):
            raise err(f"expected step number {len(steps) + 1}", pos)
        rule = head[2]
        if rule not in RULES:
            raise err(f"unknown rule {rule!r}", pos)
        pos += 1
        loc: Dict[str, object] = {}
        parts: Dict[str, List[str]] = {}
        while pos < len(lines) and lines[pos].strip() != "graph":
            toks = lines[pos].split()
            if not toks:
                pos += 1
                continue
            key, rest = toks[0], toks[1:]
            if key == "part":
                parts.setdefault(key, []).append(" ".join(rest))
            elif key in ("copy", "merge"):
                try:
                    loc[key] = dict(t.split("=", 1) for t in rest)
                except ValueError:
                    raise err(f"malformed map in {key!r}", pos) from None
            elif key in ("left", "right"):
                blocks = " ".join(rest).split("|")
                loc[key] = tuple(frozenset(b.split()) for b in blocks)
            else:
                loc[key] = frozenset(rest)
            pos += 1
        if pos == len(lines):
            raise err("step is missing its 'graph' block", pos - 1)
        for key, body in parts.items():
            loc[key] = parse_graph("\n".join(body))
        pos += 1
        target = graph_block(pos - 1)
        steps.append(RuleInstance(rule, loc, prev, target))
        prev = target
    return Derivation(start, tuple(steps))
