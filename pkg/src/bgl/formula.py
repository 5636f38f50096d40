"""Positive Boolean formulas, monotone function tables and relation webs."""

from __future__ import annotations

import re
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, FrozenSet, Iterable, List, Sequence, Tuple, Union

from .decomposition import decompose
from .errors import InputError, ParseError, ResourceError
from .graph import LabelledGraph, find_induced_p4, is_isomorphic

SUPPORT_LIMIT = 16


@dataclass(frozen=True)
class Formula:
    """A variable (``kind == "var"``) or an n-ary ``or`` / ``and`` node."""

    kind: str
    children: Tuple["Formula", ...] = ()
    name: str = ""

    def __post_init__(self):
        if self.kind == "var":
            if not self.name or self.children:
                raise InputError("a variable needs a name and no children")
        elif self.kind in ("or", "and"):
            if len(self.children) < 2:
                raise InputError(f"{self.kind} needs at least two children")
        else:
            raise InputError(f"unknown connective {self.kind!r}")

    def __str__(self) -> str:
        if self.kind == "var":
            return self.name
        parts = []
        for c in self.children:
            text = str(c)
            if c.kind != "var" and (c.kind == self.kind or self.kind == "and"):
                text = f"({text})"
            parts.append(text)
        return (" & " if self.kind == "and" else " | ").join(parts)

    def occurrences(self) -> List[str]:
        """Variable names left to right, with repeats."""
        if self.kind == "var":
            return [self.name]
        return [x for c in self.children for x in c.occurrences()]

    def variables(self) -> Tuple[str, ...]:
        return tuple(sorted(set(self.occurrences())))


def var(name: str) -> Formula:
    return Formula("var", name=name)


def or_(*children: Formula) -> Formula:
    return Formula("or", tuple(children))


def and_(*children: Formula) -> Formula:
    return Formula("and", tuple(children))


def flatten(a: Formula) -> Formula:
    """Merge nested nodes of the same connective."""
    if a.kind == "var":
        return a
    kids = []
    for c in map(flatten, a.children):
        kids.extend(c.children if c.kind == a.kind else (c,))
    return Formula(a.kind, tuple(kids))


# -- parsing -------------------------------------------------------------

_TOKEN = re.compile(r"[A-Za-z0-9_'.]+|\S")


def _tokens(text: str) -> List[Tuple[str, str, int, int]]:
    """(kind, text, line, column); identifiers have kind ``id``."""
    out = []
    for m in _TOKEN.finditer(text):
        line = text.count("\n", 0, m.start()) + 1
        col = m.start() - text.rfind("\n", 0, m.start())
        tok = m.group()
        out.append(("id" if tok[0].isalnum() or tok[0] in "_'." else tok, tok, line, col))
    line = text.count("\n") + 1
    out.append(("eof", "", line, len(text) - text.rfind("\n")))
    return out


def parse_formula(text: str, flat: bool = True) -> Formula:
    """Parse ``F ::= atom | F '|' F | F '&' F | '(' F ')'``; ``&`` binds tighter.

    Connectives are read as binary and left-nested, then flattened unless
    ``flat`` is false.
    """
    toks = _tokens(text)
    pos = 0

    def peek():
        return toks[pos]

    def fail(msg):
        _, _, line, col = peek()
        raise ParseError(msg, line, col)

    def take(kind):
        nonlocal pos
        if peek()[0] != kind:
            what = "end of input" if peek()[0] == "eof" else repr(peek()[1])
            fail(f"expected {kind!r}, found {what}")
        pos += 1
        return toks[pos - 1]

    def disj():
        nonlocal pos
        left = conj()
        while peek()[0] == "|":
            pos += 1
            left = or_(left, conj())
        return left

    def conj():
        nonlocal pos
        left = atom()
        while peek()[0] == "&":
            pos += 1
            left = and_(left, atom())
        return left

    def atom():
        nonlocal pos
        kind = peek()[0]
        if kind == "id":
            return var(take("id")[1])
        if kind == "(":
            pos += 1
            inner = disj()
            take(")")
            return inner
        if kind == "eof":
            fail("unexpected end of input")
        fail(f"unexpected {peek()[1]!r}")

    a = disj()
    if peek()[0] != "eof":
        fail(f"unexpected {peek()[1]!r}")
    return flatten(a) if flat else a


def read_formula(path) -> Formula:
    return parse_formula(Path(path).read_text(encoding="utf-8"))


# -- evaluation ------------------------------------------------------------


def eval_formula(a: Formula, x: Iterable[str]) -> int:
    x = frozenset(x)

    def go(f: Formula) -> int:
        if f.kind == "var":
            return int(f.name in x)
        vals = [go(c) for c in f.children]
        return max(vals) if f.kind == "or" else min(vals)

    return go(a)


def is_read_once(a: Formula) -> bool:
    occ = a.occurrences()
    return len(occ) == len(set(occ))


class MonotoneFunctionTable:
    """Truth table of a monotone function; bit ``i`` of a mask selects ``support[i]``."""

    def __init__(self, support: Sequence[str], table: Sequence[int]):
        self.support = tuple(support)
        if len(set(self.support)) != len(self.support):
            raise InputError("support variables must be distinct")
        if len(table) != 1 << len(self.support):
            raise InputError("table size does not match the support")
        self.table = tuple(int(bool(b)) for b in table)
        for mask, bit in enumerate(self.table):
            if bit:
                continue
            for i in range(len(self.support)):
                if mask & (1 << i) and self.table[mask & ~(1 << i)]:
                    raise InputError("table is not monotone")

    @classmethod
    def from_formula(cls, a: Formula) -> "MonotoneFunctionTable":
        support = a.variables()
        _check_support(support)
        table = [eval_formula(a, _subset(support, m)) for m in range(1 << len(support))]
        return cls(support, table)

    def __call__(self, x: Iterable[str]) -> int:
        x = frozenset(x)
        mask = sum(1 << i for i, v in enumerate(self.support) if v in x)
        return self.table[mask]


def _check_support(support) -> None:
    if len(support) > SUPPORT_LIMIT:
        raise ResourceError(f"{len(support)} variables exceed the limit of {SUPPORT_LIMIT}")


def _subset(support: Sequence[str], mask: int) -> FrozenSet[str]:
    return frozenset(v for i, v in enumerate(support) if mask >> i & 1)


def _table(f) -> MonotoneFunctionTable:
    return f if isinstance(f, MonotoneFunctionTable) else MonotoneFunctionTable.from_formula(f)


def _minimal_masks(table: Sequence[int], n: int) -> List[int]:
    out = []
    for mask, bit in enumerate(table):
        if bit and not any(mask >> i & 1 and table[mask & ~(1 << i)] for i in range(n)):
            out.append(mask)
    return out


def _sorted_sets(sets: Iterable[FrozenSet[str]]) -> Tuple[FrozenSet[str], ...]:
    return tuple(sorted(sets, key=sorted))


def minterms(f: Union[Formula, MonotoneFunctionTable]) -> Tuple[FrozenSet[str], ...]:
    """Inclusion-minimal sets on which f is 1, by scanning all subsets."""
    t = _table(f)
    n = len(t.support)
    return _sorted_sets(_subset(t.support, m) for m in _minimal_masks(t.table, n))


def maxterms(f: Union[Formula, MonotoneFunctionTable]) -> Tuple[FrozenSet[str], ...]:
    """Inclusion-minimal X such that f is 0 on the complement of X."""
    t = _table(f)
    n = len(t.support)
    full = (1 << n) - 1
    dual = [1 - t.table[full & ~m] for m in range(1 << n)]
    return _sorted_sets(_subset(t.support, m) for m in _minimal_masks(dual, n))


# -- relation webs ---------------------------------------------------------


def _occurrence_ids(names: Sequence[str]) -> List[str]:
    counts: Dict[str, int] = {}
    for n in names:
        counts[n] = counts.get(n, 0) + 1
    taken = {n for n in names if counts[n] == 1}
    seen: Dict[str, int] = {}
    ids = []
    for n in names:
        if counts[n] == 1:
            ids.append(n)
            continue
        k = seen.get(n, 0)
        while True:
            k += 1
            cand = f"{n}.{k}"
            if cand not in taken:
                break
        seen[n] = k
        taken.add(cand)
        ids.append(cand)
    return ids


def web(a: Formula) -> LabelledGraph:
    """Nodes are variable occurrences; an edge means the least common connective is ``and``.

    A read-once formula gets its variable names as node ids.  Repeated
    variables get ids ``name.1``, ``name.2`` and so on, labelled ``name``.
    """
    names = a.occurrences()
    ids = _occurrence_ids(names)
    edges = []
    pos = 0

    def go(f: Formula) -> List[str]:
        nonlocal pos
        if f.kind == "var":
            pos += 1
            return [ids[pos - 1]]
        groups = [go(c) for c in f.children]
        if f.kind == "and":
            for i in range(len(groups)):
                for j in range(i + 1, len(groups)):
                    edges.extend((u, w) for u in groups[i] for w in groups[j])
        return [u for grp in groups for u in grp]

    go(a)
    return LabelledGraph(ids, edges, dict(zip(ids, names)))


def ac_equivalent(a: Formula, b: Formula) -> bool:
    """Equal up to associativity and commutativity (read-once formulas only)."""
    if not (is_read_once(a) and is_read_once(b)):
        raise InputError("AC-equivalence is only decided for read-once formulas")
    return is_isomorphic(web(a), web(b), respect_labels=True)


def cotree_to_formula(g: LabelledGraph) -> Formula:
    """A formula whose web is ``g``, read off the decomposition tree of a P4-free graph."""
    if len(g) == 0:
        raise InputError("the empty graph is not the web of a formula")
    p4 = find_induced_p4(g)
    if p4 is not None:
        raise InputError("graph is not P4-free: induced path " + "-".join(p4))

    def go(t) -> Formula:
        if t.is_leaf:
            return var(t.label)
        return Formula(t.kind, tuple(go(c) for c in t.children))

    return go(decompose(g))
