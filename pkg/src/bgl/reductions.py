"""Graph constructions from SAT and from forall-exists CNF, with brute-force oracles.

Literals are ``(variable, positive)`` pairs.  Every literal occurrence becomes
a node with id ``<var><+|->:<clause>:<position>`` (both 1-based), labelled by
its own id so that the constructed graphs are linear.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from pathlib import Path
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

from .errors import InputError, ParseError, ResourceError
from .graph import LabelledGraph, complement

Literal = Tuple[str, bool]
Clause = Tuple[Literal, ...]
VARIABLE_LIMIT = 20
SENTINEL = "top"


def _clause(lits: Iterable[Literal]) -> Clause:
    seen, out = set(), []
    for v, pos in lits:
        lit = (str(v), bool(pos))
        if lit not in seen:
            seen.add(lit)
            out.append(lit)
    return tuple(out)


def show_literal(lit: Literal) -> str:
    return lit[0] if lit[1] else "-" + lit[0]


def is_tautology(c: Clause) -> bool:
    return any((v, not pos) in c for v, pos in c)


@dataclass(frozen=True)
class CnfInstance:
    variables: Tuple[str, ...]
    clauses: Tuple[Clause, ...]

    def __post_init__(self):
        object.__setattr__(self, "variables", tuple(dict.fromkeys(map(str, self.variables))))
        object.__setattr__(self, "clauses", tuple(_clause(c) for c in self.clauses))
        known = set(self.variables)
        for c in self.clauses:
            for v, _ in c:
                if v not in known:
                    raise InputError(f"literal over undeclared variable {v!r}")

    def __str__(self) -> str:
        return " & ".join("(" + " | ".join(map(show_literal, c)) + ")" for c in self.clauses) or "true"


@dataclass(frozen=True)
class Qbf2Instance:
    """``forall universal . exists existential . clauses``."""

    universal: Tuple[str, ...]
    existential: Tuple[str, ...]
    clauses: Tuple[Clause, ...]

    def __post_init__(self):
        object.__setattr__(self, "universal", tuple(dict.fromkeys(map(str, self.universal))))
        object.__setattr__(self, "existential", tuple(dict.fromkeys(map(str, self.existential))))
        object.__setattr__(self, "clauses", tuple(_clause(c) for c in self.clauses))
        if set(self.universal) & set(self.existential):
            raise InputError("a variable cannot be both universal and existential")
        known = set(self.universal) | set(self.existential)
        for c in self.clauses:
            for v, _ in c:
                if v not in known:
                    raise InputError(f"literal over unquantified variable {v!r}")

    @property
    def resolved(self) -> Optional[bool]:
        """True with no clauses left, False with an empty clause, otherwise None."""
        if not self.clauses:
            return True
        if any(not c for c in self.clauses):
            return False
        return None

    def __str__(self) -> str:
        head = f"forall {' '.join(self.universal) or '-'} . exists {' '.join(self.existential) or '-'} . "
        body = " & ".join("(" + " | ".join(map(show_literal, c)) + ")" for c in self.clauses)
        return head + (body or "true")


# -- oracles ---------------------------------------------------------------


def _satisfied(clauses: Sequence[Clause], true: FrozenSet[str]) -> bool:
    return all(any((v in true) == pos for v, pos in c) for c in clauses)


def _assignments(variables: Sequence[str]):
    for bits in product((False, True), repeat=len(variables)):
        yield frozenset(v for v, b in zip(variables, bits) if b)


def _limit(n: int) -> None:
    if n > VARIABLE_LIMIT:
        raise ResourceError(f"{n} variables exceed the brute-force limit of {VARIABLE_LIMIT}")


def brute_force_sat(c: CnfInstance) -> bool:
    _limit(len(c.variables))
    return any(_satisfied(c.clauses, x) for x in _assignments(c.variables))


def brute_force_qbf2(q: Qbf2Instance) -> bool:
    _limit(len(q.universal) + len(q.existential))
    return all(
        any(_satisfied(q.clauses, x | y) for y in _assignments(q.existential)) for x in _assignments(q.universal)
    )


# -- normalisation of forall-exists instances --------------------------------------


def _fresh(taken: set, base: str) -> str:
    name, k = base, 0
    while name in taken:
        k += 1
        name = f"{base}{k}"
    taken.add(name)
    return name


def _polarities(clauses: Sequence[Clause]) -> Dict[str, set]:
    seen: Dict[str, set] = {}
    for c in clauses:
        for v, pos in c:
            seen.setdefault(v, set()).add(pos)
    return seen


def is_normalized(q: Qbf2Instance) -> bool:
    """Each variable occurs with both signs and each clause mixes the two quantifier kinds."""
    pol = _polarities(q.clauses)
    used = set(q.universal) | set(q.existential)
    if set(pol) != used or any(len(s) != 2 for s in pol.values()):
        return False
    uni = set(q.universal)
    return bool(q.clauses) and all(
        any(v in uni for v, _ in c) and any(v not in uni for v, _ in c) for c in q.clauses
    )


def normalize_qbf(q: Qbf2Instance) -> Qbf2Instance:
    """An equivalent instance ready for :func:`qbf_to_entailment`, or a resolved one.

    Tautological clauses are dropped.  A variable seen with one sign only is
    fixed: a universal one to the value falsifying its literals, an
    existential one to the value satisfying them.  A clause lacking one
    quantifier kind is split in two with the least variable of that kind
    (declaration order) added positively and negatively.  If no variable of
    that kind is left, a fresh one is introduced.
    """
    uni, exi = list(q.universal), list(q.existential)
    clauses = [c for c in q.clauses if not is_tautology(c)]
    while True:
        if any(not c for c in clauses):
            return Qbf2Instance(uni, exi, [()])
        pol = _polarities(clauses)
        uni = [v for v in uni if v in pol]
        exi = [v for v in exi if v in pol]
        single = [v for v in uni + exi if len(pol[v]) == 1]
        if not single:
            break
        v = single[0]
        (sign,) = pol[v]
        if v in uni:
            clauses = [tuple(l for l in c if l[0] != v) for c in clauses]
        else:
            clauses = [c for c in clauses if (v, sign) not in c]
    if not clauses:
        return Qbf2Instance([], [], [])
    taken = set(q.universal) | set(q.existential)
    out: List[Clause] = []
    for c in clauses:
        has_uni = any(v in uni for v, _ in c)
        has_exi = any(v in exi for v, _ in c)
        if has_uni and has_exi:
            out.append(c)
            continue
        pool = exi if has_uni else uni
        if not pool:
            pool.append(_fresh(taken, "e" if has_uni else "u"))
        z = pool[0]
        out.extend([c + ((z, True),), c + ((z, False),)])
    return Qbf2Instance(uni, exi, out)


# -- constructions -------------------------------------------------------------


def occurrence_id(lit: Literal, clause: int, position: int) -> str:
    return f"{lit[0]}{'+' if lit[1] else '-'}:{clause}:{position}"


def _occurrences(clauses: Sequence[Clause]) -> List[Tuple[str, Literal, int]]:
    return [
        (occurrence_id(lit, n, p), lit, n)
        for n, c in enumerate(clauses, start=1)
        for p, lit in enumerate(c, start=1)
    ]


def _linear(nodes: Sequence[str], edges) -> LabelledGraph:
    return LabelledGraph(nodes, edges)


def sat_to_evaluation(c: CnfInstance, bit: int = 0) -> Tuple[LabelledGraph, FrozenSet[str]]:
    """A graph G and assignment C with ``bit`` in G(C) iff ``c`` is satisfiable.

    For bit 0 this is the direct construction on literal occurrences and
    clause nodes ``c1..cN``; bit 1 uses the complement graph and the
    complementary assignment.  Tautological clauses are removed first.  When
    no clause is left a single sentinel node stands for the empty
    conjunction.
    """
    if bit not in (0, 1):
        raise InputError("bit must be 0 or 1")
    clauses = [cl for cl in c.clauses if not is_tautology(cl)]
    occ = _occurrences(clauses)
    marks = [f"c{n}" for n in range(1, len(clauses) + 1)]
    edges = []
    for i, (u, lu, nu) in enumerate(occ):
        edges.append((u, f"c{nu}"))
        for w, lw, nw in occ[i + 1 :]:
            if nu == nw or (lu[0] == lw[0] and lu[1] != lw[1]):
                edges.append((u, w))
    nodes = [o[0] for o in occ] + marks
    if not clauses:
        nodes.append(SENTINEL)
    g = _linear(nodes, edges)
    x = frozenset(marks)
    if bit == 1:
        return complement(g), g.node_set - x
    return g, x


def qbf_to_entailment(q: Qbf2Instance, flavor: str = "or") -> Tuple[LabelledGraph, LabelledGraph]:
    """Graphs G, H on the literal occurrences with G entailing H iff ``q`` is true.

    Flavor ``or`` is the direct construction; flavor ``and`` returns the
    complements in swapped order.
    """
    if flavor not in ("and", "or"):
        raise InputError(f"unknown flavor {flavor!r}")
    if not is_normalized(q):
        raise InputError("instance is not normalized; run normalize_qbf first")
    uni = set(q.universal)
    occ = _occurrences(q.clauses)
    eg, eh = [], []
    for i, (u, lu, nu) in enumerate(occ):
        for w, lw, nw in occ[i + 1 :]:
            dual = lu[0] == lw[0] and lu[1] != lw[1]
            if nu == nw or (dual and lu[0] not in uni):
                eg.append((u, w))
            if dual and lu[0] in uni:
                eh.append((u, w))
    nodes = [o[0] for o in occ]
    g, h = _linear(nodes, eg), _linear(nodes, eh)
    if flavor == "and":
        return complement(h), complement(g)
    return g, h


# -- DIMACS and QDIMACS -------------------------------------------------------------


def _dimacs_lines(text: str, kind: str):
    """Yield (line, column, token) for body tokens after checking the header."""
    header = None
    for ln, raw in enumerate(text.splitlines(), start=1):
        stripped = raw.strip()
        if not stripped or stripped.startswith("c"):
            continue
        if stripped.startswith("p"):
            toks = stripped.split()
            if header is not None or len(toks) != 4 or toks[1] != kind:
                raise ParseError(f"expected header 'p {kind} <vars> <clauses>'", ln, 1)
            try:
                header = (int(toks[2]), int(toks[3]))
            except ValueError:
                raise ParseError("header counts must be integers", ln, 1) from None
            continue
        if header is None:
            raise ParseError("clause before the 'p' header", ln, 1)
        col = 0
        for tok in raw.split():
            col = raw.index(tok, col) + 1
            yield ln, col, tok
            col += len(tok) - 1
    if header is None:
        raise ParseError(f"missing 'p {kind}' header", 1, 1)
    yield None, None, header


def _literal(tok: str, ln: int, col: int, nvars: int) -> Literal:
    try:
        n = int(tok)
    except ValueError:
        raise ParseError(f"expected an integer literal, found {tok!r}", ln, col) from None
    if abs(n) > nvars:
        raise ParseError(f"variable {abs(n)} exceeds the declared count {nvars}", ln, col)
    return (f"x{abs(n)}", n > 0)


def _parse_body(text: str, quantified: bool):
    items = list(_dimacs_lines(text, "cnf"))
    nvars, nclauses = items[-1][2]
    prefix: List[Tuple[str, List[str]]] = []
    clauses: List[Clause] = []
    current: List[Literal] = []
    quant = None
    last = (1, 1)
    for ln, col, tok in items[:-1]:
        last = (ln, col)
        if not quantified and tok in ("a", "e"):
            raise ParseError("quantifier line in a plain CNF file", ln, col)
        if tok in ("a", "e"):
            if current or clauses or quant is not None:
                raise ParseError("quantifier block must precede the clauses", ln, col)
            quant = [tok, []]
            continue
        if quant is not None:
            if tok == "0":
                prefix.append((quant[0], quant[1]))
                quant = None
            else:
                lit = _literal(tok, ln, col, nvars)
                if not lit[1]:
                    raise ParseError("quantified variables must be positive", ln, col)
                quant[1].append(lit[0])
            continue
        if tok == "0":
            clauses.append(tuple(current))
            current = []
        else:
            current.append(_literal(tok, ln, col, nvars))
    if current or quant is not None:
        raise ParseError("last clause or block is not terminated by 0", *last)
    if len(clauses) != nclauses:
        raise ParseError(f"header declares {nclauses} clauses but {len(clauses)} were given", *last)
    return nvars, prefix, clauses


def parse_dimacs(text: str) -> CnfInstance:
    nvars, _, clauses = _parse_body(text, False)
    return CnfInstance([f"x{i}" for i in range(1, nvars + 1)], clauses)


def parse_qdimacs(text: str) -> Qbf2Instance:
    """QDIMACS with at most one universal block followed by at most one existential block."""
    nvars, prefix, clauses = _parse_body(text, True)
    kinds = [k for k, _ in prefix]
    if kinds not in ([], ["a"], ["e"], ["a", "e"]):
        raise ParseError("expected one 'a' block followed by one 'e' block", 1, 1)
    blocks = dict(prefix)
    uni, exi = blocks.get("a", []), blocks.get("e", [])
    bound = set(uni) | set(exi)
    for c in clauses:
        for v, _ in c:
            if v not in bound:
                raise InputError(f"variable {v} is not quantified")
    return Qbf2Instance(uni, exi, clauses)


def read_dimacs(path) -> CnfInstance:
    return parse_dimacs(Path(path).read_text(encoding="utf-8"))


def read_qdimacs(path) -> Qbf2Instance:
    return parse_qdimacs(Path(path).read_text(encoding="utf-8"))
