"""The evaluation game on decomposition trees.

Eloise moves at ``or`` nodes and Abelard at ``and`` nodes, each picking a
child.  At a prime node Eloise picks a maximal clique and Abelard a maximal
stable set of the quotient; play continues in the module where they meet,
or ends in deadlock when they miss each other.

Choices are positional and are stored per tree path.  At a prime node a
static strategy holds an index into the canonical clique (or stable set)
list of the quotient.  A reactionary strategy instead holds a tuple with one
entry per opponent option there, since its owner moves second.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from typing import Dict, Iterable, Iterator, List, Optional, Tuple

from .decomposition import Tree, decompose
from .errors import InputError, ResourceError
from .graph import LabelledGraph, induced_subgraph, max_cliques, max_stable_sets

ELOISE, ABELARD = "eloise", "abelard"
STATIC, REACTIONARY = "static", "reactionary"
WIN, DRAW_OR_WIN = "win", "draw-or-win"
DRAW = "draw"
STRATEGY_LIMIT = 10**6

Path = Tuple[int, ...]


def other(player: str) -> str:
    return ABELARD if player == ELOISE else ELOISE


def _check_player(player: str) -> None:
    if player not in (ELOISE, ABELARD):
        raise InputError(f"unknown player {player!r}")


def _moves_at(t: Tree, player: str) -> bool:
    if t.kind == "prime":
        return True
    return t.kind == ("or" if player == ELOISE else "and")


def _options(t: Tree, player: str) -> Tuple:
    """What ``player`` may pick at ``t``: child indices or quotient cliques / stable sets."""
    if t.kind == "prime":
        return max_cliques(t.quotient) if player == ELOISE else max_stable_sets(t.quotient)
    return tuple(range(len(t.children)))


def decision_points(t: Tree, player: str) -> List[Path]:
    return [p for p, s in t.walk() if _moves_at(s, player)]


@dataclass(frozen=True)
class Strategy:
    player: str
    mode: str
    choices: Dict[Path, object] = field(hash=False)

    def choice(self, path: Path):
        try:
            return self.choices[path]
        except KeyError:
            raise InputError(f"strategy has no choice at tree position {list(path)}") from None


@dataclass(frozen=True)
class Move:
    path: Path
    kind: str
    eloise: object = None
    abelard: object = None


@dataclass(frozen=True)
class Play:
    moves: Tuple[Move, ...]
    leaf: Optional[str]
    outcome: Optional[str]

    @property
    def deadlock(self) -> bool:
        return self.outcome is None


def check_strategy(t: Tree, s: Strategy) -> None:
    """Raise InputError unless ``s`` chooses legally at exactly its player's decision points."""
    _check_player(s.player)
    if s.mode not in (STATIC, REACTIONARY):
        raise InputError(f"unknown strategy mode {s.mode!r}")
    points = decision_points(t, s.player)
    if set(s.choices) != set(points):
        raise InputError("strategy does not match the decomposition tree")
    for p in points:
        node = t.at(p)
        n = len(_options(node, s.player))
        c = s.choices[p]
        if node.kind == "prime" and s.mode == REACTIONARY:
            m = len(_options(node, other(s.player)))
            ok = isinstance(c, tuple) and len(c) == m and all(isinstance(k, int) and 0 <= k < n for k in c)
        else:
            ok = isinstance(c, int) and 0 <= c < n
        if not ok:
            raise InputError(f"illegal choice {c!r} at tree position {list(p)}")


def play(g: LabelledGraph, eloise: Strategy, abelard: Strategy, second: Optional[str] = None) -> Play:
    """Run one play of the game on ``g``; ``second`` names the player who reacts at prime nodes."""
    if eloise.player != ELOISE or abelard.player != ABELARD:
        raise InputError("strategies are assigned to the wrong players")
    if second is not None:
        _check_player(second)
    for s in (eloise, abelard):
        if s.mode == REACTIONARY and second != s.player:
            raise InputError(f"only the second player may use a reactionary strategy ({s.player})")
    t = decompose(g)
    check_strategy(t, eloise)
    check_strategy(t, abelard)
    moves = []
    path: Path = ()
    node = t
    while not node.is_leaf:
        if node.kind == "or":
            i = eloise.choice(path)
            moves.append(Move(path, "or", eloise=i))
        elif node.kind == "and":
            i = abelard.choice(path)
            moves.append(Move(path, "and", abelard=i))
        else:
            q = node.quotient
            mcs, mss = max_cliques(q), max_stable_sets(q)
            e, a = eloise.choice(path), abelard.choice(path)
            if eloise.mode == REACTIONARY:
                e = e[a]
            elif abelard.mode == REACTIONARY:
                a = a[e]
            s, st = mcs[e], mss[a]
            moves.append(Move(path, "prime", eloise=s, abelard=st))
            meet = s & st
            if not meet:
                return Play(tuple(moves), None, None)
            (v,) = meet
            i = q.nodes.index(v)
        path += (i,)
        node = node.children[i]
    return Play(tuple(moves), node.node, node.label)


def winner(p: Play, x: Iterable[str]) -> str:
    if p.deadlock:
        return DRAW
    return ELOISE if p.outcome in frozenset(x) else ABELARD


def _achieves(result: str, player: str, goal: str) -> bool:
    return result == player or (goal == DRAW_OR_WIN and result == DRAW)


# -- strategy spaces --------------------------------------------------------


def _choice_space(t: Tree, player: str, mode: str) -> Tuple[List[Path], List[List[object]]]:
    points = decision_points(t, player)
    spaces = []
    for p in points:
        node = t.at(p)
        n = len(_options(node, player))
        if node.kind == "prime" and mode == REACTIONARY:
            m = len(_options(node, other(player)))
            spaces.append(list(product(range(n), repeat=m)))
        else:
            spaces.append(list(range(n)))
    return points, spaces


def count_strategies(g: LabelledGraph, player: str, mode: str = STATIC) -> int:
    if len(g) == 0:
        raise InputError("no game on the empty graph")
    _, spaces = _choice_space(decompose(g), player, mode)
    total = 1
    for s in spaces:
        total *= len(s)
    return total


def _budget(g: LabelledGraph, player: str, mode: str) -> None:
    n = count_strategies(g, player, mode)
    if n > STRATEGY_LIMIT:
        raise ResourceError(f"{n} candidate strategies exceed the limit of {STRATEGY_LIMIT}")


def strategies(g: LabelledGraph, player: str, mode: str = STATIC) -> Iterator[Strategy]:
    """Every positional strategy of ``player`` in the given mode."""
    _check_player(player)
    _budget(g, player, mode)
    points, spaces = _choice_space(decompose(g), player, mode)
    for combo in product(*spaces):
        yield Strategy(player, mode, dict(zip(points, combo)))


def default_strategy(g: LabelledGraph, player: str, mode: str = STATIC) -> Strategy:
    """Always the first option (for a reactionary strategy: whatever the opponent does)."""
    points, spaces = _choice_space(decompose(g), player, mode)
    return Strategy(player, mode, {p: s[0] for p, s in zip(points, spaces)})


# -- strategy synthesis -----------------------------------------------------


class _Search:
    """Backward induction over the tree, one subtree at a time.

    ``solve(path)`` returns the choices a strategy needs inside that subtree
    to reach the goal against every opponent behaviour, or None.  Choices at
    unreachable positions are filled in afterwards.
    """

    def __init__(self, g: LabelledGraph, x, player: str, goal: str, reactive: bool):
        _check_player(player)
        if goal not in (WIN, DRAW_OR_WIN):
            raise InputError(f"unknown goal {goal!r}")
        self.tree = decompose(g)
        self.x = frozenset(x)
        self.player = player
        self.goal = goal
        self.reactive = reactive
        self.memo: Dict[Path, Optional[Dict[Path, object]]] = {}

    def solve(self, path: Path = ()) -> Optional[Dict[Path, object]]:
        if path not in self.memo:
            self.memo[path] = self._solve(path, self.tree.at(path))
        return self.memo[path]

    def _solve(self, path: Path, t: Tree):
        me = self.player
        if t.is_leaf:
            won = (t.label in self.x) == (me == ELOISE)
            return {} if won else None
        if t.kind != "prime":
            kids = range(len(t.children))
            if _moves_at(t, me):
                for i in kids:
                    sub = self.solve(path + (i,))
                    if sub is not None:
                        return {path: i, **sub}
                return None
            out: Dict[Path, object] = {}
            for i in kids:
                sub = self.solve(path + (i,))
                if sub is None:
                    return None
                out.update(sub)
            return out
        q = t.quotient
        mine, theirs = _options(t, me), _options(t, other(me))

        def outcome(k: int, j: int):
            meet = mine[k] & theirs[j]
            if not meet:
                return {} if self.goal == DRAW_OR_WIN else None
            (v,) = meet
            return self.solve(path + (q.nodes.index(v),))

        if self.reactive:
            reply, out = [], {}
            for j in range(len(theirs)):
                for k in range(len(mine)):
                    sub = outcome(k, j)
                    if sub is not None:
                        reply.append(k)
                        out.update(sub)
                        break
                else:
                    return None
            return {path: tuple(reply), **out}
        for k in range(len(mine)):
            out = {}
            for j in range(len(theirs)):
                sub = outcome(k, j)
                if sub is None:
                    break
                out.update(sub)
            else:
                return {path: k, **out}
        return None

    def strategy(self) -> Optional[Strategy]:
        found = self.solve()
        if found is None:
            return None
        mode = REACTIONARY if self.reactive else STATIC
        points, spaces = _choice_space(self.tree, self.player, mode)
        choices = {p: found.get(p, s[0]) for p, s in zip(points, spaces)}
        return Strategy(self.player, mode, choices)


def find_static_strategy(g: LabelledGraph, x, player: str, goal: str = WIN) -> Optional[Strategy]:
    """A static strategy reaching ``goal`` against every static opponent, if one exists."""
    _budget(g, player, STATIC)
    return _Search(g, x, player, goal, reactive=False).strategy()


def find_reactionary_strategy(g: LabelledGraph, x, player: str, goal: str = WIN) -> Optional[Strategy]:
    """A reactionary strategy for ``player`` moving second at every prime node."""
    _budget(g, player, REACTIONARY)
    return _Search(g, x, player, goal, reactive=True).strategy()


def exists_static_strategy(g: LabelledGraph, x, player: str, goal: str = WIN) -> bool:
    return find_static_strategy(g, x, player, goal) is not None


def exists_reactionary_strategy(g: LabelledGraph, x, player: str, goal: str = WIN) -> bool:
    return find_reactionary_strategy(g, x, player, goal) is not None


# -- strategies read off cliques and assignments ----------------------------------


def strategy_from_clique(g: LabelledGraph, s: Iterable[str]) -> Strategy:
    """Static Eloise strategy that keeps the play inside the maximal clique ``s``."""
    s = g.check_nodes(s)
    if s not in set(max_cliques(g)):
        raise InputError("not a maximal clique of the graph")
    t = decompose(g)
    choices: Dict[Path, object] = {}
    for path in decision_points(t, ELOISE):
        node = t.at(path)
        if not (node.cover & s):
            continue
        if node.kind == "or":
            choices[path] = next(i for i, c in enumerate(node.children) if c.cover & s)
        else:
            q = node.quotient
            hit = frozenset(q.nodes[i] for i, c in enumerate(node.children) if c.cover & s)
            choices[path] = max_cliques(q).index(hit)
    points, spaces = _choice_space(t, ELOISE, STATIC)
    return Strategy(ELOISE, STATIC, {p: choices.get(p, sp[0]) for p, sp in zip(points, spaces)})


def strategy_from_hitting_assignment(g: LabelledGraph, x: Iterable[str]) -> Strategy:
    """Reactionary Eloise strategy (moving second) for an assignment meeting every maximal stable set."""
    x = frozenset(x)
    inside = frozenset(v for v in g.nodes if g.label(v) in x)

    def hits(cover: frozenset) -> bool:
        return all(t & inside for t in max_stable_sets(induced_subgraph(g, cover)))

    if not hits(g.node_set):
        raise InputError("the assignment misses some maximal stable set")
    t = decompose(g)
    choices: Dict[Path, object] = {}
    for path in decision_points(t, ELOISE):
        node = t.at(path)
        if not hits(node.cover):
            continue
        if node.kind == "or":
            choices[path] = next(i for i, c in enumerate(node.children) if hits(c.cover))
            continue
        q = node.quotient
        mcs = max_cliques(q)
        good = {q.nodes[i] for i, c in enumerate(node.children) if hits(c.cover)}
        reply = []
        for st in max_stable_sets(q):
            m = q.least(st & good)
            reply.append(next(k for k, c in enumerate(mcs) if m in c))
        choices[path] = tuple(reply)
    points, spaces = _choice_space(t, ELOISE, REACTIONARY)
    return Strategy(ELOISE, REACTIONARY, {p: choices.get(p, sp[0]) for p, sp in zip(points, spaces)})
