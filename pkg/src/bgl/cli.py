"""Command line front end (``bgl``).

Exit codes: 0 success or "true", 1 "false", 2 bad input, 3 resource limit.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import Callable, Iterator, List, Optional, TextIO

from . import games
from .decomposition import decompose, render
from .errors import BglError, InputError, ResourceError
from .formula import cotree_to_formula, parse_formula, web
from .games import ABELARD, ELOISE
from .graph import LabelledGraph, find_induced_p4, format_graph, is_p4_free, is_prime, max_cliques, max_stable_sets, parse_graph
from .proofs import check_derivation, derive_entailment, format_derivation, parse_derivation, to_cnf, to_dnf
from .reductions import (
    normalize_qbf,
    parse_dimacs,
    parse_qdimacs,
    qbf_to_entailment,
    sat_to_evaluation,
)
from .semantics import (
    entails,
    evaluate,
    evaluate_recursive,
    find_nontotal_witness,
    is_cis,
    is_deterministic,
    parse_assignment,
)


class _Answer(Exception):
    """A boolean result that decides the exit code."""

    def __init__(self, value: bool):
        self.value = value


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror or exc}") from None


def _parse(path: str, parser: Callable):
    text = _read(path)
    try:
        return parser(text)
    except InputError as exc:
        raise InputError(f"{path}: {exc}") from None


def _graph(path: str) -> LabelledGraph:
    """Graph file, or the web of a formula when the name ends in ``.formula``."""
    if path.endswith(".formula"):
        return web(_parse(path, parse_formula))
    return _parse(path, parse_graph)


def _flavor(args) -> Optional[str]:
    return "and" if args.conj else "or" if args.disj else None


def _sets(g: LabelledGraph, sets) -> str:
    return " ".join("{" + ",".join(g.sort_nodes(s)) + "}" for s in sets)


def _bool(out: TextIO, value: bool) -> None:
    out.write("true\n" if value else "false\n")
    raise _Answer(value)


# -- subcommands -------------------------------------------------------------


def cmd_eval(args, out: TextIO) -> None:
    g = _graph(args.graph)
    x = parse_assignment(args.x)
    result = evaluate_recursive(g, x) if args.recursive and len(g) else evaluate(g, x)
    out.write(f"{result}\n")


def cmd_entail(args, out: TextIO) -> None:
    g, h = _graph(args.left), _graph(args.right)
    _bool(out, entails(g, h, _flavor(args)))


def cmd_decompose(args, out: TextIO) -> None:
    out.write(render(decompose(_graph(args.graph))) + "\n")


def cmd_web(args, out: TextIO) -> None:
    out.write(format_graph(web(_parse(args.formula, parse_formula))))


def cmd_synth(args, out: TextIO) -> None:
    out.write(f"{cotree_to_formula(_graph(args.graph))}\n")


def cmd_normalize(args, out: TextIO) -> None:
    g = _graph(args.graph)
    result, d = (to_dnf if args.dnf else to_cnf)(g)
    if args.emit_derivation:
        Path(args.emit_derivation).write_text(format_derivation(d), encoding="utf-8")
    out.write(format_graph(result))


def cmd_derive(args, out: TextIO) -> None:
    g, h = _graph(args.left), _graph(args.right)
    d = derive_entailment(g, h, _flavor(args), budget=args.budget)
    Path(args.output).write_text(format_derivation(d), encoding="utf-8")
    out.write(f"{len(d)} steps\n")


def cmd_check_derivation(args, out: TextIO) -> None:
    d = _parse(args.file, parse_derivation)
    res = check_derivation(d, _flavor(args))
    if res.ok:
        out.write(f"ok ({len(d)} steps)\n")
    else:
        out.write(f"step {res.step}: {res.message}\n")
    raise _Answer(res.ok)


def cmd_check(args, out: TextIO) -> None:
    g = _graph(args.graph)
    prop = args.property
    if prop == "cis":
        _bool(out, is_cis(g))
    if prop == "deterministic":
        _bool(out, is_deterministic(g))
    if prop == "prime":
        _bool(out, is_prime(g))
    if prop == "p4free":
        ok = is_p4_free(g)
        if not ok:
            out.write("induced P4: " + " ".join(find_induced_p4(g)) + "\n")
        _bool(out, ok)
    witness = find_nontotal_witness(g)
    if witness is not None:
        out.write("related to nothing: " + ",".join(sorted(witness)) + "\n")
    _bool(out, witness is None)


def cmd_reduce(args, out: TextIO) -> None:
    if args.problem == "sat":
        c = _parse(args.file, parse_dimacs)
        g, x = sat_to_evaluation(c, args.bit)
        out.write(format_graph(g))
        out.write(f"# assignment {','.join(sorted(x))}\n")
        return
    q = _parse(args.file, parse_qdimacs)
    nq = normalize_qbf(q)
    out.write(f"# normalized {nq}\n")
    if nq.resolved is not None:
        out.write(f"# resolved {'true' if nq.resolved else 'false'}\n")
        return
    g, h = qbf_to_entailment(nq, args.flavor)
    if args.output:
        for tag, graph in (("g", g), ("h", h)):
            Path(f"{args.output}.{tag}.bg").write_text(format_graph(graph), encoding="utf-8")
        out.write(f"# wrote {args.output}.g.bg and {args.output}.h.bg\n")
        return
    out.write("# graph G\n" + format_graph(g) + "# graph H\n" + format_graph(h))


# -- interactive play --------------------------------------------------------------


class _Chooser:
    """Reads 1-based option numbers from a script or from standard input."""

    def __init__(self, out: TextIO, script: Optional[List[str]]):
        self.out = out
        self.script: Optional[Iterator[str]] = iter(script) if script is not None else None

    def _next(self, prompt: str) -> str:
        if self.script is None:
            try:
                return input(prompt)
            except EOFError:
                raise InputError("input ended before the game did") from None
        try:
            line = next(self.script)
        except StopIteration:
            raise InputError("script ended before the game did") from None
        self.out.write(f"{prompt}{line}\n")
        return line

    def ask(self, player: str, labels: List[str]) -> int:
        self.out.write(f"options for {player}:\n")
        for i, text in enumerate(labels, start=1):
            self.out.write(f"  {i}: {text}\n")
        while True:
            line = self._next(f"{player}> ").strip()
            if line.isdigit() and 1 <= int(line) <= len(labels):
                return int(line) - 1
            self.out.write(f"invalid choice, enter a number from 1 to {len(labels)}\n")


def _engine(g: LabelledGraph, x, player: str, reactive: bool) -> games.Strategy:
    find = games.find_reactionary_strategy if reactive else games.find_static_strategy
    for goal in (games.WIN, games.DRAW_OR_WIN):
        s = find(g, x, player, goal)
        if s is not None:
            return s
    return games.default_strategy(g, player, games.REACTIONARY if reactive else games.STATIC)


def _script_lines(path: str) -> List[str]:
    lines = []
    for raw in _read(path).splitlines():
        raw = raw.split("#", 1)[0].strip()
        if raw:
            lines.append(raw)
    return lines


def cmd_play(args, out: TextIO) -> None:
    g = _graph(args.graph)
    if len(g) == 0:
        raise InputError("no game on the empty graph")
    x = parse_assignment(args.x)
    second = None
    if args.mode == "sequential":
        second = args.second or ELOISE
    elif args.second:
        raise InputError("--second only applies to sequential play")
    humans = {ELOISE, ABELARD} if args.human == "both" else {args.human} if args.human else set()
    chooser = _Chooser(out, _script_lines(args.script) if args.script else None)
    engine = {p: _engine(g, x, p, p == second) for p in (ELOISE, ABELARD) if p not in humans}
    tree = decompose(g)
    path = ()
    node = tree
    while not node.is_leaf:
        out.write(f"at {render(node)}\n")
        if node.kind in ("or", "and"):
            player = ELOISE if node.kind == "or" else ABELARD
            kids = [render(c) for c in node.children]
            if player in humans:
                i = chooser.ask(player, kids)
            else:
                i = engine[player].choice(path)
            out.write(f"{player} picks {kids[i]}\n")
        else:
            q = node.quotient
            options = {ELOISE: max_cliques(q), ABELARD: max_stable_sets(q)}

            def show(s) -> str:
                return "{" + ", ".join(render(node.children[q.nodes.index(v)]) for v in q.nodes if v in s) + "}"

            order = [ELOISE, ABELARD] if second != ELOISE else [ABELARD, ELOISE]
            picked = {}
            for player in order:
                mine = options[player]
                if player in humans:
                    picked[player] = chooser.ask(player, [show(s) for s in mine])
                else:
                    c = engine[player].choice(path)
                    picked[player] = c[picked[games.other(player)]] if isinstance(c, tuple) else c
                if second is not None:
                    out.write(f"{player} picks {show(mine[picked[player]])}\n")
            if second is None:
                for player in (ELOISE, ABELARD):
                    out.write(f"{player} picks {show(options[player][picked[player]])}\n")
            meet = options[ELOISE][picked[ELOISE]] & options[ABELARD][picked[ABELARD]]
            if not meet:
                out.write("outcome deadlock: draw\n")
                return
            (v,) = meet
            i = q.nodes.index(v)
        path += (i,)
        node = node.children[i]
    leaf = node.label if node.node == node.label else f"{node.label} (node {node.node})"
    who = ELOISE if node.label in x else ABELARD
    out.write(f"outcome {leaf}: {who} wins\n")


# -- argument parsing ----------------------------------------------------------------


def _flavor_flags(p: argparse.ArgumentParser, required: bool = True) -> None:
    grp = p.add_mutually_exclusive_group(required=required)
    grp.add_argument("--and", dest="conj", action="store_true", help="conjunctive entailment (cliques)")
    grp.add_argument("--or", dest="disj", action="store_true", help="disjunctive entailment (stable sets)")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="bgl", description="Boolean graph logic toolkit.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eval", help="evaluate a graph on an assignment")
    p.add_argument("-g", "--graph", required=True)
    p.add_argument("-x", required=True, help="comma separated true variables")
    p.add_argument("--recursive", action="store_true", help="evaluate over the decomposition tree")
    p.set_defaults(run=cmd_eval)

    p = sub.add_parser("entail", help="decide entailment between two graphs")
    _flavor_flags(p)
    p.add_argument("left")
    p.add_argument("right")
    p.set_defaults(run=cmd_entail)

    p = sub.add_parser("decompose", help="print the decomposition tree")
    p.add_argument("graph")
    p.set_defaults(run=cmd_decompose)

    p = sub.add_parser("web", help="relation web of a formula")
    p.add_argument("formula")
    p.set_defaults(run=cmd_web)

    p = sub.add_parser("synth", help="formula of a P4-free graph")
    p.add_argument("graph")
    p.set_defaults(run=cmd_synth)

    p = sub.add_parser("normalize", help="rewrite to DNF or CNF")
    grp = p.add_mutually_exclusive_group(required=True)
    grp.add_argument("--dnf", action="store_true")
    grp.add_argument("--cnf", action="store_true")
    p.add_argument("graph")
    p.add_argument("--emit-derivation", metavar="FILE")
    p.set_defaults(run=cmd_normalize)

    p = sub.add_parser("derive", help="build a derivation witnessing an entailment")
    _flavor_flags(p)
    p.add_argument("left")
    p.add_argument("right")
    p.add_argument("-o", "--output", required=True)
    p.add_argument("--budget", type=int, default=2000, help="largest normal form allowed (nodes)")
    p.set_defaults(run=cmd_derive)

    p = sub.add_parser("check-derivation", help="re-check a derivation file")
    _flavor_flags(p, required=False)
    p.add_argument("file")
    p.set_defaults(run=cmd_check_derivation)

    p = sub.add_parser("check", help="test a property of a graph")
    p.add_argument("property", choices=["cis", "total", "prime", "p4free", "deterministic"])
    p.add_argument("graph")
    p.set_defaults(run=cmd_check)

    p = sub.add_parser("play", help="play the evaluation game")
    p.add_argument("graph")
    p.add_argument("-x", required=True, help="comma separated true variables")
    p.add_argument("--mode", choices=["static", "sequential"], default="static")
    p.add_argument("--human", choices=[ELOISE, ABELARD, "both"])
    p.add_argument("--second", choices=[ELOISE, ABELARD], help="who reacts at prime nodes (default eloise)")
    p.add_argument("--script", metavar="FILE", help="replay option numbers from a file")
    p.set_defaults(run=cmd_play)

    p = sub.add_parser("reduce", help="graph constructions from SAT and forall-exists CNF")
    p.add_argument("problem", choices=["sat", "qbf"])
    p.add_argument("file")
    p.add_argument("--bit", type=int, choices=[0, 1], default=0, help="sat: which output bit encodes satisfiability")
    p.add_argument("--flavor", choices=["and", "or"], default="or", help="qbf: which entailment encodes truth")
    p.add_argument("-o", "--output", metavar="PREFIX", help="qbf: write PREFIX.g.bg and PREFIX.h.bg")
    p.set_defaults(run=cmd_reduce)
    return ap


def run(argv: Optional[List[str]] = None, out: Optional[TextIO] = None, err: Optional[TextIO] = None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        args.run(args, out)
    except _Answer as ans:
        return 0 if ans.value else 1
    except ResourceError as exc:
        err.write(f"bgl: resource limit: {exc}\n")
        return 3
    except (InputError, BglError) as exc:
        err.write(f"bgl: error: {exc}\n")
        return 2
    return 0


def main(argv: Optional[List[str]] = None) -> int:
    return run(argv)


if __name__ == "__main__":
    sys.exit(main())
