"""Named example graphs and formulas shipped with the package."""

from __future__ import annotations

from importlib import resources
from typing import List

from .formula import Formula, parse_formula, web
from .graph import LabelledGraph, parse_graph


def _text(name: str) -> str:
    return resources.files("bgl").joinpath("data", name).read_text(encoding="utf-8")


def names() -> List[str]:
    return sorted(p.name for p in resources.files("bgl").joinpath("data").iterdir() if p.is_file())


def graph(name: str) -> LabelledGraph:
    """``graph("p4")`` reads ``data/p4.bg``; formula fixtures are turned into their webs."""
    if name in ("lhs", "rhs", "web5"):
        return web(formula(name))
    return parse_graph(_text(f"{name}.bg"))


def formula(name: str) -> Formula:
    return parse_formula(_text(f"{name}.formula"))


def text(name: str) -> str:
    return _text(name)


def cnf(name: str):
    from .reductions import parse_dimacs

    return parse_dimacs(_text(f"{name}.cnf"))


def qbf(name: str):
    from .reductions import parse_qdimacs

    return parse_qdimacs(_text(f"{name}.qdimacs"))
