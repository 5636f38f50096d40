"""Boolean graph logic: evaluation, entailment, games and proofs on labelled graphs."""

from .decomposition import Tree, classify, compose, decompose, render
from .errors import BglError, InputError, ParseError, ResourceError
from .formula import Formula, cotree_to_formula, eval_formula, parse_formula, web
from .graph import (
    LabelledGraph,
    complement,
    format_graph,
    induced_subgraph,
    is_isomorphic,
    is_module,
    is_p4_free,
    is_prime,
    max_cliques,
    max_stable_sets,
    parse_graph,
    quotient,
    read_graph,
)
from .semantics import (
    EvalResult,
    entails,
    entails_and,
    entails_or,
    evaluate,
    evaluate_recursive,
    is_cis,
    is_deterministic,
    is_total,
)

__version__ = "0.1.0"

__all__ = [
    "BglError",
    "EvalResult",
    "Formula",
    "InputError",
    "LabelledGraph",
    "ParseError",
    "ResourceError",
    "Tree",
    "classify",
    "complement",
    "compose",
    "cotree_to_formula",
    "decompose",
    "entails",
    "entails_and",
    "entails_or",
    "eval_formula",
    "evaluate",
    "evaluate_recursive",
    "format_graph",
    "induced_subgraph",
    "is_cis",
    "is_deterministic",
    "is_isomorphic",
    "is_module",
    "is_p4_free",
    "is_prime",
    "is_total",
    "max_cliques",
    "max_stable_sets",
    "parse_formula",
    "parse_graph",
    "quotient",
    "read_graph",
    "render",
    "web",
]
