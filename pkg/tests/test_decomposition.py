import pytest
from hypothesis import given, settings

from bgl import fixtures
from bgl.decomposition import (
    Shape,
    classify,
    compose,
    decompose,
    max_cliques_via_tree,
    max_stable_sets_via_tree,
    prime_quotient,
    render,
)
from bgl.errors import InputError
from bgl.graph import LabelledGraph, complement, is_connected, is_co_connected, is_module, is_prime, max_cliques, max_stable_sets
from support import graphs, oracle_is_module


@pytest.mark.parametrize(
    "name, expected",
    [
        ("seven", "(or (and a b) (prime P4 c d e (and f g)))"),
        ("modules", "(prime P4 u (or v x) (or v' w' x') w)"),
        ("game", "(or (prime P4 a b c d) (prime P4 e f g (and h i)) (and j k))"),
        ("p4", "(prime P4 w x y z)"),
        ("c5", "(prime C5 v w x y z)"),
        ("bull", "(prime bull v w x y z)"),
    ],
)
def test_fixture_trees(name, expected):
    assert render(decompose(fixtures.graph(name))) == expected


def test_singleton_and_empty():
    t = decompose(LabelledGraph(["x"], [], {"x": "y"}))
    assert t.is_leaf and t.node == "x" and t.label == "y"
    assert render(t) == "x:y"
    with pytest.raises(InputError):
        decompose(LabelledGraph())


def test_classification_is_exclusive():
    assert classify(LabelledGraph("a")).shape is Shape.SINGLETON
    assert classify(LabelledGraph("ab")).shape is Shape.DISCONNECTED
    assert classify(LabelledGraph("ab", ["ab"])).shape is Shape.CO_DISCONNECTED
    assert classify(fixtures.graph("p4")).shape is Shape.BICONNECTED
    with pytest.raises(InputError):
        prime_quotient(LabelledGraph("ab"))


@settings(max_examples=300)
@given(graphs(min_nodes=1, max_nodes=8, labels="abcde"))
def test_compose_inverts_decompose(g):
    assert compose(decompose(g)) == g


@settings(max_examples=200)
@given(graphs(min_nodes=1, max_nodes=7))
def test_tree_shape_invariants(g):
    for _, t in decompose(g).walk():
        if t.is_leaf:
            continue
        assert len(t.children) >= 2
        assert is_module(g, t.cover)
        covers = [c.cover for c in t.children]
        assert frozenset().union(*covers) == t.cover
        assert sum(map(len, covers)) == len(t.cover)
        assert covers == sorted(covers, key=lambda c: g.key(g.least(c)))
        sub = LabelledGraph(t.cover, [e for e in g.edges if set(e) <= t.cover])
        if t.kind == "or":
            assert not is_connected(sub)
            assert all(is_connected(LabelledGraph(c, [e for e in g.edges if set(e) <= c])) for c in covers)
        elif t.kind == "and":
            assert not is_co_connected(sub)
        else:
            assert t.kind == "prime"
            assert is_prime(t.quotient)
            assert [g.least(c) for c in covers] == list(t.quotient.nodes)


@settings(max_examples=100)
@given(graphs(min_nodes=3, max_nodes=6))
def test_prime_blocks_are_maximal_proper_modules(g):
    from itertools import combinations

    if classify(g).shape is not Shape.BICONNECTED:
        return
    blocks = prime_quotient(g)
    proper = [
        frozenset(xs)
        for k in range(1, len(g))
        for xs in combinations(g.nodes, k)
        if oracle_is_module(g, xs)
    ]
    maximal = {m for m in proper if not any(m < n for n in proper)}
    assert set(blocks) == maximal


@settings(max_examples=200)
@given(graphs(min_nodes=1, max_nodes=8))
def test_cliques_via_tree(g):
    assert set(max_cliques_via_tree(g)) == set(max_cliques(g))
    assert set(max_stable_sets_via_tree(g)) == set(max_stable_sets(g))


@given(graphs(min_nodes=1, max_nodes=7))
def test_complement_swaps_or_and(g):
    t, u = decompose(g), decompose(complement(g))
    swap = {"or": "and", "and": "or", "prime": "prime", "leaf": "leaf"}
    assert [swap[s.kind] for _, s in t.walk()] == [s.kind for _, s in u.walk()]
