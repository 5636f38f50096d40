import networkx as nx
import pytest
from hypothesis import given, settings

from bgl.errors import InputError, ParseError
from bgl.graph import (
    LabelledGraph,
    co_components,
    complement,
    connected_components,
    external_neighbours,
    find_induced_p4,
    find_isomorphism,
    format_graph,
    induced_subgraph,
    is_isomorphic,
    is_module,
    is_p4_free,
    is_prime,
    join,
    disjoint_union,
    label_set,
    max_cliques,
    max_stable_sets,
    module_closure,
    parse_graph,
    quotient,
    relabel_nodes,
    substitute,
)
from bgl import fixtures
from support import graphs, nx_cliques, nx_stable_sets, oracle_has_p4, oracle_is_module, oracle_is_prime, to_nx


def test_nodes_are_ordered_by_label_then_id():
    g = LabelledGraph(["b", "a", "c"], [], {"c": "a"})
    assert g.nodes == ("a", "c", "b")
    assert g.least(["b", "c"]) == "c"


def test_bad_edges_rejected():
    with pytest.raises(InputError):
        LabelledGraph(["a"], [("a", "a")])
    with pytest.raises(InputError):
        LabelledGraph(["a"], [("a", "b")])
    with pytest.raises(InputError):
        LabelledGraph(["a"], [], {"b": "x"})


def test_equality_includes_labels():
    assert LabelledGraph("ab", [("a", "b")]) == LabelledGraph("ba", [("b", "a")])
    assert LabelledGraph("ab", []) != LabelledGraph("ab", [], {"a": "b"})


def test_parse_and_format():
    text = "# a comment\nnode a\nnode b x  # trailing\n\nedge a b\nedge b a\n"
    g = parse_graph(text)
    assert g.nodes == ("a", "b")
    assert g.label("b") == "x"
    assert g.edges == (("a", "b"),)
    assert format_graph(g) == "node a\nnode b x\nedge a b\n"


@pytest.mark.parametrize(
    "text, line, col",
    [
        ("node a\nedge a a\n", 2, 1),
        ("node a\nedge a b\n", 2, 1),
        ("node a\n  vertex b\n", 2, 3),
        ("node a\nnode a\n", 2, 1),
        ("node\n", 1, 1),
    ],
)
def test_parse_errors_have_positions(text, line, col):
    with pytest.raises(ParseError) as exc:
        parse_graph(text)
    assert (exc.value.line, exc.value.column) == (line, col)


@given(graphs(labels="abc"))
def test_format_round_trip(g):
    assert parse_graph(format_graph(g)) == g


@settings(max_examples=200)
@given(graphs(max_nodes=8))
def test_cliques_match_networkx(g):
    assert set(max_cliques(g)) == nx_cliques(g)
    assert set(max_stable_sets(g)) == nx_stable_sets(g)


@given(graphs(max_nodes=7))
def test_cliques_are_canonically_sorted(g):
    cs = max_cliques(g)
    assert list(cs) == sorted(cs, key=g.set_key)


def test_empty_graph_has_no_cliques():
    assert max_cliques(LabelledGraph()) == ()
    assert max_stable_sets(LabelledGraph()) == ()


@given(graphs())
def test_complement_is_involutive(g):
    h = complement(g)
    assert complement(h) == g
    assert len(h.edges) + len(g.edges) == len(g) * (len(g) - 1) // 2


@given(graphs())
def test_components_match_networkx(g):
    if len(g) == 0:
        return
    assert set(connected_components(g)) == {frozenset(c) for c in nx.connected_components(to_nx(g))}
    assert set(co_components(g)) == set(connected_components(complement(g)))


@given(graphs(max_nodes=6))
def test_modules_match_definition(g):
    from itertools import combinations

    for k in range(len(g) + 1):
        for xs in combinations(g.nodes, k):
            assert is_module(g, xs) == oracle_is_module(g, xs)


@given(graphs(min_nodes=2, max_nodes=6))
def test_module_closure_is_least_module(g):
    from itertools import combinations

    seed = g.nodes[:2]
    m = module_closure(g, seed)
    assert is_module(g, m) and set(seed) <= m
    for k in range(2, len(m)):
        for xs in combinations(m, k):
            if set(seed) <= set(xs):
                assert not oracle_is_module(g, xs)


@given(graphs(max_nodes=6))
def test_prime_matches_definition(g):
    assert is_prime(g) == oracle_is_prime(g)


@given(graphs(max_nodes=7))
def test_p4_search_matches_brute_force(g):
    p = find_induced_p4(g)
    assert (p is not None) == oracle_has_p4(g)
    assert is_p4_free(g) == (p is None)
    if p is not None:
        a, b, c, d = p
        sub = induced_subgraph(g, p)
        assert set(sub.edge_set()) == {frozenset(e) for e in [(a, b), (b, c), (c, d)]}


@settings(max_examples=150)
@given(graphs(max_nodes=6), graphs(max_nodes=6))
def test_isomorphism_matches_networkx(g, h):
    assert is_isomorphic(g, h) == nx.is_isomorphic(to_nx(g), to_nx(h))


@given(graphs(max_nodes=6, labels="ab"))
def test_isomorphism_respects_labels(g):
    h = relabel_nodes(g, {v: v.upper() for v in g.nodes})
    f = find_isomorphism(g, h, True)
    assert f is not None
    assert all(g.label(v) == h.label(f[v]) for v in g.nodes)


def test_label_isomorphism_can_fail():
    g = LabelledGraph("ab", [("a", "b")], {"a": "x", "b": "y"})
    h = LabelledGraph("ab", [("a", "b")], {"a": "x", "b": "x"})
    assert is_isomorphic(g, h) and not is_isomorphic(g, h, respect_labels=True)


def test_join_union_and_substitute():
    a = LabelledGraph("ab", [])
    b = LabelledGraph("c", [])
    assert join(a, b).edge_set() == {frozenset("ac"), frozenset("bc")}
    assert disjoint_union(a, b).edges == ()
    with pytest.raises(InputError):
        join(a, a)
    p4 = fixtures.graph("p4")
    s = substitute(p4, ["x"], LabelledGraph(["x1", "x2"], [("x1", "x2")]))
    assert s.neighbours("x1") == {"x2", "z", "w"}
    with pytest.raises(InputError):
        substitute(p4, ["x", "w"], LabelledGraph(["q"]))


def test_quotient_and_external_neighbours():
    g = fixtures.graph("modules")
    assert external_neighbours(g, ["v'", "w'", "x'"]) == {"v", "x"}
    q = quotient(g, [["u"], ["v", "x"], ["v'", "w'", "x'"], ["w"]])
    assert q.nodes == ("u", "v", "v'", "w")
    assert is_prime(q)
    with pytest.raises(InputError):
        quotient(g, [["u", "w"], ["v", "x", "v'", "w'", "x'"]])


def test_label_set():
    g = LabelledGraph(["a1", "a2", "b"], [], {"a1": "a", "a2": "a"})
    assert label_set(g, ["a1", "a2"]) == {"a"}
    assert not g.is_linear()
