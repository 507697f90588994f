import networkx as nx
import pytest
from hypothesis import given, settings

from conftest import nx_isomorphic, subgroups, to_nx
from freegog.errors import AlphabetError, FormatError
from freegog.graphs import (
    Edge,
    GraphMorphism,
    LabeledGraph,
    based_isomorphic,
    contains,
    core,
    disjoint_union,
    euler_characteristic,
    fold,
    from_text,
    generators,
    graph_from_words,
    is_immersion,
    join,
    lift,
    petal_graph,
    rose,
    same_subgroup,
    to_text,
    words_accepted,
)
from freegog.oracle import enumerate_elements
from freegog.words import Word, all_words, parse_word, parse_words


def G(text, rank=2):
    return graph_from_words(parse_words(text, rank), rank)


# -- graph_from_words ----------------------------------------------------------


def test_single_loop():
    g = G("a")
    assert g.n_vertices == 1 and g.n_edges == 1
    assert g.edges[0].label == 0
    assert g.euler_characteristic() == 0


def test_duplicate_generator_folds_away():
    assert G("a a") == G("a")


def test_even_length_subgroup():
    # oracle: with generators of length 2 and cap 10, the ball of radius 8 is complete
    g = G("aa ab bb")
    assert g.rank() == 3
    ball = enumerate_elements(parse_words("aa ab bb"), 10, radius=8)
    assert ball == {w for w in all_words(2, 8) if len(w) % 2 == 0}
    assert all(contains(g, w) == (w in ball) for w in all_words(2, 8))


def test_alphabet_error():
    with pytest.raises(AlphabetError):
        graph_from_words([parse_word("c")], 2)


def test_result_is_folded_core():
    g = G("abA, bbaB, aB")
    assert g.is_folded() and g.is_core()


# -- fold ----------------------------------------------------------------------


def test_fold_fixed_point():
    g = rose(2)
    h, m = fold(g)
    assert h == g
    assert all(m.vertex_map[v] == v for v in g.vertices)
    assert all(m.edge_map[k] == k for k in g.edges)


def test_fold_two_loops():
    g = LabeledGraph([0], [Edge(0, 0, 0), Edge(0, 0, 0)], 0)
    h, _ = fold(g)
    assert h.n_vertices == 1 and h.n_edges == 1


def test_fold_free_reduction():
    h, _ = fold(petal_graph([Word([(0, 1), (0, -1)])]))
    assert h.n_vertices == 1 and h.n_edges == 0


@given(subgroups(3))
def test_fold_idempotent_and_preserves_words(gens):
    p = petal_graph(gens)
    h, m = fold(p)
    assert h.is_folded()
    assert fold(h)[0] == h
    assert m.is_well_formed() and m.is_surjective()
    for w in gens:
        assert contains(h, w)


# -- immersions ----------------------------------------------------------------


def test_is_immersion_examples():
    g = rose(1)
    assert is_immersion(GraphMorphism.identity(g))
    two = LabeledGraph([0], [Edge(0, 0, 0), Edge(0, 0, 0)], 0)
    assert not is_immersion(GraphMorphism(two, g, {0: 0}, {0: 0, 1: 0}))
    cover = LabeledGraph([0, 1], [Edge(0, 1, 0), Edge(1, 0, 0)], 0)
    assert is_immersion(GraphMorphism(cover, g, {0: 0, 1: 0}, {0: 0, 1: 0}))


# -- contains ------------------------------------------------------------------


def test_contains_examples():
    assert contains(G("a"), parse_word("aaaaa"))
    assert not contains(G("a"), parse_word("b"))
    # oracle over <a^2, b> up to length 6: a never appears
    ball = enumerate_elements(parse_words("aa b"), 8, radius=6)
    assert parse_word("a") not in ball
    assert not contains(G("aa b"), parse_word("a"))


@settings(max_examples=60, deadline=None)
@given(subgroups(2, max_gens=3, max_len=4))
def test_contains_matches_oracle(gens):
    g = graph_from_words(gens, 2)
    cap = 6 + max(len(w) for w in gens)
    ball = enumerate_elements(gens, cap, radius=6, budget=None)
    assert words_accepted(g, 6) == ball
    for w in all_words(2, 6):
        assert contains(g, w) == (w in ball)


@given(subgroups(3))
def test_generators_accepted(gens):
    g = graph_from_words(gens, 3)
    for w in gens:
        assert contains(g, w)
    basis = generators(g)
    assert len(basis) == g.rank()
    assert same_subgroup(graph_from_words(basis, 3), g)


# -- euler characteristic and core ---------------------------------------------


def test_euler_examples():
    assert euler_characteristic(rose(3)) == -2
    tree = LabeledGraph(range(4), [Edge(0, 1, 0), Edge(1, 2, 1), Edge(1, 3, 0)])
    assert tree.euler_characteristic() == 1
    u, _, _ = disjoint_union([rose(3), tree])
    assert u.euler_characteristic() == -1


@given(subgroups(2), subgroups(2))
def test_euler_against_networkx(g1, g2):
    a, b = graph_from_words(g1, 2), graph_from_words(g2, 2)
    u, _, _ = disjoint_union([a, b])
    h = to_nx(u)
    comps = nx.number_connected_components(h.to_undirected(as_view=True))
    assert u.euler_characteristic() == h.number_of_nodes() - h.number_of_edges()
    assert len(u.components()) == comps
    assert u.betti_number() == h.number_of_edges() - h.number_of_nodes() + comps


def test_core_examples():
    g = rose(2)
    assert core(g, keep=0) == g
    seg = LabeledGraph([0, 1], [Edge(0, 1, 0)])
    assert core(seg).n_vertices == 0
    assert core(seg, keep=0).vertices == (0,)
    hair = LabeledGraph([0, 1, 2], [Edge(0, 0, 0), Edge(0, 1, 1), Edge(1, 2, 0)])
    c = core(hair)
    assert c.vertices == (0,) and list(c.edges) == [0]


# -- lift ----------------------------------------------------------------------


def test_lift_examples():
    h = G("a b")
    f = lift(h, h)
    assert f.vertex_map == {0: 0} and all(f.edge_map[k] == k for k in h.edges)
    assert lift(G("b"), G("a")) is None
    m, a = G("aa"), G("a")
    f = lift(m, a)
    assert f is not None and f.is_immersion() and f.is_well_formed()
    # the 2-cycle wraps the loop twice: every edge goes to the single a-edge
    assert m.n_vertices == 2 and set(f.edge_map.values()) == {0}
    for k, e in m.edges.items():
        img = a.edges[f.edge_map[k]]
        assert (f.vertex_map[e.source], f.vertex_map[e.target], e.label) == tuple(img)


@given(subgroups(2, max_gens=2), subgroups(2, max_gens=2))
def test_lift_iff_generators_accepted(g1, g2):
    m, h = graph_from_words(g1, 2), graph_from_words(g2, 2)
    assert (lift(m, h) is not None) == all(contains(h, w) for w in g1)


# -- join ----------------------------------------------------------------------


def test_join_examples():
    h = G("ab bA")
    assert join(h, h) == h
    assert join(G("a"), G("b")) == rose(2)
    j = join(G("a b", 3), G("c ab", 3))
    assert j.rank() == 3
    for w in ("a", "b", "c"):
        assert contains(j, parse_word(w))


@given(subgroups(2), subgroups(2))
def test_join_contains_both(g1, g2):
    j = join(graph_from_words(g1, 2), graph_from_words(g2, 2))
    assert j.is_folded() and j.is_core()
    assert all(contains(j, w) for w in g1 + g2)


# -- isomorphism / text format -------------------------------------------------


@given(subgroups(2))
def test_canonical_agrees_with_networkx(gens):
    g = graph_from_words(gens, 2)
    shuffled, _, _ = g.relabeled(start=100, edge_start=50)
    assert based_isomorphic(g, shuffled)
    assert nx_isomorphic(g, shuffled)


@given(subgroups(3))
def test_text_roundtrip(gens):
    g = graph_from_words(gens, 3)
    assert from_text(to_text(g)) == g


def test_text_errors_have_line_numbers():
    with pytest.raises(FormatError, match="line 3"):
        from_text("graph\nvertex 0\nedge 0 7 a\n")
