import random

import pytest

from freegog.errors import PreconditionError
from freegog.gog import bigons, build_representing, is_representing, mid_graph
from freegog.graphs import contains, graph_from_words, same_subgroup
from freegog.oracle import brute_intersection
from freegog.pullback import intersection_subgroup
from freegog.reduction import reduce_to_valence_three
from freegog.shnc import (
    bigon_experiment,
    bigon_instance,
    census_checks,
    cs_admissible,
    culler_shalen_experiment,
    delta_statistics,
    edge_groups_from_pullback,
    identity_check,
    resolve_bigon,
    run_pipeline,
    sample_cs_pair,
    shnc_experiment,
    shnc_inequality,
)
from freegog.words import parse_words


def evaluate(h1, h2, rank, mode="components"):
    p = run_pipeline(h1.split(), h2.split(), rank, mode)
    t = p.terminal
    stats = delta_statistics(t)
    return p, stats, identity_check(stats, t), census_checks(t, stats), shnc_inequality(t)


# chi(H1) chi(H2) + sum chi(M) computed by hand from the ranks
@pytest.mark.parametrize(
    "h1,h2,rank,mode,lhs,value",
    [
        ("a b", "a b", 2, "components", 4 * 1 + 4 * -1, 1 - 1),
        ("aa b", "aaa b", 2, "components", 4 * 1 + 4 * -1, 1 - 1),
        ("a b", "b c", 3, "based", 4 * 1 + 4 * 0, 1 + 0),
        ("a b", "c ab", 3, "based", 4 * 1 + 4 * 0, 1 + 0),
    ],
)
def test_identity_small_cases(h1, h2, rank, mode, lhs, value):
    p, stats, ident, census, (v, nonneg) = evaluate(h1, h2, rank, mode)
    assert ident.lhs == ident.lhs_census == ident.rhs == lhs
    assert all(census.values())
    assert v == value and nonneg


def test_equal_subgroups_give_equality():
    _, stats, ident, _, (v, _) = evaluate("a b", "a b", 2)
    assert v == 0
    # rhs = |S1||S2| - 2 mu vanishes
    assert len(stats.sigma1) * len(stats.sigma2) == 2 * stats.mu


@pytest.mark.parametrize("h1,h2,m", [("a b", "b c", "b"), ("a b", "c ab", "ab")])
def test_cs_intersections_against_oracle(h1, h2, m):
    g = intersection_subgroup(graph_from_words(h1.split(), 3), graph_from_words(h2.split(), 3))
    assert same_subgroup(g, graph_from_words([m], 3))
    brute = brute_intersection(parse_words(h1, 3), parse_words(h2, 3), 8)
    assert all(contains(g, w) for w in brute)
    assert parse_words(m, 3)[0] in brute


def test_cs_admissibility():
    g = lambda s: graph_from_words(s.split(), 3)
    assert cs_admissible(g("a b"), g("b c"))
    assert not cs_admissible(g("a b"), g("a b"))
    assert not cs_admissible(g("a"), g("b c"))
    h1, h2, g1, g2, _ = sample_cs_pair(random.Random(3))
    assert cs_admissible(g1, g2)


def test_based_mode_has_one_edge_group():
    g1, g2 = graph_from_words(["aa", "b"], 2), graph_from_words(["aaa", "b"], 2)
    (eg,) = edge_groups_from_pullback(g1, g2, "based")
    assert eg.graph.betti_number() == 2
    with pytest.raises(ValueError):
        edge_groups_from_pullback(g1, g2, "neither")


def test_components_mode_euler_sum_is_conjugacy_invariant():
    # summed over all components, chi of the pullback core is the same for any basepoints
    g1 = graph_from_words(["ab", "ba"], 2)
    g2 = graph_from_words(["BA", "AB"], 2)
    s = sum(eg.graph.euler_characteristic() for eg in edge_groups_from_pullback(g1, g2))
    s2 = sum(eg.graph.euler_characteristic() for eg in edge_groups_from_pullback(g2, g1))
    assert s == s2


def test_delta_statistics_rejects_nontrivalent():
    x = reduce_to_valence_three(build_representing([["a", "b"], ["a", "b"]], [(0, 1, ["aa"])], 2))[0]
    assert bigons(x)
    with pytest.raises(PreconditionError, match="simple-edged"):
        delta_statistics(x)


# -- bigons ----------------------------------------------------------------------


def test_bigon_same_component_folds_square_loop():
    x = reduce_to_valence_three(build_representing([["a", "b"], ["a", "b"]], [(0, 1, ["aa"])], 2))[0]
    r = resolve_bigon(x, bigons(x)[0])
    assert r.case == "same" and r.ok
    assert r.k_graph.betti_number() == 1  # <a^2> folds to <a>


def test_bigon_distinct_components_give_join():
    x = reduce_to_valence_three(build_representing([["a", "b"], ["a", "b"]], [(0, 1, ["ab"]), (0, 1, ["aB"])], 2))[0]
    comp = {v: i for i, (vs, _) in enumerate(mid_graph(x).components()) for v in vs}
    pick = next(b for b in bigons(x) if comp[b[1]] != comp[b[2]])
    r = resolve_bigon(x, pick)
    assert r.case == "distinct" and r.ok
    assert r.k_graph.betti_number() == 2  # <ab> v <aB>, a free basis
    assert r.checks["k_is_join"] and r.checks["k_properly_contains_both"]


@pytest.mark.parametrize("case", ["same", "distinct"])
def test_bigon_instances_are_representing(case):
    rng = random.Random(11)
    h1, h2, ms = bigon_instance(rng, case)
    x = build_representing([h1, h2], [(0, 1, m) for m in ms], 2)
    assert is_representing(x)
    g1, g2 = graph_from_words(h1, 2), graph_from_words(h2, 2)
    assert all(contains(g1, w) and contains(g2, w) for m in ms for w in m)


# -- experiments -------------------------------------------------------------------


def test_small_experiments_pass_and_repeat():
    for run in (
        lambda: culler_shalen_experiment(5, seed=1),
        lambda: shnc_experiment(8, seed=1),
        lambda: bigon_experiment(4, seed=1),
    ):
        a, b = run(), run()
        assert a.ok, a.text()
        assert a.text() == b.text()


def test_shnc_experiment_rank3():
    rep = shnc_experiment(10, seed=2, rank=3, max_len=5)
    assert rep.ok, rep.text()
    assert rep.counters["qualifying"] == 10 and rep.counters["shnc_violations"] == 0
