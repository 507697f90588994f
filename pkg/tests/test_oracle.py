import pytest
from hypothesis import given

from conftest import subgroups
from freegog.errors import OracleLimit
from freegog.graphs import contains, graph_from_words
from freegog.oracle import (
    MAX_LEN_GUARD,
    brute_intersection,
    certified_ball,
    certified_intersection,
    complete_radius,
    enumerate_elements,
)
from freegog.words import Word, all_words, parse_word, parse_words


def W(*texts):
    return {parse_word(t) for t in texts}


def test_cyclic():
    assert enumerate_elements([parse_word("a")], 3) == W("1", "a", "A", "aa", "AA", "aaa", "AAA")


def test_trivial_subgroup():
    assert enumerate_elements([], 5) == {Word()}


def test_agrees_with_contains_on_balls():
    gens = parse_words("aa b")
    # cap 6 with generators of length ≤ 2 is complete on the 4-ball
    assert complete_radius(gens, 6) == 4
    ball = enumerate_elements(gens, 6, radius=4)
    g = graph_from_words(gens, 2)
    for w in all_words(2, 4):
        assert contains(g, w) == (w in ball)


def test_guard_and_budget():
    with pytest.raises(OracleLimit):
        enumerate_elements([parse_word("a")], MAX_LEN_GUARD + 1)
    with pytest.raises(OracleLimit):
        enumerate_elements(parse_words("a b"), 10, budget=100)


def test_intersection_examples():
    h = parse_words("ab bA")
    assert brute_intersection(h, h, 6) == enumerate_elements(h, 6)
    assert brute_intersection(parse_words("a"), parse_words("b"), 6) == {Word()}
    got = brute_intersection(parse_words("a baB"), parse_words("a Bab"), 8)
    assert got == {parse_word("a") ** k for k in range(-8, 9)}


@given(subgroups(2, max_gens=2, max_len=4))
def test_closure_sound(gens):
    g = graph_from_words(gens, 2)
    assert all(contains(g, w) for w in enumerate_elements(gens, 8))


@given(subgroups(2, max_gens=2, max_len=4))
def test_monotone_in_cap(gens):
    small = enumerate_elements(gens, 5)
    big = enumerate_elements(gens, 7)
    assert small <= big
    assert {w for w in big if len(w) <= 5} >= small


@given(subgroups(2, max_gens=3, max_len=4))
def test_incremental_caps_match_fresh_closure(gens):
    elements, r = certified_ball(gens, 5, budget=50_000)
    cap = r + max(len(g) for g in gens)
    assert elements == enumerate_elements(gens, cap, budget=None, radius=r)


def test_certified_ball_radius():
    els, r = certified_ball(parse_words("a"), 8)
    assert r == 8 and els == {parse_word("a") ** k for k in range(-8, 9)}
    # the whole of F_2 outgrows a small budget, so the trusted radius shrinks
    els, r = certified_ball(parse_words("a b"), 8, budget=2_000)
    assert r < 8 and els == set(all_words(2, r))
    with pytest.raises(OracleLimit):
        certified_ball(parse_words("a b"), 8, budget=3)


def test_certified_intersection_uses_smaller_ball():
    common, r = certified_intersection(parse_words("a baB"), parse_words("a Bab"), 8)
    assert r == 8  # cap min(12, 8 + 3) = 11 on both sides, minus the generator length 3
    assert common == {parse_word("a") ** k for k in range(-r, r + 1)}
