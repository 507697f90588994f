import networkx as nx
import pytest
from hypothesis import settings
from hypothesis import strategies as st

from freegog.words import Letter, Word

ACCEPTANCE_LINES: list[str] = []

# graph work on generated inputs varies a lot in cost; wall-clock deadlines only add flakes
settings.register_profile("freegog", deadline=None, max_examples=50)
settings.load_profile("freegog")


def letters(rank):
    return st.tuples(st.integers(0, rank - 1), st.sampled_from((1, -1))).map(lambda t: Letter(*t))


def words(rank=2, max_size=6, min_size=0):
    return st.lists(letters(rank), min_size=min_size, max_size=max_size).map(Word)


def subgroups(rank=2, max_gens=3, max_len=6):
    return st.lists(words(rank, max_len, min_size=1), min_size=1, max_size=max_gens)


def to_nx(g, labeled=True):
    """Independent networkx copy of a LabeledGraph (multi-digraph, labels as attributes)."""
    h = nx.MultiDiGraph()
    h.add_nodes_from(g.vertices)
    for k, e in g.edges.items():
        h.add_edge(e.source, e.target, key=k, label=e.label if labeled else None)
    return h


def nx_isomorphic(g1, g2):
    return nx.is_isomorphic(
        to_nx(g1), to_nx(g2), edge_match=lambda a, b: sorted(d["label"] for d in a.values()) == sorted(
            d["label"] for d in b.values()
        )
    )


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture
def acceptance_log():
    return ACCEPTANCE_LINES
