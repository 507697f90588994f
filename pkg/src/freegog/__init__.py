"""Subgroups of free groups via Stallings graphs, and graphs of graphs built from them."""

from .errors import (
    AlphabetError,
    ContainmentError,
    FormatError,
    FreeGogError,
    HypothesisError,
    NotApplicable,
    OracleLimit,
    PreconditionError,
    WordSyntaxError,
)
from .gog import (
    GraphOfGraphs,
    build_representing,
    horizontal_graph,
    is_representing,
    is_simple_edged,
    mid_graph,
    parse_instance,
    total_space_euler,
)
from .graphs import (
    Edge,
    GraphMorphism,
    LabeledGraph,
    contains,
    core,
    euler_characteristic,
    fold,
    graph_from_words,
    is_immersion,
    join,
    lift,
)
from .pullback import all_core_components, intersection_subgroup, pullback_product
from .reduction import Complexity, MoveRecord, is_reduced, reduce_to_valence_three
from .words import Letter, Word, parse_word, parse_words

__version__ = "0.1.0"

__all__ = [
    "AlphabetError",
    "Complexity",
    "ContainmentError",
    "Edge",
    "FormatError",
    "FreeGogError",
    "GraphMorphism",
    "GraphOfGraphs",
    "HypothesisError",
    "LabeledGraph",
    "Letter",
    "MoveRecord",
    "NotApplicable",
    "OracleLimit",
    "PreconditionError",
    "Word",
    "WordSyntaxError",
    "all_core_components",
    "build_representing",
    "contains",
    "core",
    "euler_characteristic",
    "fold",
    "graph_from_words",
    "horizontal_graph",
    "intersection_subgroup",
    "is_immersion",
    "is_reduced",
    "is_representing",
    "is_simple_edged",
    "join",
    "lift",
    "mid_graph",
    "parse_instance",
    "parse_word",
    "parse_words",
    "pullback_product",
    "reduce_to_valence_three",
    "total_space_euler",
]
