"""Fiber products of immersions over the rose.

Both inputs are folded labeled graphs; their labels define the immersion to
the rose, so the fiber product is the graph of pairs of vertices with one
edge for every pair of equally-labeled edges.
"""

from __future__ import annotations

from .graphs import Edge, GraphMorphism, LabeledGraph, core


def pullback_product(
    g1: LabeledGraph, g2: LabeledGraph
) -> tuple[LabeledGraph, GraphMorphism, GraphMorphism]:
    """Full fiber product of ``g1`` and ``g2`` with its two projections.

    Vertices are pairs ``(v1, v2)`` and edges pairs ``(e1, e2)``.  If both
    inputs are based, so is the product, at the pair of basepoints.
    """
    by_label: dict = {}
    for k, e in g2.edges.items():
        by_label.setdefault(e.label, []).append((k, e))
    vertices = [(v1, v2) for v1 in g1.vertices for v2 in g2.vertices]
    edges = {}
    for k1, e1 in g1.edges.items():
        for k2, e2 in by_label.get(e1.label, ()):
            edges[(k1, k2)] = Edge((e1.source, e2.source), (e1.target, e2.target), e1.label)
    base = None
    if g1.basepoint is not None and g2.basepoint is not None:
        base = (g1.basepoint, g2.basepoint)
    prod = LabeledGraph(vertices, edges, base)
    p1 = GraphMorphism(prod, g1, {v: v[0] for v in vertices}, {k: k[0] for k in edges})
    p2 = GraphMorphism(prod, g2, {v: v[1] for v in vertices}, {k: k[1] for k in edges})
    return prod, p1, p2


def based_component(g: LabeledGraph, v) -> LabeledGraph:
    for vs, es in g.components():
        if v in vs:
            return g.subgraph(vs, es, basepoint=v)
    raise KeyError(v)


def intersection_subgroup(h1: LabeledGraph, h2: LabeledGraph, canonical: bool = True) -> LabeledGraph:
    """Stallings graph of H1 ∩ H2: core of the basepoint component of the pullback.

    With ``canonical=False`` the vertex ids stay as pairs ``(v1, v2)`` so the
    projections to ``h1`` and ``h2`` can be read off directly.
    """
    prod, _, _ = pullback_product(h1, h2)
    comp = based_component(prod, prod.basepoint)
    result = core(comp, keep=prod.basepoint)
    return result.canonical() if canonical else result


def all_core_components(prod: LabeledGraph) -> list[tuple[LabeledGraph, tuple]]:
    """Cores of all components of ``prod`` with nontrivial fundamental group.

    Each core is based at its anchor, the least vertex pair it contains.
    Vertex ids are kept, so the projections of the product restrict to them.
    """
    out = []
    for vs, es in prod.components():
        comp = prod.subgraph(vs, es, basepoint=None)
        if comp.betti_number() == 0:
            continue
        c = core(LabeledGraph(comp.vertices, comp.edges))
        anchor = min(c.vertices)
        out.append((c.with_basepoint(anchor), anchor))
    out.sort(key=lambda item: item[1])
    return out


def projections(component: LabeledGraph, g1: LabeledGraph, g2: LabeledGraph) -> tuple[GraphMorphism, GraphMorphism]:
    """Restrictions of the product projections to a subgraph of the pullback."""
    p1 = GraphMorphism(
        component, g1, {v: v[0] for v in component.vertices}, {k: k[0] for k in component.edges}
    )
    p2 = GraphMorphism(
        component, g2, {v: v[1] for v in component.vertices}, {k: k[1] for k in component.edges}
    )
    return p1, p2
