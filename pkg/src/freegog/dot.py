"""Deterministic Graphviz DOT output."""

from __future__ import annotations

import string

from .gog import GraphOfGraphs
from .graphs import LabeledGraph


def label_name(label) -> str:
    if label is None:
        return ""
    if isinstance(label, int) and 0 <= label < 26:
        return string.ascii_lowercase[label]
    return str(label)


def _quote(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def graph_to_dot(g: LabeledGraph, name: str = "G") -> str:
    """Nodes are named ``v0, v1, ...`` in vertex order; the basepoint is drawn doubled."""
    node = {v: f"v{i}" for i, v in enumerate(g.vertices)}
    lines = [f"digraph {_quote(name)} {{"]
    for v in g.vertices:
        shape = "doublecircle" if v == g.basepoint else "circle"
        lines.append(f"  {node[v]} [shape={shape}, label={_quote(str(v))}];")
    for k in g.edges:
        e = g.edges[k]
        lines.append(f"  {node[e.source]} -> {node[e.target]} [label={_quote(label_name(e.label))}];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def gog_to_dot(x: GraphOfGraphs, name: str = "X") -> str:
    """One cluster per vertex space; edge-space vertices become arrows between clusters.

    Vertex-space edges are drawn undirected inside their cluster.  Arrows
    carry the generator name of their underlying edge, or ``e<id>`` when it
    has none.
    """
    lines = [f"digraph {_quote(name)} {{", "  compound=true;"]
    for u in sorted(x.vertex_spaces):
        g = x.vertex_spaces[u]
        lines.append(f"  subgraph cluster_u{u} {{")
        lines.append(f"    label={_quote(f'u{u}')};")
        for v in g.vertices:
            tag = x.origin.get(v)
            text = f"{v}" if tag is None else f"{v}:{tag}"
            lines.append(f"    c{v} [shape=point, xlabel={_quote(text)}];")
        for k in g.edges:
            e = g.edges[k]
            lines.append(f"    c{e.source} -> c{e.target} [dir=none, label={_quote(f'm{k}')}];")
        lines.append("  }")
    for e_id in sorted(x.edge_spaces):
        s = x.edge_spaces[e_id]
        text = label_name(s.label) or f"e{e_id}"
        for p in s.space.vertices:
            lines.append(
                f"  c{s.iota.vertex_map[p]} -> c{s.tau.vertex_map[p]} "
                f"[style=dashed, label={_quote(text)}];"
            )
    lines.append("}")
    return "\n".join(lines) + "\n"


def to_dot(obj, name: str | None = None) -> str:
    if isinstance(obj, GraphOfGraphs):
        return gog_to_dot(obj, name or "X")
    if isinstance(obj, LabeledGraph):
        return graph_to_dot(obj, name or "G")
    raise TypeError(f"cannot render {type(obj).__name__} as DOT")
