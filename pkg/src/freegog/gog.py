"""Graphs of graphs: graphs of spaces whose vertex and edge spaces are graphs.

Cell ids (vertices and edges of every vertex space and edge space) are
integers unique across the whole object, so the horizontal graph Γ_H and the
mid-graph Γ_M can use them directly:

* Γ_H has a vertex for each vertex-space vertex and an edge for each
  edge-space vertex ``p`` of ``E_e``, joining ``ι_e(p)`` to ``τ_e(p)``;
* Γ_M has a vertex for each vertex-space edge and an edge for each
  edge-space edge ``f``, joining ``ι_e(f)`` to ``τ_e(f)``.

Every underlying edge keeps an ordered pair of attachments ``(iota, tau)``.
Attachments are explicit vertex/edge maps; they are required to be
embeddings but may reverse the orientation of an edge.
"""

from __future__ import annotations

import json
import re
from collections import deque
from dataclasses import dataclass, field
from itertools import count
from typing import Hashable, Mapping, NamedTuple, Sequence

from .errors import ContainmentError, FormatError, PreconditionError
from .graphs import Edge, GraphMorphism, LabeledGraph, graph_from_words, lift
from .words import Word, parse_word

IOTA, TAU = 0, 1
SIDE_NAMES = ("iota", "tau")


class Attachment(NamedTuple):
    vertex_map: Mapping[int, int]
    edge_map: Mapping[int, int]

    def compose(self, vmap: Mapping, emap: Mapping) -> Attachment:
        """Post-compose with a cell renaming of the target vertex space."""
        return Attachment(
            {k: vmap[v] for k, v in self.vertex_map.items()},
            {k: emap[v] for k, v in self.edge_map.items()},
        )

    def restrict(self, space: LabeledGraph) -> Attachment:
        return Attachment(
            {v: self.vertex_map[v] for v in space.vertices},
            {k: self.edge_map[k] for k in space.edges},
        )


class EdgeSpace(NamedTuple):
    space: LabeledGraph
    source: int
    target: int
    iota: Attachment
    tau: Attachment
    label: Hashable = None

    def endpoint(self, side: int) -> int:
        return self.source if side == IOTA else self.target

    def attachment(self, side: int) -> Attachment:
        return self.iota if side == IOTA else self.tau


class Complexity(NamedTuple):
    """``(χ(Γ_U), max valence, number of vertices of max valence)``, ordered lexicographically."""

    chi: int
    m: int
    n: int

    def __str__(self):
        return f"({self.chi},{self.m},{self.n})"


@dataclass(eq=False)
class GraphOfGraphs:
    """A graph of graphs; treat instances as values and derive new ones via moves."""

    vertex_spaces: dict[int, LabeledGraph]
    edge_spaces: dict[int, EdgeSpace]
    origin: dict[int, str] = field(default_factory=dict)
    meta: dict = field(default_factory=dict)

    def copy(self) -> GraphOfGraphs:
        return GraphOfGraphs(
            dict(self.vertex_spaces), dict(self.edge_spaces), dict(self.origin), _copy_meta(self.meta)
        )

    # -- underlying graph ----------------------------------------------------

    def underlying(self) -> LabeledGraph:
        """Γ_U, with each edge labeled by its own id."""
        return LabeledGraph(
            self.vertex_spaces,
            {e: Edge(s.source, s.target, e) for e, s in self.edge_spaces.items()},
        )

    def ends_at(self, u: int) -> list[tuple[int, int]]:
        """Edge-ends ``(edge, side)`` at ``u``; a loop contributes both sides."""
        out = []
        for e, s in self.edge_spaces.items():
            if s.source == u:
                out.append((e, IOTA))
            if s.target == u:
                out.append((e, TAU))
        return out

    def valence(self, u: int) -> int:
        return len(self.ends_at(u))

    def valences(self) -> dict[int, int]:
        val = {u: 0 for u in self.vertex_spaces}
        for s in self.edge_spaces.values():
            val[s.source] += 1
            val[s.target] += 1
        return val

    def image(self, e: int, side: int) -> tuple[frozenset, frozenset]:
        """Vertex and edge sets of the image of ``E_e`` on the given side."""
        att = self.edge_spaces[e].attachment(side)
        return frozenset(att.vertex_map.values()), frozenset(att.edge_map.values())

    def attachment_morphism(self, e: int, side: int) -> GraphMorphism:
        s = self.edge_spaces[e]
        att = s.attachment(side)
        return GraphMorphism(s.space, self.vertex_spaces[s.endpoint(side)], att.vertex_map, att.edge_map)

    def complexity(self) -> Complexity:
        val = self.valences()
        chi = len(self.vertex_spaces) - len(self.edge_spaces)
        if not val:
            return Complexity(chi, 0, 0)
        m = max(val.values())
        return Complexity(chi, m, sum(1 for v in val.values() if v == m))

    def max_cell_id(self) -> int:
        ids = [-1]
        for g in self.vertex_spaces.values():
            ids.extend(g.vertices)
            ids.extend(g.edges)
        for s in self.edge_spaces.values():
            ids.extend(s.space.vertices)
            ids.extend(s.space.edges)
        return max(ids)

    def fresh_cells(self) -> count:
        return count(self.max_cell_id() + 1)

    def fresh_vertices(self) -> count:
        return count(max(self.vertex_spaces, default=-1) + 1)

    def fresh_edges(self) -> count:
        return count(max(self.edge_spaces, default=-1) + 1)

    # -- checks --------------------------------------------------------------

    def check(self) -> None:
        """Raise ``ValueError`` unless every attachment is an embedding into its endpoint space."""
        for e, s in self.edge_spaces.items():
            for side in (IOTA, TAU):
                u = s.endpoint(side)
                if u not in self.vertex_spaces:
                    raise ValueError(f"edge {e} attaches to missing vertex {u}")
                m = self.attachment_morphism(e, side)
                if not m.is_well_formed(oriented=False, labeled=False):
                    raise ValueError(f"{SIDE_NAMES[side]} attachment of edge {e} is not a graph map")
                if not m.is_embedding():
                    raise ValueError(f"{SIDE_NAMES[side]} attachment of edge {e} is not an embedding")

    def is_valid(self) -> bool:
        try:
            self.check()
        except ValueError:
            return False
        return True

    def __repr__(self):
        return (
            f"GraphOfGraphs(|U_V|={len(self.vertex_spaces)}, |U_E|={len(self.edge_spaces)}, "
            f"c={self.complexity()})"
        )


def _copy_meta(meta: dict) -> dict:
    return json.loads(json.dumps(meta))


# -- derived graphs ----------------------------------------------------------


def _label(x: GraphOfGraphs, e: int, labels: str):
    if labels == "edge":
        return e
    return x.edge_spaces[e].label


def horizontal_graph(x: GraphOfGraphs, labels: str = "generator") -> LabeledGraph:
    """Γ_H.  ``labels="edge"`` labels each edge by its underlying edge instead of its generator."""
    vertices = [v for g in x.vertex_spaces.values() for v in g.vertices]
    edges = {}
    for e, s in x.edge_spaces.items():
        lab = _label(x, e, labels)
        for p in s.space.vertices:
            edges[p] = Edge(s.iota.vertex_map[p], s.tau.vertex_map[p], lab)
    return LabeledGraph(vertices, edges)


def mid_graph(x: GraphOfGraphs, labels: str = "generator") -> LabeledGraph:
    """Γ_M."""
    vertices = [k for g in x.vertex_spaces.values() for k in g.edges]
    edges = {}
    for e, s in x.edge_spaces.items():
        lab = _label(x, e, labels)
        for f in s.space.edges:
            edges[f] = Edge(s.iota.edge_map[f], s.tau.edge_map[f], lab)
    return LabeledGraph(vertices, edges)


def horizontal_projection(x: GraphOfGraphs) -> GraphMorphism:
    """The map Γ_H → Γ_U (both labeled by underlying edge ids)."""
    gh = horizontal_graph(x, labels="edge")
    where = {v: u for u, g in x.vertex_spaces.items() for v in g.vertices}
    emap = {p: e for e, s in x.edge_spaces.items() for p in s.space.vertices}
    return GraphMorphism(gh, x.underlying(), where, emap)


def total_space_euler(x: GraphOfGraphs) -> int:
    """χ of the total space: Σ χ(V_u) − Σ χ(E_e)."""
    return sum(g.euler_characteristic() for g in x.vertex_spaces.values()) - sum(
        s.space.euler_characteristic() for s in x.edge_spaces.values()
    )


def betti_profile(g: LabeledGraph) -> list[int]:
    """Sorted first Betti numbers of the components of ``g``."""
    return sorted(len(es) - len(vs) + 1 for vs, es in g.components())


# -- representing / co-orientation -------------------------------------------


def _flip(att: Attachment, edge: Edge, image: Edge) -> int | None:
    if image.source == image.target:
        return None
    return 0 if att.vertex_map[edge.source] == image.source else 1


def coorientation(x: GraphOfGraphs) -> dict[int, int] | None:
    """Orientation bits for vertex-space edges (and edge-space edges) making every attachment
    orientation preserving, or None if none exist.

    A bit of 1 reverses the stored orientation.  Each connected constraint
    component is solved by propagation from its first cell, which keeps
    its stored orientation.  Loops carry no orientation information.
    """
    adj: dict[int, list[tuple[int, int]]] = {}
    for g in x.vertex_spaces.values():
        for k in g.edges:
            adj.setdefault(k, [])
    for s in x.edge_spaces.values():
        for f, edge in s.space.edges.items():
            adj.setdefault(f, [])
            for att, side in ((s.iota, IOTA), (s.tau, TAU)):
                target_space = x.vertex_spaces[s.endpoint(side)]
                k = att.edge_map[f]
                flip = _flip(att, edge, target_space.edges[k])
                if flip is None:
                    continue
                adj[f].append((k, flip))
                adj[k].append((f, flip))
    bits: dict[int, int] = {}
    for start in adj:
        if start in bits:
            continue
        bits[start] = 0
        queue = deque([start])
        while queue:
            a = queue.popleft()
            for b, flip in adj[a]:
                want = bits[a] ^ flip
                if b not in bits:
                    bits[b] = want
                    queue.append(b)
                elif bits[b] != want:
                    return None
    return bits


def side_maps(x: GraphOfGraphs, labels: str = "generator") -> tuple[GraphMorphism, GraphMorphism]:
    """The two maps Γ_M → Γ_H sending a mid-point to the two ends of its vertex-space edge.

    Raises :class:`PreconditionError` when no co-orientation exists.
    """
    bits = coorientation(x)
    if bits is None:
        raise PreconditionError("graph of graphs admits no co-orientation of its mid-graph")
    gm = mid_graph(x, labels)
    gh = horizontal_graph(x, labels)
    maps = ({}, {}), ({}, {})
    for g in x.vertex_spaces.values():
        for k, edge in g.edges.items():
            ends = (edge.source, edge.target) if not bits[k] else (edge.target, edge.source)
            maps[0][0][k], maps[1][0][k] = ends
    for s in x.edge_spaces.values():
        for f, edge in s.space.edges.items():
            ends = (edge.source, edge.target) if not bits[f] else (edge.target, edge.source)
            maps[0][1][f], maps[1][1][f] = ends
    return tuple(GraphMorphism(gm, gh, vm, em) for vm, em in maps)


def is_representing(x: GraphOfGraphs) -> bool:
    """True iff Γ_M has a product neighbourhood, i.e. a consistent co-orientation exists and the
    two resulting side maps Γ_M → Γ_H are immersions."""
    try:
        s0, s1 = side_maps(x)
    except PreconditionError:
        return False
    return all(m.is_well_formed(oriented=True, labeled=True) and m.is_immersion() for m in (s0, s1))


def bigons(x: GraphOfGraphs) -> list[tuple[int, int, int]]:
    """All ``(u, p, q)`` with ``p``, ``q`` distinct edges of ``V_u`` sharing both endpoints."""
    out = []
    for u, g in x.vertex_spaces.items():
        seen: dict = {}
        for k, e in g.edges.items():
            key = frozenset((e.source, e.target))
            for other in seen.get(key, ()):
                out.append((u, other, k))
            seen.setdefault(key, []).append(k)
    return out


def is_simple_edged(x: GraphOfGraphs, forbid_monogons: bool = False) -> bool:
    if bigons(x):
        return False
    if forbid_monogons:
        return not any(e.source == e.target for g in x.vertex_spaces.values() for e in g.edges.values())
    return True


# -- construction from subgroup data -----------------------------------------


class EdgeGroup(NamedTuple):
    """An edge group M_j given by its graph and lifts into the two endpoint vertex graphs."""

    source: int
    target: int
    graph: LabeledGraph
    iota: GraphMorphism
    tau: GraphMorphism
    name: str | None = None


def build_from_graphs(
    vertex_graphs: Sequence[LabeledGraph],
    edge_groups: Sequence[EdgeGroup],
    ambient_rank: int,
    vertex_names: Sequence[str] | None = None,
) -> GraphOfGraphs:
    """The representing graph of graphs over the rose for the given immersed graphs.

    Underlying graph: one vertex ``0`` and one loop per generator.  The vertex
    space has the vertices of the Γ_{H_i} as vertices and the vertices of the
    Γ_{M_j} as edges; the space over generator ``l`` has the ``l``-edges of the
    Γ_{H_i} as vertices and the ``l``-edges of the Γ_{M_j} as edges.
    """
    names = list(vertex_names or [f"H{i + 1}" for i in range(len(vertex_graphs))])
    ids = count()
    origin: dict[int, str] = {}
    hv, he = [], []
    for i, g in enumerate(vertex_graphs):
        hv.append({v: next(ids) for v in g.vertices})
        he.append({k: next(ids) for k in g.edges})
        for c in list(hv[-1].values()) + list(he[-1].values()):
            origin[c] = names[i]
    mv, me = [], []
    for j, eg in enumerate(edge_groups):
        name = eg.name or f"M{j + 1}"
        mv.append({w: next(ids) for w in eg.graph.vertices})
        me.append({f: next(ids) for f in eg.graph.edges})
        for c in list(mv[-1].values()) + list(me[-1].values()):
            origin[c] = name

    v_vertices = [c for m in hv for c in m.values()]
    v_edges = {}
    for j, eg in enumerate(edge_groups):
        for w in eg.graph.vertices:
            v_edges[mv[j][w]] = Edge(
                hv[eg.source][eg.iota.vertex_map[w]], hv[eg.target][eg.tau.vertex_map[w]]
            )
    vertex_space = LabeledGraph(v_vertices, v_edges)

    edge_spaces = {}
    for label in range(ambient_rank):
        e_vertices = []
        iota_v, tau_v = {}, {}
        for i, g in enumerate(vertex_graphs):
            for k, h in g.edges.items():
                if h.label == label:
                    p = he[i][k]
                    e_vertices.append(p)
                    iota_v[p] = hv[i][h.source]
                    tau_v[p] = hv[i][h.target]
        e_edges = {}
        iota_e, tau_e = {}, {}
        for j, eg in enumerate(edge_groups):
            for f, m in eg.graph.edges.items():
                if m.label == label:
                    c = me[j][f]
                    e_edges[c] = Edge(he[eg.source][eg.iota.edge_map[f]], he[eg.target][eg.tau.edge_map[f]])
                    iota_e[c] = mv[j][m.source]
                    tau_e[c] = mv[j][m.target]
        space = LabeledGraph(e_vertices, e_edges)
        edge_spaces[label] = EdgeSpace(
            space, 0, 0, Attachment(iota_v, iota_e), Attachment(tau_v, tau_e), label
        )
    meta = {
        "rank": ambient_rank,
        "vertex_groups": [
            {"name": names[i], "chi": g.euler_characteristic()} for i, g in enumerate(vertex_graphs)
        ],
        "edge_groups": [
            {
                "name": eg.name or f"M{j + 1}",
                "source": names[eg.source],
                "target": names[eg.target],
                "chi": eg.graph.euler_characteristic(),
            }
            for j, eg in enumerate(edge_groups)
        ],
    }
    x = GraphOfGraphs({0: vertex_space}, edge_spaces, origin, meta)
    try:
        x.check()
    except ValueError as exc:
        raise ValueError(f"attachment is not injective; some input graph is not immersed ({exc})") from exc
    return x


def build_representing(
    subgroups: Sequence[Sequence[Word | str]],
    edges: Sequence[tuple[int, int, Sequence[Word | str]]],
    ambient_rank: int,
    vertex_names: Sequence[str] | None = None,
    edge_names: Sequence[str] | None = None,
) -> GraphOfGraphs:
    """Graph of graphs representing ``Δ(H_1, ..., H_k; M_1, ...) → F`` from generating words.

    Each edge ``(i, i2, words)`` needs ⟨words⟩ ≤ H_i and ⟨words⟩ ≤ H_i2 as
    based subgroups; otherwise :class:`ContainmentError` is raised.
    """
    vnames = list(vertex_names or [f"H{i + 1}" for i in range(len(subgroups))])
    hgraphs = [graph_from_words(ws, ambient_rank) for ws in subgroups]
    groups = []
    for j, (i, i2, ws) in enumerate(edges):
        name = edge_names[j] if edge_names else f"M{j + 1}"
        mg = graph_from_words(ws, ambient_rank)
        lifts = []
        for k in (i, i2):
            f = lift(mg, hgraphs[k])
            if f is None:
                raise ContainmentError(f"{name} not contained in {vnames[k]}")
            lifts.append(f)
        groups.append(EdgeGroup(i, i2, mg, lifts[0], lifts[1], name))
    return build_from_graphs(hgraphs, groups, ambient_rank, vnames)


def vertex_graph_sides(x: GraphOfGraphs) -> dict[str, LabeledGraph]:
    """Γ_H split by provenance tag of its vertices (e.g. ``{"H1": ..., "H2": ...}``)."""
    gh = horizontal_graph(x)
    groups: dict[str, list] = {}
    for v in gh.vertices:
        groups.setdefault(x.origin.get(v), []).append(v)
    return {tag: gh.subgraph(vs) for tag, vs in groups.items()}


# -- instance text format ----------------------------------------------------


@dataclass
class Instance:
    """Parsed instance file: ``rank N``, ``subgroup NAME: words``, ``edge A B: words``."""

    rank: int
    subgroups: dict[str, list[Word]]
    edges: list[tuple[str, str, list[Word]]]

    def build(self) -> GraphOfGraphs:
        names = list(self.subgroups)
        index = {n: i for i, n in enumerate(names)}
        return build_representing(
            [self.subgroups[n] for n in names],
            [(index[a], index[b], ws) for a, b, ws in self.edges],
            self.rank,
            vertex_names=names,
        )

    def to_text(self) -> str:
        lines = [f"rank {self.rank}"]
        for name, ws in self.subgroups.items():
            lines.append(f"subgroup {name}: " + " ".join(str(w) for w in ws))
        for a, b, ws in self.edges:
            lines.append(f"edge {a} {b}: " + " ".join(str(w) for w in ws))
        return "\n".join(lines) + "\n"


_SUBGROUP = re.compile(r"^subgroup\s+(\w+)\s*:(.*)$")
_EDGE = re.compile(r"^edge\s+(\w+)\s+(\w+)\s*:(.*)$")


def parse_instance(text: str) -> Instance:
    rank = None
    subgroups: dict[str, list[Word]] = {}
    edges = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            if line.startswith("rank"):
                parts = line.split()
                if len(parts) != 2:
                    raise FormatError("expected 'rank N'", lineno)
                rank = int(parts[1])
            elif m := _SUBGROUP.match(line):
                if rank is None:
                    raise FormatError("'rank' must come first", lineno)
                if m.group(1) in subgroups:
                    raise FormatError(f"duplicate subgroup {m.group(1)}", lineno)
                subgroups[m.group(1)] = [parse_word(w, rank) for w in m.group(2).split()]
            elif m := _EDGE.match(line):
                if rank is None:
                    raise FormatError("'rank' must come first", lineno)
                a, b = m.group(1), m.group(2)
                for n in (a, b):
                    if n not in subgroups:
                        raise FormatError(f"unknown subgroup {n}", lineno)
                edges.append((a, b, [parse_word(w, rank) for w in m.group(3).split()]))
            else:
                raise FormatError(f"unrecognized line {raw!r}", lineno)
        except FormatError:
            raise
        except ValueError as exc:
            raise FormatError(str(exc), lineno) from exc
    if rank is None:
        raise FormatError("missing 'rank' header")
    return Instance(rank, subgroups, edges)


# -- JSON serialization ------------------------------------------------------


def _graph_dict(g: LabeledGraph) -> dict:
    return {
        "vertices": list(g.vertices),
        "edges": [[k, e.source, e.target] for k, e in g.edges.items()],
    }


def _graph_from(d: dict) -> LabeledGraph:
    return LabeledGraph(d["vertices"], {k: Edge(s, t) for k, s, t in d["edges"]})


def _att_dict(a: Attachment) -> dict:
    return {"vertices": [[k, v] for k, v in a.vertex_map.items()], "edges": [[k, v] for k, v in a.edge_map.items()]}


def _att_from(d: dict) -> Attachment:
    return Attachment({k: v for k, v in d["vertices"]}, {k: v for k, v in d["edges"]})


def to_dict(x: GraphOfGraphs) -> dict:
    return {
        "format": "freegog-gog/1",
        "vertex_spaces": [{"id": u, **_graph_dict(g)} for u, g in x.vertex_spaces.items()],
        "edge_spaces": [
            {
                "id": e,
                "source": s.source,
                "target": s.target,
                "label": s.label,
                **_graph_dict(s.space),
                "iota": _att_dict(s.iota),
                "tau": _att_dict(s.tau),
            }
            for e, s in x.edge_spaces.items()
        ],
        "origin": [[c, t] for c, t in x.origin.items()],
        "meta": x.meta,
    }


def from_dict(d: dict) -> GraphOfGraphs:
    if d.get("format") != "freegog-gog/1":
        raise FormatError("not a freegog graph-of-graphs document")
    vs = {v["id"]: _graph_from(v) for v in d["vertex_spaces"]}
    es = {
        e["id"]: EdgeSpace(
            _graph_from(e), e["source"], e["target"], _att_from(e["iota"]), _att_from(e["tau"]), e["label"]
        )
        for e in d["edge_spaces"]
    }
    x = GraphOfGraphs(vs, es, {c: t for c, t in d["origin"]}, d.get("meta", {}))
    try:
        x.check()
    except ValueError as exc:
        raise FormatError(str(exc)) from exc
    return x


def to_json(x: GraphOfGraphs) -> str:
    return json.dumps(to_dict(x), indent=1, sort_keys=True) + "\n"


def from_json(text: str) -> GraphOfGraphs:
    try:
        return from_dict(json.loads(text))
    except (json.JSONDecodeError, KeyError, TypeError) as exc:
        raise FormatError(f"malformed graph-of-graphs JSON: {exc}") from exc
