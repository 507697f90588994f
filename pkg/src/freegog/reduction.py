"""Moves on graphs of graphs and the reduction to valence three.

Moves M1-M4 normalize; M5 splits a vertex along a two-class partition of its
incident edge spaces, M6 (blowup) is M5 followed by M1 and M2, and M7
(blowdown) glues the two ends of an edge whose attachments have disjoint
images.  Every move returns a new :class:`GraphOfGraphs`.

:func:`reduce_to_valence_three` normalizes, then repeatedly blows up the
lowest-id vertex of maximal valence using the partition from
:func:`find_partition`, until no vertex has valence above three.
"""

from __future__ import annotations

import logging
from itertools import combinations
from typing import Callable, NamedTuple, Sequence

from scipy.cluster.hierarchy import DisjointSet

from .errors import FreeGogError, HypothesisError, NotApplicable, PreconditionError
from .gog import (
    IOTA,
    TAU,
    Attachment,
    Complexity,
    EdgeSpace,
    GraphOfGraphs,
    betti_profile,
    horizontal_graph,
    mid_graph,
    total_space_euler,
)
from .graphs import Edge, LabeledGraph

log = logging.getLogger(__name__)

End = tuple[int, int]


class MoveRecord(NamedTuple):
    step: int
    move: str
    target: str
    before: Complexity
    after: Complexity
    detail: str = ""
    b_tree: bool | None = None
    balance: tuple[int, int] | None = None

    def line(self) -> str:
        s = f"{self.step:04d} {self.move} target={self.target} c={self.before}->{self.after}"
        return f"{s} {self.detail}" if self.detail else s


def format_trace(trace: Sequence[MoveRecord]) -> str:
    return "".join(r.line() + "\n" for r in trace)


# -- helpers -----------------------------------------------------------------


def _replace_end(s: EdgeSpace, side: int, vertex: int, att: Attachment) -> EdgeSpace:
    if side == IOTA:
        return s._replace(source=vertex, iota=att)
    return s._replace(target=vertex, tau=att)


def _cover(x: GraphOfGraphs, u: int) -> dict[int, list[tuple[int, int, int]]]:
    """For each edge of ``V_u``, the edge-space edges ``(e, side, f)`` mapping onto it."""
    cover: dict[int, list] = {k: [] for k in x.vertex_spaces[u].edges}
    for e, side in x.ends_at(u):
        for f, k in x.edge_spaces[e].attachment(side).edge_map.items():
            cover[k].append((e, side, f))
    return cover


def _is_iso(x: GraphOfGraphs, e: int, side: int) -> bool:
    s = x.edge_spaces[e]
    target = x.vertex_spaces[s.endpoint(side)]
    return s.space.n_vertices == target.n_vertices and s.space.n_edges == target.n_edges


def _drop_edge_cell(x: GraphOfGraphs, e: int, f: int) -> None:
    s = x.edge_spaces[e]
    space = LabeledGraph(s.space.vertices, {k: v for k, v in s.space.edges.items() if k != f})
    x.edge_spaces[e] = s._replace(space=space, iota=s.iota.restrict(space), tau=s.tau.restrict(space))


def _drop_vertex_edge(x: GraphOfGraphs, u: int, k: int) -> None:
    g = x.vertex_spaces[u]
    x.vertex_spaces[u] = LabeledGraph(g.vertices, {j: v for j, v in g.edges.items() if j != k})


# -- M1 ----------------------------------------------------------------------


def _split_components(x: GraphOfGraphs) -> tuple[GraphOfGraphs, dict[int, list[int]], dict[int, list[int]]]:
    """M1 with bookkeeping: maps each old vertex/edge to its replacements."""
    y = GraphOfGraphs({}, {}, dict(x.origin), x.meta)
    fresh_v = x.fresh_vertices()
    fresh_e = x.fresh_edges()
    vmap: dict[int, list[int]] = {}
    where: dict[int, int] = {}  # vertex-space cell -> new underlying vertex
    for u, g in x.vertex_spaces.items():
        comps = g.components()
        vmap[u] = []
        for i, (vs, es) in enumerate(comps):
            nu = u if i == 0 else next(fresh_v)
            y.vertex_spaces[nu] = g.subgraph(vs, es)
            vmap[u].append(nu)
            for c in vs:
                where[c] = nu
    emap: dict[int, list[int]] = {}
    for e, s in x.edge_spaces.items():
        comps = s.space.components()
        emap[e] = []
        for i, (vs, es) in enumerate(comps):
            ne = e if i == 0 else next(fresh_e)
            space = s.space.subgraph(vs, es)
            iota, tau = s.iota.restrict(space), s.tau.restrict(space)
            y.edge_spaces[ne] = EdgeSpace(
                space, where[iota.vertex_map[vs[0]]], where[tau.vertex_map[vs[0]]], iota, tau, s.label
            )
            emap[e].append(ne)
    return y, vmap, emap


def m1_split_components(x: GraphOfGraphs) -> GraphOfGraphs:
    """Replace every vertex and edge space by its connected components."""
    return _split_components(x)[0]


def _m1_applicable(x: GraphOfGraphs) -> bool:
    return any(len(g.components()) != 1 for g in x.vertex_spaces.values()) or any(
        len(s.space.components()) != 1 for s in x.edge_spaces.values()
    )


# -- M2 ----------------------------------------------------------------------


def _m2_candidate(x: GraphOfGraphs) -> tuple[int, list[End]] | None:
    val = x.valences()
    for u in x.vertex_spaces:
        if val[u] not in (1, 2):
            continue
        ends = x.ends_at(u)
        if len(ends) == 2 and ends[0][0] == ends[1][0]:
            continue  # a single loop: nothing to fuse into
        if all(_is_iso(x, e, side) for e, side in ends):
            return u, ends
    return None


def _m2_step(x: GraphOfGraphs) -> tuple[GraphOfGraphs, str] | None:
    cand = _m2_candidate(x)
    if cand is None:
        return None
    u, ends = cand
    y = x.copy()
    del y.vertex_spaces[u]
    if len(ends) == 1:
        (e, _), = ends
        del y.edge_spaces[e]
        return y, f"v{u}:drop-e{e}"
    (e1, s1), (e2, s2) = ends
    a, b = x.edge_spaces[e1], x.edge_spaces[e2]
    att1, att2 = a.attachment(s1), b.attachment(s2)
    # E1 -> V_u -> E2 (inverse of att2) -> far end of e2
    inv_v = {c: p for p, c in att2.vertex_map.items()}
    inv_e = {c: f for f, c in att2.edge_map.items()}
    far2 = b.attachment(1 - s2)
    through = Attachment(
        {p: far2.vertex_map[inv_v[att1.vertex_map[p]]] for p in a.space.vertices},
        {f: far2.edge_map[inv_e[att1.edge_map[f]]] for f in a.space.edges},
    )
    w2 = b.endpoint(1 - s2)
    if s1 == TAU:
        fused = a._replace(target=w2, tau=through)
    else:
        fused = a._replace(source=w2, iota=through)
    del y.edge_spaces[e2]
    y.edge_spaces[e1] = fused
    return y, f"v{u}:fuse-e{e1}-e{e2}"


def m2_remove_unnecessary(x: GraphOfGraphs) -> GraphOfGraphs:
    """Remove valence-two vertices whose inclusions are isomorphisms (fusing their edges) and
    valence-one vertices whose inclusion is an isomorphism, until none remain."""
    while (step := _m2_step(x)) is not None:
        x = step[0]
    return x


# -- M3 ----------------------------------------------------------------------


def _isolated(x: GraphOfGraphs) -> list[tuple[int, int]]:
    out = []
    for u in x.vertex_spaces:
        for k, hits in _cover(x, u).items():
            if not hits:
                out.append((u, k))
    return out


def m3_remove_isolated(x: GraphOfGraphs) -> GraphOfGraphs:
    """Delete vertex-space edges not covered by any incident edge space."""
    iso = _isolated(x)
    if not iso:
        return x
    y = x.copy()
    for u, k in iso:
        _drop_vertex_edge(y, u, k)
    return y


# -- M4 ----------------------------------------------------------------------


def _m4_step(x: GraphOfGraphs) -> tuple[GraphOfGraphs, str] | None:
    for u in x.vertex_spaces:
        for k, hits in _cover(x, u).items():
            if len(hits) == 1:
                (e, _, f), = hits
                y = x.copy()
                _drop_vertex_edge(y, u, k)
                _drop_edge_cell(y, e, f)
                return y, f"v{u}:edge{k}/e{e}:edge{f}"
    val = x.valences()
    for u, g in x.vertex_spaces.items():
        if g.n_vertices == 1 and g.n_edges == 0 and val[u] == 1:
            (e, _), = x.ends_at(u)
            if x.edge_spaces[e].space.n_vertices == 0:
                continue
            y = x.copy()
            del y.vertex_spaces[u]
            del y.edge_spaces[e]
            return y, f"v{u}:point/e{e}"
    return None


def m4_collapse_free(x: GraphOfGraphs) -> GraphOfGraphs:
    """Collapse free edges (covered exactly once) and free point vertex spaces until none remain."""
    while (step := _m4_step(x)) is not None:
        x = step[0]
    return x


# -- reduced predicate ---------------------------------------------------------


def is_reduced(x: GraphOfGraphs) -> bool:
    """True iff none of M1-M4 would change ``x``."""
    return (
        not _m1_applicable(x)
        and _m2_candidate(x) is None
        and not _isolated(x)
        and _m4_step(x) is None
    )


# -- partitions of the ends at a vertex ------------------------------------------


def find_partition(x: GraphOfGraphs, u: int) -> tuple[list[End], list[End]]:
    """Split the edge-ends at ``u`` into two classes, each containing an intersecting pair.

    Scans for the first triple ``(A, B, C)`` of images with a common vertex
    and the first further image ``D`` meeting one of them; that one is
    relabeled ``C`` and the answer is ``({A, B}, rest)``.  Raises
    :class:`NotApplicable` at valence ≤ 3 or if no certificate exists.
    """
    ends = x.ends_at(u)
    if len(ends) <= 3:
        raise NotApplicable(f"vertex {u} has valence {len(ends)} ≤ 3")
    imgs = [x.image(e, side)[0] for e, side in ends]
    n = len(ends)
    for i, j, k in combinations(range(n), 3):
        if not imgs[i] & imgs[j] & imgs[k]:
            continue
        for d in range(n):
            if d in (i, j, k):
                continue
            for c in (k, j, i):
                if imgs[d] & imgs[c]:
                    a, b = [t for t in (i, j, k) if t != c]
                    first = [ends[a], ends[b]]
                    return first, [ends[t] for t in range(n) if t not in (a, b)]
    for i, j in combinations(range(n), 2):
        if not imgs[i] & imgs[j]:
            continue
        for k, l in combinations([t for t in range(n) if t not in (i, j)], 2):
            if imgs[k] & imgs[l]:
                return [ends[i], ends[j]], [ends[t] for t in range(n) if t not in (i, j)]
    raise NotApplicable(f"no partition certificate at vertex {u}")


# -- M5 / M6 -------------------------------------------------------------------


def _union_image(x: GraphOfGraphs, ends: Sequence[End]) -> tuple[set, set]:
    vs, es = set(), set()
    for e, side in ends:
        a, b = x.image(e, side)
        vs |= a
        es |= b
    return vs, es


def _m5(x: GraphOfGraphs, u: int, partition) -> tuple[GraphOfGraphs, int, int]:
    c1, c2 = [list(c) for c in partition]
    ends = x.ends_at(u)
    if sorted(c1 + c2) != sorted(ends) or len(set(c1 + c2)) != len(ends):
        raise PreconditionError(f"not a partition of the edge-ends at vertex {u}")
    v1, e1 = _union_image(x, c1)
    v2, e2 = _union_image(x, c2)
    wv, we = v1 & v2, e1 & e2
    if not wv:
        raise PreconditionError(f"the two classes at vertex {u} have disjoint images")
    g = x.vertex_spaces[u]
    y = x.copy()
    fresh = x.fresh_cells()
    space1 = g.subgraph([v for v in g.vertices if v in v1], [k for k in g.edges if k in e1])
    copy_v = {v: next(fresh) for v in g.vertices if v in v2}
    copy_e = {k: next(fresh) for k in g.edges if k in e2}
    space2 = LabeledGraph(
        copy_v.values(),
        {copy_e[k]: Edge(copy_v[g.edges[k].source], copy_v[g.edges[k].target]) for k in copy_e},
    )
    w_v = {v: next(fresh) for v in g.vertices if v in wv}
    w_e = {k: next(fresh) for k in g.edges if k in we}
    w_space = LabeledGraph(
        w_v.values(), {w_e[k]: Edge(w_v[g.edges[k].source], w_v[g.edges[k].target]) for k in w_e}
    )
    for old, new in list(copy_v.items()) + list(copy_e.items()) + list(w_v.items()) + list(w_e.items()):
        if old in x.origin:
            y.origin[new] = x.origin[old]
    u2 = next(x.fresh_vertices())
    new_e = next(x.fresh_edges())
    y.vertex_spaces[u] = space1
    y.vertex_spaces[u2] = space2
    y.edge_spaces[new_e] = EdgeSpace(
        w_space,
        u,
        u2,
        Attachment({w_v[v]: v for v in w_v}, {w_e[k]: k for k in w_e}),
        Attachment({w_v[v]: copy_v[v] for v in w_v}, {w_e[k]: copy_e[k] for k in w_e}),
        None,
    )
    for e, side in c2:
        s = y.edge_spaces[e]
        y.edge_spaces[e] = _replace_end(s, side, u2, s.attachment(side).compose(copy_v, copy_e))
    return y, u2, new_e


def m5_split_vertex(x: GraphOfGraphs, u: int, partition) -> GraphOfGraphs:
    """Replace ``V_u`` by the two unions of images ``V_1 ⊔ V_2`` joined by a new edge carrying
    ``V_1 ∩ V_2``.  Parts of ``V_u`` outside both unions are discarded."""
    return _m5(x, u, partition)[0]


class Blowup(NamedTuple):
    gog: GraphOfGraphs
    new_vertices: list[int]
    new_edges: list[int]
    valences: dict[int, int]
    old_valence: int
    b_is_tree: bool

    def balance_sides(self) -> tuple[int, int]:
        """Doubled sides of the balance ``2 - val(v) = Σ (2 - val(v_i))``."""
        return 2 - self.old_valence, sum(2 - self.valences[v] for v in self.new_vertices)


def blowup(x: GraphOfGraphs, u: int, partition) -> Blowup:
    """M6 with the data needed to check the balance identity for the blown-up subgraph."""
    old_valence = x.valence(u)
    y, u2, new_e = _m5(x, u, partition)
    z, vmap, emap = _split_components(y)
    new_vertices = vmap[u] + vmap[u2]
    new_edges = emap[new_e]
    val = z.valences()
    ds = DisjointSet(new_vertices)
    for e in new_edges:
        s = z.edge_spaces[e]
        ds.merge(s.source, s.target)
    connected = len({ds[v] for v in new_vertices}) == 1
    tree = connected and len(new_edges) == len(new_vertices) - 1
    return Blowup(
        m2_remove_unnecessary(z),
        new_vertices,
        new_edges,
        {v: val[v] for v in new_vertices},
        old_valence,
        tree,
    )


def m6_blowup(x: GraphOfGraphs, u: int, partition) -> GraphOfGraphs:
    return blowup(x, u, partition).gog


# -- M7 ------------------------------------------------------------------------


def m7_blowdown(x: GraphOfGraphs, e: int) -> GraphOfGraphs:
    """Remove edge ``e`` and glue its end spaces along ``ι(c) = τ(c)``.

    Raises :class:`PreconditionError` if the two images meet, or if the glued
    space would make another attachment non-injective.
    """
    s = x.edge_spaces[e]
    u1, u2 = s.source, s.target
    if u1 == u2:
        if set(s.iota.vertex_map.values()) & set(s.tau.vertex_map.values()):
            raise PreconditionError(f"attachments of edge {e} have intersecting images")
        vs = list(x.vertex_spaces[u1].vertices)
        es = dict(x.vertex_spaces[u1].edges)
    else:
        g1, g2 = x.vertex_spaces[u1], x.vertex_spaces[u2]
        vs = list(g1.vertices) + list(g2.vertices)
        es = {**g1.edges, **g2.edges}
    vds, eds = DisjointSet(vs), DisjointSet(es)
    for p in s.space.vertices:
        vds.merge(s.iota.vertex_map[p], s.tau.vertex_map[p])
    for f in s.space.edges:
        eds.merge(s.iota.edge_map[f], s.tau.edge_map[f])
    vrep, erep = {}, {}
    for v in vs:
        vrep.setdefault(vds[v], v)
    for k in es:
        erep.setdefault(eds[k], k)
    qv = {v: vrep[vds[v]] for v in vs}
    qe = {k: erep[eds[k]] for k in es}
    glued = LabeledGraph(
        [v for v in vs if qv[v] == v],
        {k: Edge(qv[ed.source], qv[ed.target]) for k, ed in es.items() if qe[k] == k},
    )
    y = x.copy()
    del y.edge_spaces[e]
    if u2 != u1:
        del y.vertex_spaces[u2]
    y.vertex_spaces[u1] = glued
    for e2, s2 in x.edge_spaces.items():
        if e2 == e:
            continue
        for side in (IOTA, TAU):
            if s2.endpoint(side) in (u1, u2):
                att = s2.attachment(side).compose(qv, qe)
                s2 = _replace_end(s2, side, u1, att)
        y.edge_spaces[e2] = s2
    try:
        y.check()
    except ValueError as exc:
        raise PreconditionError(f"blowdown of edge {e} breaks an attachment: {exc}") from exc
    return y


# -- normalization and the driver -----------------------------------------------


Observer = Callable[[MoveRecord, GraphOfGraphs, GraphOfGraphs], None]


class _Session:
    def __init__(self, observer: Observer | None):
        self.trace: list[MoveRecord] = []
        self.observer = observer

    def record(self, move, target, before: GraphOfGraphs, after: GraphOfGraphs, detail="", **extra) -> None:
        rec = MoveRecord(len(self.trace), move, target, before.complexity(), after.complexity(), detail, **extra)
        self.trace.append(rec)
        log.debug(rec.line())
        if self.observer is not None:
            self.observer(rec, before, after)


def _normalize(x: GraphOfGraphs, session: _Session) -> GraphOfGraphs:
    while True:
        changed = False
        while (step := _m4_step(x)) is not None:
            session.record("M4", step[1], x, step[0])
            x, changed = step[0], True
        iso = _isolated(x)
        if iso:
            y = m3_remove_isolated(x)
            session.record("M3", ",".join(f"v{u}:edge{k}" for u, k in iso), x, y)
            x, changed = y, True
        if _m1_applicable(x):
            y = m1_split_components(x)
            session.record("M1", "all", x, y)
            x, changed = y, True
        while (step := _m2_step(x)) is not None:
            session.record("M2", step[1], x, step[0])
            x, changed = step[0], True
        if not changed:
            return x


def normalize(x: GraphOfGraphs) -> GraphOfGraphs:
    """Apply M4*, M3*, M1, M2* repeatedly until ``x`` is reduced."""
    return _normalize(x, _Session(None))


def tree_mid_components(x: GraphOfGraphs) -> list[tuple[list, list]]:
    gm = mid_graph(x)
    return [(vs, es) for vs, es in gm.components() if len(es) == len(vs) - 1]


def strip_tree_mids(x: GraphOfGraphs) -> tuple[GraphOfGraphs, list[str]]:
    """Delete every tree component of Γ_M; returns the new object and the affected edge groups."""
    trees = tree_mid_components(x)
    if not trees:
        return x, []
    drop_v = {c for vs, _ in trees for c in vs}
    drop_e = {c for _, es in trees for c in es}
    y = x.copy()
    for u, g in x.vertex_spaces.items():
        y.vertex_spaces[u] = LabeledGraph(g.vertices, {k: v for k, v in g.edges.items() if k not in drop_v})
    for e, s in x.edge_spaces.items():
        space = LabeledGraph(s.space.vertices, {k: v for k, v in s.space.edges.items() if k not in drop_e})
        y.edge_spaces[e] = s._replace(space=space, iota=s.iota.restrict(space), tau=s.tau.restrict(space))
    names = sorted({x.origin.get(c, "?") for c in drop_v})
    y.meta.setdefault("stripped_edge_groups", [])
    y.meta["stripped_edge_groups"] = sorted(set(y.meta["stripped_edge_groups"]) | set(names))
    return y, names


def reduce_to_valence_three(
    x: GraphOfGraphs,
    strip_trees: bool = False,
    observer: Observer | None = None,
    max_blowups: int = 10_000,
) -> tuple[GraphOfGraphs, list[MoveRecord]]:
    """Normalize ``x`` and blow up until every underlying vertex has valence ≤ 3.

    Γ_M must have no tree components; otherwise :class:`HypothesisError` is
    raised naming the edge groups involved, unless ``strip_trees`` asks for
    those components to be deleted first.  ``observer`` is called with each
    move record and the objects before and after it.
    """
    session = _Session(observer)
    trees = tree_mid_components(x)
    if trees:
        names = sorted({x.origin.get(c, f"mid-vertex {c}") for vs, _ in trees for c in vs})
        if not strip_trees:
            raise HypothesisError(
                "mid-graph has tree components (trivial edge groups): " + ", ".join(names)
            )
        y, names = strip_tree_mids(x)
        session.record("STRIP", ",".join(names), x, y)
        x = y
    x = _normalize(x, session)
    blowups = 0
    while True:
        val = x.valences()
        m = max(val.values(), default=0)
        if m <= 3:
            return x, session.trace
        if blowups >= max_blowups:
            raise FreeGogError(f"no termination after {max_blowups} blowups")
        u = min(v for v, d in val.items() if d == m)
        partition = find_partition(x, u)
        res = blowup(x, u, partition)
        lhs, rhs = res.balance_sides()
        detail = (
            f"split={_ends_text(partition[0])}|{_ends_text(partition[1])} "
            f"B_tree={int(res.b_is_tree)} balance={lhs}:{rhs}"
        )
        session.record("M6", f"v{u}", x, res.gog, detail, b_tree=res.b_is_tree, balance=(lhs, rhs))
        blowups += 1
        x = _normalize(res.gog, session)


def _ends_text(ends: Sequence[End]) -> str:
    return ",".join(f"e{e}{'i' if side == IOTA else 't'}" for e, side in ends)


# -- invariants ----------------------------------------------------------------


def move_invariants(rec: MoveRecord, before: GraphOfGraphs, after: GraphOfGraphs) -> dict[str, bool]:
    """Checks every move must pass; suitable as (part of) an observer.

    All moves but M3 keep the Betti profiles of Γ_H and Γ_M and the Euler
    characteristic of the total space; M3 may only delete point components of
    Γ_M.  A blowup at a vertex of maximal valence must lower the complexity,
    and satisfy the valence balance when its new vertices span a tree.
    """
    if rec.move == "STRIP":
        return {}
    hb, ha = horizontal_graph(before), horizontal_graph(after)
    mb, ma = mid_graph(before), mid_graph(after)
    out = {"gamma_h_profile": betti_profile(hb) == betti_profile(ha)}
    if rec.move == "M3":
        gone = set(mb.vertices) - set(ma.vertices)
        out["m3_only_points"] = all(mb.valence(k) == 0 for k in gone) and set(ma.vertices) <= set(mb.vertices)
        kept = betti_profile(mb)
        for _ in gone:
            kept.remove(0)
        out["gamma_m_profile"] = kept == betti_profile(ma)
    else:
        out["gamma_m_profile"] = betti_profile(mb) == betti_profile(ma)
        out["total_euler"] = total_space_euler(before) == total_space_euler(after)
    if rec.move == "M6":
        out["complexity_decreases"] = rec.after < rec.before
        if rec.b_tree:
            out["balance"] = rec.balance is not None and rec.balance[0] == rec.balance[1]
    out["valid"] = after.is_valid()
    return out
