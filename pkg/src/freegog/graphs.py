"""Labeled graphs, morphisms and Stallings folding.

A :class:`LabeledGraph` stores each edge once, oriented, with a label; for a
subgroup graph the label is a generator index and walking an edge backwards
reads the inverse letter.  Graphs are treated as immutable values: every
operation here returns a new graph.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Hashable, Iterable, Mapping, NamedTuple, Sequence

from scipy.cluster.hierarchy import DisjointSet

from .errors import FormatError, PreconditionError
from .words import Letter, Word

OUT, IN = +1, -1


class Edge(NamedTuple):
    source: Hashable
    target: Hashable
    label: Hashable = None


class LabeledGraph:
    """Finite graph with oriented, labeled edges and an optional basepoint."""

    __slots__ = ("vertices", "edges", "basepoint", "_vset", "_star", "_trans", "_folded")

    def __init__(
        self,
        vertices: Iterable[Hashable] = (),
        edges: Mapping[Hashable, Edge | tuple] | Iterable[Edge | tuple] = (),
        basepoint: Hashable | None = None,
    ):
        self.vertices: tuple = tuple(dict.fromkeys(vertices))
        self._vset = frozenset(self.vertices)
        if isinstance(edges, Mapping):
            items = edges.items()
        else:
            items = enumerate(edges)
        self.edges: dict[Hashable, Edge] = {k: Edge(*e) for k, e in items}
        for k, e in self.edges.items():
            if e.source not in self._vset or e.target not in self._vset:
                raise ValueError(f"edge {k!r} has an endpoint outside the vertex set")
        if basepoint is not None and basepoint not in self._vset:
            raise ValueError(f"basepoint {basepoint!r} is not a vertex")
        self.basepoint = basepoint
        self._star = None
        self._trans = None
        self._folded = None

    # -- basic structure ---------------------------------------------------

    def __repr__(self):
        return (
            f"LabeledGraph(|V|={len(self.vertices)}, |E|={len(self.edges)}, "
            f"basepoint={self.basepoint!r})"
        )

    def __eq__(self, other):
        if not isinstance(other, LabeledGraph):
            return NotImplemented
        return (
            self._vset == other._vset
            and self.edges == other.edges
            and self.basepoint == other.basepoint
        )

    __hash__ = None

    def __contains__(self, v):
        return v in self._vset

    @property
    def n_vertices(self) -> int:
        return len(self.vertices)

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    def star(self, v) -> list[tuple[Hashable, int]]:
        """Edge-ends at ``v`` as ``(edge id, OUT|IN)``; a loop contributes both ends."""
        if self._star is None:
            star: dict = {u: [] for u in self.vertices}
            for k, e in self.edges.items():
                star[e.source].append((k, OUT))
                star[e.target].append((k, IN))
            self._star = star
        return self._star[v]

    def valence(self, v) -> int:
        return len(self.star(v))

    def other_end(self, edge_id, end: int):
        e = self.edges[edge_id]
        return e.target if end == OUT else e.source

    def euler_characteristic(self) -> int:
        return len(self.vertices) - len(self.edges)

    def components(self) -> list[tuple[list, list]]:
        """Connected components as ``(vertices, edges)`` lists, in vertex order."""
        ds = DisjointSet(self.vertices)
        for e in self.edges.values():
            ds.merge(e.source, e.target)
        order: dict = {}
        for v in self.vertices:
            order.setdefault(ds[v], ([], []))[0].append(v)
        for k, e in self.edges.items():
            order[ds[e.source]][1].append(k)
        return list(order.values())

    def betti_number(self) -> int:
        """First Betti number (total rank of the fundamental groups of all components)."""
        return len(self.edges) - len(self.vertices) + len(self.components())

    def rank(self) -> int:
        """Rank of π₁ of a connected graph, ``1 - χ``."""
        return 1 - self.euler_characteristic()

    def is_connected(self) -> bool:
        return len(self.components()) <= 1

    def is_folded(self) -> bool:
        if self._folded is None:
            self._folded = True
            for v in self.vertices:
                seen = set()
                for k, end in self.star(v):
                    key = (self.edges[k].label, end)
                    if key in seen:
                        self._folded = False
                        break
                    seen.add(key)
                if not self._folded:
                    break
        return self._folded

    def is_core(self) -> bool:
        return all(self.valence(v) >= 2 or v == self.basepoint for v in self.vertices)

    def transitions(self) -> dict[tuple[Hashable, Hashable, int], tuple[Hashable, Hashable]]:
        """``(vertex, label, direction) -> (edge id, next vertex)`` for a folded graph."""
        if self._trans is None:
            if not self.is_folded():
                raise PreconditionError("transition table requires a folded graph")
            trans = {}
            for k, e in self.edges.items():
                trans[(e.source, e.label, OUT)] = (k, e.target)
                trans[(e.target, e.label, IN)] = (k, e.source)
            self._trans = trans
        return self._trans

    def subgraph(self, vertices: Iterable, edges: Iterable | None = None, basepoint=None) -> LabeledGraph:
        """Subgraph on ``vertices``; induced unless ``edges`` is given."""
        vs = [v for v in vertices]
        vset = set(vs)
        if edges is None:
            es = {k: e for k, e in self.edges.items() if e.source in vset and e.target in vset}
        else:
            es = {k: self.edges[k] for k in edges}
        if basepoint is None and self.basepoint in vset:
            basepoint = self.basepoint
        return LabeledGraph(vs, es, basepoint)

    def with_basepoint(self, v) -> LabeledGraph:
        return LabeledGraph(self.vertices, self.edges, v)

    def relabeled(self, start: int = 0, edge_start: int = 0) -> tuple[LabeledGraph, dict, dict]:
        """Copy with vertices and edges renumbered by consecutive integers, order kept."""
        vmap = {v: start + i for i, v in enumerate(self.vertices)}
        emap = {k: edge_start + i for i, k in enumerate(self.edges)}
        edges = {
            emap[k]: Edge(vmap[e.source], vmap[e.target], e.label) for k, e in self.edges.items()
        }
        base = vmap[self.basepoint] if self.basepoint is not None else None
        return LabeledGraph(vmap.values(), edges, base), vmap, emap

    def canonical(self) -> LabeledGraph:
        """Renumber a based graph in breadth-first order from the basepoint.

        Edge-ends are explored sorted by (label, direction), so for folded,
        connected, based graphs two graphs are isomorphic exactly when their
        canonical forms are equal.  Unreachable parts are appended in their
        original order.
        """
        if self.basepoint is None:
            return self.relabeled()[0]
        vorder = {self.basepoint: 0}
        eorder: dict = {}
        queue = deque([self.basepoint])
        while queue:
            v = queue.popleft()
            ends = sorted(self.star(v), key=lambda ke: (_label_key(self.edges[ke[0]].label), -ke[1]))
            for k, end in ends:
                if k not in eorder:
                    eorder[k] = len(eorder)
                w = self.other_end(k, end)
                if w not in vorder:
                    vorder[w] = len(vorder)
                    queue.append(w)
        for v in self.vertices:
            vorder.setdefault(v, len(vorder))
        for k in self.edges:
            eorder.setdefault(k, len(eorder))
        edges = {
            eorder[k]: Edge(vorder[e.source], vorder[e.target], e.label)
            for k, e in sorted(self.edges.items(), key=lambda kv: eorder[kv[0]])
        }
        return LabeledGraph(sorted(vorder.values()), edges, 0)

    def signature(self) -> tuple:
        """Hashable form of :meth:`canonical`; equal signatures mean based isomorphism."""
        c = self.canonical()
        return (c.n_vertices, tuple(c.edges[k] for k in sorted(c.edges)))


def _label_key(label):
    return (0, label) if isinstance(label, int) else (1, repr(label))


def rose(rank: int) -> LabeledGraph:
    """The bouquet of ``rank`` circles, one loop per generator."""
    return LabeledGraph([0], {i: Edge(0, 0, i) for i in range(rank)}, basepoint=0)


def euler_characteristic(g: LabeledGraph) -> int:
    return g.euler_characteristic()


@dataclass(frozen=True, eq=False)
class GraphMorphism:
    """A map of graphs given by explicit vertex and edge maps."""

    domain: LabeledGraph
    codomain: LabeledGraph
    vertex_map: Mapping = field(default_factory=dict)
    edge_map: Mapping = field(default_factory=dict)

    @classmethod
    def identity(cls, g: LabeledGraph) -> GraphMorphism:
        return cls(g, g, {v: v for v in g.vertices}, {k: k for k in g.edges})

    def is_well_formed(self, oriented: bool = True, labeled: bool = True) -> bool:
        """Check totality, incidence and (optionally) orientation and labels."""
        dom, cod = self.domain, self.codomain
        if set(self.vertex_map) != set(dom.vertices) or set(self.edge_map) != set(dom.edges):
            return False
        if any(w not in cod for w in self.vertex_map.values()):
            return False
        for k, e in dom.edges.items():
            k2 = self.edge_map[k]
            if k2 not in cod.edges:
                return False
            f = cod.edges[k2]
            s, t = self.vertex_map[e.source], self.vertex_map[e.target]
            if oriented:
                if (s, t) != (f.source, f.target):
                    return False
            elif {s, t} != {f.source, f.target} or (s == t) != (f.source == f.target):
                return False
            if labeled and e.label != f.label:
                return False
        return True

    def _image_end(self, k, end):
        """Image of an edge-end; orientation is read off the vertex map."""
        k2 = self.edge_map[k]
        f = self.codomain.edges[k2]
        e = self.domain.edges[k]
        if f.source == f.target:
            return (k2, end)
        here = self.vertex_map[e.source if end == OUT else e.target]
        return (k2, OUT if here == f.source else IN)

    def is_immersion(self) -> bool:
        """Locally injective: distinct edge-ends at a vertex have distinct images."""
        for v in self.domain.vertices:
            images = [self._image_end(k, end) for k, end in self.domain.star(v)]
            if len(set(images)) != len(images):
                return False
        return True

    def is_embedding(self) -> bool:
        vm, em = self.vertex_map, self.edge_map
        return len(set(vm.values())) == len(vm) and len(set(em.values())) == len(em)

    def is_surjective(self) -> bool:
        return set(self.vertex_map.values()) == set(self.codomain.vertices) and set(
            self.edge_map.values()
        ) == set(self.codomain.edges)

    def is_isomorphism(self) -> bool:
        return self.is_embedding() and self.is_surjective()

    def then(self, other: GraphMorphism) -> GraphMorphism:
        """Composite ``other ∘ self``."""
        return GraphMorphism(
            self.domain,
            other.codomain,
            {v: other.vertex_map[w] for v, w in self.vertex_map.items()},
            {k: other.edge_map[j] for k, j in self.edge_map.items()},
        )

    def restrict(self, sub: LabeledGraph) -> GraphMorphism:
        return GraphMorphism(
            sub,
            self.codomain,
            {v: self.vertex_map[v] for v in sub.vertices},
            {k: self.edge_map[k] for k in sub.edges},
        )

    def image(self) -> LabeledGraph:
        vs = dict.fromkeys(self.vertex_map.values())
        es = dict.fromkeys(self.edge_map.values())
        return self.codomain.subgraph(vs, es, basepoint=None)


def is_immersion(m: GraphMorphism) -> bool:
    return m.is_immersion()


# -- folding -----------------------------------------------------------------


def fold(g: LabeledGraph) -> tuple[LabeledGraph, GraphMorphism]:
    """Fold ``g`` completely; returns the folded graph and the quotient map.

    Vertices are identified with a union-find structure.  Each pass scans
    edges in id order and merges the first conflicting pair of edge-ends it
    sees; the pass repeats until it finds nothing, so the result (including
    which ids survive) is deterministic.
    """
    vertices = list(g.vertices)
    vpos = {v: i for i, v in enumerate(vertices)}
    vds = DisjointSet(vertices)
    eds = DisjointSet(g.edges)
    alive = dict(g.edges)
    changed = True
    while changed:
        changed = False
        seen: dict = {}
        for k in list(alive):
            if k not in alive:
                continue
            e = alive[k]
            s, t = vds[e.source], vds[e.target]
            for key, far in (((s, e.label, OUT), t), ((t, e.label, IN), s)):
                other = seen.get(key)
                if other is None or other not in alive:
                    seen[key] = k
                    continue
                o = alive[other]
                ofar = vds[o.target] if key[2] == OUT else vds[o.source]
                vds.merge(far, ofar)
                eds.merge(k, other)
                del alive[k]
                changed = True
                break
    rep = {}
    for v in vertices:
        r = vds[v]
        if r not in rep or vpos[v] < vpos[rep[r]]:
            rep[r] = v
    vmap = {v: rep[vds[v]] for v in vertices}
    erep: dict = {}
    for k in g.edges:
        erep.setdefault(eds[k], k)
    emap = {k: erep[eds[k]] for k in g.edges}
    new_vertices = [v for v in vertices if vmap[v] == v]
    new_edges = {
        k: Edge(vmap[e.source], vmap[e.target], e.label) for k, e in g.edges.items() if emap[k] == k
    }
    base = vmap[g.basepoint] if g.basepoint is not None else None
    folded = LabeledGraph(new_vertices, new_edges, base)
    return folded, GraphMorphism(g, folded, vmap, emap)


def core(g: LabeledGraph, keep=None) -> LabeledGraph:
    """Strip vertices of valence ≤ 1 (other than ``keep``) until none remain.

    A graph with no cycles and no kept vertex has the empty graph as its core.
    The basepoint is carried over only if it survives.
    """
    valence = {v: g.valence(v) for v in g.vertices}
    removed_v: set = set()
    removed_e: set = set()
    stack = [v for v in g.vertices if valence[v] <= 1 and v != keep]
    while stack:
        v = stack.pop()
        if v in removed_v or v == keep or valence[v] > 1:
            continue
        removed_v.add(v)
        for k, end in g.star(v):
            if k in removed_e:
                continue
            removed_e.add(k)
            w = g.other_end(k, end)
            if w != v:
                valence[w] -= 1
                if valence[w] <= 1 and w != keep:
                    stack.append(w)
    vs = [v for v in g.vertices if v not in removed_v]
    es = {k: e for k, e in g.edges.items() if k not in removed_e}
    base = g.basepoint if g.basepoint in set(vs) else None
    return LabeledGraph(vs, es, base)


# -- subgroups ---------------------------------------------------------------


def petal_graph(words: Sequence[Word]) -> LabeledGraph:
    """Wedge of subdivided circles, one per word, at basepoint 0 (unfolded)."""
    vertices = [0]
    edges = []
    nxt = 1
    for w in words:
        if not len(w):
            continue
        prev = 0
        for i, x in enumerate(w):
            if i == len(w) - 1:
                cur = 0
            else:
                cur = nxt
                vertices.append(cur)
                nxt += 1
            if x.sign > 0:
                edges.append(Edge(prev, cur, x.generator))
            else:
                edges.append(Edge(cur, prev, x.generator))
            prev = cur
    return LabeledGraph(vertices, edges, basepoint=0)


def graph_from_words(words: Iterable[Word | str], ambient_rank: int) -> LabeledGraph:
    """Folded core based graph (Stallings graph) of the subgroup generated by ``words``."""
    ws = [Word.parse(w, ambient_rank) if isinstance(w, str) else w.check_rank(ambient_rank) for w in words]
    folded, _ = fold(petal_graph(ws))
    return core(folded, keep=folded.basepoint).canonical()


def contains(g: LabeledGraph, w: Word) -> bool:
    """True iff ``w`` reads a closed path at the basepoint of the folded graph ``g``."""
    if g.basepoint is None:
        raise PreconditionError("membership needs a based graph")
    trans = g.transitions()
    v = g.basepoint
    for x in w:
        step = trans.get((v, x.generator, OUT if x.sign > 0 else IN))
        if step is None:
            return False
        v = step[1]
    return v == g.basepoint


def read_path(g: LabeledGraph, start, w: Word):
    """End vertex of the path reading ``w`` from ``start``, or None if it leaves ``g``."""
    trans = g.transitions()
    v = start
    for x in w:
        step = trans.get((v, x.generator, OUT if x.sign > 0 else IN))
        if step is None:
            return None
        v = step[1]
    return v


def words_accepted(g: LabeledGraph, max_len: int) -> set[Word]:
    """All reduced words of length ≤ ``max_len`` labelling closed paths at the basepoint."""
    trans = g.transitions()
    by_vertex: dict = {}
    for (v, label, d), (k, w) in trans.items():
        by_vertex.setdefault(v, []).append((Letter(label, d), k, d, w))
    out = {Word()}
    stack = [(g.basepoint, (), None)]
    while stack:
        v, letters, came = stack.pop()
        for x, k, d, w in by_vertex.get(v, ()):
            if came == (k, -d):
                continue
            path = letters + (x,)
            if w == g.basepoint:
                out.add(Word.from_reduced(path))
            if len(path) < max_len:
                stack.append((w, path, (k, d)))
    return out


def spanning_tree_paths(g: LabeledGraph, start=None) -> dict:
    """Word labelling a tree path from ``start`` (default basepoint) to each reachable vertex."""
    start = g.basepoint if start is None else start
    paths = {start: Word()}
    queue = deque([start])
    while queue:
        v = queue.popleft()
        for k, end in g.star(v):
            w = g.other_end(k, end)
            if w not in paths:
                paths[w] = paths[v] * Word([Letter(g.edges[k].label, end)])
                queue.append(w)
    return paths


def generators(g: LabeledGraph) -> list[Word]:
    """A free basis of π₁(g, basepoint) read off a breadth-first spanning tree."""
    paths = spanning_tree_paths(g)
    tree_edges = set()
    seen = {g.basepoint}
    queue = deque([g.basepoint])
    while queue:
        v = queue.popleft()
        for k, end in g.star(v):
            w = g.other_end(k, end)
            if w not in seen:
                seen.add(w)
                tree_edges.add(k)
                queue.append(w)
    basis = []
    for k, e in g.edges.items():
        if k in tree_edges or e.source not in paths:
            continue
        basis.append(paths[e.source] * Word([Letter(e.label, 1)]) * paths[e.target].inverse())
    return basis


def lift(mu: LabeledGraph, eta: LabeledGraph, start=None, target=None) -> GraphMorphism | None:
    """Lift ``mu`` through ``eta`` over the rose; None if no lift exists.

    Both graphs are folded, so a lift is unique once the image of one vertex is
    fixed: by default ``mu``'s basepoint goes to ``eta``'s.  A based lift exists
    exactly when the subgroup of ``mu`` is contained in that of ``eta``.  Parts
    of ``mu`` unreachable from ``start`` make the lift fail.
    """
    start = mu.basepoint if start is None else start
    target = eta.basepoint if target is None else target
    if start is None or target is None:
        raise PreconditionError("lift needs based graphs or explicit anchors")
    trans = eta.transitions()
    vmap = {start: target}
    emap = {}
    queue = deque([start])
    while queue:
        v = queue.popleft()
        for k, end in mu.star(v):
            e = mu.edges[k]
            step = trans.get((vmap[v], e.label, end))
            if step is None:
                return None
            k2, w2 = step
            if k in emap and emap[k] != k2:
                return None
            emap[k] = k2
            w = mu.other_end(k, end)
            if w in vmap:
                if vmap[w] != w2:
                    return None
            else:
                vmap[w] = w2
                queue.append(w)
    if len(vmap) != mu.n_vertices or len(emap) != mu.n_edges:
        return None
    return GraphMorphism(mu, eta, vmap, emap)


def disjoint_union(graphs: Sequence[LabeledGraph]) -> tuple[LabeledGraph, list[dict], list[dict]]:
    """Disjoint union with integer ids; returns per-summand vertex and edge maps."""
    vertices, edges, vmaps, emaps = [], {}, [], []
    for g in graphs:
        h, vm, em = g.relabeled(len(vertices), len(edges))
        vertices.extend(h.vertices)
        edges.update(h.edges)
        vmaps.append(vm)
        emaps.append(em)
    return LabeledGraph(vertices, edges), vmaps, emaps


def wedge(g1: LabeledGraph, g2: LabeledGraph) -> LabeledGraph:
    """Disjoint union with the two basepoints identified (unfolded)."""
    union, vmaps, _ = disjoint_union([g1, g2])
    b1, b2 = vmaps[0][g1.basepoint], vmaps[1][g2.basepoint]
    glued = LabeledGraph(union.vertices, union.edges, basepoint=b1)
    ident = {v: v for v in glued.vertices}
    ident[b2] = b1
    edges = {k: Edge(ident[e.source], ident[e.target], e.label) for k, e in glued.edges.items()}
    return LabeledGraph([v for v in glued.vertices if v != b2], edges, basepoint=b1)


def join(g1: LabeledGraph, g2: LabeledGraph) -> LabeledGraph:
    """Stallings graph of the subgroup generated by both based subgroups."""
    folded, _ = fold(wedge(g1, g2))
    return core(folded, keep=folded.basepoint).canonical()


def based_isomorphic(g1: LabeledGraph, g2: LabeledGraph) -> bool:
    return g1.signature() == g2.signature()


def same_subgroup(g1: LabeledGraph, g2: LabeledGraph) -> bool:
    """Equality of based subgroups given by folded core graphs."""
    return lift(g1, g2) is not None and lift(g2, g1) is not None


# -- text format -------------------------------------------------------------


def _label_text(label) -> str:
    if label is None:
        return "-"
    if isinstance(label, int) and 0 <= label < 26:
        return chr(ord("a") + label)
    return str(label)


def to_text(g: LabeledGraph) -> str:
    """Line-based serialization: one ``vertex``/``edge`` per line."""
    h, _, _ = g.relabeled()
    lines = ["graph"]
    lines += [f"vertex {v}" for v in h.vertices]
    lines += [f"edge {e.source} {e.target} {_label_text(e.label)}" for e in h.edges.values()]
    if h.basepoint is not None:
        lines.append(f"basepoint {h.basepoint}")
    return "\n".join(lines) + "\n"


def from_text(text: str) -> LabeledGraph:
    vertices, edges, base = [], [], None
    where: dict = {}  # line number of each edge and of the basepoint
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line or line == "graph":
            continue
        parts = line.split()
        try:
            if parts[0] == "vertex" and len(parts) == 2:
                vertices.append(int(parts[1]))
            elif parts[0] == "edge" and len(parts) == 4:
                lab = parts[3]
                if lab == "-":
                    label = None
                elif len(lab) == 1 and lab.islower():
                    label = ord(lab) - ord("a")
                else:
                    label = int(lab)
                where[len(edges)] = lineno
                edges.append(Edge(int(parts[1]), int(parts[2]), label))
            elif parts[0] == "basepoint" and len(parts) == 2:
                base = int(parts[1])
                where["base"] = lineno
            else:
                raise FormatError(f"unrecognized line {raw!r}", lineno)
        except ValueError as exc:
            if isinstance(exc, FormatError):
                raise
            raise FormatError(str(exc), lineno) from exc
    known = set(vertices)
    for i, e in enumerate(edges):
        if e.source not in known or e.target not in known:
            raise FormatError("edge endpoint is not a declared vertex", where[i])
    if base is not None and base not in known:
        raise FormatError("basepoint is not a declared vertex", where["base"])
    return LabeledGraph(vertices, edges, base)
