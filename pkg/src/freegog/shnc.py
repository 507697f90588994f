"""Intersections of two subgroups through reduced trivalent graphs of graphs.

The pipeline builds the representing graph of graphs for two subgroups
``H1``, ``H2`` of a free group with edge groups taken from their pullback,
reduces it to valence three and reads off:

* the triple intersections ``Δ_v`` of the three edge-space images at each
  underlying vertex, split by side into ``Σ1``, ``Σ2``, with ``μ`` edges;
* the identity ``4χ(H1)χ(H2) + 4Σχ(M_j) = |Σ1||Σ2| − 2μ``;
* the inequality ``χ(Γ_H1)χ(Γ_H2) + χ(Γ_M) ≥ 0``.

All Euler characteristic bookkeeping is in integers; quantities that would
be halves are stored doubled.

Bigon resolution identifies two parallel vertex-space edges, folds the
resulting mid-graph and checks the containments that follow.  Labels there
are the underlying edge ids, so subgroups live in the free group on the
edges of Γ_U.
"""

from __future__ import annotations

import hashlib
import logging
import random
from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

from .errors import FreeGogError, HypothesisError, PreconditionError
from .gog import (
    EdgeGroup,
    GraphOfGraphs,
    bigons,
    build_from_graphs,
    horizontal_graph,
    is_representing,
    is_simple_edged,
    mid_graph,
    vertex_graph_sides,
)
from .graphs import (
    Edge,
    GraphMorphism,
    LabeledGraph,
    core,
    fold,
    generators,
    graph_from_words,
    join,
    lift,
    same_subgroup,
)
from .pullback import all_core_components, based_component, intersection_subgroup, projections, pullback_product
from .reduction import MoveRecord, format_trace, reduce_to_valence_three
from .sampling import random_subgroup, trial_seed
from .words import Word

log = logging.getLogger(__name__)

SIDES = ("H1", "H2")


def _val3(g: LabeledGraph) -> int:
    return sum(1 for v in g.vertices if g.valence(v) == 3)


def _double_chi(g: LabeledGraph) -> int:
    """2χ(g) from the valence census Σ (2 − val(v))."""
    return sum(2 - g.valence(v) for v in g.vertices)


# -- pipeline ------------------------------------------------------------------


class Pipeline(NamedTuple):
    h_graphs: tuple[LabeledGraph, LabeledGraph]
    edge_graphs: list[LabeledGraph]
    built: GraphOfGraphs
    terminal: GraphOfGraphs
    trace: list[MoveRecord]

    def trace_text(self) -> str:
        return format_trace(self.trace)


def edge_groups_from_pullback(g1: LabeledGraph, g2: LabeledGraph, mode: str = "components") -> list[EdgeGroup]:
    """Edge groups for the pair: the based intersection only, or every nontrivial pullback core."""
    if mode == "based":
        m = intersection_subgroup(g1, g2, canonical=False)
        comps = [m]
    elif mode == "components":
        prod, _, _ = pullback_product(g1, g2)
        comps = [c for c, _ in all_core_components(prod)]
    else:
        raise ValueError(f"unknown edge mode {mode!r}")
    out = []
    for j, c in enumerate(comps):
        p1, p2 = projections(c, g1, g2)
        out.append(EdgeGroup(0, 1, c, p1, p2, f"M{j + 1}"))
    return out


def run_pipeline(
    h1: Sequence[Word | str],
    h2: Sequence[Word | str],
    rank: int,
    mode: str = "components",
    strip_trees: bool = False,
    observer=None,
) -> Pipeline:
    g1, g2 = graph_from_words(h1, rank), graph_from_words(h2, rank)
    groups = edge_groups_from_pullback(g1, g2, mode)
    x = build_from_graphs([g1, g2], groups, rank, SIDES)
    terminal, trace = reduce_to_valence_three(x, strip_trees=strip_trees, observer=observer)
    return Pipeline((g1, g2), [eg.graph for eg in groups], x, terminal, trace)


# -- Δ statistics and the identity -----------------------------------------------


class DeltaStatistics(NamedTuple):
    deltas: dict[int, tuple[frozenset, frozenset]]
    sigma1: frozenset
    sigma2: frozenset
    mu: int
    sides: tuple[str, str] = SIDES


def check_trivalent_instance(x: GraphOfGraphs, sides: Sequence[str] = SIDES) -> None:
    """Raise :class:`PreconditionError` unless ``x`` is simple-edged, all of valence three and
    two-sided."""
    if not is_simple_edged(x):
        u, p, q = bigons(x)[0]
        raise PreconditionError(f"not simple-edged: vertex space {u} has a bigon ({p}, {q})")
    bad = [u for u, d in x.valences().items() if d != 3]
    if bad:
        raise PreconditionError(f"underlying vertices of valence other than 3: {bad}")
    tags = {x.origin.get(v) for g in x.vertex_spaces.values() for v in g.vertices}
    if not tags <= set(sides):
        raise PreconditionError(f"horizontal graph is not two-sided: tags {sorted(map(str, tags))}")


def delta_statistics(x: GraphOfGraphs, sides: Sequence[str] = SIDES) -> DeltaStatistics:
    check_trivalent_instance(x, sides)
    deltas = {}
    for u in x.vertex_spaces:
        imgs = [x.image(e, side) for e, side in x.ends_at(u)]
        vs = imgs[0][0] & imgs[1][0] & imgs[2][0]
        es = imgs[0][1] & imgs[1][1] & imgs[2][1]
        deltas[u] = (vs, es)
    allv = [v for vs, _ in deltas.values() for v in vs]
    s1 = frozenset(v for v in allv if x.origin.get(v) == sides[0])
    s2 = frozenset(v for v in allv if x.origin.get(v) == sides[1])
    mu = sum(len(es) for _, es in deltas.values())
    return DeltaStatistics(deltas, s1, s2, mu, tuple(sides))


class IdentityCheck(NamedTuple):
    lhs: int  # from the Euler characteristics of the input groups
    lhs_census: int  # from the terminal graphs
    rhs: int
    equal: bool


def group_characteristics(x: GraphOfGraphs, sides: Sequence[str] = SIDES) -> tuple[int, int, int]:
    """χ(H1), χ(H2) and Σ χ(M_j) as recorded at construction (stripped edge groups omitted)."""
    vg = {d["name"]: d["chi"] for d in x.meta["vertex_groups"]}
    stripped = set(x.meta.get("stripped_edge_groups", []))
    chi_m = sum(d["chi"] for d in x.meta["edge_groups"] if d["name"] not in stripped)
    return vg[sides[0]], vg[sides[1]], chi_m


def identity_check(stats: DeltaStatistics, x: GraphOfGraphs) -> IdentityCheck:
    c1, c2, cm = group_characteristics(x, stats.sides)
    lhs = 4 * c1 * c2 + 4 * cm
    parts = vertex_graph_sides(x)
    d1 = _double_chi(parts.get(stats.sides[0], LabeledGraph()))
    d2 = _double_chi(parts.get(stats.sides[1], LabeledGraph()))
    dm = _double_chi(mid_graph(x))
    lhs_census = d1 * d2 + 2 * dm
    rhs = len(stats.sigma1) * len(stats.sigma2) - 2 * stats.mu
    return IdentityCheck(lhs, lhs_census, rhs, lhs == rhs == lhs_census)


def census_checks(x: GraphOfGraphs, stats: DeltaStatistics) -> dict[str, bool]:
    """The counting facts behind the identity, each checked directly."""
    parts = vertex_graph_sides(x)
    gm = mid_graph(x)
    gh = horizontal_graph(x)
    h = [parts.get(s, LabeledGraph()) for s in stats.sides]
    out = {
        "mu_is_mid_val3": stats.mu == _val3(gm),
        "sigma1_is_h1_val3": len(stats.sigma1) == _val3(h[0]),
        "sigma2_is_h2_val3": len(stats.sigma2) == _val3(h[1]),
        "h_valences_2_or_3": all(g.valence(v) in (2, 3) for g in h for v in g.vertices),
    }
    ends = {k: e for g in x.vertex_spaces.values() for k, e in g.edges.items()}
    out["mid_val3_ends_val3"] = all(
        gh.valence(ends[w].source) == 3 and gh.valence(ends[w].target) == 3
        for w in gm.vertices
        if gm.valence(w) == 3
    )
    return out


def shnc_inequality(x: GraphOfGraphs, sides: Sequence[str] = SIDES) -> tuple[int, bool]:
    """``χ(Γ_H1)χ(Γ_H2) + χ(Γ_M)`` from the graphs of ``x``, and whether it is ≥ 0."""
    parts = vertex_graph_sides(x)
    c1 = parts.get(sides[0], LabeledGraph()).euler_characteristic()
    c2 = parts.get(sides[1], LabeledGraph()).euler_characteristic()
    value = c1 * c2 + mid_graph(x).euler_characteristic()
    return value, value >= 0


# -- bigon resolution ----------------------------------------------------------------


@dataclass
class BigonResolution:
    bigon: tuple[int, int, int]
    case: str  # "distinct" or "same"
    k_graph: LabeledGraph
    eta: GraphMorphism
    nu: tuple[GraphMorphism | None, GraphMorphism | None]
    checks: dict[str, bool] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(self.checks.values())


def _side_map(x: GraphOfGraphs, gm: LabeledGraph, side_graph: LabeledGraph, tag: str) -> GraphMorphism:
    """Γ_M → Γ_{H_i}: each vertex-space edge goes to its endpoint on side ``tag``."""
    vm, em = {}, {}
    cells = [(k, e) for g in x.vertex_spaces.values() for k, e in g.edges.items()]
    cells += [(f, e) for s in x.edge_spaces.values() for f, e in s.space.edges.items()]
    for c, e in cells:
        ends = [w for w in (e.source, e.target) if x.origin.get(w) == tag]
        if len(ends) != 1:
            raise PreconditionError(f"cell {c} does not join the two sides; vertex spaces are not bipartite")
        (vm if c in gm else em)[c] = ends[0]
    m = GraphMorphism(gm, side_graph, vm, em)
    if not m.is_well_formed():
        raise PreconditionError(f"mid-graph does not map to side {tag} preserving labels")
    return m


def _factor(eta: GraphMorphism, phi: GraphMorphism) -> GraphMorphism | None:
    """The map ν with ν∘η = φ, if φ is constant on the fibres of η."""
    vm, em = {}, {}
    for v, c in eta.vertex_map.items():
        if vm.setdefault(c, phi.vertex_map[v]) != phi.vertex_map[v]:
            return None
    for k, c in eta.edge_map.items():
        if em.setdefault(c, phi.edge_map[k]) != phi.edge_map[k]:
            return None
    return GraphMorphism(eta.codomain, phi.codomain, vm, em)


def _restricted_iso(eta: GraphMorphism, comp: LabeledGraph, target: LabeledGraph) -> bool:
    vs = [eta.vertex_map[v] for v in comp.vertices]
    es = [eta.edge_map[k] for k in comp.edges]
    return (
        len(set(vs)) == len(vs) == target.n_vertices
        and len(set(es)) == len(es) == target.n_edges
        and set(vs) == set(target.vertices)
    )


def resolve_bigon(
    x: GraphOfGraphs, bigon: tuple[int, int, int] | None = None, sides: Sequence[str] = SIDES
) -> BigonResolution:
    """Identify the mid-points of a bigon ``(u, p, q)``, fold, and check the consequences.

    Γ_M and Γ_H are labeled by underlying edge ids.  The returned checks are:
    the factorizations ``ν_i ∘ η = φ_i`` with ``ν_i`` immersions; in the
    distinct-component case, that the fold is the join of the two based
    components, properly larger than each when neither ``η`` restriction is an
    isomorphism, and that the based intersection of the sides properly
    contains both when neither contains the other; in the same-component case,
    that the fold is not an isomorphism and the intersection properly
    contains the component.
    """
    found = bigons(x)
    if bigon is None:
        if not found:
            raise PreconditionError("graph of graphs has no bigon")
        bigon = found[0]
    u, p, q = bigon
    if not any(b[0] == u and {b[1], b[2]} == {p, q} for b in found):
        raise PreconditionError(f"({p}, {q}) is not a bigon of vertex space {u}")

    gm = mid_graph(x, labels="edge")
    gh = horizontal_graph(x, labels="edge")
    side_graphs = [gh.subgraph([v for v in gh.vertices if x.origin.get(v) == t]) for t in sides]
    for t, g in zip(sides, side_graphs):
        if not g.is_folded():
            raise PreconditionError(f"side {t} of the horizontal graph is not immersed in Γ_U")
    if not gm.is_folded():
        raise PreconditionError("mid-graph is not immersed in Γ_U")
    phis = [_side_map(x, gm, g, t) for t, g in zip(sides, side_graphs)]

    glued = LabeledGraph(
        [v for v in gm.vertices if v != q],
        {
            k: Edge(p if e.source == q else e.source, p if e.target == q else e.target, e.label)
            for k, e in gm.edges.items()
        },
    )
    gk, quotient = fold(glued)
    eta = GraphMorphism(
        gm,
        gk,
        {v: quotient.vertex_map[p if v == q else v] for v in gm.vertices},
        dict(quotient.edge_map),
    )
    nus = tuple(_factor(eta, phi) for phi in phis)
    checks: dict[str, bool] = {}
    for i, nu in enumerate(nus, 1):
        checks[f"nu{i}_factors"] = nu is not None
        if nu is not None:
            checks[f"nu{i}_well_formed"] = nu.is_well_formed()
            checks[f"nu{i}_immersion"] = nu.is_immersion()
            composite = eta.then(nu)
            checks[f"nu{i}_eta_is_edge_map"] = (
                composite.vertex_map == phis[i - 1].vertex_map and composite.edge_map == phis[i - 1].edge_map
            )

    comp_p = based_component(gm, p)
    comp_q = based_component(gm, q)
    kp = eta.vertex_map[p]
    k_comp = based_component(gk, kp)
    h_based = [based_component(g, phi.vertex_map[p]) for g, phi in zip(side_graphs, phis)]
    meet = intersection_subgroup(h_based[0], h_based[1])
    checks["images_of_p_and_q_agree"] = all(phi.vertex_map[p] == phi.vertex_map[q] for phi in phis)
    mp = core(comp_p, keep=p)
    kc = core(k_comp, keep=kp)
    checks["k_in_intersection"] = lift(kc, meet) is not None

    if set(comp_q.vertices) != set(comp_p.vertices):
        case = "distinct"
        mq = core(comp_q, keep=q)
        checks["k_connected_with_both"] = {eta.vertex_map[v] for v in comp_q.vertices} <= set(
            k_comp.vertices
        ) and {eta.vertex_map[v] for v in comp_p.vertices} <= set(k_comp.vertices)
        checks["k_is_join"] = same_subgroup(kc, join(mp, mq))
        checks["intersection_contains_both"] = lift(mp, meet) is not None and lift(mq, meet) is not None
        eta_p_iso = _restricted_iso(eta, comp_p, k_comp)
        eta_q_iso = _restricted_iso(eta, comp_q, k_comp)
        if not eta_p_iso and not eta_q_iso:
            checks["k_properly_contains_both"] = (
                lift(mp, kc) is not None
                and lift(kc, mp) is None
                and lift(mq, kc) is not None
                and lift(kc, mq) is None
            )
        if lift(mp, mq) is None and lift(mq, mp) is None:
            checks["intersection_properly_contains_both"] = lift(meet, mp) is None and lift(meet, mq) is None
    else:
        case = "same"
        checks["fold_not_isomorphism"] = (
            k_comp.n_vertices < comp_p.n_vertices or k_comp.betti_number() > comp_p.betti_number()
        )
        checks["intersection_properly_contains_m"] = lift(mp, meet) is not None and lift(meet, mp) is None
    return BigonResolution((u, p, q), case, gk, eta, nus, checks)


# -- reports -------------------------------------------------------------------------


@dataclass
class Report:
    """Per-trial lines plus summary counters; :meth:`text` is deterministic."""

    name: str
    params: dict
    lines: list[str] = field(default_factory=list)
    counters: dict[str, int] = field(default_factory=dict)
    failures: list[str] = field(default_factory=list)

    def bump(self, key: str, by: int = 1) -> None:
        self.counters[key] = self.counters.get(key, 0) + by

    @property
    def ok(self) -> bool:
        return not self.failures

    def text(self) -> str:
        head = " ".join(f"{k}={self.params[k]}" for k in sorted(self.params))
        out = [f"# {self.name} {head}"]
        out.extend(self.lines)
        out.append("# summary")
        out.extend(f"{k}={self.counters[k]}" for k in sorted(self.counters))
        out.append(f"verdict={'pass' if self.ok else 'FAIL'}")
        for f in self.failures:
            out.append(f"# reproducer: {f}")
        return "\n".join(out) + "\n"


def _words(ws: Sequence[Word]) -> str:
    return ",".join(str(w) for w in ws)


def _digest(text: str) -> str:
    return hashlib.sha256(text.encode()).hexdigest()[:12]


def _underlying_rank(x: GraphOfGraphs) -> int:
    return x.underlying().betti_number()


# -- Culler-Shalen experiment ------------------------------------------------------


def cs_admissible(g1: LabeledGraph, g2: LabeledGraph) -> bool:
    """Both subgroups of rank 2 and their join of rank 3."""
    return g1.rank() == 2 and g2.rank() == 2 and join(g1, g2).rank() == 3


def sample_cs_pair(rng: random.Random, max_len: int = 6, rank: int = 3, max_attempts: int = 10_000):
    """Rank-2 subgroups H1, H2 of F_rank whose join has rank 3; returns (h1, h2, g1, g2, resamples)."""
    for attempt in range(max_attempts):
        h1 = random_subgroup(rng, rank, 2, max_len)
        h2 = random_subgroup(rng, rank, 2, max_len)
        g1, g2 = graph_from_words(h1, rank), graph_from_words(h2, rank)
        if cs_admissible(g1, g2):
            return h1, h2, g1, g2, attempt
    raise FreeGogError(f"no admissible pair after {max_attempts} attempts")


def cs_census(p: Pipeline) -> dict[str, int]:
    t = p.terminal
    parts = vertex_graph_sides(t)
    gm = mid_graph(t)
    return {
        "U_rank": _underlying_rank(t),
        "U_val3": sum(1 for d in t.valences().values() if d == 3),
        "U_maxval": max(t.valences().values(), default=0),
        "H1_val3": _val3(parts.get("H1", LabeledGraph())),
        "H2_val3": _val3(parts.get("H2", LabeledGraph())),
        "M_maxval": max((gm.valence(v) for v in gm.vertices), default=0),
    }


def culler_shalen_experiment(trials: int = 30, seed: int = 0, max_len: int = 6, rank: int = 3) -> Report:
    """Rank-2 pairs in F_3 with join of rank 3: the based intersection has rank ≤ 1, and the
    reduced trivalent instance has the expected shape."""
    rep = Report("experiment-cs", {"trials": trials, "seed": seed, "max_len": max_len, "rank": rank})
    for t in range(trials):
        s = trial_seed(seed, t)
        rng = random.Random(s)
        h1, h2, g1, g2, resamples = sample_cs_pair(rng, max_len, rank)
        rep.bump("resamples", resamples)
        m = intersection_subgroup(g1, g2)
        m_rank = m.rank() if m.n_vertices else 0
        p = run_pipeline(h1, h2, rank, mode="based", strip_trees=True)
        c = cs_census(p)
        shape_ok = (
            c["U_rank"] in (3, 4)
            and (c["U_rank"] == 4) == (m_rank == 0)
            and c["U_val3"] == 4
            and c["U_maxval"] <= 3
            and c["H1_val3"] == 2
            and c["H2_val3"] == 2
            and c["M_maxval"] <= 2
        )
        rank_ok = m_rank <= 1
        rep.bump("trials")
        rep.bump("rank_le_1" if rank_ok else "rank_violations")
        rep.bump("census_ok" if shape_ok else "census_failures")
        rep.bump("blowups", sum(1 for r in p.trace if r.move == "M6"))
        fields = " ".join(f"{k}={v}" for k, v in c.items())
        verdict = "ok" if rank_ok and shape_ok else "FAIL"
        rep.lines.append(
            f"trial={t:04d} seed={s} H1={_words(h1)} H2={_words(h2)} M={_words(generators(m))} "
            f"M_rank={m_rank} {fields} trace={_digest(p.trace_text())} verdict={verdict}"
        )
        if verdict != "ok":
            rep.failures.append(f"rank {rank} H1={_words(h1)} H2={_words(h2)}")
    return rep


# -- identity / SHNC experiment --------------------------------------------------------


def shnc_experiment(
    trials: int = 50,
    seed: int = 0,
    max_len: int = 6,
    rank: int = 2,
    n_generators: int = 2,
    mode: str = "components",
    max_attempts: int | None = None,
    require_mid: bool = True,
) -> Report:
    """Sample pairs until ``trials`` of them reach a simple-edged trivalent two-sided terminal
    state; check the Δ identity and the inequality on each.  Other instances are counted
    by exclusion reason; with ``require_mid`` so are pairs whose pullback has no cycle."""
    params = {"trials": trials, "seed": seed, "max_len": max_len, "rank": rank, "mode": mode, "require_mid": int(require_mid)}
    rep = Report("experiment-shnc", params)
    max_attempts = max_attempts or 20 * trials
    rep.counters.update({"qualifying": 0, "identity_fail": 0, "shnc_violations": 0})
    attempt = 0
    while rep.counters["qualifying"] < trials:
        if attempt >= max_attempts:
            rep.failures.append(f"only {rep.counters['qualifying']} qualifying instances in {attempt} attempts")
            break
        s = trial_seed(seed, attempt)
        attempt += 1
        rng = random.Random(s)
        h1 = random_subgroup(rng, rank, n_generators, max_len)
        h2 = random_subgroup(rng, rank, n_generators, max_len)
        head = f"attempt={attempt - 1:04d} seed={s} H1={_words(h1)} H2={_words(h2)}"
        try:
            p = run_pipeline(h1, h2, rank, mode=mode, strip_trees=True)
        except HypothesisError as exc:
            rep.bump("excluded_hypothesis")
            rep.lines.append(f"{head} excluded=hypothesis ({exc})")
            continue
        x = p.terminal
        reason = None
        if require_mid and not p.edge_graphs:
            reason = "empty_mid"
        elif not is_representing(x):
            reason = "not_representing"
        elif not is_simple_edged(x):
            reason = "not_simple_edged"
        elif any(d != 3 for d in x.valences().values()):
            reason = "not_trivalent"
        if reason:
            rep.bump(f"excluded_{reason}")
            rep.lines.append(f"{head} excluded={reason}")
            continue
        stats = delta_statistics(x)
        ident = identity_check(stats, x)
        census = census_checks(x, stats)
        value, nonneg = shnc_inequality(x)
        rep.bump("qualifying")
        if not (ident.equal and all(census.values())):
            rep.bump("identity_fail")
            rep.failures.append(f"identity: rank {rank} mode {mode} H1={_words(h1)} H2={_words(h2)}")
        if not nonneg:
            rep.bump("shnc_violations")
            rep.failures.append(f"inequality: rank {rank} mode {mode} H1={_words(h1)} H2={_words(h2)}")
        rep.lines.append(
            f"{head} edge_groups={len(p.edge_graphs)} sigma1={len(stats.sigma1)} sigma2={len(stats.sigma2)} "
            f"mu={stats.mu} lhs={ident.lhs} census={ident.lhs_census} rhs={ident.rhs} shnc={value} "
            f"trace={_digest(p.trace_text())} verdict={'ok' if ident.equal and nonneg else 'FAIL'}"
        )
    rep.counters["attempts"] = attempt
    return rep


# -- bigon experiment ------------------------------------------------------------------------


def _subgroup_element(rng: random.Random, gens: Sequence[Word], length: int) -> Word:
    w = Word()
    while not len(w):
        for _ in range(length):
            g = rng.choice(gens)
            w = w * (g if rng.random() < 0.5 else g.inverse())
    return w


def bigon_instance(rng: random.Random, case: str, rank: int = 2, max_len: int = 5):
    """Subgroups H1, H2 and edge groups inside H1 ∩ H2 that force a bigon.

    ``"same"`` uses one edge group ⟨x²⟩, whose graph wraps twice around the
    loop of x; ``"distinct"`` uses two edge groups ⟨x⟩, ⟨y⟩ based at the same
    vertex pair.
    """
    while True:
        h1 = random_subgroup(rng, rank, 2, max_len)
        h2 = random_subgroup(rng, rank, 2, max_len)
        g1, g2 = graph_from_words(h1, rank), graph_from_words(h2, rank)
        gens = generators(intersection_subgroup(g1, g2))
        if not gens:
            continue
        x = _subgroup_element(rng, gens, rng.randint(1, 2))
        if case == "same":
            return h1, h2, [[x * x]]
        y = _subgroup_element(rng, gens, rng.randint(1, 2))
        if y == x or y == x.inverse():
            y = x * x
        return h1, h2, [[x], [y]]


def _bigon_of_case(x: GraphOfGraphs, case: str):
    comps = [set(vs) for vs, _ in mid_graph(x).components()]
    for b in bigons(x):
        same = any(b[1] in vs and b[2] in vs for vs in comps)
        if (case == "same") == same:
            return b
    return None


def bigon_experiment(trials: int = 20, seed: int = 0, rank: int = 2, max_len: int = 5) -> Report:
    """Resolve one bigon per constructed instance, alternating the two cases.

    Instances are reduced first; one whose bigons of the wanted case do not
    survive the reduction is replaced by a fresh sample from the same stream
    (counted as a resample).
    """
    from .gog import build_representing

    rep = Report("experiment-bigon", {"trials": trials, "seed": seed, "rank": rank, "max_len": max_len})
    for t in range(trials):
        s = trial_seed(seed, t)
        rng = random.Random(s)
        want = "same" if t % 2 == 0 else "distinct"
        for _ in range(1000):
            h1, h2, ms = bigon_instance(rng, want, rank, max_len)
            x, _ = reduce_to_valence_three(build_representing([h1, h2], [(0, 1, m) for m in ms], rank))
            pick = _bigon_of_case(x, want)
            if pick is not None:
                break
            rep.bump("resamples")
        else:
            raise FreeGogError(f"no {want}-component bigon found for trial {t}")
        head = f"trial={t:04d} seed={s} H1={_words(h1)} H2={_words(h2)} M={'|'.join(_words(m) for m in ms)}"
        res = resolve_bigon(x, pick)
        rep.bump(f"case_{res.case}")
        rep.bump("ok" if res.ok else "failed")
        failed = sorted(k for k, v in res.checks.items() if not v)
        rep.lines.append(
            f"{head} bigon={pick[1]},{pick[2]} case={res.case} K_rank={res.k_graph.betti_number()} "
            f"checks={len(res.checks)} failed={','.join(failed) or '-'} verdict={'ok' if res.ok else 'FAIL'}"
        )
        if not res.ok:
            rep.failures.append(f"bigon checks {failed}: {head}")
    return rep
