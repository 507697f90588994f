"""Seeded report builders for the acceptance suite.

Each ``criterionN()`` returns a :class:`freegog.shnc.Report` whose text is a
pure function of the seeds, so reruns (in process or not) can be compared
byte for byte.  Running this file prints one sha256 per report as JSON.
"""

from __future__ import annotations

import hashlib
import json
import random
import time

from freegog.graphs import contains, graph_from_words
from freegog.oracle import certified_ball, certified_intersection
from freegog.pullback import intersection_subgroup
from freegog.reduction import format_trace, is_reduced, move_invariants, reduce_to_valence_three
from freegog.sampling import random_subgroup, trial_seed
from freegog.shnc import Report, bigon_experiment, culler_shalen_experiment, run_pipeline, shnc_experiment

RADIUS = 8
BUDGET = 200_000

_balls: dict[int, list] = {}


def ball_words(rank, radius):
    """All reduced words of length ≤ radius; one shortlex list per rank, sliced."""
    from freegog.words import all_words

    if rank not in _balls:
        _balls[rank] = list(all_words(rank, RADIUS))
    words = _balls[rank]
    lo, hi = 0, len(words)
    while lo < hi:
        mid = (lo + hi) // 2
        if len(words[mid]) <= radius:
            lo = mid + 1
        else:
            hi = mid
    return words[:lo]


def digest(text):
    return hashlib.sha256(text.encode()).hexdigest()[:16]


def _gens(ws):
    return ",".join(str(w) for w in ws) or "-"


def sample_subgroup(rng):
    rank = rng.choice((2, 3))
    return rank, random_subgroup(rng, rank, rng.randint(1, 3), 6)


def criterion1(trials=100, seed=0):
    rep = Report("membership-vs-oracle", {"trials": trials, "seed": seed, "radius": RADIUS, "budget": BUDGET})
    for t in range(trials):
        s = trial_seed(seed, t)
        rank, gens = sample_subgroup(random.Random(s))
        elements, r = certified_ball(gens, RADIUS, BUDGET)
        g = graph_from_words(gens, rank)
        words = ball_words(rank, r)
        bad = [w for w in words if contains(g, w) != (w in elements)]
        rep.bump("trials")
        rep.bump(f"radius_{r}")
        rep.bump("words_checked", len(words))
        rep.bump("mismatches", len(bad))
        rep.lines.append(f"trial={t:04d} seed={s} rank={rank} H={_gens(gens)} radius={r} ball={len(words)} members={len(elements)} mismatches={len(bad)}")
        if bad:
            rep.failures.append(f"H={_gens(gens)} rank={rank} word={bad[0]}")
    return rep


def criterion2(trials=100, seed=1):
    rep = Report("intersection-vs-oracle", {"trials": trials, "seed": seed, "radius": RADIUS, "budget": BUDGET})
    for t in range(trials):
        s = trial_seed(seed, t)
        rng = random.Random(s)
        rank, h1 = sample_subgroup(rng)
        h2 = random_subgroup(rng, rank, rng.randint(1, 3), 6)
        m = intersection_subgroup(graph_from_words(h1, rank), graph_from_words(h2, rank))
        common, r = certified_intersection(h1, h2, RADIUS, BUDGET)
        words = ball_words(rank, r)
        bad = [w for w in words if contains(m, w) != (w in common)]
        rep.bump("trials")
        rep.bump(f"radius_{r}")
        rep.bump("words_checked", len(words))
        rep.bump("mismatches", len(bad))
        rep.bump("nontrivial" if m.rank() else "trivial")
        rep.lines.append(
            f"trial={t:04d} seed={s} rank={rank} H1={_gens(h1)} H2={_gens(h2)} M_rank={m.rank()} "
            f"radius={r} common={len(common)} mismatches={len(bad)}"
        )
        if bad:
            rep.failures.append(f"H1={_gens(h1)} H2={_gens(h2)} rank={rank} word={bad[0]}")
    return rep


def _pair_with_intersection(rng):
    """A pair whose based intersection is nontrivial, plus the number of rejected draws."""
    rejected = 0
    while True:
        rank, h1 = sample_subgroup(rng)
        h2 = random_subgroup(rng, rank, rng.randint(1, 3), 6)
        if intersection_subgroup(graph_from_words(h1, rank), graph_from_words(h2, rank)).rank():
            return rank, h1, h2, rejected
        rejected += 1


def criterion3(trials=100, seed=2):
    """Reduction runs; criterion 4's move checks ride along as the observer.

    Returns the report and the invariant report."""
    rep = Report("reduction-termination", {"trials": trials, "seed": seed})
    inv = Report("move-invariants", {"trials": trials, "seed": seed})
    traces = []
    for t in range(trials):
        s = trial_seed(seed, t)
        rank, h1, h2, rejected = _pair_with_intersection(random.Random(s))
        rep.bump("resamples", rejected)
        head = f"trial={t:04d} seed={s} rank={rank} H1={_gens(h1)} H2={_gens(h2)}"

        def observer(rec, before, after):
            checks = move_invariants(rec, before, after)
            inv.bump(f"moves_{rec.move}")
            for name, ok in sorted(checks.items()):
                inv.bump("checks")
                if not ok:
                    inv.bump("violations")
                    inv.failures.append(f"{name} at {rec.line()} :: {head}")

        p = run_pipeline(h1, h2, rank, mode="based", strip_trees=False, observer=observer)
        x, trace = p.terminal, p.trace
        blowups = [r for r in trace if r.move == "M6"]
        decreasing = all(r.after < r.before for r in blowups)
        trees = [r for r in blowups if r.b_tree]
        balanced = all(r.balance is not None and r.balance[0] == r.balance[1] for r in trees)
        maxval = max(x.valences().values(), default=0)
        reduced = is_reduced(x)
        ok = decreasing and balanced and maxval <= 3 and reduced
        # the driver is called again on its own output: a terminal state must be a fixed point
        _, trace2 = reduce_to_valence_three(x)
        ok = ok and not trace2
        text = format_trace(trace)
        traces.append(text)
        rep.bump("trials")
        rep.bump("blowups", len(blowups))
        rep.bump("tree_blowups", len(trees))
        rep.bump("ok" if ok else "failed")
        rep.lines.append(
            f"{head} moves={len(trace)} blowups={len(blowups)} tree_blowups={len(trees)} "
            f"terminal={x.complexity()} max_valence={maxval} reduced={int(reduced)} trace={digest(text)}"
        )
        if not ok:
            rep.failures.append(
                f"decreasing={decreasing} balanced={balanced} max_valence={maxval} reduced={reduced} "
                f"fixed_point={not trace2} :: {head}"
            )
    rep.lines.append(f"all_traces={digest(''.join(traces))}")
    inv.counters.setdefault("violations", 0)
    return rep, inv


def criterion5():
    """Identity runs in both ranks; criterion 7 reads the same reports."""
    return [shnc_experiment(50, seed=0, rank=2), shnc_experiment(30, seed=0, rank=3, max_len=5)]


def criterion6():
    return culler_shalen_experiment(30, seed=0)


def criterion8():
    return bigon_experiment(20, seed=0)


_cache: dict = {}


def timed(key, fn):
    """Run ``fn`` once per process; returns (value, seconds)."""
    if key not in _cache:
        t0 = time.perf_counter()
        value = fn()
        _cache[key] = (value, time.perf_counter() - t0)
    return _cache[key]


BUILDERS = {
    "1": criterion1,
    "2": criterion2,
    "3+4": criterion3,
    "5+7": criterion5,
    "6": criterion6,
    "8": criterion8,
}


def texts(value):
    if isinstance(value, (list, tuple)):
        return "".join(texts(v) for v in value)
    return value.text()


def all_digests():
    return {k: digest(texts(timed(k, fn)[0])) for k, fn in BUILDERS.items()}


if __name__ == "__main__":
    print(json.dumps(all_digests(), sort_keys=True))
