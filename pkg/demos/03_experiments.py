"""Seeded batches: rank-2 pairs in F_3, the counting identity, bigons."""

import random

from freegog import build_representing
from freegog.gog import bigons
from freegog.reduction import reduce_to_valence_three
from freegog.shnc import bigon_experiment, culler_shalen_experiment, resolve_bigon, shnc_experiment

rep = culler_shalen_experiment(trials=10, seed=7)
print(rep.text())

rep = shnc_experiment(trials=10, seed=0, rank=2)
print("\n".join(rep.lines[:5]))
print({k: v for k, v in rep.counters.items()}, "ok" if rep.ok else "FAIL")

# a bigon from the edge group <a^2>: identifying its two sides folds it to <a>
X = reduce_to_valence_three(build_representing([["a", "b"], ["a", "b"]], [(0, 1, ["aa"])], 2))[0]
res = resolve_bigon(X, bigons(X)[0])
print(res.case, "K rank", res.k_graph.betti_number(), res.checks)

rep = bigon_experiment(trials=6, seed=random.Random(1).randrange(100))
print(rep.text())
