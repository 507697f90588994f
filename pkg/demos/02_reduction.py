"""Build a graph of graphs over the rose and reduce it to valence three."""

from freegog import build_representing, mid_graph, parse_words, reduce_to_valence_three
from freegog.dot import to_dot
from freegog.reduction import format_trace
from freegog.shnc import census_checks, delta_statistics, identity_check, shnc_inequality

# H1 = <a, b>, H2 = <b, c> in F_3, glued along M = <b>
X = build_representing([parse_words("a b", 3), parse_words("b c", 3)], [(0, 1, parse_words("b", 3))], 3)
print("built", X.complexity(), "valences", X.valences())

T, trace = reduce_to_valence_three(X)
print(format_trace(trace))
print("terminal", T.complexity(), "valences", T.valences())
print("mid-graph rank", mid_graph(T).betti_number())

stats = delta_statistics(T)
ident = identity_check(stats, T)
print("sigma1", len(stats.sigma1), "sigma2", len(stats.sigma2), "mu", stats.mu)
print("lhs", ident.lhs, "rhs", ident.rhs, "equal", ident.equal)
print(census_checks(T, stats))
print("chi(H1)chi(H2) + chi(M) =", shnc_inequality(T)[0])

# one cluster per underlying vertex
print(to_dot(T))
