"""Subgroup graphs: folding, membership, intersections and joins."""

from freegog import contains, graph_from_words, intersection_subgroup, join, parse_word, parse_words
from freegog.graphs import generators, to_text
from freegog.oracle import certified_ball

# <aa, ab, bb> is the subgroup of even-length words in F_2
H = graph_from_words(parse_words("aa ab bb"), 2)
print(to_text(H))
print("rank", H.rank(), "chi", H.euler_characteristic())

for w in ["ab", "aB", "abab", "a"]:
    print(w, contains(H, parse_word(w)))

# the brute-force closure agrees on every word it can vouch for
elements, r = certified_ball(parse_words("aa ab bb"), 6)
print("oracle radius", r, "elements", len(elements))

# conjugates of <a, bab^-1> meet in <a> only
A = graph_from_words(parse_words("a bAB", 3), 3)
B = graph_from_words(parse_words("a Bab", 3), 3)
M = intersection_subgroup(A, B)
print("intersection", [str(w) for w in generators(M)])

# <a^2, b> and <a^3, b> meet in <a^6, b>
M = intersection_subgroup(graph_from_words(["aa", "b"], 2), graph_from_words(["aaa", "b"], 2))
print("intersection", [str(w) for w in generators(M)])

J = join(graph_from_words(["a", "b"], 3), graph_from_words(["c", "ab"], 3))
print("join rank", J.rank())
