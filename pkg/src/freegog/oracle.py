"""Naive ground truth for subgroup membership and intersection.

Nothing here touches graphs: subgroup elements are produced by breadth-first
closure of ``{1}`` under left multiplication by the generators and their
inverses, discarding any product longer than the cap.  An element whose every
expression passes through a word longer than the cap is missed, so callers
compare only on the ball of radius ``max_len - max generator length``.
"""

from __future__ import annotations

from typing import Iterable

from .errors import OracleLimit
from .words import Letter, Word

MAX_LEN_GUARD = 12
DEFAULT_BUDGET = 400_000


def _encode(generators: list[Word]) -> tuple[list[str], dict[str, Letter]]:
    # words as strings, one character per letter, inverse letter = swapped case; plain str keeps
    # the closure loop cheap
    alpha = {}
    for g in generators:
        for x in g:
            c = chr(ord("a") + x.generator)
            alpha[c], alpha[c.upper()] = Letter(x.generator, 1), Letter(x.generator, -1)
    code = {v: k for k, v in alpha.items()}
    return ["".join(code[x] for x in g) for g in generators if len(g)], alpha


def _closure(gens: list[str], caps: Iterable[int], budget: int | None):
    """Yield ``(cap, elements)`` for each cap in the increasing sequence ``caps``.

    Products longer than the current cap are parked by length; raising the
    cap resumes the search from the parked ones, so each cap's set is the
    same as a fresh closure under that cap.
    """
    moves = list(dict.fromkeys(gens + [g[::-1].swapcase() for g in gens]))
    # cancelling g against w removes the longest common prefix of w and g⁻¹
    pairs = [(g, g[::-1].swapcase()) for g in moves]
    caps = list(caps)
    top = caps[-1]
    seen: set[str] = set()
    parked: dict[int, list[str]] = {0: [""]}
    for cap in caps:
        frontier = []
        for n in sorted(k for k in parked if k <= cap):
            for u in parked.pop(n):
                if u not in seen:
                    seen.add(u)
                    frontier.append(u)
        while frontier:
            nxt = []
            for w in frontier:
                for g, ginv in pairs:
                    if w[:1] != ginv[:1]:
                        u = g + w
                    else:
                        k = 1
                        n = min(len(g), len(w))
                        while k < n and w[k] == ginv[k]:
                            k += 1
                        u = g[: len(g) - k] + w[k:]
                    if len(u) > cap:
                        if len(u) <= top:
                            parked.setdefault(len(u), []).append(u)
                    elif u not in seen:
                        seen.add(u)
                        nxt.append(u)
                if budget is not None and len(seen) > budget:
                    raise OracleLimit(f"closure exceeded {budget} elements")
            frontier = nxt
        yield cap, seen


def _decode(seen: Iterable[str], alpha: dict[str, Letter], radius: int | None) -> set[Word]:
    return {Word.from_reduced(tuple(alpha[c] for c in u)) for u in seen if radius is None or len(u) <= radius}


def enumerate_elements(
    generators: Iterable[Word],
    max_len: int,
    budget: int | None = DEFAULT_BUDGET,
    radius: int | None = None,
) -> set[Word]:
    """All subgroup elements of length ≤ ``max_len`` reachable by the closure.

    If ``radius`` is given only elements of length ≤ ``radius`` are returned
    (the closure itself still runs up to ``max_len``).  Raises
    :class:`OracleLimit` if ``max_len`` exceeds the guard or the set grows
    past ``budget`` elements.
    """
    if max_len > MAX_LEN_GUARD:
        raise OracleLimit(f"max_len {max_len} exceeds the oracle guard {MAX_LEN_GUARD}")
    gens, alpha = _encode(list(generators))
    ((_, seen),) = _closure(gens, [max_len], budget)
    return _decode(seen, alpha, radius)


def complete_radius(generators: Iterable[Word], max_len: int) -> int:
    """Radius of the ball on which the closure with cap ``max_len`` is trusted."""
    return max_len - max((len(g) for g in generators), default=0)


def certified_ball(
    generators: Iterable[Word],
    radius: int,
    budget: int | None = DEFAULT_BUDGET,
) -> tuple[set[Word], int]:
    """Subgroup elements on the largest trusted ball of radius ≤ ``radius``.

    Raises the cap one step at a time from the longest generator length
    ``L`` towards ``radius + L`` (clipped to the guard) and keeps the last cap
    that fits the budget.  Returns the elements and the radius covered.
    """
    generators = [g for g in generators if len(g)]
    gens, alpha = _encode(generators)
    longest = max((len(g) for g in generators), default=0)
    caps = range(longest, max(longest, min(MAX_LEN_GUARD, radius + longest)) + 1)
    best = None
    try:
        for cap, seen in _closure(gens, caps, budget):
            best = cap, set(seen)
    except OracleLimit:
        if best is None:
            raise
    cap, seen = best
    r = complete_radius(generators, cap)
    return _decode(seen, alpha, r), r


def brute_intersection(
    g1: Iterable[Word],
    g2: Iterable[Word],
    max_len: int,
    budget: int | None = DEFAULT_BUDGET,
    radius: int | None = None,
) -> set[Word]:
    return enumerate_elements(g1, max_len, budget, radius) & enumerate_elements(
        g2, max_len, budget, radius
    )


def certified_intersection(
    g1: Iterable[Word],
    g2: Iterable[Word],
    radius: int,
    budget: int | None = DEFAULT_BUDGET,
) -> tuple[set[Word], int]:
    """Common elements on the smaller of the two trusted balls; returns the set and its radius."""
    e1, r1 = certified_ball(g1, radius, budget)
    e2, r2 = certified_ball(g2, radius, budget)
    r = min(r1, r2)
    return {w for w in e1 & e2 if len(w) <= r}, r


def ball(elements: set[Word], radius: int) -> set[Word]:
    return {w for w in elements if len(w) <= radius}
