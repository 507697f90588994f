"""Seeded random words and subgroups."""

from __future__ import annotations

import random

from .words import Letter, Word


def trial_seed(seed: int, trial: int) -> int:
    """Per-trial seed, so any single trial can be rerun on its own."""
    return seed * 100_003 + trial


def random_word(rng: random.Random, rank: int, max_len: int, min_len: int = 1) -> Word:
    """A uniformly random reduced word whose length is uniform on ``[min_len, max_len]``."""
    n = rng.randint(min_len, max_len)
    letters: list[Letter] = []
    while len(letters) < n:
        x = Letter(rng.randrange(rank), rng.choice((1, -1)))
        if letters and letters[-1] == x.inverse():
            continue
        letters.append(x)
    return Word.from_reduced(tuple(letters))


def random_subgroup(rng: random.Random, rank: int, n_generators: int, max_len: int) -> list[Word]:
    return [random_word(rng, rank, max_len) for _ in range(n_generators)]
