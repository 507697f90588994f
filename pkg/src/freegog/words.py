"""Freely reduced words in a finitely generated free group.

Generators are indexed from 0 and written ``a``, ``b``, ``c``, ...; the
inverse of a generator is the corresponding uppercase letter, so ``"abA"`` is
a·b·a⁻¹.  The parser also accepts an exponent suffix (``"a^-1"``, ``"b^3"``)
and ``"1"`` or ``"e"`` for the identity.
"""

from __future__ import annotations

import re
import string
from typing import Iterable, Iterator, NamedTuple, Sequence

from .errors import AlphabetError, WordSyntaxError

MAX_RANK = 26


class Letter(NamedTuple):
    generator: int
    sign: int = 1

    def inverse(self) -> Letter:
        return Letter(self.generator, -self.sign)

    def __str__(self):
        name = string.ascii_lowercase[self.generator]
        return name if self.sign > 0 else name.upper()


def _reduce(letters: Iterable[Letter]) -> tuple[Letter, ...]:
    out: list[Letter] = []
    for x in letters:
        if out and out[-1].generator == x.generator and out[-1].sign == -x.sign:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


class Word(Sequence[Letter]):
    """An element of the free group, stored in freely reduced form."""

    __slots__ = ("letters", "_hash")

    def __init__(self, letters: Iterable[Letter | tuple[int, int]] = ()):
        reduced = _reduce(x if isinstance(x, Letter) else Letter(*x) for x in letters)
        for x in reduced:
            if x.sign not in (1, -1) or x.generator < 0:
                raise ValueError(f"bad letter {x!r}")
        self.letters = reduced

    @classmethod
    def from_reduced(cls, letters: tuple[Letter, ...]) -> Word:
        """Wrap a tuple already known to be freely reduced (no check)."""
        w = cls.__new__(cls)
        w.letters = letters
        return w

    @classmethod
    def identity(cls) -> Word:
        return cls()

    @classmethod
    def generator(cls, index: int, power: int = 1) -> Word:
        sign = 1 if power >= 0 else -1
        return cls([Letter(index, sign)] * abs(power))

    @classmethod
    def parse(cls, text: str, rank: int | None = None) -> Word:
        return parse_word(text, rank)

    def __len__(self):
        return len(self.letters)

    def __getitem__(self, i):
        if isinstance(i, slice):
            return Word(self.letters[i])
        return self.letters[i]

    def __iter__(self) -> Iterator[Letter]:
        return iter(self.letters)

    def __eq__(self, other):
        if isinstance(other, Word):
            return self.letters == other.letters
        return NotImplemented

    def _key(self):
        # shortlex over a < A < b < B < ...
        return (len(self), tuple((x.generator, -x.sign) for x in self.letters))

    def __lt__(self, other: Word):
        return self._key() < other._key()

    def __hash__(self):
        # words are immutable and often hashed many times (oracle sets, balls)
        try:
            return self._hash
        except AttributeError:
            self._hash = hash(self.letters)
            return self._hash

    def __mul__(self, other: Word) -> Word:
        a, b = self.letters, other.letters
        k = 0
        while k < min(len(a), len(b)) and a[-1 - k] == b[k].inverse():
            k += 1
        return Word.from_reduced(a[: len(a) - k] + b[k:])

    def __pow__(self, n: int) -> Word:
        base = self if n >= 0 else self.inverse()
        out = Word()
        for _ in range(abs(n)):
            out = out * base
        return out

    def inverse(self) -> Word:
        return Word.from_reduced(tuple(x.inverse() for x in reversed(self.letters)))

    def conjugate(self, by: Word) -> Word:
        """Return by · self · by⁻¹."""
        return by * self * by.inverse()

    def max_generator(self) -> int:
        return max((x.generator for x in self.letters), default=-1)

    def check_rank(self, rank: int) -> Word:
        if self.max_generator() >= rank:
            raise AlphabetError(f"word {self} uses a generator outside rank {rank}")
        return self

    def __str__(self):
        return "".join(str(x) for x in self.letters) or "1"

    def __repr__(self):
        return f"Word({str(self)!r})"


_TOKEN = re.compile(r"([a-zA-Z])(?:\^(-?\d+))?")


def parse_word(text: str, rank: int | None = None) -> Word:
    """Parse ``text`` into a reduced word, optionally checking the alphabet."""
    s = text.strip()
    if s in ("", "1", "e"):
        return Word()
    letters: list[Letter] = []
    pos = 0
    while pos < len(s):
        m = _TOKEN.match(s, pos)
        if m is None:
            raise WordSyntaxError(f"cannot parse word {text!r} at position {pos}")
        ch, exp = m.group(1), m.group(2)
        gen = ord(ch.lower()) - ord("a")
        sign = 1 if ch.islower() else -1
        power = int(exp) if exp is not None else 1
        if power < 0:
            sign, power = -sign, -power
        letters.extend([Letter(gen, sign)] * power)
        pos = m.end()
    w = Word(letters)
    if rank is not None:
        if rank > MAX_RANK:
            raise AlphabetError(f"rank {rank} exceeds the {MAX_RANK}-letter alphabet")
        bad = [x for x in letters if x.generator >= rank]
        if bad:
            raise AlphabetError(f"word {text!r} uses generator {bad[0]} outside rank {rank}")
    return w


def parse_words(text: str, rank: int | None = None) -> list[Word]:
    """Parse a comma- or whitespace-separated list of words."""
    return [parse_word(tok, rank) for tok in re.split(r"[,\s]+", text.strip()) if tok]


def all_words(rank: int, max_len: int) -> Iterator[Word]:
    """Every reduced word of length at most ``max_len``, in shortlex order."""
    alphabet = [Letter(g, s) for g in range(rank) for s in (1, -1)]
    layer: list[tuple[Letter, ...]] = [()]
    yield Word()
    for _ in range(max_len):
        nxt = []
        for w in layer:
            for x in alphabet:
                if w and w[-1] == x.inverse():
                    continue
                nxt.append(w + (x,))
        yield from (Word.from_reduced(w) for w in nxt)
        layer = nxt
