"""Reduced words in the symmetric group S(n).

Letters and move positions are 1-indexed.  A word (i1, ..., ik) stands for
the product s_{i1} s_{i2} ... s_{ik}, and its permutation is returned in
one-line notation.

>>> w = ReducedWord.parse("121321", 4)
>>> str(apply_move(w, Move("R", 1)))
'212321'
>>> len(enumerate_reduced_words(3))
2
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, FrozenSet, Iterable, List, Sequence, Tuple

from .errors import LetterOutOfRange, MoveNotApplicable

__all__ = [
    "ReducedWord",
    "Move",
    "Chain",
    "word_to_permutation",
    "is_reduced",
    "inversions",
    "longest_permutation",
    "apply_move",
    "applicable_moves",
    "enumerate_reduced_words",
    "commutation_classes",
    "move_graph_connected",
    "canonical_chains_n4",
    "chain_union",
    "minimal_word",
    "maximal_word",
    "PRINTED_A42_COUNT",
]

# the count printed for A(4,2); the brute-force enumeration is reported next to it
PRINTED_A42_COUNT = 14


def _check_letters(letters: Sequence[int], n: int) -> None:
    for pos, i in enumerate(letters, 1):
        if not isinstance(i, int) or not 1 <= i <= n - 1:
            raise LetterOutOfRange(f"letter {i!r} at position {pos} is outside 1..{n - 1}")


def word_to_permutation(letters: Sequence[int], n: int) -> Tuple[int, ...]:
    """One-line notation of s_{i1} ... s_{ik}."""
    _check_letters(letters, n)
    perm = list(range(1, n + 1))
    for i in letters:
        # right multiplication by s_i swaps positions i, i+1
        perm[i - 1], perm[i] = perm[i], perm[i - 1]
    return tuple(perm)


def inversions(perm: Sequence[int]) -> int:
    n = len(perm)
    return sum(1 for i in range(n) for j in range(i + 1, n) if perm[i] > perm[j])


def is_reduced(letters: Sequence[int], n: int) -> bool:
    return inversions(word_to_permutation(letters, n)) == len(letters)


def longest_permutation(n: int) -> Tuple[int, ...]:
    return tuple(range(n, 0, -1))


@dataclass(frozen=True)
class ReducedWord:
    n: int
    letters: Tuple[int, ...]

    def __post_init__(self):
        if self.n < 2:
            raise ValueError("n must be at least 2")
        object.__setattr__(self, "letters", tuple(self.letters))
        if not is_reduced(self.letters, self.n):
            raise ValueError(f"{self.letters} is not reduced in S({self.n})")

    @classmethod
    def parse(cls, text: str, n: int) -> "ReducedWord":
        """Digits, optionally separated by commas or spaces ("121321" or "1,2,1")."""
        if "," in text or " " in text.strip():
            parts = [p for p in text.replace(",", " ").split() if p]
        else:
            parts = list(text.strip())
        try:
            letters = tuple(int(p) for p in parts)
        except ValueError:
            raise LetterOutOfRange(f"cannot read letters from {text!r}") from None
        return cls(n, letters)

    @property
    def permutation(self) -> Tuple[int, ...]:
        return word_to_permutation(self.letters, self.n)

    def is_longest(self) -> bool:
        return self.permutation == longest_permutation(self.n)

    def __len__(self):
        return len(self.letters)

    def __str__(self):
        sep = "," if self.n > 10 else ""
        return sep.join(map(str, self.letters))


@dataclass(frozen=True)
class Move:
    kind: str  # "R" braid, "L" commutation
    k: int

    def __post_init__(self):
        if self.kind not in ("R", "L"):
            raise ValueError(f"move kind must be R or L, got {self.kind!r}")

    @classmethod
    def parse(cls, text: str) -> "Move":
        text = text.strip()
        if len(text) < 4 or text[0] not in "RL" or text[1] != "(" or text[-1] != ")":
            raise ValueError(f"cannot read move {text!r}; expected R(k) or L(k)")
        return cls(text[0], int(text[2:-1]))

    def width(self) -> int:
        return 3 if self.kind == "R" else 2

    def __str__(self):
        return f"{self.kind}({self.k})"


def _move_check(letters: Tuple[int, ...], m: Move) -> None:
    k = m.k - 1
    if k < 0 or k + m.width() > len(letters):
        raise MoveNotApplicable(f"{m} does not fit a word of length {len(letters)}")
    if m.kind == "R":
        i, j, l = letters[k:k + 3]
        if not (i == l and abs(i - j) == 1):
            raise MoveNotApplicable(f"{m} needs a pattern (j, j+1, j) or (j+1, j, j+1), found {(i, j, l)}")
    else:
        i, j = letters[k:k + 2]
        if abs(i - j) < 2:
            raise MoveNotApplicable(f"{m} needs letters at distance >= 2, found {(i, j)}")


def apply_move(w: ReducedWord, m: Move) -> ReducedWord:
    _move_check(w.letters, m)
    k = m.k - 1
    s = list(w.letters)
    if m.kind == "R":
        i, j = s[k], s[k + 1]
        s[k:k + 3] = [j, i, j]
    else:
        s[k], s[k + 1] = s[k + 1], s[k]
    return ReducedWord(w.n, tuple(s))


def applicable_moves(w: ReducedWord, kinds: str = "RL") -> List[Move]:
    out = []
    for kind in kinds:
        m_width = 3 if kind == "R" else 2
        for k in range(1, len(w) - m_width + 2):
            m = Move(kind, k)
            try:
                _move_check(w.letters, m)
            except MoveNotApplicable:
                continue
            out.append(m)
    return out


@lru_cache(maxsize=None)
def _words_of(perm: Tuple[int, ...]) -> FrozenSet[Tuple[int, ...]]:
    # peel a right descent: perm = (perm * s_i) * s_i with one inversion fewer
    if inversions(perm) == 0:
        return frozenset({()})
    out = set()
    for i in range(1, len(perm)):
        if perm[i - 1] > perm[i]:
            q = list(perm)
            q[i - 1], q[i] = q[i], q[i - 1]
            for w in _words_of(tuple(q)):
                out.add(w + (i,))
    return frozenset(out)


def enumerate_reduced_words(n: int) -> List[ReducedWord]:
    """All reduced words of the longest permutation of S(n), sorted."""
    if n < 2:
        raise ValueError("n must be at least 2")
    if n > 7:
        raise ValueError("enumeration is meant for n <= 7")
    return [ReducedWord(n, w) for w in sorted(_words_of(longest_permutation(n)))]


def _components(words: Iterable[ReducedWord], kinds: str) -> List[List[ReducedWord]]:
    words = list(words)
    index = {w.letters: i for i, w in enumerate(words)}
    parent = list(range(len(words)))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i, w in enumerate(words):
        for m in applicable_moves(w, kinds):
            j = index[apply_move(w, m).letters]
            ri, rj = find(i), find(j)
            if ri != rj:
                parent[max(ri, rj)] = min(ri, rj)
    groups: Dict[int, List[ReducedWord]] = {}
    for i, w in enumerate(words):
        groups.setdefault(find(i), []).append(w)
    return sorted(groups.values(), key=lambda g: g[0].letters)


def commutation_classes(n: int) -> List[List[ReducedWord]]:
    """Classes of reduced words of w0(n) under commutation moves only."""
    return _components(enumerate_reduced_words(n), "L")


def move_graph_connected(n: int) -> bool:
    return len(_components(enumerate_reduced_words(n), "RL")) == 1


@dataclass(frozen=True)
class Chain:
    """A start word and a sequence of moves, validated on construction."""

    start: ReducedWord
    moves: Tuple[Move, ...]

    def __post_init__(self):
        object.__setattr__(self, "moves", tuple(self.moves))
        self.words()

    def words(self) -> List[ReducedWord]:
        out = [self.start]
        for m in self.moves:
            out.append(apply_move(out[-1], m))
        return out

    @property
    def end(self) -> ReducedWord:
        return self.words()[-1]

    def reversed_frame(self) -> "Chain":
        """The same chain read right to left: letters reversed, positions mirrored."""
        L = len(self.start)
        moves = [Move(m.kind, L - m.k - m.width() + 2) for m in self.moves]
        return Chain(ReducedWord(self.start.n, self.start.letters[::-1]), tuple(moves))

    def __str__(self):
        return " ".join(map(str, self.moves))


def canonical_chains_n4() -> Tuple[Chain, Chain]:
    """The two move chains from 121321 to 321323 (moves listed in the order applied)."""
    start = ReducedWord(4, (1, 2, 1, 3, 2, 1))
    plus = [Move("R", 1), Move("R", 3), Move("L", 2), Move("L", 5), Move("R", 3), Move("R", 1), Move("L", 3)]
    minus = [Move("L", 3), Move("R", 4), Move("R", 2), Move("L", 4), Move("L", 1), Move("R", 2), Move("R", 4)]
    return Chain(start, tuple(plus)), Chain(start, tuple(minus))


def chain_union(chains: Iterable[Chain]) -> List[ReducedWord]:
    seen = {}
    for c in chains:
        for w in c.words():
            seen.setdefault(w.letters, w)
    return [seen[k] for k in sorted(seen)]


def minimal_word(n: int) -> ReducedWord:
    """s1 s2 s1 s3 s2 s1 ..."""
    letters: List[int] = []
    for k in range(1, n):
        letters.extend(range(k, 0, -1))
    return ReducedWord(n, tuple(letters))


def maximal_word(n: int) -> ReducedWord:
    """s_{n-1} s_{n-2} s_{n-1} s_{n-3} s_{n-2} s_{n-1} ..."""
    letters: List[int] = []
    for k in range(1, n):
        letters.extend(range(n - k, n))
    return ReducedWord(n, tuple(letters))
