"""Transitive subshifts of finite type: admissibility, metric, closing, periodic words.

Symbols are 1-based (1..m).  Bi-infinite sequences are never stored; every
operation works on finite anchored windows (`Word`) or on periodic points
represented by one period (`CyclicWord`).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import exp

import numpy as np

from .errors import (
    DisjointRanges,
    EmptyAlphabet,
    NonTransitive,
    NotAdmissible,
    PeriodTooLarge,
    SymbolOutOfRange,
)

DEFAULT_ENUMERATION_CAP = 10**6


@dataclass(frozen=True)
class Word:
    """Finite window of a sequence.

    ``symbols[anchor]`` sits at position 0, so the word covers positions
    ``-anchor .. len(symbols)-1-anchor``.  The anchor may lie outside the
    stored symbols, describing a window strictly left or right of position 0.
    """

    symbols: tuple[int, ...]
    anchor: int = 0

    def __post_init__(self):
        if not self.symbols:
            raise ValueError("empty word")

    @property
    def span(self) -> tuple[int, int]:
        """Covered index range (lo, hi), inclusive."""
        return -self.anchor, len(self.symbols) - 1 - self.anchor

    @property
    def radius(self) -> int:
        """Largest r such that all positions |i| <= r are covered."""
        lo, hi = self.span
        return min(-lo, hi)

    def symbol_at(self, i: int) -> int:
        lo, hi = self.span
        if not lo <= i <= hi:
            raise IndexError(f"position {i} outside covered range [{lo}, {hi}]")
        return self.symbols[self.anchor + i]


@dataclass(frozen=True)
class CyclicWord:
    """One period of a sequence fixed by the n-th shift power."""

    symbols: tuple[int, ...]

    def __post_init__(self):
        if not self.symbols:
            raise ValueError("empty cyclic word")

    @property
    def period(self) -> int:
        return len(self.symbols)

    def symbol_at(self, i: int) -> int:
        return self.symbols[i % self.period]

    def __str__(self) -> str:
        return ",".join(str(s) for s in self.symbols)


@dataclass(frozen=True)
class DistanceBound:
    """Shift-metric value e^{-N}; `truncated` marks an upper bound forced by finite windows."""

    value: float
    truncated: bool


@dataclass(frozen=True, eq=False)
class ShiftSpace:
    """Transitive SFT given by a 0/1 transition matrix on symbols 1..m.

    `closing_constant` is the largest, over ordered symbol pairs (i, j), of
    the length of the shortest connecting word strictly between i and j.
    Produced by `build_shift`, which also rejects non-transitive matrices.
    """

    alphabet_size: int
    transition: np.ndarray
    closing_constant: int
    _connectors: dict = field(repr=False)

    def allowed(self, a: int, b: int) -> bool:
        """True iff the transition a -> b is admissible."""
        return bool(self.transition[a - 1, b - 1])

    def successors(self, a: int) -> tuple[int, ...]:
        return tuple(int(b) + 1 for b in np.flatnonzero(self.transition[a - 1]))

    def connector(self, a: int, b: int) -> tuple[int, ...]:
        """Shortest (then lexicographically smallest) word w with a,w,b admissible."""
        return self._connectors[(a, b)]


def _shortest_connector(Q: np.ndarray, i: int, j: int) -> tuple[int, ...] | None:
    """BFS for the shortest, lex-smallest word strictly between symbols i and j (0-based)."""
    m = Q.shape[0]
    # frontier maps "last vertex of the prefix" -> lex-min prefix of the current length
    frontier: dict[int, tuple[int, ...]] = {i: ()}
    for _ in range(m + 1):
        hits = [w for last, w in frontier.items() if Q[last, j]]
        if hits:
            return min(hits)
        nxt: dict[int, tuple[int, ...]] = {}
        for last, w in sorted(frontier.items(), key=lambda kv: kv[1]):
            for s in np.flatnonzero(Q[last]):
                s = int(s)
                cand = w + (s + 1,)
                if s not in nxt or cand < nxt[s]:
                    nxt[s] = cand
        frontier = nxt
        if not frontier:
            return None
    return None


def build_shift(transition) -> ShiftSpace:
    """Build a ShiftSpace from a 0/1 matrix, computing the closing constant.

    Raises NonTransitive when some ordered symbol pair has no admissible
    connecting path, EmptyAlphabet on a 0x0 matrix.
    """
    Q = np.asarray(transition, dtype=np.int64)
    if Q.size == 0:
        raise EmptyAlphabet("transition matrix has no symbols")
    if Q.ndim != 2 or Q.shape[0] != Q.shape[1]:
        raise ValueError(f"transition matrix must be square, got shape {Q.shape}")
    if not np.isin(Q, (0, 1)).all():
        raise ValueError("transition entries must be 0 or 1")
    m = Q.shape[0]
    connectors: dict[tuple[int, int], tuple[int, ...]] = {}
    for i in range(m):
        for j in range(m):
            w = _shortest_connector(Q, i, j)
            if w is None:
                raise NonTransitive(f"no admissible path from symbol {i + 1} to {j + 1}")
            connectors[(i + 1, j + 1)] = w
    ell = max(len(w) for w in connectors.values())
    return ShiftSpace(alphabet_size=m, transition=Q, closing_constant=ell, _connectors=connectors)


def _check_symbols(symbols, m: int) -> None:
    for s in symbols:
        if not 1 <= s <= m:
            raise SymbolOutOfRange(f"symbol {s} outside 1..{m}")


def is_admissible(w: Word | CyclicWord, shift: ShiftSpace) -> bool:
    """True iff all adjacent transitions (including wrap-around for cyclic words) are allowed."""
    _check_symbols(w.symbols, shift.alphabet_size)
    pairs = zip(w.symbols, w.symbols[1:])
    ok = all(shift.allowed(a, b) for a, b in pairs)
    if ok and isinstance(w, CyclicWord):
        ok = shift.allowed(w.symbols[-1], w.symbols[0])
    return ok


def close_word(w: Word, shift: ShiftSpace) -> CyclicWord:
    """Complete an admissible word into a periodic word with a minimal connector.

    The result starts with `w` and appends the shortest admissible word from
    the last symbol of `w` back to its first (lexicographically smallest among
    shortest), so its period is at most len(w) + closing_constant.
    """
    if not is_admissible(w, shift):
        raise NotAdmissible(f"word {w.symbols} is not admissible")
    connector = shift.connector(w.symbols[-1], w.symbols[0])
    return CyclicWord(w.symbols + connector)


def _int_matpow(Q: np.ndarray, n: int) -> list[list[int]]:
    """Exact integer power of a small matrix (Python ints, no overflow)."""
    m = Q.shape[0]
    base = [[int(Q[i, j]) for j in range(m)] for i in range(m)]
    result = [[1 if i == j else 0 for j in range(m)] for i in range(m)]

    def mul(A, B):
        return [[sum(A[i][k] * B[k][j] for k in range(m)) for j in range(m)] for i in range(m)]

    while n:
        if n & 1:
            result = mul(result, base)
        base = mul(base, base)
        n >>= 1
    return result


def periodic_count(shift: ShiftSpace, n: int) -> int:
    """Number of words fixed by the n-th shift power: trace of the n-th matrix power."""
    P = _int_matpow(shift.transition, n)
    return sum(P[i][i] for i in range(shift.alphabet_size))


def enumerate_periodic(
    shift: ShiftSpace, n: int, cap: int = DEFAULT_ENUMERATION_CAP
) -> list[CyclicWord]:
    """All admissible cyclic words of length exactly n, lexicographically sorted.

    Words whose least period strictly divides n are included (they are fixed
    by the n-th shift power too), so the count equals the transition-matrix
    trace at power n.  Raises PeriodTooLarge when that count exceeds `cap`.
    """
    if n < 1:
        raise ValueError("period must be >= 1")
    count = periodic_count(shift, n)
    if count > cap:
        raise PeriodTooLarge(f"{count} periodic words of length {n} exceed cap {cap}")
    out: list[CyclicWord] = []
    prefix = [0] * n

    def extend(depth: int, first: int, last: int) -> None:
        if depth == n:
            if shift.allowed(last, first):
                out.append(CyclicWord(tuple(prefix)))
            return
        for s in range(1, shift.alphabet_size + 1):
            if shift.allowed(last, s):
                prefix[depth] = s
                extend(depth + 1, first, s)

    for start in range(1, shift.alphabet_size + 1):
        prefix[0] = start
        if n == 1:
            if shift.allowed(start, start):
                out.append(CyclicWord((start,)))
        else:
            extend(1, start, start)
    assert len(out) == count
    return out


def enumerate_words(shift: ShiftSpace, length: int):
    """Yield every admissible linear word of the given length (anchored at 0)."""
    prefix = [0] * length

    def extend(depth: int):
        if depth == length:
            yield Word(tuple(prefix))
            return
        for s in range(1, shift.alphabet_size + 1):
            if depth == 0 or shift.allowed(prefix[depth - 1], s):
                prefix[depth] = s
                yield from extend(depth + 1)

    yield from extend(0)


def random_word(shift: ShiftSpace, length: int, rng: np.random.Generator, anchor: int = 0) -> Word:
    """Admissible word sampled by a random walk, uniform over allowed successors."""
    symbols = [int(rng.integers(1, shift.alphabet_size + 1))]
    for _ in range(length - 1):
        succ = shift.successors(symbols[-1])
        symbols.append(succ[int(rng.integers(len(succ)))])
    return Word(tuple(symbols), anchor=anchor)


def shift_distance(w1: Word, w2: Word) -> DistanceBound:
    """Shift metric e^{-N} between two windows, N the least |n| where they differ.

    When the windows agree on their whole common range, the true distance is
    not determined; the returned value e^{-(R+1)}, with R the common radius
    around 0, is an upper bound and is flagged `truncated`.
    """
    lo1, hi1 = w1.span
    lo2, hi2 = w2.span
    lo, hi = max(lo1, lo2), min(hi1, hi2)
    if lo > hi:
        raise DisjointRanges(f"windows cover [{lo1},{hi1}] and [{lo2},{hi2}]")
    for n in range(0, max(-lo, hi) + 1):
        if lo <= n <= hi and w1.symbol_at(n) != w2.symbol_at(n):
            return DistanceBound(exp(-n), truncated=False)
        if n != 0 and lo <= -n <= hi and w1.symbol_at(-n) != w2.symbol_at(-n):
            return DistanceBound(exp(-n), truncated=False)
    radius = min(-lo, hi)
    return DistanceBound(exp(-(radius + 1)), truncated=True)
