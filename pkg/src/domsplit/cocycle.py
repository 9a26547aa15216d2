"""Finite-range matrix cocycle generators and products along words.

The generator is a table from admissible (2r+1)-symbol windows to invertible
d x d matrices.  Products along orbits are accumulated with periodic
renormalization so that quantities like log ||A^n|| stay accurate for n in
the thousands; singular values of long products are recovered on log scale
through compound (exterior-power) matrices, whose *top* singular value is
always well conditioned.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from math import comb, exp, log

import numpy as np

from .errors import InadmissibleWindow, NumericalBreakdown, WindowTooShort
from .sft import CyclicWord, Word

DEFAULT_COND_CAP = 1e12
SV_COND_CAP = 1e15
_RENORM_LOG = 300.0
_RENORM_HI = exp(_RENORM_LOG)
_RENORM_LO = exp(-_RENORM_LOG)


def spectral_norm(M: np.ndarray) -> float:
    return float(np.linalg.svd(M, compute_uv=False)[0])


@dataclass(frozen=True, eq=False)
class SingularSpectrum:
    """Non-increasing singular values; the last one is the conorm m(A) = 1/||A^-1||."""

    values: np.ndarray

    @property
    def conorm(self) -> float:
        return float(self.values[-1])

    def __getitem__(self, i: int) -> float:
        return float(self.values[i])

    def __len__(self) -> int:
        return len(self.values)


@dataclass(frozen=True, eq=False)
class ScaledMatrix:
    """Matrix stored as mat * e^log_scale to dodge overflow in long products."""

    mat: np.ndarray
    log_scale: float

    def dense(self) -> np.ndarray:
        """Plain matrix; may overflow for extreme log_scale."""
        return self.mat * exp(self.log_scale)

    def log_top_singular(self) -> float:
        return log(spectral_norm(self.mat)) + self.log_scale


@dataclass(frozen=True, eq=False)
class FiniteRangeCocycle:
    """Matrix cocycle generator depending on a symbol window of radius `radius`.

    `norm_bound` is a number mu with ||A(w)|| <= e^mu for every window;
    `holder_exponent` is the beta for which the generator is declared
    beta-Holder (any beta in (0,1] is valid for a finite-range table).
    """

    dimension: int
    radius: int
    table: dict = field(repr=False)
    holder_exponent: float
    norm_bound: float


def build_cocycle(
    matrices: dict,
    beta: float = 1.0,
    norm_bound: float | None = None,
    cond_cap: float = DEFAULT_COND_CAP,
) -> FiniteRangeCocycle:
    """Validate a window->matrix table and package it as a cocycle generator.

    Every matrix must be square of one common dimension and invertible up to
    `cond_cap`; keys must be symbol tuples of one common odd length 2r+1.
    """
    if not matrices:
        raise ValueError("empty generator table")
    if not 0.0 < beta <= 1.0:
        raise ValueError(f"holder exponent must lie in (0, 1], got {beta}")
    table: dict[tuple[int, ...], np.ndarray] = {}
    width = None
    dim = None
    max_log_norm = -np.inf
    for key, M in matrices.items():
        key = tuple(int(s) for s in key)
        if width is None:
            width = len(key)
            if width % 2 == 0:
                raise ValueError(f"window length must be odd, got {width}")
        elif len(key) != width:
            raise ValueError("all window keys must have the same length")
        A = np.array(M, dtype=float)
        if dim is None:
            dim = A.shape[0]
        if A.shape != (dim, dim):
            raise ValueError(f"matrix for window {key} has shape {A.shape}, expected ({dim},{dim})")
        if not np.isfinite(A).all():
            raise NumericalBreakdown(f"non-finite entries in matrix for window {key}")
        sv = np.linalg.svd(A, compute_uv=False)
        if sv[-1] <= 0.0 or sv[0] / sv[-1] > cond_cap:
            raise NumericalBreakdown(
                f"matrix for window {key} is singular or has condition number beyond {cond_cap:g}"
            )
        max_log_norm = max(max_log_norm, log(sv[0]))
        A.setflags(write=False)
        table[key] = A
    if norm_bound is None:
        norm_bound = max_log_norm
    elif norm_bound < max_log_norm - 1e-12:
        raise ValueError(
            f"norm_bound {norm_bound} is below log of the largest generator norm {max_log_norm}"
        )
    return FiniteRangeCocycle(
        dimension=int(dim),
        radius=(width - 1) // 2,
        table=table,
        holder_exponent=float(beta),
        norm_bound=float(norm_bound),
    )


def locally_constant(matrices: dict, beta: float = 1.0) -> FiniteRangeCocycle:
    """Range-0 cocycle from a symbol -> matrix map."""
    return build_cocycle({(int(s),): M for s, M in matrices.items()}, beta=beta)


def _window_key(A: FiniteRangeCocycle, w: Word | CyclicWord, pos: int) -> tuple[int, ...]:
    r = A.radius
    if isinstance(w, CyclicWord):
        return tuple(w.symbol_at(i) for i in range(pos - r, pos + r + 1))
    lo, hi = w.span
    if pos - r < lo or pos + r > hi:
        raise WindowTooShort(
            f"window covers [{lo},{hi}], need [{pos - r},{pos + r}] for position {pos}"
        )
    return tuple(w.symbol_at(i) for i in range(pos - r, pos + r + 1))


def evaluate(A: FiniteRangeCocycle, w: Word | CyclicWord, pos: int = 0) -> np.ndarray:
    """Generator matrix at shift position `pos` of the window `w`."""
    key = _window_key(A, w, pos)
    try:
        return A.table[key]
    except KeyError:
        raise InadmissibleWindow(f"window {key} not in the generator's domain") from None


class RunningProduct:
    """Left-multiplying accumulator with automatic rescaling."""

    def __init__(self, dim: int):
        self.mat = np.eye(dim)
        self.log_scale = 0.0

    def push(self, M: np.ndarray) -> None:
        self.mat = M @ self.mat
        norm = np.linalg.norm(self.mat)
        if norm > _RENORM_HI or 0.0 < norm < _RENORM_LO:
            self.mat = self.mat / norm
            self.log_scale += log(norm)

    def scaled(self) -> ScaledMatrix:
        return ScaledMatrix(self.mat.copy(), self.log_scale)


def scaled_product(
    A: FiniteRangeCocycle, w: Word | CyclicWord, n: int, start: int = 0
) -> ScaledMatrix:
    """n-step cocycle product along `w` from `start`, leftmost factor at position start+n-1."""
    if n < 1:
        raise ValueError("product length must be >= 1")
    acc = RunningProduct(A.dimension)
    for i in range(start, start + n):
        acc.push(evaluate(A, w, i))
    return acc.scaled()


def product(A: FiniteRangeCocycle, w: Word | CyclicWord, n: int, start: int = 0) -> np.ndarray:
    """Plain n-step product; use scaled_product when e^±300 overflow is possible."""
    return scaled_product(A, w, n, start).dense()


def compound_matrix(M: np.ndarray, k: int) -> np.ndarray:
    """k-th multiplicative compound: determinants of k x k minors, index subsets in lex order.

    Satisfies compound(AB) = compound(A) compound(B) and
    ||compound(M)|| = sigma_1(M) ... sigma_k(M).
    """
    d = M.shape[0]
    if not 1 <= k <= d:
        raise ValueError(f"compound order {k} outside 1..{d}")
    if k == 1:
        return M.copy()
    subsets = [list(c) for c in combinations(range(d), k)]
    C = np.empty((len(subsets), len(subsets)))
    for a, rows in enumerate(subsets):
        Mr = M[rows, :]
        for b, cols in enumerate(subsets):
            C[a, b] = np.linalg.det(Mr[:, cols])
    return C


def exterior_power(A: FiniteRangeCocycle, k: int) -> FiniteRangeCocycle:
    """Cocycle induced on k-vectors; its generator entries are k-th compounds."""
    if not 1 <= k <= A.dimension:
        raise ValueError(f"exterior power order {k} outside 1..{A.dimension}")
    table = {key: compound_matrix(M, k) for key, M in A.table.items()}
    norm_bound = max(log(spectral_norm(M)) for M in table.values())
    return FiniteRangeCocycle(
        dimension=comb(A.dimension, k),
        radius=A.radius,
        table=table,
        holder_exponent=A.holder_exponent,
        norm_bound=norm_bound,
    )


def singular_values(M: np.ndarray, cond_cap: float = SV_COND_CAP) -> SingularSpectrum:
    """Singular values of a single matrix, largest first."""
    M = np.asarray(M, dtype=float)
    if not np.isfinite(M).all():
        raise NumericalBreakdown("non-finite matrix entries")
    vals = np.linalg.svd(M, compute_uv=False)
    if vals[-1] <= 0.0 or vals[0] / vals[-1] > cond_cap:
        raise NumericalBreakdown(
            f"condition number beyond {cond_cap:g}; use log-scale products instead"
        )
    return SingularSpectrum(vals)


def log_singular_values(
    A: FiniteRangeCocycle, w: Word | CyclicWord, n: int, start: int = 0
) -> np.ndarray:
    """log sigma_i(A^n) for all i, via top singular values of compound products.

    log sigma_k = log ||(A_k)^n|| - log ||(A_{k-1})^n||; each norm is the top
    singular value of a renormalized product, so every entry keeps absolute
    accuracy even when sigma_d / sigma_1 underflows double precision.
    """
    partial = [0.0]
    for k in range(1, A.dimension + 1):
        Ak = A if k == 1 else exterior_power(A, k)
        partial.append(scaled_product(Ak, w, n, start).log_top_singular())
    return np.diff(partial)


def holder_constant(A: FiniteRangeCocycle, depth: int) -> float:
    """Smallest C with ||A(w) - A(w')|| <= C e^{-beta n} over pairs agreeing to depth n <= depth.

    A pair "agrees to depth n" when the windows match at all positions |i| < n
    (n = 0 puts no constraint).  Generator differences vanish once n > radius,
    so the returned C is exact for depth >= radius.
    """
    if depth < 0:
        raise ValueError("depth must be >= 0")
    beta = A.holder_exponent
    r = A.radius
    keys = list(A.table)
    best = 0.0
    for n in range(0, min(depth, r) + 1):
        t = min(n - 1, r)  # agreement radius inside the key; -1 means none
        groups: dict[tuple[int, ...], list[tuple[int, ...]]] = {}
        for key in keys:
            center = key[r - t : r + t + 1] if t >= 0 else ()
            groups.setdefault(center, []).append(key)
        worst = 0.0
        for members in groups.values():
            for a in range(len(members)):
                for b in range(a + 1, len(members)):
                    diff = spectral_norm(A.table[members[a]] - A.table[members[b]])
                    worst = max(worst, diff)
        best = max(best, worst * exp(beta * n))
    return best
