"""Periodic shadowing of finite orbit segments and the error bounds it produces.

A window of radius n around position 0 is closed into a periodic word that
agrees with it on |i| <= n.  The generator difference along the two orbits
then decays like e^{-beta (n - |i|)}, and singular values of the respective
products stay within the accumulated error of each other.  These facts are
checked numerically, row by row, with explicit bounds.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from math import comb, exp, floor, log

import numpy as np

from .cocycle import (
    FiniteRangeCocycle,
    RunningProduct,
    evaluate,
    holder_constant,
    log_singular_values,
    scaled_product,
    spectral_norm,
)
from .errors import InsufficientSamples, WindowTooShort
from .sampling import SamplePlan, collect_samples
from .sft import CyclicWord, ShiftSpace, Word, close_word


@dataclass(frozen=True, eq=False)
class ShadowPair:
    """A target window and a periodic word agreeing with it on |i| <= radius.

    Index 0 of the stored cyclic word corresponds to shift position -radius,
    so the shadow orbit's position i lives at cyclic index i + radius.
    """

    target: Word
    shadow: CyclicWord
    radius: int

    def shadow_symbol(self, i: int) -> int:
        return self.shadow.symbol_at(i + self.radius)


@dataclass(frozen=True)
class ErrorTerm:
    position: int
    actual: float
    bound: float
    passed: bool


@dataclass(frozen=True)
class ComparisonRow:
    steps: int
    index: int
    sigma_orbit: float
    sigma_shadow: float
    difference: float
    bound: float
    passed: bool


@dataclass(frozen=True)
class BinomBound:
    c_kappa: float
    n_at_max: int
    k_at_max: int


def shadow_pair(w: Word, shift: ShiftSpace, radius: int | None = None) -> ShadowPair:
    """Close the radius-n part of `w` into a periodic word of period <= 2n+1+ell."""
    n = w.radius if radius is None else radius
    if n < 0 or n > w.radius:
        raise WindowTooShort(f"window radius {w.radius} cannot supply agreement radius {n}")
    segment = Word(tuple(w.symbol_at(i) for i in range(-n, n + 1)), anchor=0)
    return ShadowPair(target=w, shadow=close_word(segment, shift), radius=n)


def error_terms(
    A: FiniteRangeCocycle, pair: ShadowPair, positions=None
) -> list[ErrorTerm]:
    """Generator differences along target vs shadow orbit against the Holder bound.

    The bound at position i is C1 e^{-beta (n - |i|)} with n the agreement
    radius and C1 the cocycle's exact Holder constant at that depth.  For a
    range-0 generator the difference vanishes identically on |i| <= n.
    """
    r = A.radius
    lo, hi = pair.target.span
    if positions is None:
        positions = range(lo + r, hi - r + 1)
    n = pair.radius
    c1 = holder_constant(A, n)
    beta = A.holder_exponent
    rows = []
    for i in positions:
        diff = evaluate(A, pair.target, i) - evaluate(A, pair.shadow, i + n)
        actual = spectral_norm(diff)
        bound = c1 * exp(-beta * (n - abs(i)))
        rows.append(ErrorTerm(i, actual, bound, passed=actual <= bound + 1e-12))
    return rows


def kalinin_gap(
    A: FiniteRangeCocycle,
    shift: ShiftSpace,
    lam1: float,
    depth: int,
    plan: SamplePlan = SamplePlan(),
    threads: int = 1,
) -> np.ndarray:
    """Excess of (1/n) log ||A^n|| over lam1, maximized over sampled orbits, n = 1..depth.

    With lam1 the top periodic exponent this should stay bounded by
    (log C)/n; unchecked growth would contradict the norm bound that constant
    or narrow periodic data forces on every orbit.
    """
    if 2 * A.radius >= depth:
        raise WindowTooShort(f"depth {depth} too small for generator radius {A.radius}")
    samples = collect_samples(shift, plan, window_length=2 * depth, anchor=A.radius)
    if not samples:
        raise InsufficientSamples("sampling plan produced no orbit segments")

    def log_norms(sample) -> np.ndarray:
        _, w = sample
        acc = RunningProduct(A.dimension)
        out = np.empty(depth)
        for i in range(depth):
            acc.push(evaluate(A, w, i))
            out[i] = acc.scaled().log_top_singular()
        return out

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            series = list(pool.map(log_norms, samples))
    else:
        series = [log_norms(s) for s in samples]
    worst = np.max(np.stack(series), axis=0)
    ns = np.arange(1, depth + 1, dtype=float)
    return worst / ns - lam1


def binom_bound_check(kappa: float, n_max: int) -> BinomBound:
    """Empirical constant for the bound C(n,k) <= C_kappa e^{n k kappa}, 1 <= k <= n <= n_max."""
    if kappa <= 0:
        raise ValueError("kappa must be > 0")
    best = -np.inf
    arg = (1, 1)
    for n in range(1, n_max + 1):
        for k in range(1, n + 1):
            v = log(comb(n, k)) - n * k * kappa
            if v > best:
                best = v
                arg = (n, k)
    return BinomBound(c_kappa=exp(best), n_at_max=arg[0], k_at_max=arg[1])


def singular_comparison(
    A: FiniteRangeCocycle,
    shift: ShiftSpace,
    w: Word,
    gamma: float,
    radius: int,
) -> list[ComparisonRow]:
    """Singular values of i-step products along `w` vs its radius-n shadow, i near gamma*n.

    Each row checks the perturbation bound: the difference of the j-th
    singular values may not exceed the norm of the difference of the two
    products.  For a range-0 generator the compared products are identical,
    so every entry must be exactly zero.
    """
    if not 0.0 < gamma < 1.0:
        raise ValueError("gamma must lie in (0, 1)")
    pair = shadow_pair(w, shift, radius=radius)
    n = pair.radius
    r = A.radius
    _, hi = w.span
    i0 = floor(gamma * n)
    i1 = min(i0 + shift.closing_constant, hi + 1 - r)
    if i0 < 1 or i0 > hi + 1 - r:
        raise WindowTooShort(f"window cannot support {i0}-step products")
    rows = []
    for i in range(i0, i1 + 1):
        logs_x = log_singular_values(A, pair.target, i)
        logs_y = log_singular_values(A, pair.shadow, i, start=n)
        X = scaled_product(A, pair.target, i)
        Y = scaled_product(A, pair.shadow, i, start=n)
        s = max(X.log_scale, Y.log_scale)
        D = X.mat * exp(X.log_scale - s) - Y.mat * exp(Y.log_scale - s)
        err = spectral_norm(D) * exp(s)
        for j in range(A.dimension):
            sx, sy = exp(logs_x[j]), exp(logs_y[j])
            hi_log = max(logs_x[j], logs_y[j])
            diff = exp(hi_log) * -np.expm1(-abs(logs_x[j] - logs_y[j]))
            tol = 1e-9 * (sx + sy + err)
            rows.append(
                ComparisonRow(
                    steps=i,
                    index=j + 1,
                    sigma_orbit=sx,
                    sigma_shadow=sy,
                    difference=diff,
                    bound=err,
                    passed=diff <= err + tol,
                )
            )
    return rows
