"""Periodic eigenvalue data: per-orbit exponents, interval reports, classification."""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .cocycle import FiniteRangeCocycle, scaled_product
from .errors import CenterNotSorted, NumericalBreakdown, PeriodTooLarge
from .sft import CyclicWord, ShiftSpace, enumerate_periodic, periodic_count

CONSTANT_TOL = 1e-9
DEFAULT_SYMBOL_CAP = 10**7


class Classification(Enum):
    CONSTANT = "constant"
    NARROW = "narrow"
    NEITHER = "neither"


@dataclass(frozen=True, eq=False)
class PeriodicExponents:
    """Exponents chi_i = (1/n) log |alpha_i| of the n-step return matrix, non-increasing."""

    orbit: CyclicWord
    exponents: np.ndarray


@dataclass(frozen=True, eq=False)
class SpectrumReport:
    """Per-index min/max of periodic exponents over all orbits of period <= max_period."""

    max_period: int
    lo: np.ndarray
    hi: np.ndarray
    lo_witness: tuple[CyclicWord, ...]
    hi_witness: tuple[CyclicWord, ...]
    rows: tuple[PeriodicExponents, ...]

    @property
    def dimension(self) -> int:
        return len(self.lo)


def periodic_exponents(A: FiniteRangeCocycle, p: CyclicWord) -> PeriodicExponents:
    """Exponents of one periodic orbit from the eigenvalues of its return matrix.

    Complex pairs contribute their shared modulus twice, so there are always
    exactly d exponents counted with algebraic multiplicity.
    """
    n = p.period
    ret = scaled_product(A, p, n)
    eigs = np.linalg.eigvals(ret.mat)
    moduli = np.abs(eigs)
    if not np.isfinite(moduli).all() or moduli.min() <= 0.0:
        raise NumericalBreakdown(f"degenerate return-map eigenvalues on orbit {p}")
    chi = (np.log(moduli) + ret.log_scale) / n
    chi[::-1].sort()
    return PeriodicExponents(orbit=p, exponents=chi)


def spectrum_report(
    A: FiniteRangeCocycle,
    shift: ShiftSpace,
    max_period: int,
    symbol_cap: int = DEFAULT_SYMBOL_CAP,
    threads: int = 1,
) -> SpectrumReport:
    """Exact per-index exponent intervals over every cyclic word of length <= max_period.

    Enumeration is exhaustive; if the total number of orbit symbols would
    exceed `symbol_cap` the call refuses rather than silently sampling.
    """
    if max_period < 1:
        raise ValueError("max_period must be >= 1")
    total = sum(n * periodic_count(shift, n) for n in range(1, max_period + 1))
    if total > symbol_cap:
        raise PeriodTooLarge(f"{total} orbit symbols exceed cap {symbol_cap}")
    orbits: list[CyclicWord] = []
    for n in range(1, max_period + 1):
        orbits.extend(enumerate_periodic(shift, n))
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            rows = list(pool.map(lambda p: periodic_exponents(A, p), orbits))
    else:
        rows = [periodic_exponents(A, p) for p in orbits]

    d = A.dimension
    lo = np.full(d, np.inf)
    hi = np.full(d, -np.inf)
    lo_wit: list[CyclicWord | None] = [None] * d
    hi_wit: list[CyclicWord | None] = [None] * d
    for row in rows:
        for i in range(d):
            x = row.exponents[i]
            if x < lo[i]:
                lo[i] = x
                lo_wit[i] = row.orbit
            if x > hi[i]:
                hi[i] = x
                hi_wit[i] = row.orbit
    assert all(hi[i] >= hi[i + 1] for i in range(d - 1))
    return SpectrumReport(
        max_period=max_period,
        lo=lo,
        hi=hi,
        lo_witness=tuple(lo_wit),
        hi_witness=tuple(hi_wit),
        rows=tuple(rows),
    )


def classify(report: SpectrumReport, center, delta: float) -> Classification:
    """Constant / Narrow / Neither against target exponents and half-width delta.

    Constant means every interval collapses onto its center value (within
    1e-9, the floating-point stand-in for exact equality); Narrow means every
    interval sits inside [center_i - delta, center_i + delta].
    """
    center = np.asarray(center, dtype=float)
    if center.ndim != 1 or len(center) != report.dimension:
        raise ValueError(f"center must list {report.dimension} exponents")
    if np.any(np.diff(center) > 0):
        raise CenterNotSorted("center exponents must be non-increasing")
    if delta < 0:
        raise ValueError("delta must be >= 0")
    if (np.abs(report.lo - center) <= CONSTANT_TOL).all() and (
        np.abs(report.hi - center) <= CONSTANT_TOL
    ).all():
        return Classification.CONSTANT
    if (report.lo >= center - delta).all() and (report.hi <= center + delta).all():
        return Classification.NARROW
    return Classification.NEITHER
