"""Closed-form feasibility calculators for the parameter inequalities.

These are the arithmetic side of the shadowing argument: given exponents,
a Holder exponent and a norm bound, is there a comparison fraction gamma in
(0,1) making the shadowing error decay strictly faster than the singular
values it perturbs?  Everything is plain double-precision arithmetic; no
interval arithmetic is attempted.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import sqrt

from .errors import SpectralGapTooSmall

BISECTION_TOL = 1e-12


@dataclass(frozen=True)
class FeasibilityParams:
    """Parameter bundle for the constant-data gamma search.

    `exponents` is the non-increasing target list; `mu` bounds log ||A||;
    `eps` is the spectral slack, `eps0` the required error-decay rate and
    `kappa` the slack absorbed by binomial growth.  `gamma` is optional and
    only carried when a specific choice is under discussion.
    """

    exponents: tuple[float, ...]
    beta: float
    mu: float
    eps: float
    eps0: float
    kappa: float
    gamma: float | None = None

    def __post_init__(self):
        if any(a < b for a, b in zip(self.exponents, self.exponents[1:])):
            raise ValueError("exponents must be non-increasing")
        if not 0.0 < self.beta <= 1.0:
            raise ValueError("beta must lie in (0, 1]")
        for name in ("eps", "eps0", "kappa"):
            if getattr(self, name) <= 0.0:
                raise ValueError(f"{name} must be > 0")
        if self.gamma is not None and not 0.0 < self.gamma < 1.0:
            raise ValueError("gamma must lie in (0, 1)")


@dataclass(frozen=True)
class FeasibilityResult:
    feasible: bool
    gamma_interval: tuple[float, float]
    binding_constraints: tuple[str, ...]


def _result(lo: float, hi: float, lo_name: str, hi_name: str) -> FeasibilityResult:
    lo = min(max(lo, 0.0), 1.0)
    hi = min(max(hi, 0.0), 1.0)
    if hi < lo:
        hi = lo
    names = ([lo_name] if lo_name and lo > 0.0 else []) + [hi_name]
    return FeasibilityResult(
        feasible=lo < hi,
        gamma_interval=(lo, hi),
        binding_constraints=tuple(names),
    )


def gamma_feasible_constant(p: FeasibilityParams, k: int) -> FeasibilityResult:
    """Gamma interval for constant periodic data at splitting index k.

    The three upper bounds come from requiring the shadowing-error decay rate
    eps0 to beat the gamma-scaled rates of sigma_k and sigma_{k+1}, and from
    the Holder budget beta(1-gamma) having to absorb mu*gamma + kappa*gamma
    plus eps0.  Requires the spectral gap to survive the slack:
    lambda_k - lambda_{k+1} > 2 eps.
    """
    if not 1 <= k < len(p.exponents):
        raise ValueError(f"index k={k} outside 1..{len(p.exponents) - 1}")
    lam_k = p.exponents[k - 1]
    lam_k1 = p.exponents[k]
    if lam_k - lam_k1 <= 2.0 * p.eps:
        raise SpectralGapTooSmall(
            f"need lambda_{k} - lambda_{k + 1} > 2 eps, got gap {lam_k - lam_k1} vs eps {p.eps}"
        )
    candidates = {
        "sigma_k_rate": p.eps0 / abs(lam_k - p.eps) if lam_k != p.eps else float("inf"),
        "sigma_k_plus_one_rate": (
            p.eps0 / abs(lam_k1 + p.eps) if lam_k1 != -p.eps else float("inf")
        ),
        "error_decay_rate": (p.beta - p.eps0) / (p.mu + p.beta + p.kappa),
        "unit_interval": 1.0,
    }
    hi_name = min(candidates, key=candidates.get)
    return _result(0.0, candidates[hi_name], "", hi_name)


def gamma_feasible_narrow(
    beta: float,
    mu: float,
    lam1: float,
    lam2: float,
    delta: float,
    eps: float,
    kappa: float,
) -> FeasibilityResult:
    """Gamma interval for delta-narrow two-exponent data.

    The lower bound makes the top/second singular-value rates separate despite
    the delta-wide data; the upper bounds make the shadowing error negligible
    against each of them.  Upper constraints have the form gamma * D < N and
    are resolved for either sign of D.
    """
    if lam1 <= lam2:
        raise ValueError("need lam1 > lam2")
    if delta < 0 or eps < 0 or kappa < 0:
        raise ValueError("delta, eps, kappa must be >= 0")
    if not 0.0 < beta <= 1.0:
        raise ValueError("beta must lie in (0, 1]")
    lowers = {"exponent_separation": (4.0 * delta + 2.0 * eps) / (lam1 - lam2 + eps)}
    uppers = {"unit_interval": 1.0}
    linear = {
        "top_margin": (beta - 2.0 * delta - eps, mu - lam1 - delta - eps + beta + kappa),
        "second_margin": (beta + 2.0 * delta + eps, mu - lam2 - delta + beta + kappa),
    }
    for name, (num, den) in linear.items():
        if den > 0.0:
            uppers[name] = num / den
        elif den == 0.0:
            if num <= 0.0:
                uppers[name] = 0.0
        else:
            lowers[name] = num / den
    lo_name = max(lowers, key=lowers.get)
    hi_name = min(uppers, key=uppers.get)
    return _result(lowers[lo_name], uppers[hi_name], lo_name, hi_name)


def _narrow_condition(delta: float, beta: float, gap: float) -> bool:
    return 4.0 * delta / gap < min((beta - 2.0 * delta) / beta, (beta + delta) / (gap + beta))


def delta_max(beta: float, lam1: float, lam2: float) -> float:
    """Largest delta for which delta-narrow data still forces a splitting.

    Bisects the boolean condition
    4 delta / (lam1 - lam2) < min((beta - 2 delta)/beta,
    (beta + delta)/(lam1 - lam2 + beta)); the left side grows and both
    comparisons tighten as delta grows, so the threshold is a single point.
    """
    if lam1 <= lam2:
        raise ValueError("need lam1 > lam2")
    if not 0.0 < beta <= 1.0:
        raise ValueError("beta must lie in (0, 1]")
    gap = lam1 - lam2
    lo, hi = 0.0, beta / 2.0
    assert _narrow_condition(lo, beta, gap) and not _narrow_condition(hi, beta, gap)
    while hi - lo > BISECTION_TOL:
        mid = 0.5 * (lo + hi)
        if _narrow_condition(mid, beta, gap):
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def sl2_feasible(lam: float, beta: float, delta: float) -> bool:
    """Volume-preserving (det = 1) feasibility: 2d/(l+d) < (l*b - 2d)/(l*b)."""
    if lam <= 0:
        raise ValueError("lam must be > 0")
    if not 0.0 < beta <= 1.0:
        raise ValueError("beta must lie in (0, 1]")
    if delta < 0:
        raise ValueError("delta must be >= 0")
    return 2.0 * delta / (lam + delta) < (lam * beta - 2.0 * delta) / (lam * beta)


def conjugacy_delta(theta: float, omega: float, lam: float) -> float:
    """Smallest spectrum half-width consistent with a (theta, omega)-Holder conjugacy pair.

    From theta <= (lam - delta)/lam and omega <= lam/(lam + delta); whichever
    of the two is tighter binds.
    """
    if not (0.0 < theta <= 1.0 and 0.0 < omega <= 1.0):
        raise ValueError("theta and omega must lie in (0, 1]")
    if lam <= 0:
        raise ValueError("lam must be > 0")
    return max(lam * (1.0 - theta), lam * (1.0 - omega) / omega)


def conjugacy_threshold() -> float:
    """Regularity product threshold: the positive root of x^2 + x - 1."""
    return (sqrt(5.0) - 1.0) / 2.0
