"""Feasibility calculators: worked examples, thresholds, and cross-checks."""

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

import domsplit as ds
from domsplit.errors import SpectralGapTooSmall

LOG2 = np.log(2.0)


def test_gamma_constant_worked_example():
    p = ds.FeasibilityParams(
        exponents=(LOG2, -LOG2), beta=1.0, mu=LOG2, eps=0.01, eps0=0.1, kappa=0.01
    )
    r = ds.gamma_feasible_constant(p, 1)
    q1 = 0.1 / abs(LOG2 - 0.01)
    q2 = 0.1 / abs(-LOG2 + 0.01)
    q3 = (1.0 - 0.1) / (LOG2 + 1.0 + 0.01)
    assert r.feasible
    assert r.gamma_interval[0] == 0.0
    assert r.gamma_interval[1] == pytest.approx(min(q1, q2, q3))
    assert r.gamma_interval[1] == pytest.approx(0.1463813, abs=1e-6)
    assert q3 == pytest.approx(0.9 / 1.7031472, abs=1e-6)


def test_gamma_constant_gap_violation():
    # eps exactly half the gap: the strict inequality fails
    p = ds.FeasibilityParams(
        exponents=(LOG2, -LOG2), beta=1.0, mu=LOG2, eps=LOG2, eps0=0.1, kappa=0.01
    )
    with pytest.raises(SpectralGapTooSmall):
        ds.gamma_feasible_constant(p, 1)


def test_gamma_constant_interval_shrinks_with_eps0():
    last = 1.0
    for eps0 in (1e-2, 1e-4, 1e-6, 1e-8):
        p = ds.FeasibilityParams(
            exponents=(1.0, -1.0), beta=1.0, mu=1.0, eps=0.01, eps0=eps0, kappa=0.01
        )
        hi = ds.gamma_feasible_constant(p, 1).gamma_interval[1]
        assert hi < last
        last = hi
    assert last < 1e-7


def test_gamma_narrow_examples():
    r0 = ds.gamma_feasible_narrow(beta=1.0, mu=1.0, lam1=1.0, lam2=-1.0, delta=0.0, eps=0.0, kappa=0.0)
    assert r0.feasible
    assert r0.gamma_interval[0] == 0.0

    r = ds.gamma_feasible_narrow(beta=1.0, mu=1.1, lam1=1.0, lam2=-1.0, delta=0.1, eps=1e-6, kappa=1e-6)
    assert r.feasible
    assert r.gamma_interval[0] == pytest.approx(0.2, abs=1e-5)
    assert r.gamma_interval[1] == pytest.approx(0.4, abs=1e-5)

    r_bad = ds.gamma_feasible_narrow(beta=1.0, mu=1.5, lam1=1.0, lam2=-1.0, delta=0.5, eps=1e-6, kappa=1e-6)
    assert not r_bad.feasible


def test_gamma_narrow_interval_invariant():
    rng = np.random.default_rng(77)
    for _ in range(200):
        lam1 = rng.uniform(0.05, 2.0)
        lam2 = lam1 - rng.uniform(0.01, 3.0)
        r = ds.gamma_feasible_narrow(
            beta=rng.uniform(0.1, 1.0),
            mu=lam1 + rng.uniform(0.0, 1.0),
            lam1=lam1,
            lam2=lam2,
            delta=rng.uniform(0.0, 0.5),
            eps=rng.uniform(0.0, 0.1),
            kappa=rng.uniform(0.0, 0.1),
        )
        lo, hi = r.gamma_interval
        assert 0.0 <= lo <= hi <= 1.0
        if r.feasible:
            assert lo < hi


def test_narrow_at_zero_delta_matches_constant():
    """With delta = 0 and the error-decay rate chosen optimally, the two
    calculators give the same gamma bound (volume-normalized exponents,
    vanishing slack)."""
    rng = np.random.default_rng(123)
    eps = kappa = 1e-14
    for _ in range(100):
        beta = rng.uniform(0.1, 1.0)
        lam1 = rng.uniform(0.05, 2.0)
        lam2 = -lam1 - rng.uniform(0.0, 2.0)
        mu = lam1 + rng.uniform(0.01, 1.0)
        narrow = ds.gamma_feasible_narrow(
            beta=beta, mu=mu, lam1=lam1, lam2=lam2, delta=0.0, eps=eps, kappa=kappa
        )
        a = max(abs(lam1 - eps), abs(lam2 + eps))
        b = mu + beta + kappa
        eps0_star = a * beta / (a + b)
        p = ds.FeasibilityParams(
            exponents=(lam1, lam2), beta=beta, mu=mu, eps=eps, eps0=eps0_star, kappa=kappa
        )
        constant = ds.gamma_feasible_constant(p, 1)
        assert narrow.gamma_interval[1] == pytest.approx(
            constant.gamma_interval[1], abs=1e-12
        )


def test_delta_max_worked_example():
    assert ds.delta_max(1.0, 1.0, -1.0) == pytest.approx(0.2, abs=1e-9)


def test_delta_max_threshold_is_sharp():
    for beta, lam1, lam2 in ((1.0, 1.0, -1.0), (0.5, 2.0, 0.3), (0.8, 0.4, -1.7)):
        star = ds.delta_max(beta, lam1, lam2)
        gap = lam1 - lam2

        def cond(d):
            return 4 * d / gap < min((beta - 2 * d) / beta, (beta + d) / (gap + beta))

        assert cond(star * (1 - 1e-9))
        assert not cond(star * (1 + 1e-9))


def test_delta_max_vanishes_with_gap():
    assert ds.delta_max(1.0, 1.0, 1.0 - 1e-6) < 1e-6


def test_sl2_examples():
    assert ds.sl2_feasible(1.0, 1.0, 0.1) is True  # 0.1818... < 0.8
    assert ds.sl2_feasible(1.0, 1.0, 0.4) is False  # 0.571... > 0.2
    assert ds.sl2_feasible(1.0, 1.0, 0.0) is True


def test_conjugacy_delta_examples():
    assert ds.conjugacy_delta(1.0, 1.0, 1.0) == 0.0
    assert ds.conjugacy_delta(0.8, 1.0, 1.0) == pytest.approx(0.2)
    assert ds.conjugacy_delta(1.0, 0.5, 1.0) == pytest.approx(1.0)


@given(
    st.floats(0.05, 1.0), st.floats(0.05, 1.0), st.floats(0.05, 1.0), st.floats(0.05, 1.0)
)
def test_conjugacy_delta_monotone(t1, t2, o1, o2):
    lam = 1.3
    tlo, thi = sorted((t1, t2))
    olo, ohi = sorted((o1, o2))
    assert ds.conjugacy_delta(thi, olo, lam) <= ds.conjugacy_delta(tlo, olo, lam) + 1e-12
    assert ds.conjugacy_delta(tlo, ohi, lam) <= ds.conjugacy_delta(tlo, olo, lam) + 1e-12


def test_conjugacy_threshold():
    t = ds.conjugacy_threshold()
    assert t == pytest.approx((np.sqrt(5.0) - 1.0) / 2.0, abs=1e-15)
    assert abs(t * t + t - 1.0) <= 1e-15
    assert t > 0.618
    assert t > 0.5  # strictly above the known product bound it is compared with


def test_chaining_narrow_delta_into_domination(full2):
    """Wide spectrum version of the two-diagonal generator: its observed
    half-width stays below the narrow-data threshold, and the gap test then
    confirms the splitting that threshold promises."""
    A = ds.locally_constant({1: np.diag([8.0, 1 / 8.0]), 2: np.diag([12.0, 1 / 12.0])})
    rep = ds.spectrum_report(A, full2, 4)
    center = [(rep.lo[0] + rep.hi[0]) / 2.0, (rep.lo[1] + rep.hi[1]) / 2.0]
    half = (rep.hi[0] - rep.lo[0]) / 2.0
    assert ds.classify(rep, center, half + 1e-9).value == "narrow"
    assert half < ds.delta_max(1.0, center[0], center[1])
    cert = ds.domination_test(A, full2, 1, 30)
    assert cert.dominated
