"""Shared shift spaces and cocycle generators used across the test suite."""

import numpy as np
import pytest

import domsplit as ds

LOG2 = float(np.log(2.0))
LOG3 = float(np.log(3.0))


@pytest.fixture(scope="session")
def full2():
    return ds.build_shift([[1, 1], [1, 1]])


@pytest.fixture(scope="session")
def golden():
    return ds.build_shift([[1, 1], [1, 0]])


@pytest.fixture(scope="session")
def sparse3():
    return ds.build_shift([[1, 1, 0], [0, 0, 1], [1, 0, 0]])


@pytest.fixture(scope="session")
def full3():
    return ds.build_shift(np.ones((3, 3), dtype=int))


@pytest.fixture(scope="session")
def cycle4():
    return ds.build_shift([[0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1], [1, 0, 0, 0]])


@pytest.fixture(scope="session")
def five_shifts(full2, golden, sparse3, full3, cycle4):
    return [full2, golden, sparse3, full3, cycle4]


@pytest.fixture(scope="session")
def const_diag():
    """Constant generator diag(2, 1/2) on the full 2-shift."""
    M = np.diag([2.0, 0.5])
    return ds.locally_constant({1: M, 2: M})


@pytest.fixture(scope="session")
def twodiag():
    """Two commuting diagonal generators: exponents are convex mixes of (log2, log3)."""
    return ds.locally_constant({1: np.diag([2.0, 0.5]), 2: np.diag([3.0, 1.0 / 3.0])})


@pytest.fixture(scope="session")
def swap():
    """diag(2,1/2) mixed with an order-2 antidiagonal: eigenvalue gaps without domination."""
    return ds.locally_constant({1: np.diag([2.0, 0.5]), 2: [[0.0, 0.5], [2.0, 0.0]]})


@pytest.fixture(scope="session")
def pospair():
    """Two strictly positive matrices; the shared cone forces domination."""
    return ds.locally_constant({1: [[2.0, 1.0], [1.0, 1.0]], 2: [[3.0, 1.0], [2.0, 1.0]]})


@pytest.fixture(scope="session")
def identity2():
    I = np.eye(2)
    return ds.locally_constant({1: I, 2: I})


@pytest.fixture(scope="session")
def range1():
    """Range-1 generator on the full 2-shift: the matrix depends on a 3-symbol window."""
    table = {}
    for a in (1, 2):
        for b in (1, 2):
            for c in (1, 2):
                t = 0.2 * a + 0.35 * b + 0.5 * c
                table[(a, b, c)] = np.array([[1.0 + t, 0.3 * a], [0.1 * c, 1.0 / (1.0 + t)]])
    return ds.build_cocycle(table, beta=0.7)
