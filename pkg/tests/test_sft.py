"""Shift-space construction, closing, enumeration and the shift metric."""

from itertools import product as iproduct
from math import exp

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

import domsplit as ds
from domsplit.errors import (
    DisjointRanges,
    EmptyAlphabet,
    NonTransitive,
    NotAdmissible,
    PeriodTooLarge,
    SymbolOutOfRange,
)


def brute_connector(shift, a, b, max_len=6):
    """Shortest lex-smallest connecting word by exhaustive search (test oracle)."""
    for length in range(max_len + 1):
        hits = []
        for combo in iproduct(range(1, shift.alphabet_size + 1), repeat=length):
            path = (a,) + combo + (b,)
            if all(shift.allowed(x, y) for x, y in zip(path, path[1:])):
                hits.append(combo)
        if hits:
            return min(hits)
    raise AssertionError("no connector found")


def brute_trace(shift, n):
    Q = np.array(shift.transition, dtype=object)
    return int(np.trace(np.linalg.matrix_power(Q, n)))


def test_full_shift_closes_directly(full2):
    assert full2.closing_constant == 0


def test_golden_mean_closing_constant(golden):
    assert golden.closing_constant == 1
    assert golden.connector(2, 2) == (1,)


def test_connectors_match_brute_force(five_shifts):
    for shift in five_shifts:
        m = shift.alphabet_size
        for a in range(1, m + 1):
            for b in range(1, m + 1):
                assert shift.connector(a, b) == brute_connector(shift, a, b)


def test_disconnected_matrix_rejected():
    with pytest.raises(NonTransitive):
        ds.build_shift([[1, 0], [0, 1]])


def test_empty_matrix_rejected():
    with pytest.raises(EmptyAlphabet):
        ds.build_shift(np.zeros((0, 0)))


def test_one_symbol_without_loop_rejected():
    with pytest.raises(NonTransitive):
        ds.build_shift([[0]])


def test_admissibility(golden):
    assert not ds.is_admissible(ds.Word((2, 2)), golden)
    assert ds.is_admissible(ds.Word((1, 2, 1, 1)), golden)
    assert ds.is_admissible(ds.CyclicWord((2, 1)), golden)  # wrap 1->2 is allowed
    assert ds.is_admissible(ds.CyclicWord((1, 1, 2)), golden)
    assert not ds.is_admissible(ds.CyclicWord((2, 2)), golden)


def test_symbol_out_of_range(golden):
    with pytest.raises(SymbolOutOfRange):
        ds.is_admissible(ds.Word((1, 3)), golden)


def test_close_word_examples(golden, full2):
    assert ds.close_word(ds.Word((1, 2)), golden).symbols == (1, 2)
    assert ds.close_word(ds.Word((2,)), golden).symbols == (2, 1)
    assert ds.close_word(ds.Word((2, 1, 2)), full2).symbols == (2, 1, 2)
    with pytest.raises(NotAdmissible):
        ds.close_word(ds.Word((2, 2)), golden)


def test_close_word_exhaustive(five_shifts):
    for shift in five_shifts:
        ell = shift.closing_constant
        for length in range(1, 6):
            for w in ds.enumerate_words(shift, length):
                closed = ds.close_word(w, shift)
                assert ds.is_admissible(closed, shift)
                assert closed.symbols[: len(w.symbols)] == w.symbols
                assert closed.period <= len(w.symbols) + ell


def test_enumerate_periodic_examples(golden, full2):
    assert [str(w) for w in ds.enumerate_periodic(golden, 1)] == ["1"]
    words3 = ds.enumerate_periodic(golden, 3)
    assert [str(w) for w in words3] == ["1,1,1", "1,1,2", "1,2,1", "2,1,1"]
    assert len(ds.enumerate_periodic(full2, 2)) == 4


def test_enumeration_counts_match_trace(five_shifts):
    for shift in five_shifts:
        for n in range(1, 13):
            count = brute_trace(shift, n)
            if count <= 5000:
                assert len(ds.enumerate_periodic(shift, n)) == count
            assert ds.periodic_count(shift, n) == count


def test_enumeration_sorted_and_admissible(full3):
    words = ds.enumerate_periodic(full3, 4)
    symbols = [w.symbols for w in words]
    assert symbols == sorted(symbols)
    assert all(ds.is_admissible(w, full3) for w in words)


def test_period_cap(full2):
    with pytest.raises(PeriodTooLarge):
        ds.enumerate_periodic(full2, 12, cap=100)


def test_shift_distance_examples():
    w = ds.Word(tuple([1] * 11), anchor=5)
    same = ds.shift_distance(w, ds.Word(tuple([1] * 11), anchor=5))
    assert same.truncated and same.value == pytest.approx(exp(-6))

    differ0 = ds.Word((2,) + tuple([1] * 10), anchor=0)
    base0 = ds.Word(tuple([1] * 11), anchor=0)
    d0 = ds.shift_distance(base0, differ0)
    assert not d0.truncated and d0.value == 1.0

    a = ds.Word((1, 1, 1, 1, 1, 1, 1), anchor=3)
    b = ds.Word((1, 1, 1, 1, 1, 1, 2), anchor=3)  # differs at +3 only
    d3 = ds.shift_distance(a, b)
    assert not d3.truncated and d3.value == pytest.approx(exp(-3))


def test_shift_distance_disjoint():
    right = ds.Word((1, 1), anchor=-2)  # covers [2, 3]
    left = ds.Word((1, 1), anchor=4)  # covers [-4, -3]
    with pytest.raises(DisjointRanges):
        ds.shift_distance(right, left)


@st.composite
def window(draw, radius=4):
    symbols = draw(
        st.lists(st.integers(1, 3), min_size=2 * radius + 1, max_size=2 * radius + 1)
    )
    return ds.Word(tuple(symbols), anchor=radius)


@given(window(), window(), window())
def test_distance_symmetric_and_ultrametric(x, y, z):
    dxy = ds.shift_distance(x, y).value
    dyx = ds.shift_distance(y, x).value
    dxz = ds.shift_distance(x, z).value
    dyz = ds.shift_distance(y, z).value
    assert dxy == dyx
    assert dxz <= max(dxy, dyz) + 1e-15


def test_random_word_is_admissible(golden):
    rng = np.random.default_rng(3)
    for _ in range(50):
        w = ds.random_word(golden, 40, rng)
        assert ds.is_admissible(w, golden)
