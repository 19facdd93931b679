from __future__ import annotations

import numpy as np
import pytest

from hyperdual.errors import DimensionMismatch, TooLarge
from hyperdual.gf2 import (
    BitMatrix,
    gf2_nullspace,
    gf2_rank,
    gf2_rref,
    greedy_independent_rows,
    span_ints,
)

SAMPLE5 = [
    [1, 0, 0, 0, 0],
    [1, 1, 0, 1, 1],
    [0, 1, 1, 0, 0],
    [0, 0, 1, 0, 1],
]


def brute_force_rank(rows: list[int]) -> int:
    span = {0}
    for r in rows:
        span |= {s ^ r for s in span}
    return len(span).bit_length() - 1


def test_sample5_rank_rref_and_nullspace():
    m = BitMatrix.from_dense(SAMPLE5)
    assert gf2_rank(m) == 4
    reduced, pivots = gf2_rref(m)
    assert pivots == [0, 1, 2, 3]
    assert reduced.to_dense().tolist() == [
        [1, 0, 0, 0, 0],
        [0, 1, 0, 0, 1],
        [0, 0, 1, 0, 1],
        [0, 0, 0, 1, 0],
    ]
    assert gf2_nullspace(m).to_dense().tolist() == [[0, 1, 1, 0, 1]]


def test_rank_trivial_cases():
    assert gf2_rank(BitMatrix.zeros(3, 4)) == 0
    assert gf2_rank(BitMatrix.identity(7)) == 7
    assert gf2_nullspace(BitMatrix.identity(7)).rows == 0
    assert gf2_nullspace(BitMatrix.from_dense([[1, 1]])).to_dense().tolist() == [[1, 1]]


def test_rank_matches_brute_force_on_random_matrices():
    rng = np.random.default_rng(7)
    for _ in range(60):
        rows, cols = rng.integers(1, 9), rng.integers(1, 12)
        dense = rng.integers(0, 2, size=(rows, cols))
        m = BitMatrix.from_dense(dense)
        assert gf2_rank(m) == brute_force_rank(m.row_ints())


def test_wide_matrices_span_several_words():
    rng = np.random.default_rng(11)
    dense = rng.integers(0, 2, size=(40, 150))
    m = BitMatrix.from_dense(dense)
    null = gf2_nullspace(m)
    assert gf2_rank(m) + null.rows == 150
    assert not np.any(m.dot_t(null))
    assert gf2_rank(null) == null.rows


def test_input_is_not_modified():
    m = BitMatrix.from_dense(SAMPLE5)
    before = m.to_dense().copy()
    gf2_rref(m)
    gf2_nullspace(m)
    assert np.array_equal(m.to_dense(), before)


def test_supports_and_ints():
    m = BitMatrix.from_supports(70, [[0, 69], [3, 3, 5]])
    assert m.row_support(0) == (0, 69)
    assert m.row_support(1) == (5,)
    assert BitMatrix.from_ints(70, m.row_ints()) == m
    assert m.transpose().transpose() == m


def test_shape_errors():
    with pytest.raises(DimensionMismatch):
        BitMatrix.from_supports(4, [[4]])
    with pytest.raises(DimensionMismatch):
        BitMatrix.from_dense([[1, 0]], cols=3)
    with pytest.raises(ValueError):
        BitMatrix.from_dense([[2, 0]])
    with pytest.raises(ValueError):
        BitMatrix(1, 3, np.array([[0b1000]], dtype=np.uint64))


def test_greedy_rows_keep_first_copy_and_input_order():
    m = BitMatrix.from_dense([[1, 1, 0], [1, 1, 0], [0, 1, 1], [1, 0, 1], [0, 0, 1]])
    assert greedy_independent_rows(m) == [0, 2, 4]


def test_span_ints():
    assert span_ints([1, 2]).tolist() == [0, 1, 2, 3]
    assert span_ints([0b101, 0b110]).tolist() == [0, 0b011, 0b101, 0b110]
    assert span_ints([]).tolist() == [0]
    with pytest.raises(TooLarge):
        span_ints([1 << i for i in range(30)])
    assert span_ints([1, 2, 4], max_generators=3).size == 8
    with pytest.raises(TooLarge):
        span_ints([1, 2, 4], max_generators=2)
