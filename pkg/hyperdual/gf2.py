"""Packed binary matrices and Gaussian elimination over GF(2).

Rows are stored as little-endian 64-bit words: column ``c`` lives in word
``c // 64`` at bit ``c % 64``. Padding bits past ``cols`` are always zero, so
whole-word XOR and equality never see garbage.
"""

from __future__ import annotations

from typing import Iterable, List, Sequence, Tuple

import numpy as np

from . import config
from .errors import DimensionMismatch, TooLarge

WORD = 64


def _nwords(cols: int) -> int:
    return max(1, (cols + WORD - 1) // WORD)


def _pack(dense: np.ndarray) -> np.ndarray:
    rows, cols = dense.shape
    width = _nwords(cols) * WORD
    padded = np.zeros((rows, width), dtype=np.uint8)
    padded[:, :cols] = dense & 1
    packed = np.packbits(padded, axis=1, bitorder='little')
    return np.ascontiguousarray(packed).view('<u8').astype(np.uint64)


def _unpack(words: np.ndarray, cols: int) -> np.ndarray:
    as_bytes = np.ascontiguousarray(words.astype('<u8')).view(np.uint8)
    return np.unpackbits(as_bytes, axis=1, bitorder='little')[:, :cols]


class BitMatrix:
    """Immutable rows x cols matrix over GF(2)."""

    __slots__ = ("rows", "cols", "words")

    def __init__(self, rows: int, cols: int, words: np.ndarray):
        words = np.array(words, dtype=np.uint64, copy=True).reshape(rows, _nwords(cols))
        if rows and cols % WORD:
            tail = np.uint64((1 << (cols % WORD)) - 1)
            if np.any(words[:, -1] & ~tail):
                raise ValueError("bits set beyond the last column")
        words.setflags(write=False)
        self.rows = rows
        self.cols = cols
        self.words = words

    # ---- constructors ----
    @classmethod
    def zeros(cls, rows: int, cols: int) -> "BitMatrix":
        return cls(rows, cols, np.zeros((rows, _nwords(cols)), dtype=np.uint64))

    @classmethod
    def identity(cls, n: int) -> "BitMatrix":
        return cls.from_dense(np.eye(n, dtype=np.uint8))

    @classmethod
    def from_dense(cls, dense: Sequence[Sequence[int]] | np.ndarray, cols: int | None = None) -> "BitMatrix":
        arr = np.asarray(dense, dtype=np.int64)
        if arr.ndim == 1 and arr.size == 0:
            arr = arr.reshape(0, cols or 0)
        if arr.ndim != 2:
            raise ValueError("from_dense expects a 2-D array")
        if cols is not None and arr.shape[1] != cols:
            raise DimensionMismatch(f"expected {cols} columns, got {arr.shape[1]}")
        if np.any((arr != 0) & (arr != 1)):
            raise ValueError("entries must be 0 or 1")
        arr = arr.astype(np.uint8)
        return cls(arr.shape[0], arr.shape[1], _pack(arr))

    @classmethod
    def from_supports(cls, cols: int, supports: Iterable[Iterable[int]]) -> "BitMatrix":
        """Rows given as 0-indexed column sets. Repeated columns cancel mod 2."""
        supports = [list(s) for s in supports]
        dense = np.zeros((len(supports), cols), dtype=np.uint8)
        for r, support in enumerate(supports):
            for c in support:
                if not 0 <= c < cols:
                    raise DimensionMismatch(f"column {c} outside 0..{cols - 1}")
                dense[r, c] ^= 1
        return cls(len(supports), cols, _pack(dense))

    @classmethod
    def from_ints(cls, cols: int, ints: Iterable[int]) -> "BitMatrix":
        nbytes = _nwords(cols) * 8
        rows = []
        for x in ints:
            if x < 0 or x >> cols:
                raise DimensionMismatch(f"row mask does not fit in {cols} columns")
            rows.append(np.frombuffer(x.to_bytes(nbytes, 'little'), dtype='<u8'))
        words = np.array(rows, dtype=np.uint64).reshape(len(rows), _nwords(cols))
        return cls(len(rows), cols, words)

    # ---- views ----
    def to_dense(self) -> np.ndarray:
        return _unpack(self.words, self.cols)

    def row_int(self, i: int) -> int:
        return int.from_bytes(self.words[i].astype('<u8').tobytes(), 'little')

    def row_ints(self) -> List[int]:
        return [self.row_int(i) for i in range(self.rows)]

    def row_support(self, i: int) -> Tuple[int, ...]:
        return tuple(int(c) for c in np.flatnonzero(_unpack(self.words[i:i + 1], self.cols)[0]))

    def popcounts(self) -> np.ndarray:
        if self.rows == 0:
            return np.zeros(0, dtype=np.int64)
        return self.to_dense().sum(axis=1, dtype=np.int64)

    def transpose(self) -> "BitMatrix":
        dense = self.to_dense().T.copy() if self.rows else np.zeros((self.cols, 0), dtype=np.uint8)
        return BitMatrix(self.cols, self.rows, _pack(dense))

    def take_rows(self, indices: Sequence[int]) -> "BitMatrix":
        idx = np.asarray(list(indices), dtype=np.int64)
        return BitMatrix(len(idx), self.cols, self.words[idx] if len(idx) else np.zeros((0, _nwords(self.cols)), dtype=np.uint64))

    def permute_cols(self, perm: Sequence[int]) -> "BitMatrix":
        """Column ``c`` of the result is column ``perm[c]`` of self."""
        return BitMatrix.from_dense(self.to_dense()[:, list(perm)], cols=self.cols) if self.rows else BitMatrix.zeros(0, self.cols)

    def dot_t(self, other: "BitMatrix") -> np.ndarray:
        """Pairwise row parities: ``(self @ other.T) mod 2`` as a dense uint8 array."""
        if self.cols != other.cols:
            raise DimensionMismatch(f"{self.cols} columns vs {other.cols}")
        prod = self.to_dense().astype(np.int64) @ other.to_dense().astype(np.int64).T
        return (prod & 1).astype(np.uint8)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, BitMatrix):
            return NotImplemented
        return self.rows == other.rows and self.cols == other.cols and bool(np.array_equal(self.words, other.words))

    def __hash__(self) -> int:
        return hash((self.rows, self.cols, self.words.tobytes()))

    def __repr__(self) -> str:
        return f"BitMatrix(rows={self.rows}, cols={self.cols})"


def gf2_rref(m: BitMatrix) -> Tuple[BitMatrix, List[int]]:
    """Reduced row-echelon form (zero rows dropped) and its pivot columns."""
    work = np.array(m.words, dtype=np.uint64, copy=True)
    rank = 0
    pivots: List[int] = []
    for c in range(m.cols):
        if rank == work.shape[0]:
            break
        w, b = divmod(c, WORD)
        bit = np.uint64(1) << np.uint64(b)
        has = (work[:, w] & bit) != 0
        cand = np.flatnonzero(has[rank:])
        if cand.size == 0:
            continue
        p = rank + int(cand[0])
        if p != rank:
            work[[rank, p]] = work[[p, rank]]
            has[[rank, p]] = has[[p, rank]]
        others = np.flatnonzero(has)
        others = others[others != rank]
        if others.size:
            work[others] ^= work[rank]
        pivots.append(c)
        rank += 1
    return BitMatrix(rank, m.cols, work[:rank]), pivots


def gf2_rank(m: BitMatrix) -> int:
    return len(gf2_rref(m)[1])


def gf2_nullspace(m: BitMatrix) -> BitMatrix:
    """Basis of {x : m x = 0}, one row per free column of the RREF, in column order."""
    reduced, pivots = gf2_rref(m)
    pivot_set = set(pivots)
    free = [c for c in range(m.cols) if c not in pivot_set]
    basis = np.zeros((len(free), m.cols), dtype=np.uint8)
    if free:
        rd = reduced.to_dense() if reduced.rows else np.zeros((0, m.cols), dtype=np.uint8)
        for t, f in enumerate(free):
            basis[t, f] = 1
            if pivots:
                basis[t, pivots] = rd[:, f]
    return BitMatrix.from_dense(basis.reshape(len(free), m.cols), cols=m.cols)


def greedy_independent_rows(m: BitMatrix) -> List[int]:
    """Indices of a maximal independent subset of rows, greedily in input order."""
    basis: dict[int, int] = {}  # pivot bit -> fully reduced row
    chosen: List[int] = []
    for i, row in enumerate(m.row_ints()):
        for p, b in basis.items():
            if row >> p & 1:
                row ^= b
        if row == 0:
            continue
        p = (row & -row).bit_length() - 1
        for q in list(basis):
            if basis[q] >> p & 1:
                basis[q] ^= row
        basis[p] = row
        chosen.append(i)
    return chosen


def span_ints(generators: Sequence[int], max_generators: int | None = None) -> np.ndarray:
    """All 2^n GF(2) combinations of n independent int masks, as sorted int64 indices."""
    limit = config.LANCZOS_MAX_QUBITS if max_generators is None else max_generators
    if len(generators) > limit:
        raise TooLarge(f"span of {len(generators)} generators exceeds 2**{limit} elements")
    out = np.zeros(1, dtype=np.int64)
    for g in generators:
        out = np.concatenate([out, out ^ np.int64(g)])
    return np.sort(out)
