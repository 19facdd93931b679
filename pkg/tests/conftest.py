from __future__ import annotations

from functools import reduce
from pathlib import Path

import numpy as np
import pytest

from hyperdual.hypergraph import Hypergraph

ROOT = Path(__file__).resolve().parents[1]

SAMPLE5_EDGES = [[0], [0, 1, 3, 4], [1, 2], [2, 4]]

_I = np.eye(2)
_X = np.array([[0.0, 1.0], [1.0, 0.0]])
_Z = np.diag([1.0, -1.0])


def pauli_matrix(num_qubits: int, x_mask: int, z_mask: int) -> np.ndarray:
    """Kronecker-product oracle; qubit q is bit q of the basis index (last factor is qubit 0)."""
    factors = []
    for q in reversed(range(num_qubits)):
        if x_mask >> q & 1:
            factors.append(_X)
        elif z_mask >> q & 1:
            factors.append(_Z)
        else:
            factors.append(_I)
    return reduce(np.kron, factors, np.eye(1))


def oracle_matrix(hsum) -> np.ndarray:
    mat = hsum.constant * np.eye(1 << hsum.num_qubits)
    for t in hsum.terms:
        mat = mat + t.coeff * pauli_matrix(hsum.num_qubits, t.x_mask, t.z_mask)
    return mat


def random_hypergraph(rng: np.random.Generator, max_vertices: int, max_extra_edges: int = 2) -> Hypergraph:
    k = int(rng.integers(1, max_vertices + 1))
    n = int(rng.integers(1, k + max_extra_edges + 1))
    edges = []
    for _ in range(n):
        size = int(rng.integers(1, k + 1))
        edges.append(sorted(int(v) for v in rng.choice(k, size=size, replace=False)))
    return Hypergraph.from_edges(k, edges, allow_duplicates=True)


@pytest.fixture
def sample5() -> Hypergraph:
    return Hypergraph.from_edges(5, SAMPLE5_EDGES)


@pytest.fixture
def loop1() -> Hypergraph:
    return Hypergraph.from_edges(1, [[0]])


@pytest.fixture
def single_edge2() -> Hypergraph:
    return Hypergraph.from_edges(2, [[0, 1]])


@pytest.fixture
def sample5_path() -> Path:
    return ROOT / "data" / "sample5.hg"
