"""X/Z Pauli sums on bitmasks, the Hamiltonians built from hypergraphs, and their matrix-free action.

Qubit ``q`` is bit ``q`` of the computational-basis index. A term with masks
``(x, z)`` and coefficient ``c`` acts as::

    (P s)[i] = c * (-1)**popcount(i & z) * s[i ^ x]

which is exact because ``x & z == 0`` (no Y operators).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np
from scipy.sparse.linalg import LinearOperator

from . import config
from .errors import DependentEdges, DimensionMismatch, InvalidHypergraph, SectorEmpty, TooLarge
from .gf2 import gf2_nullspace, span_ints
from .hypergraph import Hypergraph, dual, independent_set, isolated_vertices, rank


def mask_of(support: Iterable[int]) -> int:
    mask = 0
    for q in support:
        mask |= 1 << int(q)
    return mask


def support_of(mask: int) -> Tuple[int, ...]:
    out = []
    q = 0
    while mask:
        if mask & 1:
            out.append(q)
        mask >>= 1
        q += 1
    return tuple(out)


def parity(values: np.ndarray) -> np.ndarray:
    """popcount(v) & 1 for each int64 entry, by XOR folding."""
    v = values.astype(np.uint64, copy=True)
    for shift in (32, 16, 8, 4, 2, 1):
        v ^= v >> np.uint64(shift)
    return (v & np.uint64(1)).astype(np.int8)


def z_signs(indices: np.ndarray, z_mask: int) -> np.ndarray:
    if z_mask == 0:
        return np.ones(indices.shape, dtype=np.float64)
    return 1.0 - 2.0 * parity(indices & np.int64(z_mask))


@dataclass(frozen=True)
class PauliTerm:
    num_qubits: int
    x_mask: int
    z_mask: int
    coeff: float

    def __post_init__(self):
        object.__setattr__(self, "coeff", float(self.coeff))
        limit = 1 << self.num_qubits
        if self.x_mask < 0 or self.z_mask < 0 or self.x_mask >= limit or self.z_mask >= limit:
            raise DimensionMismatch(f"mask wider than {self.num_qubits} qubits")
        if self.x_mask & self.z_mask:
            raise ValueError("x_mask and z_mask overlap (Y operators are not supported)")

    @classmethod
    def x(cls, num_qubits: int, support: Iterable[int], coeff: float = 1.0) -> "PauliTerm":
        return cls(num_qubits, mask_of(support), 0, coeff)

    @classmethod
    def z(cls, num_qubits: int, support: Iterable[int], coeff: float = 1.0) -> "PauliTerm":
        return cls(num_qubits, 0, mask_of(support), coeff)

    @property
    def is_identity(self) -> bool:
        return self.x_mask == 0 and self.z_mask == 0


def commutes(t1: PauliTerm, t2: PauliTerm) -> bool:
    if t1.num_qubits != t2.num_qubits:
        raise DimensionMismatch(f"{t1.num_qubits} vs {t2.num_qubits} qubits")
    overlap = bin(t1.x_mask & t2.z_mask).count("1") + bin(t1.z_mask & t2.x_mask).count("1")
    return overlap % 2 == 0


@dataclass(frozen=True, eq=False)
class PauliSum:
    num_qubits: int
    terms: Tuple[PauliTerm, ...]
    constant: float = 0.0

    @classmethod
    def build(cls, num_qubits: int, terms: Iterable[PauliTerm], constant: float = 0.0) -> "PauliSum":
        """Merge terms with equal masks (first-seen order); identity terms go into ``constant``."""
        merged: Dict[Tuple[int, int], float] = {}
        const = float(constant)
        for t in terms:
            if t.num_qubits != num_qubits:
                raise DimensionMismatch(f"term on {t.num_qubits} qubits in a {num_qubits}-qubit sum")
            if t.is_identity:
                const += t.coeff
                continue
            key = (t.x_mask, t.z_mask)
            merged[key] = merged.get(key, 0.0) + t.coeff
        return cls(num_qubits, tuple(PauliTerm(num_qubits, x, z, c) for (x, z), c in merged.items()), const)

    def __add__(self, other: "PauliSum") -> "PauliSum":
        if not isinstance(other, PauliSum):
            return NotImplemented
        if other.num_qubits != self.num_qubits:
            raise DimensionMismatch(f"{self.num_qubits} vs {other.num_qubits} qubits")
        return PauliSum.build(self.num_qubits, self.terms + other.terms, self.constant + other.constant)

    @property
    def dimension(self) -> int:
        return 1 << self.num_qubits

    def as_dict(self) -> Dict[Tuple[int, int], float]:
        return {(t.x_mask, t.z_mask): t.coeff for t in self.terms}

    def x_terms(self) -> List[PauliTerm]:
        return [t for t in self.terms if t.x_mask]

    def z_terms(self) -> List[PauliTerm]:
        return [t for t in self.terms if not t.x_mask]

    def relabel(self, perm: Sequence[int]) -> "PauliSum":
        """Qubit ``q`` becomes qubit ``perm[q]``."""
        if sorted(perm) != list(range(self.num_qubits)):
            raise DimensionMismatch("perm is not a permutation of the qubits")

        def move(mask: int) -> int:
            return mask_of(perm[q] for q in support_of(mask))

        return PauliSum.build(
            self.num_qubits,
            (PauliTerm(self.num_qubits, move(t.x_mask), move(t.z_mask), t.coeff) for t in self.terms),
            self.constant,
        )

    @cached_property
    def _groups(self) -> Dict[int, Tuple[Tuple[int, float], ...]]:
        groups: Dict[int, List[Tuple[int, float]]] = {}
        for t in self.terms:
            groups.setdefault(t.x_mask, []).append((t.z_mask, t.coeff))
        return {x: tuple(g) for x, g in groups.items()}

    def coefficients(self, indices: np.ndarray) -> Tuple[np.ndarray, Dict[int, float | np.ndarray]]:
        """Diagonal and per-x_mask coefficients evaluated on basis ``indices``.

        Off-diagonal entries are scalars when every term in the group is a pure X product.
        """
        diag = np.full(indices.shape, self.constant, dtype=np.float64)
        offdiag: Dict[int, float | np.ndarray] = {}
        for x, group in self._groups.items():
            if all(z == 0 for z, _ in group):
                total = float(sum(c for _, c in group))
                if x == 0:
                    diag += total
                else:
                    offdiag[x] = total
                continue
            vec = np.zeros(indices.shape, dtype=np.float64)
            for z, c in group:
                vec += c * z_signs(indices, z)
            if x == 0:
                diag += vec
            else:
                offdiag[x] = vec
        return diag, offdiag

    @cached_property
    def _compiled(self) -> Tuple[np.ndarray, np.ndarray, Dict[int, float | np.ndarray]]:
        if self.num_qubits > config.LANCZOS_MAX_QUBITS:
            raise TooLarge(f"{self.num_qubits} qubits exceeds the matrix-free limit of {config.LANCZOS_MAX_QUBITS}")
        idx = np.arange(self.dimension, dtype=np.int64)
        diag, offdiag = self.coefficients(idx)
        return idx, diag, offdiag

    def matvec(self, vec: np.ndarray) -> np.ndarray:
        idx, diag, offdiag = self._compiled
        vec = np.asarray(vec)
        if vec.shape != (self.dimension,):
            raise DimensionMismatch(f"vector of shape {vec.shape} for a {self.num_qubits}-qubit operator")
        out = diag * vec
        for x, coef in offdiag.items():
            out += coef * vec[idx ^ x]
        return out


@dataclass(frozen=True, eq=False)
class StateVector:
    num_qubits: int
    amplitudes: np.ndarray

    def __post_init__(self):
        amps = np.array(self.amplitudes, dtype=np.complex128, copy=True).reshape(-1)
        if amps.size != 1 << self.num_qubits:
            raise DimensionMismatch(f"{amps.size} amplitudes for {self.num_qubits} qubits")
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)

    @classmethod
    def basis(cls, num_qubits: int, index: int) -> "StateVector":
        amps = np.zeros(1 << num_qubits, dtype=np.complex128)
        amps[index] = 1.0
        return cls(num_qubits, amps)

    @classmethod
    def random(cls, num_qubits: int, seed: int | None = None) -> "StateVector":
        rng = np.random.default_rng(seed)
        dim = 1 << num_qubits
        return cls(num_qubits, rng.standard_normal(dim) + 1j * rng.standard_normal(dim)).normalized()

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def normalized(self) -> "StateVector":
        n = self.norm()
        if n == 0.0:
            raise ValueError("cannot normalize the zero vector")
        return StateVector(self.num_qubits, self.amplitudes / n)

    def overlap(self, other: "StateVector") -> complex:
        return complex(np.vdot(self.amplitudes, other.amplitudes))


def apply(hsum: PauliSum, s: StateVector) -> StateVector:
    if s.num_qubits != hsum.num_qubits:
        raise DimensionMismatch(f"{hsum.num_qubits}-qubit operator on a {s.num_qubits}-qubit state")
    return StateVector(s.num_qubits, hsum.matvec(s.amplitudes))


def to_dense(hsum: PauliSum) -> np.ndarray:
    if hsum.num_qubits > config.DENSE_MAX_QUBITS:
        raise TooLarge(f"{hsum.num_qubits} qubits exceeds the dense limit of {config.DENSE_MAX_QUBITS}")
    idx, diag, offdiag = hsum._compiled
    mat = np.diag(diag)
    for x, coef in offdiag.items():
        mat[idx, idx ^ x] += coef
    return mat


def as_linear_operator(hsum: PauliSum) -> LinearOperator:
    n = hsum.dimension

    def mv(v: np.ndarray) -> np.ndarray:
        return hsum.matvec(np.asarray(v).reshape(n)).reshape(np.shape(v))

    return LinearOperator((n, n), matvec=mv, rmatvec=mv, dtype=np.float64)


def format_pauli_sum(hsum: PauliSum) -> str:
    """One line per term, ``<coeff> <X support> | <Z support>`` (1-indexed), then ``const <value>``."""
    lines = []
    for t in hsum.terms:
        fields = [f"{t.coeff:.17g}"]
        fields += [str(q + 1) for q in support_of(t.x_mask)]
        fields.append("|")
        fields += [str(q + 1) for q in support_of(t.z_mask)]
        lines.append(" ".join(fields))
    lines.append(f"const {hsum.constant:.17g}")
    return "\n".join(lines) + "\n"


# ---------------- sectors ---------------- #

def sector_indices(hstar: Hypergraph) -> np.ndarray:
    """Sorted basis indices with even overlap with every edge of hstar (the +1 sector of its Z products)."""
    if hstar.num_vertices > config.INDEX_MAX_QUBITS:
        raise TooLarge(f"{hstar.num_vertices} qubits do not fit 64-bit basis indices")
    return span_ints(gf2_nullspace(hstar.incidence).row_ints())


def sector_mask(hstar: Hypergraph) -> np.ndarray:
    """Boolean indicator of the +1 sector over the full 2**K basis."""
    if hstar.num_vertices > config.LANCZOS_MAX_QUBITS:
        raise TooLarge(f"{hstar.num_vertices} qubits exceeds the matrix-free limit of {config.LANCZOS_MAX_QUBITS}")
    idx = np.arange(1 << hstar.num_vertices, dtype=np.int64)
    mask = np.ones(idx.shape, dtype=bool)
    for b in hstar.incidence.row_ints():
        mask &= parity(idx & np.int64(b)) == 0
    if not mask.any():
        raise SectorEmpty("no basis state satisfies every Z constraint")
    return mask


def sector_projector_apply(hstar: Hypergraph, s: StateVector) -> StateVector:
    """prod_e (1 + B_e)/2 applied to s; not renormalized."""
    if hstar.num_vertices != s.num_qubits:
        raise DimensionMismatch(f"{hstar.num_vertices}-qubit sector for a {s.num_qubits}-qubit state")
    return StateVector(s.num_qubits, np.where(sector_mask(hstar), s.amplitudes, 0.0))


def stabilizer_terms(hstar: Hypergraph, coeff: float = 1.0) -> List[PauliTerm]:
    return [PauliTerm(hstar.num_vertices, 0, b, coeff) for b in hstar.incidence.row_ints()]


# ---------------- Hamiltonians ---------------- #

def _check_pair(h: Hypergraph, hstar: Hypergraph) -> None:
    if hstar.num_vertices != h.num_vertices:
        raise DimensionMismatch(f"hstar has {hstar.num_vertices} vertices, h has {h.num_vertices}")
    if hstar.num_edges and h.num_edges and np.any(h.incidence.dot_t(hstar.incidence)):
        raise InvalidHypergraph("hstar has an edge with odd overlap against an edge of h")


def css_hamiltonian(h: Hypergraph, hstar: Hypergraph, j: float) -> PauliSum:
    """-j * sum A_e over the independent edges of h  -j * sum B_e over the edges of hstar."""
    if j <= 0:
        raise ValueError(f"coupling j must be positive, got {j}")
    _check_pair(h, hstar)
    k = h.num_vertices
    rows = h.incidence.row_ints()
    a_terms = [PauliTerm(k, rows[i], 0, -j) for i in independent_set(h).edge_indices]
    return PauliSum.build(k, a_terms + stabilizer_terms(hstar, -j))


def perturbed_css_hamiltonian(h: Hypergraph, hstar: Hypergraph, j: float, field: float) -> PauliSum:
    if field < 0:
        raise ValueError(f"field must be non-negative, got {field}")
    base = css_hamiltonian(h, hstar, j)
    k = h.num_vertices
    return base + PauliSum.build(k, (PauliTerm(k, 0, 1 << v, -field) for v in range(k)))


def ising_like_hamiltonian(h: Hypergraph, a: float, b: float, shift: float = 0.0) -> PauliSum:
    """-a * sum_e prod_{v in e} X_v  -b * sum_v Z_v  + shift."""
    k = h.num_vertices
    terms = [PauliTerm(k, x, 0, -a) for x in h.incidence.row_ints()]
    terms += [PauliTerm(k, 0, 1 << v, -b) for v in range(k)]
    return PauliSum.build(k, terms, shift)


def dual_shift(h: Hypergraph, j: float, field: float) -> float:
    """Constant picked up by the dual model: each Z stabilizer is +1 in the sector, as is each isolated Z_v."""
    return -j * (h.num_vertices - rank(h)) - field * len(isolated_vertices(h))


def dual_model(h: Hypergraph, j: float, field: float) -> PauliSum:
    """Ising-like model on dual(h) with the couplings exchanged: interaction ``field``, transverse ``j``."""
    chosen = set(independent_set(h).edge_indices)
    if len(chosen) != h.num_edges:
        raise DependentEdges([i for i in range(h.num_edges) if i not in chosen])
    return ising_like_hamiltonian(dual(h), a=field, b=j, shift=dual_shift(h, j, field))


# ---------------- CSS ground state ---------------- #

def css_state(h: Hypergraph) -> StateVector:
    """prod_{e in I} (1 + A_e)|0...0>, normalized: uniform over the GF(2) span of the independent edges."""
    if h.num_vertices > config.LANCZOS_MAX_QUBITS:
        raise TooLarge(f"{h.num_vertices} qubits exceeds the state-vector limit of {config.LANCZOS_MAX_QUBITS}")
    rows = h.incidence.row_ints()
    support = span_ints([rows[i] for i in independent_set(h).edge_indices])
    amps = np.zeros(1 << h.num_vertices, dtype=np.complex128)
    amps[support] = 1.0 / np.sqrt(support.size)
    return StateVector(h.num_vertices, amps)


def css_ground_energy(h: Hypergraph, hstar: Hypergraph, j: float) -> float:
    return -j * (rank(h) + hstar.num_edges)


def hamiltonian_terms_commute(hsum: PauliSum, others: Optional[Sequence[PauliTerm]] = None) -> bool:
    """True when every term of hsum commutes with every term of ``others`` (default: with each other)."""
    pool = list(hsum.terms) if others is None else list(others)
    return all(commutes(t, u) for t in hsum.terms for u in pool)
