"""Dense, Lanczos and sector-restricted spectra of PauliSums; fidelity susceptibility."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, List, Optional, Tuple

import numpy as np
from scipy.linalg import eigh, eigh_tridiagonal

from . import config
from .errors import DimensionMismatch, NotConverged, SectorNotInvariant, TooLarge
from .gf2 import gf2_rank
from .hypergraph import Hypergraph
from .pauli_ham import (
    PauliSum,
    StateVector,
    commutes,
    sector_indices,
    sector_mask,
    stabilizer_terms,
    to_dense,
)
from .utils import warn

BREAKDOWN = 1e-12


@dataclass(frozen=True, eq=False)
class SpectrumResult:
    eigenvalues: np.ndarray
    ground_vector: Optional[StateVector] = None
    converged: bool = True
    residual: float = 0.0
    # eigenvectors as columns, real, aligned with eigenvalues
    vectors: Optional[np.ndarray] = None
    seed: Optional[int] = None

    @property
    def ground_energy(self) -> float:
        return float(self.eigenvalues[0])

    @property
    def gap(self) -> float:
        if len(self.eigenvalues) < 2:
            return float("nan")
        return float(self.eigenvalues[1] - self.eigenvalues[0])


def eig_dense(hsum: PauliSum) -> SpectrumResult:
    mat = to_dense(hsum)
    w, v = eigh(mat)
    residual = float(np.linalg.norm(mat @ v[:, 0] - w[0] * v[:, 0]))
    return SpectrumResult(w, StateVector(hsum.num_qubits, v[:, 0]), True, residual, v)


def _check_sector(hsum: PauliSum, hstar: Hypergraph) -> None:
    if hstar.num_vertices != hsum.num_qubits:
        raise DimensionMismatch(f"sector on {hstar.num_vertices} qubits, operator on {hsum.num_qubits}")
    stabilizers = stabilizer_terms(hstar)
    for t in hsum.terms:
        for b in stabilizers:
            if not commutes(t, b):
                raise SectorNotInvariant("operator does not commute with every Z constraint of the sector")


def sector_spectrum(hsum: PauliSum, hstar: Hypergraph) -> SpectrumResult:
    """Full spectrum of hsum on the +1 eigenspace of every Z product in hstar.

    The sector basis is the set of computational states with even overlap
    with all hstar edges; hsum maps it to itself, so the reduced matrix is
    assembled directly on those indices.
    """
    _check_sector(hsum, hstar)
    bits = hstar.num_vertices - gf2_rank(hstar.incidence)
    if bits > config.DENSE_MAX_QUBITS:
        raise TooLarge(f"sector dimension 2**{bits} exceeds the dense limit of 2**{config.DENSE_MAX_QUBITS}")
    idx = sector_indices(hstar)
    d = idx.size
    diag, offdiag = hsum.coefficients(idx)
    mat = np.diag(diag)
    rows = np.arange(d)
    for x, coef in offdiag.items():
        mat[rows, np.searchsorted(idx, idx ^ x)] += coef
    w, v = eigh(mat)
    residual = float(np.linalg.norm(mat @ v[:, 0] - w[0] * v[:, 0]))
    ground = None
    if hsum.num_qubits <= config.LANCZOS_MAX_QUBITS:
        full = np.zeros(hsum.dimension)
        full[idx] = v[:, 0]
        ground = StateVector(hsum.num_qubits, full)
    return SpectrumResult(w, ground, True, residual, None)


# ---------------- Lanczos ---------------- #

def _lowest_ritz(alphas: List[float], betas: List[float]) -> Tuple[float, np.ndarray]:
    if len(alphas) == 1:
        return alphas[0], np.ones(1)
    w, s = eigh_tridiagonal(
        np.asarray(alphas), np.asarray(betas[: len(alphas) - 1]), select="i", select_range=(0, 0)
    )
    return float(w[0]), s[:, 0]


class _Krylov:
    """Growing row buffer for the Lanczos basis."""

    def __init__(self, dim: int, cap: int):
        self.cap = cap
        self.rows = np.empty((min(32, cap), dim))

    def put(self, m: int, v: np.ndarray) -> None:
        if m >= self.rows.shape[0]:
            grown = np.empty((min(2 * self.rows.shape[0], self.cap), self.rows.shape[1]))
            grown[: self.rows.shape[0]] = self.rows
            self.rows = grown
        self.rows[m] = v


def _orthogonalize(w: np.ndarray, block: Optional[np.ndarray]) -> np.ndarray:
    if block is not None and block.shape[0]:
        w = w - block.T @ (block @ w)
    return w


def _lanczos_lowest(
    hsum: PauliSum,
    start: np.ndarray,
    locked: Optional[np.ndarray],
    mask: Optional[np.ndarray],
    tol: float,
    max_iter: int,
    room: int,
) -> Tuple[float, np.ndarray, float, bool]:
    """Lowest Ritz pair of hsum deflated by ``locked``, from one Lanczos run with full reorthogonalization."""
    dim = start.size
    cap = min(max_iter, room) + 1
    basis = _Krylov(dim, cap)
    basis.put(0, start)
    alphas: List[float] = []
    betas: List[float] = []
    scale = 0.0

    def op(v: np.ndarray) -> np.ndarray:
        w = hsum.matvec(v)
        return w * mask if mask is not None else w

    for m in range(cap - 1):
        v = basis.rows[m]
        w = op(v)
        a = float(v @ w)
        w -= a * v
        if m:
            w -= betas[m - 1] * basis.rows[m - 1]
        for _ in range(2):
            w = _orthogonalize(w, basis.rows[: m + 1])
            w = _orthogonalize(w, locked)
        b = float(np.linalg.norm(w))
        alphas.append(a)
        scale = max(scale, abs(a) + b)
        theta, s = _lowest_ritz(alphas, betas)
        estimate = b * abs(s[-1])
        exhausted = b <= BREAKDOWN * max(scale, 1.0) or m + 1 >= room
        last = m + 2 == cap
        if estimate <= tol or exhausted or last:
            y = basis.rows[: m + 1].T @ s
            y /= np.linalg.norm(y)
            residual = float(np.linalg.norm(op(y) - theta * y))
            if residual <= tol or exhausted or last:
                return theta, y, residual, residual <= tol
        betas.append(b)
        basis.put(m + 1, w / b)
    raise AssertionError("unreachable: the loop returns on its last iteration")


def ground_lanczos(
    hsum: PauliSum,
    k: int = 1,
    tol: float | None = None,
    max_iter: int | None = None,
    seed: int | None = None,
    sector: Optional[Hypergraph] = None,
) -> SpectrumResult:
    """Lowest k eigenpairs by Lanczos with full reorthogonalization and locking.

    Each converged Ritz vector is locked and the run restarts from the seeded
    start vector orthogonalized against the locked ones, so degenerate levels
    are found with their multiplicity. With ``sector`` given, every Krylov
    vector is kept inside the +1 sector of its Z products.

    Not converging within ``max_iter`` is reported through ``converged=False``
    and a warning rather than an exception.
    """
    tol = config.LANCZOS_TOL if tol is None else tol
    max_iter = config.LANCZOS_MAX_ITER if max_iter is None else max_iter
    seed = config.LANCZOS_SEED if seed is None else seed
    if k < 1:
        raise ValueError("k must be at least 1")
    if max_iter < 1:
        raise ValueError("max_iter must be at least 1")
    if hsum.num_qubits > config.LANCZOS_MAX_QUBITS:
        raise TooLarge(f"{hsum.num_qubits} qubits exceeds the Lanczos limit of {config.LANCZOS_MAX_QUBITS}")
    mask = None
    room = hsum.dimension
    if sector is not None:
        _check_sector(hsum, sector)
        mask = sector_mask(sector).astype(np.float64)
        room = int(mask.sum())
    k = min(k, room)

    rng = np.random.default_rng(seed)
    seed_vec = rng.standard_normal(hsum.dimension)
    if mask is not None:
        seed_vec *= mask

    values: List[float] = []
    vectors: List[np.ndarray] = []
    residuals: List[float] = []
    converged = True
    while len(values) < k:
        locked = np.array(vectors) if vectors else None
        start = seed_vec
        for _ in range(2):
            start = _orthogonalize(start, locked)
        norm = float(np.linalg.norm(start))
        if norm < 1e-8:
            break
        theta, y, residual, ok = _lanczos_lowest(
            hsum, start / norm, locked, mask, tol, max_iter, room - len(values)
        )
        values.append(theta)
        vectors.append(y)
        residuals.append(residual)
        if not ok:
            converged = False
            warn(f"[LANCZOS] eigenvalue {len(values)} not converged: residual {residual:.3e} > tol {tol:.1e}")
            break

    order = np.argsort(values, kind="stable")
    vals = np.asarray(values)[order]
    vecs = np.array(vectors)[order].T
    return SpectrumResult(
        vals,
        StateVector(hsum.num_qubits, vecs[:, 0]),
        converged,
        float(max(residuals)),
        vecs,
        seed,
    )


# ---------------- fidelity susceptibility ---------------- #

@dataclass(frozen=True)
class ParametrizedModel:
    """A Hamiltonian family indexed by one ratio; ``sector`` restricts Lanczos to its +1 sector."""

    model_id: str
    build: Callable[[float], PauliSum]
    sector: Optional[Hypergraph] = None

    def at(self, ratio: float) -> PauliSum:
        return self.build(ratio)


def lowest_states(model: ParametrizedModel, ratio: float, k: int = 2, **lanczos_kwargs) -> SpectrumResult:
    return ground_lanczos(model.at(ratio), k=k, sector=model.sector, **lanczos_kwargs)


def eigenspace_overlap(psi: np.ndarray, result: SpectrumResult, gap: float | None = None) -> float:
    """|P psi| where P projects on the eigenvectors of ``result`` within ``gap`` of its lowest level."""
    gap = config.DEGENERACY_GAP if gap is None else gap
    vals = result.eigenvalues
    cols = result.vectors[:, vals - vals[0] <= gap]
    return float(np.linalg.norm(cols.T @ psi))


def fidelity_from(here: SpectrumResult, shifted: SpectrumResult, delta: float) -> float:
    overlap = min(eigenspace_overlap(here.vectors[:, 0], shifted), 1.0)
    return 2.0 * (1.0 - overlap) / delta**2


def fidelity_susceptibility(
    model: ParametrizedModel, ratio: float, delta: float | None = None, **lanczos_kwargs
) -> float:
    """2 (1 - |<psi0(ratio)|psi0(ratio + delta)>|) / delta**2. Any nonzero delta is accepted."""
    delta = config.CHI_F_DELTA if delta is None else delta
    if delta == 0:
        raise ValueError("delta must be nonzero")
    here = lowest_states(model, ratio, **lanczos_kwargs)
    shifted = lowest_states(model, ratio + delta, **lanczos_kwargs)
    for point, res in ((ratio, here), (ratio + delta, shifted)):
        if not res.converged:
            raise NotConverged(f"Lanczos did not converge for {model.model_id} at ratio {point:g}", res)
    return fidelity_from(here, shifted, delta)
