"""Executable duality check, transition scans and TC robustness estimates."""

from __future__ import annotations

import csv
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Optional, Sequence, Tuple

import numpy as np

from . import config
from .errors import InvalidHypergraph, NoTransitionFound, TooLarge
from .hypergraph import Hypergraph, SelfDualWitness, dual, is_self_dual, orthogonal, reduce_independent
from .lattice_gen import LITERATURE_CRITICAL_RATIO, Graph, toric_code_hypergraph
from .pauli_ham import dual_model, dual_shift, ising_like_hamiltonian, perturbed_css_hamiltonian
from .spectra import ParametrizedModel, eig_dense, fidelity_from, lowest_states, sector_spectrum
from .utils import log, warn

CHI_F_PEAK = "chi_f_peak"
ENERGY_CURVATURE = "energy_curvature"
NO_ESTIMATE = "none"

CSV_HEADER = ("ratio", "e0", "gap", "chi_f")


@dataclass(frozen=True)
class DualityReport:
    original_sector_spectrum: Tuple[float, ...]
    dual_spectrum: Tuple[float, ...]
    shift_used: float
    max_abs_deviation: float
    passed: bool
    dropped_edges: Tuple[int, ...]
    j: float
    field: float
    tol: float


def _deviation(a: np.ndarray, b: np.ndarray) -> float:
    if a.shape != b.shape:
        return math.inf
    if a.size == 0:
        return 0.0
    return float(np.max(np.abs(np.sort(a) - np.sort(b))))


def verify_duality(h: Hypergraph, j: float, field: float, tol: float | None = None) -> DualityReport:
    """Compare the Z-sector spectrum of the perturbed CSS model with the dual Ising-like spectrum.

    Dependent edges are dropped first (the stabilizer group is unchanged) and
    listed in ``dropped_edges``.
    """
    tol = config.DUALITY_TOL if tol is None else tol
    reduced, dropped = reduce_independent(h)
    if dropped:
        warn(f"[DUALITY] dropped {len(dropped)} dependent edge(s): {[i + 1 for i in dropped]}")
    hstar = orthogonal(reduced)
    original = sector_spectrum(perturbed_css_hamiltonian(reduced, hstar, j, field), hstar).eigenvalues
    dual_side = eig_dense(dual_model(reduced, j, field)).eigenvalues
    deviation = _deviation(original, dual_side)
    return DualityReport(
        tuple(float(e) for e in np.sort(original)),
        tuple(float(e) for e in np.sort(dual_side)),
        dual_shift(reduced, j, field),
        deviation,
        deviation <= tol,
        dropped,
        float(j),
        float(field),
        float(tol),
    )


def measure_shift(h: Hypergraph, j: float, field: float) -> float:
    """Constant separating the sector spectrum from the dual spectrum built without any shift."""
    reduced, _ = reduce_independent(h)
    hstar = orthogonal(reduced)
    original = np.sort(sector_spectrum(perturbed_css_hamiltonian(reduced, hstar, j, field), hstar).eigenvalues)
    bare = np.sort(eig_dense(ising_like_hamiltonian(dual(reduced), a=field, b=j)).eigenvalues)
    return float(np.mean(original - bare))


@dataclass(frozen=True)
class SelfDualCheck:
    witness: SelfDualWitness
    terms_match: bool


def check_self_dual_model(
    h: Hypergraph, j: float, field: float, witness: Optional[SelfDualWitness] = None
) -> SelfDualCheck:
    """Relabel the Ising-like models on dual(h) by the witness and compare them term by term with those on h.

    Both coupling assignments ``(field, j)`` and ``(j, field)`` are checked, so
    the dual model at (j, field) and at (field, j) are the same operator up to
    relabeling and exchange of the two coefficient families.
    """
    witness = witness or is_self_dual(h)
    if witness is None:
        raise InvalidHypergraph("hypergraph is not self-dual")
    hd = dual(h)
    match = True
    for a, b in ((field, j), (j, field)):
        moved = ising_like_hamiltonian(hd, a=a, b=b).relabel(witness.vertex_map)
        match &= moved.as_dict() == ising_like_hamiltonian(h, a=a, b=b).as_dict()
    return SelfDualCheck(witness, match)


# ---------------- scans ---------------- #

@dataclass(frozen=True)
class ScanSample:
    ratio: float
    e0: float
    gap: float
    chi_f: float
    converged: bool = True


@dataclass(frozen=True)
class ScanResult:
    model_id: str
    samples: Tuple[ScanSample, ...]
    critical_estimate: Optional[float]
    method: str
    curvature_estimate: Optional[float] = None
    flagged: Tuple[float, ...] = ()
    literature: Optional[float] = None
    dropped_edges: Tuple[int, ...] = ()

    @property
    def ratios(self) -> np.ndarray:
        return np.array([s.ratio for s in self.samples])

    def require_critical(self) -> float:
        if self.critical_estimate is None:
            raise NoTransitionFound(f"no transition found for {self.model_id}")
        return self.critical_estimate


def ising_scan_model(h: Hypergraph, model_id: str | None = None) -> ParametrizedModel:
    """-sum_e X_e - r sum_v Z_v, restricted to the +1 sector of its Z symmetries."""
    return ParametrizedModel(
        model_id or f"ising:{h!r}",
        lambda r: ising_like_hamiltonian(h, a=1.0, b=r),
        sector=orthogonal(h),
    )


def css_scan_model(h: Hypergraph, j: float = 1.0, model_id: str | None = None) -> ParametrizedModel:
    """Perturbed CSS model at field r*j, restricted to its Z-stabilized sector."""
    reduced, _ = reduce_independent(h)
    hstar = orthogonal(reduced)
    return ParametrizedModel(
        model_id or f"css:{h!r}",
        lambda r: perturbed_css_hamiltonian(reduced, hstar, j, r * j),
        sector=hstar,
    )


def _parabolic_peak(xs: np.ndarray, ys: np.ndarray, i: int) -> float:
    if i == 0 or i == len(xs) - 1:
        return float(xs[i])
    a, b, _ = np.polyfit(xs[i - 1 : i + 2], ys[i - 1 : i + 2], 2)
    if a >= 0:
        return float(xs[i])
    return float(np.clip(-b / (2 * a), xs[i - 1], xs[i + 1]))


def chi_f_estimate(ratios: np.ndarray, chi: np.ndarray) -> Optional[float]:
    ok = np.isfinite(chi)
    if not ok.any() or np.max(chi[ok]) <= config.FLAT_CHI_F:
        return None
    xs, ys = ratios[ok], chi[ok]
    return _parabolic_peak(xs, ys, int(np.argmax(ys)))


def curvature_estimate(ratios: np.ndarray, e0: np.ndarray) -> Optional[float]:
    """Location of the most negative second derivative of the ground energy (non-uniform grid)."""
    ok = np.isfinite(e0)
    xs, ys = ratios[ok], e0[ok]
    if xs.size < 3:
        return None
    h1 = xs[1:-1] - xs[:-2]
    h2 = xs[2:] - xs[1:-1]
    d2 = 2.0 * ((ys[2:] - ys[1:-1]) / h2 - (ys[1:-1] - ys[:-2]) / h1) / (h1 + h2)
    scale = max(1.0, float(np.max(np.abs(ys))))
    if np.max(-d2) <= config.FLAT_CHI_F * scale:
        return None
    return _parabolic_peak(xs[1:-1], -d2, int(np.argmax(-d2)))


def _scan_point(model: ParametrizedModel, ratio: float, delta: float) -> ScanSample:
    here = lowest_states(model, ratio)
    shifted = lowest_states(model, ratio + delta)
    converged = here.converged and shifted.converged
    chi = fidelity_from(here, shifted, delta) if converged else math.nan
    return ScanSample(float(ratio), here.ground_energy, here.gap, chi, converged)


def scan_transition(
    model: ParametrizedModel,
    ratios: Sequence[float],
    delta: float | None = None,
    *,
    verbose: bool = False,
) -> ScanResult:
    """Ground energy, gap and fidelity susceptibility over a ratio grid, evaluated concurrently.

    ``critical_estimate`` is the refined chi_F peak, falling back to the energy
    curvature peak; it is None (with a warning) for a flat scan. Points where
    Lanczos did not converge are listed in ``flagged`` and carry chi_f = nan.
    """
    delta = config.CHI_F_DELTA if delta is None else delta
    if delta == 0:
        raise ValueError("delta must be nonzero")
    grid = [float(r) for r in ratios]
    if len(grid) < 5:
        raise ValueError(f"a scan needs at least 5 ratios, got {len(grid)}")
    if any(b <= a for a, b in zip(grid, grid[1:])):
        raise ValueError("ratios must be strictly increasing")

    workers = max(1, min(config.thread_count(), len(grid)))
    if verbose:
        log(f"[SCAN] {model.model_id}: {len(grid)} points on {workers} thread(s)")
    with ThreadPoolExecutor(max_workers=workers) as pool:
        samples = tuple(pool.map(lambda r: _scan_point(model, r, delta), grid))

    flagged = tuple(s.ratio for s in samples if not s.converged)
    if flagged:
        warn(f"[SCAN] {model.model_id}: Lanczos did not converge at ratio(s) {list(flagged)}")
    xs = np.array(grid)
    chi_est = chi_f_estimate(xs, np.array([s.chi_f for s in samples]))
    curv_est = curvature_estimate(xs, np.array([s.e0 for s in samples]))
    if chi_est is not None:
        critical, method = chi_est, CHI_F_PEAK
    elif curv_est is not None:
        critical, method = curv_est, ENERGY_CURVATURE
    else:
        critical, method = None, NO_ESTIMATE
        warn(f"[SCAN] {model.model_id}: fidelity susceptibility is flat; no transition found")
    if verbose and critical is not None:
        log(f"[SCAN] {model.model_id}: critical ratio ~ {critical:.4f} ({method})")
    return ScanResult(model.model_id, samples, critical, method, curv_est, flagged)


def estimate_tc_robustness(
    g: Graph,
    ratios: Sequence[float],
    delta: float | None = None,
    *,
    kind: str | None = None,
    model_id: str | None = None,
    verbose: bool = False,
) -> ScanResult:
    """Critical h/J of the toric code on g, from the transverse-field Ising model on g.

    The Ising model lives on dual(TC(g)): interaction h, transverse field J.
    Its parity sector is the image of the TC Z-sector, so the scan ratio is
    directly the TC ratio h/J. Stars dropped by the independent reduction are
    reported in ``dropped_edges``.
    """
    tc = toric_code_hypergraph(g)
    _, dropped = reduce_independent(tc)
    ising = dual(tc)
    if ising.num_vertices > config.LANCZOS_MAX_QUBITS:
        raise TooLarge(f"dual model has {ising.num_vertices} qubits (limit {config.LANCZOS_MAX_QUBITS})")
    model = ParametrizedModel(
        model_id or f"tc:{kind or 'graph'}:{g.num_vertices}",
        lambda r: ising_like_hamiltonian(ising, a=r, b=1.0),
        sector=orthogonal(ising),
    )
    result = scan_transition(model, ratios, delta, verbose=verbose)
    return replace(result, dropped_edges=dropped, literature=LITERATURE_CRITICAL_RATIO.get(kind or ""))


# ---------------- files ---------------- #

def _fmt(value: float) -> str:
    return f"{value:.{config.CSV_DIGITS}g}"


def export_csv(r: ScanResult, path: str | Path) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(CSV_HEADER)
        for s in r.samples:
            writer.writerow([_fmt(s.ratio), _fmt(s.e0), _fmt(s.gap), _fmt(s.chi_f)])


def read_scan_csv(path: str | Path) -> Tuple[ScanSample, ...]:
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if tuple(header or ()) != CSV_HEADER:
            raise ValueError(f"{path}: expected header {','.join(CSV_HEADER)}")
        out = []
        for row in reader:
            ratio, e0, gap, chi = (float(x) for x in row)
            out.append(ScanSample(ratio, e0, gap, chi, not math.isnan(chi)))
    return tuple(out)


def format_report(d: DualityReport) -> str:
    lines = [
        f"passed: {str(d.passed).lower()}",
        f"j: {_fmt(d.j)}",
        f"field: {_fmt(d.field)}",
        f"tol: {_fmt(d.tol)}",
        f"shift_used: {_fmt(d.shift_used)}",
        f"max_abs_deviation: {_fmt(d.max_abs_deviation)}",
        f"sector_dimension: {len(d.original_sector_spectrum)}",
        f"dropped_edges: {' '.join(str(i + 1) for i in d.dropped_edges)}".rstrip(),
        f"original_sector_spectrum: {' '.join(_fmt(e) for e in d.original_sector_spectrum)}",
        f"dual_spectrum: {' '.join(_fmt(e) for e in d.dual_spectrum)}",
    ]
    return "\n".join(lines) + "\n"


def export_report(d: DualityReport, path: str | Path) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(format_report(d), encoding="utf-8")
