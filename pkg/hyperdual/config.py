"""Numerical defaults and environment overrides."""

from __future__ import annotations

import os
from pathlib import Path

from .utils import warn

ROOT = Path(__file__).resolve().parents[1]

# ---------------- Configuration ---------------- #
DUALITY_TOL = 1e-9
LANCZOS_TOL = 1e-10
LANCZOS_MAX_ITER = 2000
LANCZOS_SEED = 20240521
DEGENERACY_GAP = 1e-10
DENSE_MAX_QUBITS = 12
LANCZOS_MAX_QUBITS = 24
# Basis indices are int64.
INDEX_MAX_QUBITS = 62
SELF_DUAL_NODE_BUDGET = 200_000
CHI_F_DELTA = 1e-3
FLAT_CHI_F = 1e-6
CSV_DIGITS = 17

THREADS_ENV = "HYPERDUAL_THREADS"
MODELS_CONFIG_PATH = ROOT / "data" / "models.json"


def thread_count() -> int:
    """Worker cap for scans: ``HYPERDUAL_THREADS`` if set, else the CPU count."""
    raw = os.environ.get(THREADS_ENV)
    if raw is None or raw.strip() == "":
        return os.cpu_count() or 1
    try:
        value = int(raw)
    except ValueError:
        warn(f"{THREADS_ENV}={raw!r} is not an integer; using 1 thread")
        return 1
    if value < 1:
        warn(f"{THREADS_ENV}={value} must be positive; using 1 thread")
        return 1
    return value
