"""Run verify_duality over every configured model and coupling point.

Models and couplings come from data/models.json (built-in defaults if the file
is missing or invalid). Exits 1 if any point fails.

Usage examples:
  uv run scripts/duality_sweep.py
  uv run scripts/duality_sweep.py --tol 1e-10
  uv run scripts/duality_sweep.py --config my_models.json --only sample5 tc_cycle4
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple

ROOT = Path(__file__).resolve().parents[1]
if str(ROOT) not in sys.path:
    sys.path.insert(0, str(ROOT))

from hyperdual.cli import load_hypergraph  # noqa: E402
from hyperdual.config import DUALITY_TOL, MODELS_CONFIG_PATH  # noqa: E402
from hyperdual.duality_lab import DualityReport, verify_duality  # noqa: E402
from hyperdual.errors import HyperdualError  # noqa: E402
from hyperdual.utils import Stopwatch, console, eprint, log  # noqa: E402

# ---------------- Configuration ---------------- #
DEFAULT_MODELS = {
    "sample5": "data/sample5.hg",
    "tc_cycle4": "chain:4:periodic",
    "tc_square2x2": "square:2x2:periodic",
    "selfdual_chain8": "hypercubic:8",
}
DEFAULT_COUPLINGS = [(1.0, 0.0), (1.0, 0.5), (1.0, 1.0), (1.0, 2.0), (0.5, 1.0)]


def load_models_config(path: Path = MODELS_CONFIG_PATH) -> Tuple[Dict[str, str], List[Tuple[float, float]]]:
    """Load named models and the (j, h) grid from a JSON file.

    Returns:
        Tuple of (model name -> spec or file, list of (j, h) pairs)
    """
    try:
        with open(path, 'r', encoding='utf-8') as f:
            cfg = json.load(f)
        models = cfg.get('models') or DEFAULT_MODELS
        couplings = [(float(j), float(h)) for j, h in cfg.get('couplings') or DEFAULT_COUPLINGS]
        return models, couplings
    except FileNotFoundError:
        eprint(f"[WARNING] Models config file not found: {path}")
    except (json.JSONDecodeError, TypeError, ValueError) as e:
        eprint(f"[WARNING] Invalid models config: {e}")
    eprint("[WARNING] Using built-in models")
    return dict(DEFAULT_MODELS), list(DEFAULT_COUPLINGS)


def resolve_source(source: str) -> str:
    candidate = ROOT / source
    return str(candidate) if candidate.exists() else source


def show_reports(rows: List[Dict[str, Any]]) -> None:
    try:
        from rich import box
        from rich.table import Table

        table = Table(title=f"Duality checks ({len(rows)})", box=box.MINIMAL_DOUBLE_HEAD, header_style='bold cyan')
        for c, s, j in [("model", "white", "left"), ("j", "green", "right"), ("h", "green", "right"),
                        ("dim", "blue", "right"), ("shift", "magenta", "right"), ("deviation", "yellow", "right"),
                        ("dropped", "cyan", "right"), ("status", "bold", "left")]:
            table.add_column(c, style=s, justify=j)
        for r in rows:
            table.add_row(r['model'], f"{r['j']:g}", f"{r['h']:g}", str(r['dim']), f"{r['shift']:g}",
                          f"{r['deviation']:.2e}", str(r['dropped']), r['status'])
        console.print(table)
    except Exception:
        header = f"{'MODEL':<20} {'J':>5} {'H':>5} {'DIM':>6} {'SHIFT':>8} {'DEVIATION':>10} {'STATUS':<6}"
        print(header)
        print('-' * len(header))
        for r in rows:
            print(f"{r['model']:<20} {r['j']:>5g} {r['h']:>5g} {r['dim']:>6} {r['shift']:>8g} {r['deviation']:>10.2e} {r['status']:<6}")


def row_for(name: str, report: DualityReport) -> Dict[str, Any]:
    return {
        'model': name,
        'j': report.j,
        'h': report.field,
        'dim': len(report.original_sector_spectrum),
        'shift': report.shift_used,
        'deviation': report.max_abs_deviation,
        'dropped': len(report.dropped_edges),
        'status': 'ok' if report.passed else 'FAIL',
    }


def build_arg_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(description="Batch strong-weak duality check")
    p.add_argument('--config', help='Models JSON (default: data/models.json)')
    p.add_argument('--tol', type=float, default=DUALITY_TOL, help='Max allowed spectral deviation')
    p.add_argument('--only', nargs='+', help='Restrict to these model names')
    return p


def main(argv: List[str]) -> int:
    args = build_arg_parser().parse_args(argv[1:])
    models, couplings = load_models_config(Path(args.config) if args.config else MODELS_CONFIG_PATH)
    if args.only:
        missing = [m for m in args.only if m not in models]
        if missing:
            eprint(f"[ERROR] Unknown model(s): {', '.join(missing)}")
            return 2
        models = {m: models[m] for m in args.only}

    timer = Stopwatch()
    rows: List[Dict[str, Any]] = []
    failures = 0
    for name, source in models.items():
        try:
            h = load_hypergraph(resolve_source(source), allow_duplicates=True)
        except (HyperdualError, OSError) as e:
            eprint(f"[SKIP] {name}: {e}")
            failures += 1
            continue
        log(f"[MODEL] {name}: K={h.num_vertices}, N={h.num_edges}")
        for j, field in couplings:
            report: Optional[DualityReport] = None
            try:
                report = verify_duality(h, j, field, args.tol)
            except HyperdualError as e:
                eprint(f"[ERROR] {name} at j={j:g}, h={field:g}: {e}")
                failures += 1
                continue
            rows.append(row_for(name, report))
            failures += not report.passed
    show_reports(rows)
    print(f"{len(rows)} checks, {failures} failure(s) in {timer.fmt()}")
    return 1 if failures else 0


if __name__ == '__main__':  # pragma: no cover
    raise SystemExit(main(sys.argv))
