"""Finite-size toric-code robustness (h/J)_c on small periodic clusters.

Each lattice is scanned through its transverse-field Ising dual; the table puts
the finite-size chi_F peak next to the thermodynamic-limit literature value and
checks that the ordering of the clusters matches the ordering of the
literature values. Exits 1 if it does not.

Usage examples:
  uv run scripts/robustness_table.py
  uv run scripts/robustness_table.py --lattices honeycomb:2x2 square:3x3 cubic:2x2x2
  uv run scripts/robustness_table.py --step 0.05 --csv-dir data/scans
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional

ROOT = Path(__file__).resolve().parents[1]
if str(ROOT) not in sys.path:
    sys.path.insert(0, str(ROOT))

from hyperdual.cli import ratio_grid  # noqa: E402
from hyperdual.config import MODELS_CONFIG_PATH  # noqa: E402
from hyperdual.duality_lab import ScanResult, estimate_tc_robustness, export_csv  # noqa: E402
from hyperdual.errors import HyperdualError  # noqa: E402
from hyperdual.lattice_gen import build_graph, parse_lattice_spec  # noqa: E402
from hyperdual.utils import Stopwatch, console, eprint, log  # noqa: E402

# ---------------- Configuration ---------------- #
DEFAULT_SETTINGS: Dict[str, Any] = {
    "lattices": ["honeycomb:2x2:periodic", "square:3x3:periodic", "cubic:2x2x2:periodic"],
    "start": 0.05,
    "stop": 1.0,
    "step": 0.025,
}


def load_robustness_config(path: Path = MODELS_CONFIG_PATH) -> Dict[str, Any]:
    try:
        with open(path, 'r', encoding='utf-8') as f:
            section = json.load(f).get('robustness') or {}
        return {**DEFAULT_SETTINGS, **section}
    except FileNotFoundError:
        eprint(f"[WARNING] Models config file not found: {path}")
    except (json.JSONDecodeError, AttributeError) as e:
        eprint(f"[WARNING] Invalid models config: {e}")
    eprint("[WARNING] Using built-in robustness settings")
    return dict(DEFAULT_SETTINGS)


def ordering_holds(results: List[ScanResult]) -> bool:
    """Clusters sorted by literature value must come out sorted the same way."""
    known = [r for r in results if r.literature is not None and r.critical_estimate is not None]
    by_literature = sorted(known, key=lambda r: r.literature, reverse=True)
    estimates = [r.critical_estimate for r in by_literature]
    return all(a > b for a, b in zip(estimates, estimates[1:]))


def show_results(results: List[ScanResult]) -> None:
    def fmt(v: Optional[float]) -> str:
        return "n/a" if v is None else f"{v:.4f}"

    try:
        from rich import box
        from rich.table import Table

        table = Table(title="Toric code robustness (h/J)_c", box=box.MINIMAL_DOUBLE_HEAD, header_style='bold cyan')
        for c, s, j in [("lattice", "white", "left"), ("chi_F peak", "green", "right"),
                        ("curvature", "blue", "right"), ("literature", "magenta", "right"), ("method", "cyan", "left")]:
            table.add_column(c, style=s, justify=j)
        for r in results:
            table.add_row(r.model_id, fmt(r.critical_estimate), fmt(r.curvature_estimate), fmt(r.literature), r.method)
        console.print(table)
    except Exception:
        header = f"{'LATTICE':<28} {'CHI_F':>8} {'CURV':>8} {'LIT':>8}"
        print(header)
        print('-' * len(header))
        for r in results:
            print(f"{r.model_id:<28} {fmt(r.critical_estimate):>8} {fmt(r.curvature_estimate):>8} {fmt(r.literature):>8}")


def build_arg_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(description="Toric code robustness on small clusters")
    p.add_argument('--lattices', nargs='+', help='Lattice specs (default: from data/models.json)')
    p.add_argument('--start', type=float, help='First ratio h/J')
    p.add_argument('--stop', type=float, help='Last ratio h/J')
    p.add_argument('--step', type=float, help='Grid spacing')
    p.add_argument('--csv-dir', help='Write one scan CSV per lattice into this directory')
    return p


def main(argv: List[str]) -> int:
    args = build_arg_parser().parse_args(argv[1:])
    settings = load_robustness_config()
    lattices = args.lattices or settings['lattices']
    grid = ratio_grid(
        args.start if args.start is not None else settings['start'],
        args.stop if args.stop is not None else settings['stop'],
        args.step if args.step is not None else settings['step'],
    )

    timer = Stopwatch()
    results: List[ScanResult] = []
    for text in lattices:
        try:
            spec = parse_lattice_spec(text)
            log(f"[TC] {spec}: {len(grid)} ratios")
            result = estimate_tc_robustness(build_graph(spec), grid, kind=spec.kind, model_id=str(spec))
        except HyperdualError as e:
            eprint(f"[ERROR] {text}: {e}")
            continue
        results.append(result)
        if args.csv_dir:
            out = Path(args.csv_dir) / f"{str(spec).replace(':', '_')}.csv"
            export_csv(result, out)
            log(f"[CSV] {out}")

    show_results(results)
    ok = ordering_holds(results)
    print(f"ordering matches literature: {'yes' if ok else 'NO'} ({timer.fmt()})")
    return 0 if ok else 1


if __name__ == '__main__':  # pragma: no cover
    raise SystemExit(main(sys.argv))
