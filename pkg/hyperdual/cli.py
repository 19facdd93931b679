"""``hyperdual`` command line.

Usage:
    hyperdual dual sample5.hg -o sample5.dual.hg
    hyperdual ortho sample5.hg
    hyperdual generate chain:8:periodic -o chain8.hg
    hyperdual check-selfdual chain8.hg
    hyperdual verify-duality sample5.hg --j 1 --h 0.5 --tol 1e-9 -o report.txt
    hyperdual scan chain:12:periodic --model ising --start 0.5 --stop 1.5 --step 0.05 -o chain12.csv
    hyperdual tc-robustness square:3x3:periodic --start 0.1 --stop 0.8 --step 0.025 -o square.csv

Exit codes: 0 ok, 1 duality check failed, 2 bad input, 3 computation error.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import List, Optional, Sequence

import numpy as np

from . import __version__, config
from .duality_lab import (
    ScanResult,
    css_scan_model,
    estimate_tc_robustness,
    export_csv,
    export_report,
    ising_scan_model,
    scan_transition,
    verify_duality,
)
from .errors import DuplicateEdges, HypergraphFormatError, HyperdualError, NoTransitionFound, UnsupportedDims
from .hypergraph import Hypergraph, dual, format_hypergraph, is_self_dual, orthogonal, parse_hypergraph
from .lattice_gen import build_graph, generate, parse_lattice_spec
from .utils import Stopwatch, console, eprint, log

EXIT_OK = 0
EXIT_DUALITY_FAILED = 1
EXIT_BAD_INPUT = 2
EXIT_COMPUTATION = 3


class InputError(Exception):
    pass


# ---------------- helpers ---------------- #

def _parse(text: str, source: str, allow_duplicates: bool) -> Hypergraph:
    try:
        return parse_hypergraph(text, allow_duplicates=allow_duplicates)
    except HypergraphFormatError as exc:
        if isinstance(exc.__cause__, DuplicateEdges):
            raise InputError(f"{source}: {exc} (pass --allow-duplicates to accept repeated edges)") from exc
        raise


def load_hypergraph(source: str, allow_duplicates: bool = False) -> Hypergraph:
    """A hypergraph file, ``-`` for stdin, or a lattice spec string such as ``square:3x3:open``."""
    if source == "-":
        return _parse(sys.stdin.read(), "<stdin>", allow_duplicates)
    path = Path(source)
    if path.exists():
        try:
            text = path.read_text(encoding="utf-8")
        except OSError as exc:
            raise InputError(f"cannot read {source}: {exc}") from exc
        return _parse(text, source, allow_duplicates)
    if ":" in source:
        return generate(source)
    raise InputError(f"{source}: no such file and not a lattice spec")


def ratio_grid(start: float, stop: float, step: float) -> List[float]:
    if step <= 0 or stop < start:
        raise InputError("grid needs step > 0 and stop >= start")
    n = int(np.floor((stop - start) / step + 1e-9)) + 1
    return [float(x) for x in np.round(start + step * np.arange(n), 12)]


def emit(text: str, output: Optional[str]) -> None:
    if output:
        path = Path(output)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def show_scan(result: ScanResult) -> None:
    try:
        from rich import box
        from rich.table import Table

        table = Table(title=f"{result.model_id}", box=box.MINIMAL_DOUBLE_HEAD, header_style="bold cyan")
        for name, style in (("ratio", "bold yellow"), ("e0", "green"), ("gap", "blue"), ("chi_f", "magenta")):
            table.add_column(name, style=style, justify="right")
        for s in result.samples:
            table.add_row(f"{s.ratio:.4f}", f"{s.e0:.8f}", f"{s.gap:.6f}", f"{s.chi_f:.4f}" + ("" if s.converged else " !"))
        console.print(table)
    except Exception:
        print(f"\n{result.model_id}")
        header = f"{'RATIO':>8} {'E0':>14} {'GAP':>10} {'CHI_F':>10}"
        print(header)
        print("-" * len(header))
        for s in result.samples:
            print(f"{s.ratio:>8.4f} {s.e0:>14.8f} {s.gap:>10.6f} {s.chi_f:>10.4f}")
    crit = "n/a" if result.critical_estimate is None else f"{result.critical_estimate:.4f}"
    curv = "n/a" if result.curvature_estimate is None else f"{result.curvature_estimate:.4f}"
    print(f"critical ratio: {crit} ({result.method}); energy curvature peak: {curv}")
    if result.literature is not None:
        print(f"literature (thermodynamic limit): {result.literature}")


# ---------------- commands ---------------- #

def cmd_dual(args: argparse.Namespace) -> int:
    emit(format_hypergraph(dual(load_hypergraph(args.input, args.allow_duplicates))), args.output)
    return EXIT_OK


def cmd_ortho(args: argparse.Namespace) -> int:
    emit(format_hypergraph(orthogonal(load_hypergraph(args.input, args.allow_duplicates))), args.output)
    return EXIT_OK


def cmd_generate(args: argparse.Namespace) -> int:
    emit(format_hypergraph(generate(args.spec)), args.output)
    return EXIT_OK


def cmd_check_selfdual(args: argparse.Namespace) -> int:
    h = load_hypergraph(args.input, allow_duplicates=True)
    witness = is_self_dual(h, args.budget)
    if witness is None:
        print("NOT-SELF-DUAL")
        return EXIT_OK
    print("SELF-DUAL")
    print("vertex_map: " + " ".join(f"{i + 1}->{v + 1}" for i, v in enumerate(witness.vertex_map)))
    print("edge_map: " + " ".join(f"{i + 1}->{e + 1}" for i, e in enumerate(witness.edge_map)))
    return EXIT_OK


def cmd_verify_duality(args: argparse.Namespace) -> int:
    h = load_hypergraph(args.input, args.allow_duplicates)
    report = verify_duality(h, args.j, args.h, args.tol)
    if args.output:
        export_report(report, args.output)
    status = "PASSED" if report.passed else "FAILED"
    print(
        f"[DUALITY] {status}: sector dimension {len(report.original_sector_spectrum)}, "
        f"shift {report.shift_used:.12g}, max deviation {report.max_abs_deviation:.3e} (tol {report.tol:.1e})"
    )
    if report.dropped_edges:
        print(f"[DUALITY] dropped dependent edges: {' '.join(str(i + 1) for i in report.dropped_edges)}")
    return EXIT_OK if report.passed else EXIT_DUALITY_FAILED


def _finish_scan(result: ScanResult, output: str) -> int:
    export_csv(result, output)
    show_scan(result)
    try:
        result.require_critical()
    except NoTransitionFound as exc:
        eprint(f"[ERROR] {exc}")
        return EXIT_COMPUTATION
    return EXIT_OK


def cmd_scan(args: argparse.Namespace) -> int:
    h = load_hypergraph(args.input, allow_duplicates=True)
    grid = ratio_grid(args.start, args.stop, args.step)
    if args.model == "css":
        model = css_scan_model(h, args.j, model_id=f"css:{args.input}")
    else:
        model = ising_scan_model(h, model_id=f"ising:{args.input}")
    return _finish_scan(scan_transition(model, grid, args.delta, verbose=True), args.output)


def cmd_tc_robustness(args: argparse.Namespace) -> int:
    spec = parse_lattice_spec(args.spec)
    grid = ratio_grid(args.start, args.stop, args.step)
    result = estimate_tc_robustness(build_graph(spec), grid, args.delta, kind=spec.kind, model_id=f"tc:{spec}", verbose=True)
    if result.dropped_edges:
        log(f"[TC] dependent stars dropped by the reduction: {len(result.dropped_edges)}")
    return _finish_scan(result, args.output)


# ---------------- parser ---------------- #

def build_arg_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="hyperdual", description="Hypergraph CSS codes and their strong-weak duality")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="verb", required=True)

    def with_input(sp: argparse.ArgumentParser) -> None:
        sp.add_argument("input", help="hypergraph file, '-' for stdin, or a lattice spec (kind:dims[:boundary])")
        sp.add_argument("--allow-duplicates", action="store_true", help="accept repeated hyperedges")

    def with_grid(sp: argparse.ArgumentParser) -> None:
        sp.add_argument("--start", type=float, required=True, help="first ratio h/J")
        sp.add_argument("--stop", type=float, required=True, help="last ratio (inclusive)")
        sp.add_argument("--step", type=float, required=True, help="grid spacing")
        sp.add_argument("--delta", type=float, default=config.CHI_F_DELTA, help="finite difference for chi_F")
        sp.add_argument("-o", "--output", required=True, help="CSV file (ratio,e0,gap,chi_f)")

    sp = sub.add_parser("dual", help="write the dual hypergraph")
    with_input(sp)
    sp.add_argument("-o", "--output", help="output file (default: stdout)")
    sp.set_defaults(func=cmd_dual)

    sp = sub.add_parser("ortho", help="write the orthogonal hypergraph")
    with_input(sp)
    sp.add_argument("-o", "--output", help="output file (default: stdout)")
    sp.set_defaults(func=cmd_ortho)

    sp = sub.add_parser("check-selfdual", help="search for a self-duality witness")
    sp.add_argument("input", help="hypergraph file, '-' for stdin, or a lattice spec")
    sp.add_argument("--budget", type=int, default=config.SELF_DUAL_NODE_BUDGET, help="search node budget")
    sp.set_defaults(func=cmd_check_selfdual)

    sp = sub.add_parser("generate", help="write a lattice hypergraph")
    sp.add_argument("spec", help="e.g. chain:8:periodic, square:3x3:open, colex2:3x3, plaquette:3x3")
    sp.add_argument("-o", "--output", help="output file (default: stdout)")
    sp.set_defaults(func=cmd_generate)

    sp = sub.add_parser("verify-duality", help="compare the CSS sector spectrum with the dual model")
    with_input(sp)
    sp.add_argument("--j", type=float, default=1.0, help="stabilizer coupling J (> 0)")
    sp.add_argument("--h", type=float, default=0.5, help="magnetic field h (>= 0)")
    sp.add_argument("--tol", type=float, default=config.DUALITY_TOL, help="max allowed deviation")
    sp.add_argument("-o", "--output", help="report file")
    sp.set_defaults(func=cmd_verify_duality)

    sp = sub.add_parser("scan", help="ground energy, gap and chi_F over a ratio grid")
    with_input(sp)
    sp.add_argument("--model", choices=("ising", "css"), default="ising", help="Ising-like model on the input, or the perturbed CSS model")
    sp.add_argument("--j", type=float, default=1.0, help="J for the css model")
    with_grid(sp)
    sp.set_defaults(func=cmd_scan)

    sp = sub.add_parser("tc-robustness", help="critical h/J of the toric code on a lattice")
    sp.add_argument("spec", help="graph lattice spec, e.g. honeycomb:2x2:periodic")
    with_grid(sp)
    sp.set_defaults(func=cmd_tc_robustness)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_arg_parser()
    try:
        args = parser.parse_args(list(sys.argv[1:] if argv is None else argv))
    except SystemExit as exc:
        return int(exc.code or 0)
    if getattr(args, "j", 1.0) <= 0:
        eprint("[ERROR] --j must be positive")
        return EXIT_BAD_INPUT

    timer = Stopwatch()
    try:
        code = args.func(args)
    except (InputError, HypergraphFormatError, UnsupportedDims) as exc:
        eprint(f"[ERROR] {exc}")
        return EXIT_BAD_INPUT
    except HyperdualError as exc:
        eprint(f"[ERROR] {type(exc).__name__}: {exc}")
        return EXIT_COMPUTATION
    except ValueError as exc:
        eprint(f"[ERROR] {exc}")
        return EXIT_BAD_INPUT
    except OSError as exc:
        eprint(f"[ERROR] {exc}")
        return EXIT_COMPUTATION
    except KeyboardInterrupt:
        eprint("[INTERRUPTION] stopped by user")
        return 130
    eprint(f"[TIME] {args.verb}: {timer.fmt()}")
    return code


if __name__ == "__main__":  # pragma: no cover
    raise SystemExit(main())
