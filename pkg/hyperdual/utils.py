"""Console helpers shared by the library, the CLI and the batch scripts."""

from __future__ import annotations

import time
from datetime import datetime, timezone
from typing import Any

from rich.console import Console

# Both consoles resolve sys.stdout / sys.stderr lazily, so pytest capture works.
console = Console(highlight=False)
err_console = Console(stderr=True, highlight=False)


def eprint(*args: Any, **kwargs: Any) -> None:
    err_console.print(*args, markup=False, soft_wrap=True, **kwargs)


def log(msg: str) -> None:
    """Progress line with a simple UTC timestamp, e.g. ``[13:02:11] [SCAN] 21 points``."""
    now = datetime.now(timezone.utc).strftime('%H:%M:%S')
    err_console.print(f"[{now}] {msg}", markup=False, soft_wrap=True)


def warn(msg: str) -> None:
    eprint(f"[WARNING] {msg}")


class Stopwatch:
    """Wall-clock timer used for the ``[TIME]`` lines of the CLI."""

    def __init__(self) -> None:
        self._start = time.perf_counter()

    def elapsed(self) -> float:
        return time.perf_counter() - self._start

    def fmt(self) -> str:
        secs = self.elapsed()
        if secs < 60:
            return f"{secs:.2f}s"
        return f"{secs / 60:.1f}m"
