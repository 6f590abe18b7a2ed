"""Utility functions for the forbidden-subposet toolkit."""
import logging
import re
import subprocess
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Callable, Iterable, TypeVar

import numpy as np

from forbidden_subposet import __version__
from forbidden_subposet.core.exceptions import ParseError
from forbidden_subposet.models import Band


logger = logging.getLogger("forbidden_subposet")

T = TypeVar("T")
R = TypeVar("R")


@dataclass(frozen=True)
class Icons:
    """Unicode icons for consistent output formatting."""
    POSET = "🔷"
    SEARCH = "🔍"
    SUCCESS = "✓"
    FAILURE = "✗"
    WARNING = "⚠"
    ERROR = "❌"
    SKIP = "⏭"
    REPORT = "📄"


def parse_rational(text: str) -> Fraction:
    """Parse "p/q", an integer or a decimal into an exact Fraction."""
    try:
        return Fraction(re.sub(r"\s+", "", text))
    except ValueError:
        raise ParseError(f"Not a rational number: {text!r}")
    except ZeroDivisionError:
        raise ParseError(f"Zero denominator in {text!r}")


def parse_band(text: str) -> Band:
    """Parse "lo,hi" into a Band."""
    parts = [p.strip() for p in text.split(",")]
    if len(parts) != 2:
        raise ParseError(f"Band must be given as lo,hi: {text!r}")
    try:
        lo, hi = float(parts[0]), float(parts[1])
    except ValueError:
        raise ParseError(f"Band ends must be numbers: {text!r}")
    if lo > hi:
        raise ParseError(f"Band lower end exceeds upper end: {text!r}")
    return Band(lo, hi)


def spawn_rngs(seed: int, count: int) -> list[np.random.Generator]:
    """Independent generators for ``count`` workers or batches."""
    return [np.random.default_rng(child) for child in np.random.SeedSequence(seed).spawn(count)]


def batch_seeds(rng: np.random.Generator, count: int) -> list[int]:
    """Per-batch seeds drawn from ``rng``; batches then run independently."""
    return [int(s) for s in rng.integers(0, 2 ** 63, size=count, dtype=np.int64)]


def parallel_map(func: Callable[[T], R], items: Iterable[T], workers: int = 1) -> list[R]:
    """Map ``func`` over ``items``, results in input order.

    Uses a process pool when ``workers > 1``; ``func`` must then be a
    module-level function and the items picklable.
    """
    items = list(items)
    if workers <= 1 or len(items) <= 1:
        return [func(item) for item in items]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(func, items))


def version_string() -> str:
    """``git describe`` of the source tree, falling back to the package version."""
    try:
        result = subprocess.run(
            ["git", "describe", "--tags", "--always", "--dirty"],
            cwd=Path(__file__).resolve().parent,
            capture_output=True,
            text=True,
            timeout=5,
        )
    except (OSError, subprocess.SubprocessError):
        return __version__
    described = result.stdout.strip()
    if result.returncode != 0 or not described:
        return __version__
    return f"{__version__}+{described}"


def format_row_status(index: int, total: int, name: str, status_icon: str, detail: str = "") -> str:
    """Format a progress line for one checked row."""
    prefix = f"[{index}/{total}]"
    if detail:
        return f"{prefix} {name} {status_icon} {detail}"
    return f"{prefix} {name} {status_icon}"
