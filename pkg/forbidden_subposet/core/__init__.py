"""Core modules for the forbidden-subposet toolkit."""
from .logger import setup_logging
from .parser import load_family, load_poset, parse_family_spec, parse_poset_spec
from .report import ReportWriter
from .utils import (
    Icons,
    format_row_status,
    parallel_map,
    parse_band,
    parse_rational,
    spawn_rngs,
)

__all__ = [
    "load_family",
    "load_poset",
    "parse_family_spec",
    "parse_poset_spec",
    "ReportWriter",
    "Icons",
    "format_row_status",
    "parallel_map",
    "parse_band",
    "parse_rational",
    "spawn_rngs",
    "setup_logging",
]
