"""Options, configuration and error exits shared by every command."""
import logging
from functools import wraps
from pathlib import Path
from typing import Any, Callable, NoReturn, Optional

import click

from config import (
    CHAIN_ENUMERATION_CAP,
    DEFAULT_FORMAT,
    DEFAULT_NODE_LIMIT,
    DEFAULT_SEED,
    DEFAULT_TIME_LIMIT,
    DEFAULT_TRIALS,
    DEFAULT_WORKERS,
    ZONE_ENUMERATION_CAP,
)
from forbidden_subposet.core.exceptions import (
    CycleError,
    ElementIndexError,
    ParamError,
    ParseError,
    SubposetError,
)
from forbidden_subposet.core.logger import log_effective_config, setup_logging
from forbidden_subposet.core.report import ReportWriter
from forbidden_subposet.core.utils import Icons, parse_band, version_string
from forbidden_subposet.models import Band, RunConfig, SearchBudget

USAGE_ERRORS = (ParseError, CycleError, ElementIndexError, ParamError)

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2


def run_options(func: Callable) -> Callable:
    """Attach the options every command shares."""
    options = [
        click.option("--seed", type=int, default=DEFAULT_SEED, show_default=True, help="Random seed"),
        click.option("--trials", type=int, default=DEFAULT_TRIALS, show_default=True, help="Monte Carlo trials"),
        click.option("--format", "fmt", type=click.Choice(["json", "csv"]), default=DEFAULT_FORMAT, show_default=True),
        click.option("--band", "band_text", help="Weight band override as lo,hi"),
        click.option("--chain-cap", type=int, default=CHAIN_ENUMERATION_CAP, show_default=True,
                     help="Largest n for full-chain enumeration"),
        click.option("--zone-cap", type=int, default=ZONE_ENUMERATION_CAP, show_default=True,
                     help="Largest vertex set materialised"),
        click.option("--node-limit", type=int, default=DEFAULT_NODE_LIMIT, show_default=True,
                     help="Search node budget"),
        click.option("--time-limit", type=float, default=DEFAULT_TIME_LIMIT, help="Search time budget in seconds"),
        click.option("--workers", type=int, default=DEFAULT_WORKERS, show_default=True, help="Worker processes"),
        click.option("--output", "-o", type=click.Path(dir_okay=False, path_type=Path), help="Write the report here"),
        click.option("--timings", is_flag=True, help="Include elapsed times in the report"),
        click.option("--verbose", "-v", is_flag=True, help="Show detailed output"),
        click.option("--quiet", "-q", is_flag=True, help="Only warnings and errors on stderr"),
    ]
    for option in reversed(options):
        func = option(func)
    return func


class RunContext:
    """Effective configuration, logger and report writer of one command run."""

    def __init__(self, command: str, params: dict[str, Any]):
        self.command = command
        self.logger = setup_logging(verbose=params["verbose"], quiet=params["quiet"])
        try:
            band = parse_band(params["band_text"]) if params["band_text"] else None
            self.config = RunConfig(
                seed=params["seed"],
                trials=params["trials"],
                format=params["fmt"],
                band=(band.lo, band.hi) if band else None,
                chain_cap=params["chain_cap"],
                zone_cap=params["zone_cap"],
                node_limit=params["node_limit"],
                time_limit=params["time_limit"],
                workers=params["workers"],
            )
        except ValueError as e:
            fail(ParamError(str(e)))
        log_effective_config(self.logger, command, self.config.as_dict())
        self.writer = ReportWriter(self.config, version_string(), params["output"], params["timings"])

    @property
    def band(self) -> Optional[Band]:
        return Band(*self.config.band) if self.config.band else None

    @property
    def budget(self) -> SearchBudget:
        return SearchBudget(node_limit=self.config.node_limit, time_limit=self.config.time_limit)

    def emit(self, rows: list[Any], summary: Optional[dict[str, Any]] = None) -> None:
        self.writer.write(self.command, rows, summary)
        if self.writer.output is not None:
            click.echo(f"{Icons.REPORT} Report written to {self.writer.output}", err=True)


def fail(error: SubposetError) -> NoReturn:
    """Print the error on stderr and exit: 2 for bad input, 1 otherwise."""
    click.echo(f"{Icons.ERROR} {error}", err=True)
    raise SystemExit(EXIT_USAGE if isinstance(error, USAGE_ERRORS) else EXIT_FAILED)


def handle_errors(func: Callable) -> Callable:
    """Turn toolkit errors raised by a command body into exit codes."""

    @wraps(func)
    def wrapper(*args, **kwargs):
        try:
            return func(*args, **kwargs)
        except SubposetError as e:
            logging.getLogger("forbidden_subposet").debug(f"{type(e).__name__}: {e}")
            fail(e)

    return wrapper
