"""JSON and CSV report emission."""
import csv
import dataclasses
import io
import json
from enum import Enum
from fractions import Fraction
from pathlib import Path
from typing import Any, Optional

import click

from forbidden_subposet.core.exceptions import ReportError
from forbidden_subposet.models import RunConfig

TIMING_KEYS = frozenset({"elapsed_ms"})


def to_jsonable(value: Any) -> Any:
    """Plain JSON types: Fractions become "p/q" strings, sets sorted lists."""
    if dataclasses.is_dataclass(value) and not isinstance(value, type):
        return {f.name: to_jsonable(getattr(value, f.name)) for f in dataclasses.fields(value)}
    if isinstance(value, Enum):
        return value.value
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, dict):
        return {str(k): to_jsonable(v) for k, v in value.items()}
    if isinstance(value, (set, frozenset)):
        return sorted(to_jsonable(v) for v in value)
    if isinstance(value, (list, tuple)):
        return [to_jsonable(v) for v in value]
    return value


def _strip_timings(value: Any) -> Any:
    if isinstance(value, dict):
        return {k: _strip_timings(v) for k, v in value.items() if k not in TIMING_KEYS}
    if isinstance(value, list):
        return [_strip_timings(v) for v in value]
    return value


def flatten(record: dict[str, Any], prefix: str = "") -> dict[str, Any]:
    """Nested dicts become dotted keys; lists are kept as JSON text."""
    flat: dict[str, Any] = {}
    for key, value in record.items():
        name = f"{prefix}{key}"
        if isinstance(value, dict):
            flat.update(flatten(value, f"{name}."))
        elif isinstance(value, list):
            flat[name] = json.dumps(value, sort_keys=True)
        else:
            flat[name] = value
    return flat


class ReportWriter:
    """Writes one report per run: a header (command, version, config) plus result rows.

    Timing fields are dropped unless ``timings`` is set, so equal configs
    produce byte-identical output.
    """

    def __init__(self, config: RunConfig, version: str, output: Optional[Path] = None, timings: bool = False):
        self.config = config
        self.version = version
        self.output = output
        self.timings = timings

    def build(self, command: str, rows: list[Any], summary: Optional[dict[str, Any]] = None) -> dict[str, Any]:
        report = {
            "command": command,
            "version": self.version,
            "config": self.config.as_dict(),
            "results": to_jsonable(rows),
        }
        if summary is not None:
            report["summary"] = to_jsonable(summary)
        return report if self.timings else _strip_timings(report)

    def render(self, report: dict[str, Any]) -> str:
        if self.config.format == "json":
            return json.dumps(report, sort_keys=True, indent=2) + "\n"
        header = {"command": report["command"], "version": report["version"], "config": report["config"]}
        rows = [flatten({**header, **row}) for row in report["results"]]
        if not rows:
            rows = [flatten(header)]
        columns = sorted({key for row in rows for key in row})
        buffer = io.StringIO()
        writer = csv.DictWriter(buffer, fieldnames=columns, lineterminator="\n")
        writer.writeheader()
        writer.writerows(rows)
        return buffer.getvalue()

    def write(self, command: str, rows: list[Any], summary: Optional[dict[str, Any]] = None) -> dict[str, Any]:
        """Render the report to the output file, or stdout when none is set."""
        report = self.build(command, rows, summary)
        text = self.render(report)
        if self.output is None:
            click.echo(text, nl=False)
            return report
        try:
            self.output.parent.mkdir(parents=True, exist_ok=True)
            self.output.write_text(text, encoding="utf-8")
        except OSError as e:
            raise ReportError(f"Failed to write report to {self.output}: {e}")
        return report
