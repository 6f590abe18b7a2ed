"""Extremal commands: exact La values, guided embedding, the middle-levels construction."""
import logging
from pathlib import Path
from typing import Any, Optional

import click
import numpy as np

from forbidden_subposet.commands.common import EXIT_FAILED, RunContext, handle_errors, run_options
from forbidden_subposet.commands.poset import load_pattern, pattern_options
from forbidden_subposet.core.exceptions import IndeterminateError
from forbidden_subposet.core.extremal import (
    construction_avoidance_check,
    find_copy_guided,
    find_copy_oracle,
    hm_certificate,
    la_exact,
    middle_levels_summary,
    plant_hm_copy,
)
from forbidden_subposet.core.lattice import format_vertex
from forbidden_subposet.core.parser import parse_family_spec
from forbidden_subposet.core.poset import height, make_named_poset
from forbidden_subposet.core.utils import Icons, spawn_rngs
from forbidden_subposet.models import Embedding, Family, Verdict

logger = logging.getLogger("forbidden_subposet")

ORACLE_CROSS_CHECK_N = 10


def embedding_pairs(embedding: Optional[Embedding]) -> Optional[list[list[str]]]:
    if embedding is None:
        return None
    return [[label, format_vertex(v)] for label, v in embedding.as_pairs()]


def random_members(n: int, count: int, rng: np.random.Generator) -> list[int]:
    """count uniform vertices of B_n, one random bit per element."""
    bits = rng.random((count, n)) < 0.5
    return [sum(1 << int(e) for e in np.flatnonzero(row)) for row in bits]


def _pattern_name(file: Optional[Path], spec: Optional[str]) -> str:
    return spec if spec is not None else str(file)


@click.group("extremal")
def extremal_group() -> None:
    """Extremal questions: La values, copy search and the middle-levels construction."""
    pass


@extremal_group.command("la")
@click.option("--n", type=int, required=True, help="Ground-set size")
@pattern_options
@click.option("--weak/--induced", default=False, help="Containment notion (default: induced)")
@run_options
@handle_errors
def la_command(n: int, file: Optional[Path], poset_spec: Optional[str], weak: bool, **options) -> None:
    """Largest family of B_n avoiding the poset."""
    run = RunContext("extremal la", options)
    H = load_pattern(file, poset_spec)
    result = la_exact(n, H, induced=not weak, budget=run.budget)
    if result.verdict is Verdict.INDETERMINATE:
        click.echo(f"{Icons.WARNING} Budget exhausted; value is a lower bound", err=True)
    else:
        click.echo(f"{Icons.SUCCESS} La = {result.value}", err=True)
    run.emit([{
        "op": "la",
        "n": n,
        "poset": _pattern_name(file, poset_spec),
        "induced": not weak,
        "verdict": result.verdict,
        "value": result.value,
        "witness": [format_vertex(v) for v in sorted(result.witness or (), key=lambda v: (v.bit_count(), v))],
        "nodes_expanded": result.nodes_expanded,
        "elapsed_ms": result.elapsed_ms,
        "seed": run.config.seed,
    }])


@extremal_group.command("embed")
@click.option("--n", type=int, required=True, help="Ground-set size")
@pattern_options
@click.option("--family", "family_spec", help="Family spec (default: middle:<height>)")
@run_options
@handle_errors
def embed_command(n: int, file: Optional[Path], poset_spec: Optional[str], family_spec: Optional[str], **options) -> None:
    """Guided induced copy search, cross-checked by the oracle for small n."""
    run = RunContext("extremal embed", options)
    H = load_pattern(file, poset_spec)
    F = parse_family_spec(family_spec or f"middle:{height(H)}", n, run.config.zone_cap)
    rng = np.random.default_rng(run.config.seed)
    result = find_copy_guided(F, n, H, run.budget, run.band, rng, cap=run.config.zone_cap)
    row: dict[str, Any] = {
        "op": "embed",
        "n": n,
        "poset": _pattern_name(file, poset_spec),
        "induced": True,
        "verdict": result.verdict,
        "embedding": embedding_pairs(result.embedding),
        "nodes_expanded": result.nodes_expanded,
        "elapsed_ms": result.elapsed_ms,
        "seed": run.config.seed,
        "oracle_verdict": None,
        "agree": None,
    }
    if n <= ORACLE_CROSS_CHECK_N and F.is_explicit:
        oracle = find_copy_oracle(F, n, H, induced=True, budget=run.budget)
        row["oracle_verdict"] = oracle.verdict
        row["agree"] = not (result.found and oracle.verdict is Verdict.ABSENT)
    click.echo(f"{Icons.SEARCH} Guided search: {result.verdict.value}", err=True)
    run.emit([row])
    if row["agree"] is False:
        raise SystemExit(EXIT_FAILED)


@extremal_group.command("construct")
@click.option("--n", type=int, required=True, help="Ground-set size")
@click.option("--t", "levels", type=int, required=True, help="Number of middle levels")
@run_options
@handle_errors
def construct_command(n: int, levels: int, **options) -> None:
    """Size of the t middle levels of B_n against the largest level."""
    run = RunContext("extremal construct", options)
    run.emit([{"op": "construct", **middle_levels_summary(n, levels)}])


@extremal_group.command("check")
@click.option("--n", type=int, required=True, help="Ground-set size")
@pattern_options
@click.option("--levels", type=int, help="Number of middle levels (default: height - 1)")
@run_options
@handle_errors
def check_command(n: int, file: Optional[Path], poset_spec: Optional[str], levels: Optional[int], **options) -> None:
    """Whether the middle levels of B_n avoid the poset as an induced subposet."""
    run = RunContext("extremal check", options)
    H = load_pattern(file, poset_spec)
    t = levels if levels is not None else height(H) - 1
    row: dict[str, Any] = {"op": "check", "n": n, "poset": _pattern_name(file, poset_spec), "levels": t}
    try:
        avoided = construction_avoidance_check(n, H, t, run.budget, cap=run.config.zone_cap)
        row.update({"verdict": Verdict.ABSENT if avoided else Verdict.FOUND, "avoided": avoided})
        click.echo(f"{Icons.SUCCESS if avoided else Icons.FAILURE} avoided: {str(avoided).lower()}", err=True)
    except IndeterminateError as e:
        row.update({"verdict": Verdict.INDETERMINATE, "avoided": None, "nodes_expanded": e.nodes_expanded})
        click.echo(f"{Icons.WARNING} {e}", err=True)
    run.emit([row])


@extremal_group.command("spread")
@click.option("--n", type=int, required=True, help="Ground-set size")
@click.option("--m", type=int, required=True, help="Staircase size")
@click.option("--copies", type=int, default=50, show_default=True, help="Planted copies to certify")
@click.option("--noise", type=int, default=20, show_default=True, help="Random extra members per family")
@run_options
@handle_errors
def spread_command(n: int, m: int, copies: int, noise: int, **options) -> None:
    """Plant staircase copies in random families and certify the weight spread of what the oracle finds."""
    run = RunContext("extremal spread", options)
    rows = []
    for i, rng in enumerate(spawn_rngs(run.config.seed, copies), start=1):
        planted = plant_hm_copy(n, m, rng)
        extra = random_members(n, noise, rng)
        F = Family.explicit(n, set(planted.images) | set(extra))
        result = find_copy_oracle(F, n, planted.pattern, induced=True, budget=run.budget)
        found = result.embedding if result.found else planted
        certificate = hm_certificate(found, m)
        rows.append({
            "copy": i,
            "n": n,
            "m": m,
            "verdict": result.verdict,
            "spread": certificate.spread,
            "holds": certificate.holds,
            "intersections": [format_vertex(v) for v in certificate.intersections],
            "intersections_distinct": certificate.intersections_distinct,
        })
    failed = sum(not row["holds"] for row in rows)
    try:
        avoided = construction_avoidance_check(
            n, make_named_poset("H_m", m=m), m - 1, run.budget, cap=run.config.zone_cap
        )
    except IndeterminateError as e:
        logger.warning(str(e))
        avoided = None
    click.echo(f"{Icons.SEARCH} spread: {len(rows) - failed}/{len(rows)} copies certified", err=True)
    run.emit(rows, summary={"copies": len(rows), "certified": len(rows) - failed, "middle_levels_avoided": avoided})
    if failed or avoided is False:
        raise SystemExit(EXIT_FAILED)
