"""Poset commands: analyze, saturate, decompose."""
from pathlib import Path
from typing import Optional

import click

from forbidden_subposet.commands.common import RunContext, handle_errors, run_options
from forbidden_subposet.core.exceptions import ParamError
from forbidden_subposet.core.parser import load_poset, parse_poset_spec
from forbidden_subposet.core.poset import analyze, decompose, hasse_covers, height, poset_to_dict, saturate
from forbidden_subposet.core.utils import Icons
from forbidden_subposet.models import Poset


def load_pattern(file: Optional[Path], spec: Optional[str]) -> Poset:
    """The poset named by --file or --poset; exactly one must be given."""
    if (file is None) == (spec is None):
        raise ParamError("Give exactly one of --file and --poset")
    return load_poset(file) if file is not None else parse_poset_spec(spec)


def pattern_options(func):
    func = click.option("--poset", "poset_spec", help="Named poset: chainK, vK, butterfly, kR,S, hM")(func)
    func = click.option("--file", type=click.Path(exists=True, dir_okay=False, path_type=Path), help="Poset JSON file")(func)
    return func


def _cover_labels(P: Poset) -> list[list[str]]:
    return [[P.labels[u], P.labels[v]] for u, v in hasse_covers(P).covers]


@click.group("poset")
def poset_group() -> None:
    """Inspect, saturate and decompose finite posets."""
    pass


@poset_group.command("analyze")
@pattern_options
@click.option("--k", type=int, help="Saturation level to test (default: the height)")
@run_options
@handle_errors
def analyze_command(file: Optional[Path], poset_spec: Optional[str], k: Optional[int], **options) -> None:
    """Height, tree test and k-saturation of a poset."""
    run = RunContext("poset analyze", options)
    P = load_pattern(file, poset_spec)
    k = k if k is not None else height(P)
    summary = analyze(P, k)
    click.echo(f"{Icons.POSET} {P.element_count} elements, height {summary.height}", err=True)
    run.emit([{
        "element_count": P.element_count,
        "k": k,
        "height": summary.height,
        "tree_hasse": summary.tree_hasse,
        "k_saturated": summary.k_saturated,
        "covers": _cover_labels(P),
    }])


@poset_group.command("saturate")
@pattern_options
@run_options
@handle_errors
def saturate_command(file: Optional[Path], poset_spec: Optional[str], **options) -> None:
    """Embed a tree-Hasse poset into a saturated one of the same height."""
    run = RunContext("poset saturate", options)
    P = load_pattern(file, poset_spec)
    saturated = saturate(P)
    added = saturated.element_count - P.element_count
    click.echo(f"{Icons.SUCCESS} Saturated with {added} new elements", err=True)
    run.emit([{
        "original_size": P.element_count,
        "added": added,
        "height": height(saturated),
        "poset": poset_to_dict(saturated),
    }])


@poset_group.command("decompose")
@pattern_options
@run_options
@handle_errors
def decompose_command(file: Optional[Path], poset_spec: Optional[str], **options) -> None:
    """Strip leaf chain intervals from a saturated tree-Hasse poset down to a chain."""
    run = RunContext("poset decompose", options)
    P = load_pattern(file, poset_spec)
    steps = decompose(P)
    rows = [
        {
            "step": i,
            "removed_interval": list(step.removed_interval),
            "anchor": step.anchor,
            "leaf": step.leaf,
            "direction": step.direction,
            "remaining": list(step.remaining.labels),
        }
        for i, step in enumerate(steps, start=1)
    ]
    final = steps[-1].remaining if steps else P
    click.echo(f"{Icons.SUCCESS} {len(steps)} steps down to a {final.element_count}-chain", err=True)
    run.emit(rows, summary={"steps": len(steps), "final_chain": list(final.labels)})
