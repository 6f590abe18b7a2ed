"""Loaders for poset files, family files and command-line spec strings."""
import json
import re
from pathlib import Path
from typing import Any

from config import ZONE_ENUMERATION_CAP
from forbidden_subposet.core.exceptions import ParseError, SubposetError
from forbidden_subposet.core.extremal import middle_levels
from forbidden_subposet.core.lattice import whole_lattice
from forbidden_subposet.core.poset import from_relations, make_named_poset
from forbidden_subposet.models import Family, Poset


def load_poset(file_path: Path) -> Poset:
    """Load a poset file: {"n": int, "labels": [str], "covers": [[int, int]]}."""
    try:
        content = file_path.read_text(encoding="utf-8")
    except UnicodeDecodeError as e:
        raise ParseError(f"{file_path} is not valid UTF-8: {e.reason} at byte {e.start}")
    except OSError as e:
        raise ParseError(f"Cannot read {file_path}: {e}")
    return parse_poset_string(content)


def parse_poset_string(content: str) -> Poset:
    data = _load_json(content)
    if not isinstance(data, dict) or "n" not in data or "covers" not in data:
        raise ParseError("Poset file needs the keys 'n' and 'covers'")

    n = data["n"]
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise ParseError(f"'n' must be a positive integer, got {n!r}")

    labels = data.get("labels")
    if labels is not None and (not isinstance(labels, list) or not all(isinstance(l, str) for l in labels)):
        raise ParseError("'labels' must be a list of strings")

    covers = []
    for i, pair in enumerate(data["covers"]):
        if not (isinstance(pair, list) and len(pair) == 2 and all(isinstance(x, int) for x in pair)):
            raise ParseError(f"Cover {i} must be a pair of integers, got {pair!r}")
        covers.append((pair[0], pair[1]))

    return from_relations(n, covers, labels)


def load_family(file_path: Path) -> Family:
    """Load a family file: JSON {"n", "sets"} with 1-based elements, or hex lines."""
    try:
        content = file_path.read_text(encoding="utf-8")
    except UnicodeDecodeError as e:
        raise ParseError(f"{file_path} is not valid UTF-8: {e.reason} at byte {e.start}")
    except OSError as e:
        raise ParseError(f"Cannot read {file_path}: {e}")
    return parse_family_string(content)


def parse_family_string(content: str) -> Family:
    if content.lstrip().startswith("{"):
        return _parse_family_json(_load_json(content))
    return _parse_family_hex(content)


def _parse_family_json(data: Any) -> Family:
    if not isinstance(data, dict) or "n" not in data or "sets" not in data:
        raise ParseError("Family file needs the keys 'n' and 'sets'")
    n = data["n"]
    if not isinstance(n, int) or isinstance(n, bool) or n < 0:
        raise ParseError(f"'n' must be a nonnegative integer, got {n!r}")

    members = set()
    for i, subset in enumerate(data["sets"]):
        if not isinstance(subset, list):
            raise ParseError(f"Set {i} must be a list of elements")
        v = 0
        for e in subset:
            if not isinstance(e, int) or not 1 <= e <= n:
                raise ParseError(f"Set {i}: element {e!r} is not in 1..{n}")
            v |= 1 << (e - 1)
        if v in members:
            raise ParseError(f"Set {i} repeats an earlier member")
        members.add(v)
    return Family.explicit(n, members)


def _parse_family_hex(content: str) -> Family:
    """One hexadecimal bitmask per line; '# n=<int>' fixes the ground set."""
    n = None
    members: dict[int, int] = {}
    for line_number, raw in enumerate(content.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            header = re.match(r"^#\s*n\s*=\s*(\d+)\s*$", line)
            if header:
                n = int(header.group(1))
            continue
        try:
            v = int(line, 16)
        except ValueError:
            raise ParseError(f"Not a hexadecimal bitmask: {line!r}", line=line_number, column=raw.index(line) + 1)
        if v < 0:
            raise ParseError("Bitmasks must be nonnegative", line=line_number)
        if v in members:
            raise ParseError(f"Duplicate member {line!r} (first on line {members[v]})", line=line_number)
        members[v] = line_number

    if n is None:
        n = max((v.bit_length() for v in members), default=0)
    for v, line_number in members.items():
        if v.bit_length() > n:
            raise ParseError(f"Member {v:#x} does not fit in {n} elements", line=line_number)
    return Family.explicit(n, members)


def parse_family_spec(spec: str, n: int, cap: int = ZONE_ENUMERATION_CAP) -> Family:
    """Family spec string: "middle:t", "file:path" or "all".

    Generated families stay explicit while they fit under ``cap``.
    """
    spec = spec.strip()
    if spec == "all":
        return whole_lattice(n, cap)

    middle = re.match(r"^middle:(\d+)$", spec)
    if middle:
        try:
            return middle_levels(n, int(middle.group(1)), cap)
        except SubposetError as e:
            raise ParseError(f"Invalid family spec {spec!r}: {e}")

    if spec.startswith("file:"):
        family = load_family(Path(spec[len("file:"):]))
        if family.n != n:
            raise ParseError(f"Family file lives in B_{family.n}, but n={n}")
        return family

    raise ParseError(f"Unknown family spec {spec!r}; expected middle:t, file:path or all")


POSET_SHORTHANDS = [
    (re.compile(r"^(?:chain|p)(\d+)$"), lambda m: make_named_poset("chain", k=int(m.group(1)))),
    (re.compile(r"^(?:fork|v)(\d+)$"), lambda m: make_named_poset("fork", k=int(m.group(1)))),
    (re.compile(r"^butterfly$"), lambda m: make_named_poset("butterfly")),
    (re.compile(r"^k(\d+),(\d+)$"), lambda m: make_named_poset("K_rs", r=int(m.group(1)), s=int(m.group(2)))),
    (re.compile(r"^h(\d+)$"), lambda m: make_named_poset("H_m", m=int(m.group(1)))),
]


def parse_poset_spec(spec: str) -> Poset:
    """Named poset shorthand (chain3, v2, butterfly, k2,3, h3) or "file:path"."""
    spec = spec.strip()
    if spec.startswith("file:"):
        return load_poset(Path(spec[len("file:"):]))
    lowered = spec.lower()
    for pattern, build in POSET_SHORTHANDS:
        match = pattern.match(lowered)
        if match:
            try:
                return build(match)
            except SubposetError as e:
                raise ParseError(f"Invalid poset spec {spec!r}: {e}")
    raise ParseError(f"Unknown poset spec {spec!r}; expected chainK, vK, butterfly, kR,S, hM or file:path")


def _load_json(content: str) -> Any:
    try:
        return json.loads(content)
    except json.JSONDecodeError as e:
        raise ParseError(f"Invalid JSON: {e.msg}", line=e.lineno, column=e.colno)
