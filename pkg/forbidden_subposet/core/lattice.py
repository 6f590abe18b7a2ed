"""The Boolean lattice B_n, its central band, forbidden zones and full chains."""
import itertools
import logging
import math
from collections import Counter
from typing import Iterable, Iterator, Optional, Sequence

import numpy as np
from scipy import stats

from config import CHAIN_ENUMERATION_CAP, ZONE_ENUMERATION_CAP
from forbidden_subposet.core.exceptions import NotChainError, ParamError, SizeError, WitnessPlacementError
from forbidden_subposet.core.poset import from_relations
from forbidden_subposet.models import Band, ChainDirection, Family, FullChain, LatticeVertex, Poset, ZoneSide


logger = logging.getLogger("forbidden_subposet")


def band_bounds(n: int) -> Band:
    """Default band n/2 -+ 2*sqrt(n ln n), inclusive."""
    if n < 2:
        raise ParamError(f"The default band needs n >= 2, got {n}")
    half_width = 2 * math.sqrt(n * math.log(n))
    return Band(n / 2 - half_width, n / 2 + half_width)


def resolve_band(n: int, band: Optional[Band]) -> Band:
    if band is not None:
        return band
    if n < 2:
        return Band.full(n)
    return band_bounds(n)


def vertex(*elements: int) -> LatticeVertex:
    """Bitmask of a subset given by 1-based ground-set elements."""
    v = 0
    for e in elements:
        if e < 1:
            raise ParamError(f"Ground-set elements are 1-based, got {e}")
        v |= 1 << (e - 1)
    return v


def elements_of(v: LatticeVertex) -> tuple[int, ...]:
    return tuple(i + 1 for i in range(v.bit_length()) if v >> i & 1)


def weight(v: LatticeVertex) -> int:
    return v.bit_count()


def format_vertex(v: LatticeVertex) -> str:
    return "{" + ",".join(str(e) for e in elements_of(v)) + "}"


def top(n: int) -> LatticeVertex:
    return (1 << n) - 1


def complement(v: LatticeVertex, n: int) -> LatticeVertex:
    return top(n) & ~v


def is_subset(u: LatticeVertex, v: LatticeVertex) -> bool:
    return u & ~v == 0


def is_proper_subset(u: LatticeVertex, v: LatticeVertex) -> bool:
    return u != v and u & ~v == 0


def submasks(v: LatticeVertex) -> Iterator[LatticeVertex]:
    """Every subset of v, v itself first and the empty set last."""
    sub = v
    while True:
        yield sub
        if sub == 0:
            return
        sub = (sub - 1) & v


def down_up_set(
    v: LatticeVertex,
    direction: ChainDirection,
    n: int,
    cap: int = ZONE_ENUMERATION_CAP,
) -> frozenset[LatticeVertex]:
    """D(v) or U(v), v included."""
    free = v if direction is ChainDirection.DOWN else complement(v, n)
    size = 1 << free.bit_count()
    if size > cap:
        raise SizeError(f"{direction.value}-set of {format_vertex(v)}", size, cap)
    if direction is ChainDirection.DOWN:
        return frozenset(submasks(v))
    return frozenset(v | sub for sub in submasks(free))


def check_placement(v: LatticeVertex, S: Iterable[LatticeVertex], side: ZoneSide) -> None:
    """Below needs S disjoint from U(v); above needs S disjoint from D(v)."""
    for s in S:
        if side is ZoneSide.BELOW and is_subset(v, s):
            raise WitnessPlacementError(f"{format_vertex(s)} lies in the up-set of {format_vertex(v)}")
        if side is ZoneSide.ABOVE and is_subset(s, v):
            raise WitnessPlacementError(f"{format_vertex(s)} lies in the down-set of {format_vertex(v)}")


def in_forbidden_zone(
    u: LatticeVertex,
    v: LatticeVertex,
    S: Iterable[LatticeVertex],
    side: ZoneSide,
    band: Band,
) -> bool:
    """Whether u belongs to D*(v, S) (below) or U*(v, S) (above)."""
    if side is ZoneSide.BELOW:
        if not is_proper_subset(u, v):
            return False
    elif not is_proper_subset(v, u):
        return False
    if not band.contains(u.bit_count()):
        return False
    return any(is_subset(s, u) or is_subset(u, s) for s in S)


def forbidden_zone(
    v: LatticeVertex,
    S: Iterable[LatticeVertex],
    side: ZoneSide,
    n: int,
    band: Optional[Band] = None,
    cap: int = ZONE_ENUMERATION_CAP,
) -> frozenset[LatticeVertex]:
    """D*(v, S) or U*(v, S) materialised, intersected with ``band``.

    Raises:
        WitnessPlacementError: If S meets U(v) (below) or D(v) (above).
        SizeError: If the punctured down/up set exceeds ``cap``.
    """
    S = tuple(S)
    check_placement(v, S, side)
    band = resolve_band(n, band)
    candidates = down_up_set(v, side.chain_direction, n, cap)
    return frozenset(u for u in candidates if in_forbidden_zone(u, v, S, side, band))


def _chain_positions(anchor: LatticeVertex, direction: ChainDirection, n: int) -> list[int]:
    free = anchor if direction is ChainDirection.DOWN else complement(anchor, n)
    return [e - 1 for e in elements_of(free)]


def enumerate_sublattice_chains(
    anchor: LatticeVertex,
    direction: ChainDirection,
    n: int,
    cap: int = CHAIN_ENUMERATION_CAP,
) -> Iterator[FullChain]:
    """All full chains of D(anchor) or U(anchor), in lexicographic order of their element order."""
    positions = _chain_positions(anchor, direction, n)
    if len(positions) > cap:
        raise SizeError(f"full chains of a rank-{len(positions)} sublattice", math.factorial(len(positions)), math.factorial(cap))
    for order in itertools.permutations(positions):
        yield FullChain(n=n, anchor=anchor, order=order, direction=direction)


def enumerate_full_chains(n: int, cap: int = CHAIN_ENUMERATION_CAP) -> Iterator[FullChain]:
    """The n! full chains of B_n, each exactly once."""
    if n > cap:
        raise SizeError(f"full chains of B_{n}", math.factorial(n), math.factorial(cap))
    return enumerate_sublattice_chains(top(n), ChainDirection.DOWN, n, cap)


def sample_chain(
    anchor: LatticeVertex,
    direction: ChainDirection,
    n: int,
    rng: np.random.Generator,
) -> FullChain:
    """A uniform full chain of D(anchor) or U(anchor)."""
    positions = np.array(_chain_positions(anchor, direction, n), dtype=np.int64)
    order = tuple(int(e) for e in rng.permutation(positions))
    return FullChain(n=n, anchor=anchor, order=order, direction=direction)


def chain_uniformity_pvalue(
    anchor: LatticeVertex,
    direction: ChainDirection,
    n: int,
    samples: int,
    rng: np.random.Generator,
) -> float:
    """Chi-square p-value of ``sample_chain`` frequencies against the uniform law."""
    chains = [chain.order for chain in enumerate_sublattice_chains(anchor, direction, n)]
    if len(chains) == 1:
        return 1.0
    seen = Counter(sample_chain(anchor, direction, n, rng).order for _ in range(samples))
    observed = np.array([seen.get(order, 0) for order in chains], dtype=float)
    return float(stats.chisquare(observed).pvalue)


def is_strict_chain(Q: Sequence[LatticeVertex]) -> bool:
    """Strictly decreasing under containment, top first."""
    return all(is_proper_subset(b, a) for a, b in zip(Q, Q[1:]))


def chains_through_count(Q: Sequence[LatticeVertex], n: int) -> int:
    """Number of full chains of B_n containing every vertex of Q (listed top first).

    Raises:
        NotChainError: If Q is not strictly nested.
    """
    if not is_strict_chain(Q):
        raise NotChainError("Vertex sequence is not strictly decreasing under containment")
    if not Q:
        return math.factorial(n)
    count = math.factorial(n - Q[0].bit_count()) * math.factorial(Q[-1].bit_count())
    for a, b in zip(Q, Q[1:]):
        count *= math.factorial(a.bit_count() - b.bit_count())
    return count


def subchain(M: FullChain, F: Family, J: Sequence[int]) -> tuple[LatticeVertex, ...]:
    """Members of F on M picked by the 1-based indices J, counted from the top.

    Empty when M hosts fewer than max(J) members.
    """
    if not J:
        return ()
    increasing = all(a < b for a, b in zip(J, J[1:]))
    decreasing = all(a > b for a, b in zip(J, J[1:]))
    if not (increasing or decreasing) or min(J) < 1:
        raise ParamError(f"Index sequence {tuple(J)} is not strictly monotone over 1-based positions")
    members = [v for v in M.vertices if v in F]
    if max(J) > len(members):
        return ()
    return tuple(members[j - 1] for j in J)


def whole_lattice(n: int, cap: int = ZONE_ENUMERATION_CAP) -> Family:
    """All of B_n; explicit while 2^n fits under ``cap``."""
    if 1 << n <= cap:
        return Family.explicit(n, range(1 << n), symmetric=True)
    return Family.oracle(n, lambda v: True, weight_range=(0, n), symmetric=True)


def boolean_lattice_poset(n: int, cap: int = CHAIN_ENUMERATION_CAP) -> Poset:
    """B_n as a Poset: element i is the vertex with mask i."""
    if n > cap:
        raise SizeError(f"B_{n} as an explicit poset", 1 << n, 1 << cap)
    covers = [(v, v | 1 << e) for v in range(1 << n) for e in range(n) if not v >> e & 1]
    return from_relations(1 << n, covers, [format_vertex(v) for v in range(1 << n)])
