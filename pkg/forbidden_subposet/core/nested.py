"""Witnesses, bad strings and the nested marked-chain families.

Badness is quantified over subsets of a supplied witness pool (by default
the family restricted to the band), so every verdict here is pool-restricted.
"""
import logging
import math
from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Container, Iterable, Optional, Sequence, Union

import numpy as np

from config import CHAIN_ENUMERATION_CAP, DEFAULT_TRIALS, MC_BATCH_SIZE
from forbidden_subposet.core.exceptions import IncompleteStringError, ParamError
from forbidden_subposet.core.lattice import (
    check_placement,
    complement,
    elements_of,
    enumerate_full_chains,
    enumerate_sublattice_chains,
    in_forbidden_zone,
    is_subset,
    resolve_band,
    sample_chain,
)
from forbidden_subposet.core.chains import markers
from forbidden_subposet.core.utils import batch_seeds, parallel_map
from forbidden_subposet.models import (
    Band,
    BadString,
    ChainClass,
    Family,
    FullChain,
    GreedyProfile,
    IterationReport,
    LatticeVertex,
    MarkedChain,
    NestedFamilyState,
    WitnessAssignment,
    ZoneEstimate,
    ZoneSide,
)


logger = logging.getLogger("forbidden_subposet")

MarkerMap = dict[FullChain, tuple[LatticeVertex, ...]]
ChainIndex = dict[tuple[LatticeVertex, int], list[MarkedChain]]


def gamma(n: int, h: int) -> float:
    """27 h sqrt(n ln n) / n."""
    if n < 2 or h < 1:
        raise ParamError(f"gamma needs n >= 2 and h >= 1, got n={n}, h={h}")
    return 27 * h * math.sqrt(n * math.log(n)) / n


def zone_hit_bound(n: int, s: int) -> float:
    """min(1, 27 s sqrt(n ln n) / n)."""
    return min(1.0, gamma(n, s))


def _binomial_estimate(hits: int, trials: int) -> ZoneEstimate:
    p = hits / trials if trials else 0.0
    stderr = math.sqrt(p * (1 - p) / trials) if trials else 0.0
    return ZoneEstimate(estimate=p, stderr=stderr, trials=trials)


@dataclass(frozen=True)
class _ZoneBatch:
    """Picklable description of one Monte Carlo batch over chains of D(v)."""
    seed: int
    count: int
    size: int  # |v|
    first_step: int
    last_step: int
    subset_columns: tuple[tuple[int, ...], ...]  # v minus s, one entry per s
    superset_columns: tuple[tuple[int, ...], ...]  # s, for each s contained in v


def _zone_hits(batch: _ZoneBatch) -> int:
    """Hits in one batch, read off the removal positions of v's elements.

    After j removals u_j lies under s once every element of v minus s is
    gone, and over s while no element of s is gone yet.
    """
    rng = np.random.default_rng(batch.seed)
    positions = np.argsort(rng.random((batch.count, batch.size)), axis=1)
    hit = np.zeros(batch.count, dtype=bool)
    for cols in batch.subset_columns:
        first = positions[:, list(cols)].max(axis=1) + 1
        hit |= first <= batch.last_step
    for cols in batch.superset_columns:
        if cols:
            last = positions[:, list(cols)].min(axis=1)
        else:
            last = np.full(batch.count, batch.size)
        hit |= last >= batch.first_step
    return int(hit.sum())


def _zone_hit_montecarlo(
    v: LatticeVertex,
    S: Sequence[LatticeVertex],
    band: Band,
    trials: int,
    rng: np.random.Generator,
    workers: int,
) -> ZoneEstimate:
    elements = [e - 1 for e in elements_of(v)]
    local = {e: i for i, e in enumerate(elements)}
    size = len(elements)
    first_step = max(1, math.ceil(size - band.hi))
    last_step = min(size, math.floor(size - band.lo))
    if first_step > last_step or not S:
        return ZoneEstimate(estimate=0.0, stderr=0.0, trials=trials)

    subset_columns = tuple(
        tuple(local[e] for e in elements if not s >> e & 1) for s in S
    )
    superset_columns = tuple(
        tuple(local[e - 1] for e in elements_of(s)) for s in S if is_subset(s, v)
    )
    batches = []
    remaining = trials
    for seed in batch_seeds(rng, math.ceil(trials / MC_BATCH_SIZE)):
        count = min(MC_BATCH_SIZE, remaining)
        remaining -= count
        batches.append(_ZoneBatch(seed, count, size, first_step, last_step, subset_columns, superset_columns))
    hits = sum(parallel_map(_zone_hits, batches, workers))
    return _binomial_estimate(hits, trials)


def zone_hit_prob(
    v: LatticeVertex,
    S: Iterable[LatticeVertex],
    side: ZoneSide,
    n: int,
    band: Optional[Band] = None,
    mode: str = "exact",
    trials: int = DEFAULT_TRIALS,
    rng: Optional[np.random.Generator] = None,
    cap: int = CHAIN_ENUMERATION_CAP,
    workers: int = 1,
) -> ZoneEstimate:
    """Probability that a uniform full chain of D(v) (U(v) above) meets the forbidden zone.

    Exact mode enumerates the sublattice chains; Monte Carlo mode samples
    ``trials`` chains in independently seeded batches.

    Raises:
        WitnessPlacementError: If S violates the placement condition.
        SizeError: In exact mode, if the sublattice has more than ``cap`` ranks.
    """
    S = tuple(S)
    check_placement(v, S, side)
    band = resolve_band(n, band)
    if not S:
        return ZoneEstimate(estimate=0.0, stderr=0.0, trials=0, exact=Fraction(0))

    if mode == "exact":
        total = hits = 0
        for chain in enumerate_sublattice_chains(v, side.chain_direction, n, cap):
            total += 1
            if any(in_forbidden_zone(u, v, S, side, band) for u in chain.vertices):
                hits += 1
        exact = Fraction(hits, total)
        return ZoneEstimate(estimate=float(exact), stderr=0.0, trials=total, exact=exact)

    if mode != "montecarlo":
        raise ParamError(f"Unknown estimation mode: {mode}")
    if rng is None:
        raise ParamError("Monte Carlo mode needs a seeded generator")
    if side is ZoneSide.ABOVE:
        # U*(v, S) is the complement image of D*(not v, not S) under the mirrored band
        return _zone_hit_montecarlo(
            complement(v, n), [complement(s, n) for s in S], band.mirrored(n), trials, rng, workers
        )
    return _zone_hit_montecarlo(v, S, band, trials, rng, workers)


def find_witness(
    v: LatticeVertex,
    d: int,
    L_view: Sequence[MarkedChain],
    pool: Iterable[LatticeVertex],
    h: int,
    side: ZoneSide,
    band: Band,
) -> Optional[frozenset[LatticeVertex]]:
    """First S of at most h pool vertices, by size then lexicographically, such
    that every marked chain of L(v, d) meets the zone of v under S.

    Pool vertices breaking the placement condition are skipped. Returns None
    when L(v, d) is empty or no such S exists.
    """
    if not L_view:
        return None
    ordered = sorted(set(pool), key=lambda s: (s.bit_count(), s))
    placed = [s for s in ordered if not (is_subset(v, s) if side is ZoneSide.BELOW else is_subset(s, v))]

    everything = (1 << len(L_view)) - 1
    cover = []
    for s in placed:
        mask = 0
        for i, member in enumerate(L_view):
            if any(in_forbidden_zone(u, v, (s,), side, band) for u in member.markers):
                mask |= 1 << i
        if mask:
            cover.append((s, mask))

    for size in range(1, h + 1):
        for combo in combinations(cover, size):
            mask = 0
            for _, m in combo:
                mask |= m
            if mask == everything:
                return frozenset(s for s, _ in combo)
    return None


def marked_chain_index(X: MarkerMap, k: int) -> ChainIndex:
    """L(v, d): the marked chains (M, Q), Q a k-subset of X(M), whose d-th marker is v."""
    index: ChainIndex = defaultdict(list)
    for M, members in X.items():
        for Q in combinations(members, k):
            marked = MarkedChain(host=M, markers=Q)
            for d, v in enumerate(Q, start=1):
                index[(v, d)].append(marked)
    return dict(index)


def _eligible_levels(position: int, size: int, k: int) -> range:
    """Levels d at which the member at 1-based ``position`` of ``size`` can be the d-th marker."""
    return range(max(1, k - (size - position)), min(k, position) + 1)


def bad_vertices(
    X: MarkerMap,
    L_index: ChainIndex,
    k: int,
    h: int,
    pool: Iterable[LatticeVertex],
    band: Band,
    witnesses: Optional[WitnessAssignment] = None,
) -> tuple[dict[FullChain, frozenset[LatticeVertex]], dict[FullChain, frozenset[LatticeVertex]], WitnessAssignment]:
    """Lower and upper bad sets of every chain, fixing one witness per (v, d, side)."""
    pool = tuple(sorted(set(pool), key=lambda s: (s.bit_count(), s)))
    witnesses = witnesses if witnesses is not None else WitnessAssignment(band=band)
    decided: dict[tuple[LatticeVertex, int, ZoneSide], bool] = {}

    def bad(v: LatticeVertex, d: int, side: ZoneSide) -> bool:
        key = (v, d, side)
        if key not in decided:
            found = find_witness(v, d, L_index.get((v, d), []), pool, h, side, band)
            if found is not None:
                witnesses.fix(v, d, side, found)
            decided[key] = found is not None
        return decided[key]

    lower: dict[FullChain, frozenset[LatticeVertex]] = {}
    upper: dict[FullChain, frozenset[LatticeVertex]] = {}
    for M, members in X.items():
        size = len(members)
        lower[M] = frozenset(
            v for p, v in enumerate(members, 1) if any(bad(v, d, ZoneSide.BELOW) for d in _eligible_levels(p, size, k))
        )
        upper[M] = frozenset(
            v for p, v in enumerate(members, 1) if any(bad(v, d, ZoneSide.ABOVE) for d in _eligible_levels(p, size, k))
        )
    return lower, upper, witnesses


def disjoint_member_exists(
    v: LatticeVertex,
    d: int,
    S: Iterable[LatticeVertex],
    L_index: ChainIndex,
    side: ZoneSide,
    band: Band,
) -> bool:
    """Some (M, Q) of L(v, d) avoids the zone of v under S."""
    S = tuple(S)
    return any(
        not any(in_forbidden_zone(u, v, S, side, band) for u in member.markers)
        for member in L_index.get((v, d), [])
    )


def is_good(
    marked: MarkedChain,
    members: Sequence[LatticeVertex],
    L_index: ChainIndex,
    pool: Iterable[LatticeVertex],
    h: int,
    band: Band,
    verdicts: Optional[dict[tuple[LatticeVertex, int], bool]] = None,
) -> bool:
    """No marker of Q is lower-bad or upper-bad at any level it can take.

    ``members`` is X(M) for the host chain; a marker at position p of X(M)
    is checked at every level d some k-subset of X(M) puts it at, on both
    sides. ``verdicts`` memoises badness per (v, d) across calls on the
    same index.
    """
    pool = tuple(pool)
    verdicts = verdicts if verdicts is not None else {}
    k = marked.k
    position = {v: p for p, v in enumerate(members, start=1)}
    stray = [v for v in marked.markers if v not in position]
    if stray:
        raise ParamError(f"Markers {[hex(v) for v in stray]} are not members of the host chain's family")
    for v in marked.markers:
        for d in _eligible_levels(position[v], len(members), k):
            if (v, d) not in verdicts:
                L_view = L_index.get((v, d), [])
                verdicts[(v, d)] = any(
                    find_witness(v, d, L_view, pool, h, side, band) is not None for side in ZoneSide
                )
            if verdicts[(v, d)]:
                return False
    return True


def bad_string_test(
    M: FullChain,
    X_view: Container[LatticeVertex],
    J: Sequence[int],
    W: WitnessAssignment,
    d: int,
    side: ZoneSide,
) -> bool:
    """Whether the members of X on M picked by J form a d-bad string.

    J counts members from the top and increases for lower strings, decreases
    for upper strings. Pairs (x, y) alternate: x has a fixed witness and y
    lies in its zone.
    """
    if len(J) % 2:
        raise ParamError(f"Index sequence {tuple(J)} has odd length")
    if W.is_empty() or not J:
        return False
    step = 1 if side is ZoneSide.BELOW else -1
    if any((b - a) * step <= 0 for a, b in zip(J, J[1:])) or min(J) < 1:
        raise ParamError(f"Index sequence {tuple(J)} is not monotone for the {side.value} side")

    members = [u for u in M.vertices if u in X_view]
    if max(J) > len(members):
        return False
    for i in range(0, len(J), 2):
        x, y = members[J[i] - 1], members[J[i + 1] - 1]
        witness = W.get(x, d, side)
        if witness is None or not in_forbidden_zone(y, x, witness, side, W.band):
            return False
    return True


def greedy_profile(
    M: FullChain,
    X_view: Container[LatticeVertex],
    W: WitnessAssignment,
    d: int,
    side: ZoneSide,
    k: Optional[int] = None,
) -> GreedyProfile:
    """Greedy bad string of M and its index profile.

    Lower strings scan top-down, upper strings bottom-up. With ``k`` given a
    member only opens a pair where it can be the d-th marker of a k-subset.

    Raises:
        IncompleteStringError: If an opening member has no partner in its zone.
    """
    members = [u for u in M.vertices if u in X_view]
    size = len(members)
    scan = list(range(size)) if side is ZoneSide.BELOW else list(range(size - 1, -1, -1))

    vertices: list[LatticeVertex] = []
    profile: list[int] = []
    cursor = 0
    while cursor < len(scan):
        i = scan[cursor]
        x = members[i]
        witness = W.get(x, d, side)
        if witness is None or (k is not None and d not in _eligible_levels(i + 1, size, k)):
            cursor += 1
            continue
        partner = next(
            (c for c in range(cursor + 1, len(scan)) if in_forbidden_zone(members[scan[c]], x, witness, side, W.band)),
            None,
        )
        if partner is None:
            raise IncompleteStringError(i + 1)
        j = scan[partner]
        vertices.extend((x, members[j]))
        profile.extend((i + 1, j + 1))
        cursor = partner + 1

    return GreedyProfile(string=BadString(side=side, level=d, vertices=tuple(vertices)), profile=tuple(profile))


def bad_string_prob_mc(
    v: LatticeVertex,
    J: Sequence[int],
    X_oracle: Container[LatticeVertex],
    W: WitnessAssignment,
    d: int,
    side: ZoneSide,
    n: int,
    trials: int = DEFAULT_TRIALS,
    rng: Optional[np.random.Generator] = None,
) -> ZoneEstimate:
    """Fraction of uniform full chains of D(v) (U(v) above) whose J-members form a d-bad string.

    Here J is increasing and counts members outward from v: downward for
    lower strings, upward for upper strings.
    """
    if rng is None:
        raise ParamError("Monte Carlo estimation needs a seeded generator")
    if W.is_empty():
        return ZoneEstimate(estimate=0.0, stderr=0.0, trials=trials)
    hits = 0
    remaining = trials
    for seed in batch_seeds(rng, math.ceil(trials / MC_BATCH_SIZE)):
        batch_rng = np.random.default_rng(seed)
        count = min(MC_BATCH_SIZE, remaining)
        remaining -= count
        for _ in range(count):
            M = sample_chain(v, side.chain_direction, n, batch_rng)
            if side is ZoneSide.ABOVE:
                size = sum(1 for u in M.vertices if u in X_oracle)
                J_top = [size + 1 - j for j in J]
                if min(J_top, default=1) < 1:
                    continue
                hits += bad_string_test(M, X_oracle, J_top, W, d, side)
            else:
                hits += bad_string_test(M, X_oracle, J, W, d, side)
    return _binomial_estimate(hits, trials)


def single_swap_witnesses(n: int, band: Band) -> WitnessAssignment:
    """Rule-based witnesses: v with its lowest element swapped for the lowest absent one.

    The swap leaves v's down-set and up-set, so both placement conditions hold.
    """

    def rule(v: LatticeVertex, d: int, side: ZoneSide) -> Optional[frozenset[LatticeVertex]]:
        absent = complement(v, n)
        if v == 0 or absent == 0:
            return None
        low = v & -v
        missing = absent & -absent
        return frozenset({(v ^ low) | missing})

    return WitnessAssignment(band=band, rule=rule)


def default_pool(F: Family, band: Band) -> tuple[LatticeVertex, ...]:
    """Witness pool used when none is given: the members inside the band."""
    return tuple(u for u in F if band.contains(u.bit_count()))


def _marked_count(X: MarkerMap, k: int) -> int:
    return sum(math.comb(len(members), k) for members in X.values())


def build_nested(
    F: Family,
    k: int,
    h: int,
    epsilon: Union[Fraction, int, str],
    n: int,
    band: Optional[Band] = None,
    pool: Optional[Iterable[LatticeVertex]] = None,
    cap: int = CHAIN_ENUMERATION_CAP,
) -> tuple[list[NestedFamilyState], list[IterationReport]]:
    """Build X_1, ..., X_h over every full chain of B_n.

    X_1(M) is the set of members on M. On chains whose bad share is at most
    1/C (C = 4kh) the bad members are dropped; other chains are emptied.
    Each report records |L_i| against (eps/k) n! (1 - i/(2h)) and the
    (1 - i/(2k)) reading; neither bound is asserted.
    """
    if k < 1 or h < 1:
        raise ParamError(f"k and h must be positive, got k={k}, h={h}")
    epsilon = Fraction(epsilon)
    band = resolve_band(n, band)
    pool = tuple(pool) if pool is not None else default_pool(F, band)

    X: MarkerMap = {M: markers(M, F) for M in enumerate_full_chains(n, cap)}
    states: list[NestedFamilyState] = []
    reports: list[IterationReport] = []
    scale = epsilon / k * math.factorial(n)

    for i in range(1, h + 1):
        L_index = marked_chain_index(X, k)
        lower, upper, witnesses = bad_vertices(X, L_index, k, h, pool, band)
        state = NestedFamilyState(
            iteration=i, k=k, h=h, markers=X, lower_bad=lower, upper_bad=upper, witnesses=witnesses
        )
        next_X: MarkerMap = {}
        for M, members in X.items():
            if not members:
                next_X[M] = ()
                continue
            removed = state.bad(M)
            if len(removed) * state.C <= len(members):
                state.classes[M] = ChainClass.SPARSE_BAD
                next_X[M] = tuple(u for u in members if u not in removed)
            else:
                state.classes[M] = ChainClass.DENSE_BAD
                next_X[M] = ()

        sparse = [M for M, c in state.classes.items() if c is ChainClass.SPARSE_BAD]
        dense = [M for M, c in state.classes.items() if c is ChainClass.DENSE_BAD]
        before = sum(math.comb(len(X[M]), k) for M in sparse)
        after = sum(math.comb(len(next_X[M]), k) for M in sparse)
        count = _marked_count(X, k)
        bound = scale * (1 - Fraction(i, 2 * h))
        prose_bound = scale * (1 - Fraction(i, 2 * k))
        reports.append(IterationReport(
            iteration=i,
            marked_count=count,
            bound=bound,
            holds=count >= bound,
            prose_bound=prose_bound,
            prose_holds=count >= prose_bound,
            sparse_chains=len(sparse),
            dense_chains=len(dense),
            sparse_shrink_ok=after >= (1 - Fraction(k, state.C)) * before,
            dense_mass=sum(math.comb(len(X[M]), k) for M in dense),
            dense_mass_estimate=4 * k / n ** (1 / 3) * math.factorial(n),
            witnesses_fixed=len(witnesses),
        ))
        logger.debug(
            f"nested iteration {i}: |L_i|={count}, C1={len(sparse)}, C2={len(dense)}, witnesses={len(witnesses)}"
        )
        states.append(state)
        X = next_X

    return states, reports
