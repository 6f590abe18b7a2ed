"""Copy search in families of B_n, exact La values and the middle-levels construction."""
import logging
import math
from itertools import combinations
from functools import reduce
from operator import and_
from typing import Callable, Iterator, Optional

import numpy as np

from config import DEFAULT_SEED, ZONE_ENUMERATION_CAP
from forbidden_subposet.core.exceptions import (
    IndeterminateError,
    NotTreeError,
    NotValidatedError,
    ParamError,
    SizeError,
)
from forbidden_subposet.core.lattice import (
    in_forbidden_zone,
    is_proper_subset,
    is_subset,
    resolve_band,
    submasks,
    top,
)
from forbidden_subposet.core.poset import (
    decompose,
    height,
    is_embedding,
    is_tree_hasse,
    make_named_poset,
    saturate,
    search_order,
)
from forbidden_subposet.models import (
    Band,
    BudgetExhausted,
    BudgetMeter,
    Embedding,
    EmbeddingState,
    Family,
    HmCertificate,
    IntervalDirection,
    LaResult,
    LatticeVertex,
    Poset,
    SearchBudget,
    SearchResult,
    Verdict,
    ZoneSide,
)


logger = logging.getLogger("forbidden_subposet")


def middle_levels(n: int, t: int, cap: int = ZONE_ENUMERATION_CAP) -> Family:
    """The t consecutive central levels, weights floor((n-t)/2)+1 .. floor((n-t)/2)+t.

    Explicit while the levels fit under ``cap``, a weight oracle otherwise.
    """
    if n < 0 or not 1 <= t <= n + 1:
        raise ParamError(f"middle_levels needs 1 <= t <= n + 1, got n={n}, t={t}")
    first = (n - t) // 2 + 1
    last = first + t - 1
    size = sum(math.comb(n, w) for w in range(first, last + 1))
    if size > cap:
        return Family.oracle(n, lambda v: first <= v.bit_count() <= last, weight_range=(first, last), symmetric=True)
    members = (sum(1 << e for e in combo) for w in range(first, last + 1) for combo in combinations(range(n), w))
    return Family.explicit(n, members, symmetric=True)


def middle_levels_summary(n: int, t: int) -> dict:
    """Size of the construction next to the largest binomial coefficient."""
    if n < 0 or not 1 <= t <= n + 1:
        raise ParamError(f"middle_levels needs 1 <= t <= n + 1, got n={n}, t={t}")
    first = (n - t) // 2 + 1
    binomials = [math.comb(n, w) for w in range(first, first + t)]
    size = sum(binomials)
    return {
        "n": n,
        "t": t,
        "weights": [first, first + t - 1],
        "binomials": binomials,
        "size": size,
        "ratio": size / math.comb(n, n // 2),
    }


def _longest_spans(H: Poset) -> list[list[int]]:
    """span[u][x]: cardinality of the longest chain from u up to x, 0 unless u <= x."""
    n = H.element_count
    order = sorted(range(n), key=lambda x: len(H.below(x)))
    span = [[0] * n for _ in range(n)]
    for u in range(n):
        span[u][u] = 1
        for x in order:
            if not H.less(u, x):
                continue
            span[u][x] = 1 + max(span[u][y] for y in H.below(x) if y == u or H.less(u, y))
    return span


class _CopySearch:
    """Backtracking over family members for an image of every element of H.

    Symmetric families are searched up to ground-set permutations fixing the
    images placed so far: each new image takes the lowest elements of every
    atom of the partition those images cut out.
    """

    def __init__(self, F: Family, H: Poset, induced: bool, meter: BudgetMeter):
        self.F = F
        self.n = F.n
        self.H = H
        self.induced = induced
        self.meter = meter
        self.span = _longest_spans(H)
        size = H.element_count
        self.down_len = [max(self.span[u][x] for u in range(size)) for x in range(size)]
        self.up_len = [max(self.span[x][u] for u in range(size)) for x in range(size)]
        self.weight_lo, self.weight_hi = F.weights()
        self.by_weight: dict[int, list[LatticeVertex]] = {}
        if F.is_explicit:
            for v in F:
                self.by_weight.setdefault(v.bit_count(), []).append(v)

    def run(self, pinned: Optional[tuple[int, LatticeVertex]] = None) -> Optional[tuple[LatticeVertex, ...]]:
        """Images indexed by H's elements, or None once every branch is closed."""
        order = search_order(self.H, first=pinned[0] if pinned else None)
        images: dict[int, LatticeVertex] = {}
        if pinned is not None:
            x, v = pinned
            if v not in self.F:
                return None
            lo, hi = self._window(x, images)
            if not lo <= v.bit_count() <= hi:
                return None
            images[x] = v
            order = order[1:]
        if not self._extend(order, 0, images, set(images.values())):
            return None
        return tuple(images[u] for u in range(self.H.element_count))

    def _extend(self, order: list[int], depth: int, images: dict[int, LatticeVertex], used: set[LatticeVertex]) -> bool:
        if depth == len(order):
            return True
        x = order[depth]
        for c in self._candidates(x, images, used):
            self.meter.node()
            if not self._consistent(x, c, images):
                continue
            images[x] = c
            used.add(c)
            if self._extend(order, depth + 1, images, used):
                return True
            del images[x]
            used.discard(c)
            self.meter.backtrack()
        return False

    def _window(self, x: int, images: dict[int, LatticeVertex]) -> tuple[int, int]:
        lo = self.weight_lo + self.down_len[x] - 1
        hi = self.weight_hi - self.up_len[x] + 1
        for u, c in images.items():
            if self.H.less(u, x):
                lo = max(lo, c.bit_count() + self.span[u][x] - 1)
            elif self.H.less(x, u):
                hi = min(hi, c.bit_count() - self.span[x][u] + 1)
        return max(lo, 0), min(hi, self.n)

    def _consistent(self, x: int, c: LatticeVertex, images: dict[int, LatticeVertex]) -> bool:
        for u, img in images.items():
            if self.H.less(u, x):
                if not is_proper_subset(img, c):
                    return False
            elif self.H.less(x, u):
                if not is_proper_subset(c, img):
                    return False
            elif self.induced and (is_subset(img, c) or is_subset(c, img)):
                return False
        return True

    def _candidates(self, x: int, images: dict[int, LatticeVertex], used: set[LatticeVertex]) -> Iterator[LatticeVertex]:
        lo, hi = self._window(x, images)
        if lo > hi:
            return
        low, high = 0, top(self.n)
        for u, c in images.items():
            if self.H.less(u, x):
                low |= c
            elif self.H.less(x, u):
                high &= c
        if low & ~high:
            return

        if self.F.symmetric:
            source = self._atom_candidates(images, lo, hi, low, high)
        elif self.F.is_explicit:
            source = (
                c for w in range(lo, hi + 1) for c in self.by_weight.get(w, ())
                if is_subset(low, c) and is_subset(c, high)
            )
        else:
            free = high & ~low
            source = (low | sub for sub in submasks(free) if lo <= (low | sub).bit_count() <= hi)
        for c in source:
            if c not in used and c in self.F:
                yield c

    def _atom_candidates(
        self,
        images: dict[int, LatticeVertex],
        lo: int,
        hi: int,
        low: LatticeVertex,
        high: LatticeVertex,
    ) -> Iterator[LatticeVertex]:
        atoms = [list(range(self.n))]
        for c in images.values():
            refined = []
            for atom in atoms:
                inside = [e for e in atom if c >> e & 1]
                outside = [e for e in atom if not c >> e & 1]
                refined.extend(part for part in (inside, outside) if part)
            atoms = refined

        ranges = []
        for atom in atoms:
            if low >> atom[0] & 1:
                ranges.append((len(atom), len(atom)))
            elif not high >> atom[0] & 1:
                ranges.append((0, 0))
            else:
                ranges.append((0, len(atom)))
        rest_min = [0] * (len(atoms) + 1)
        rest_max = [0] * (len(atoms) + 1)
        for i in range(len(atoms) - 1, -1, -1):
            rest_min[i] = rest_min[i + 1] + ranges[i][0]
            rest_max[i] = rest_max[i + 1] + ranges[i][1]

        def build(i: int, mask: LatticeVertex, total: int) -> Iterator[LatticeVertex]:
            if i == len(atoms):
                yield mask
                return
            first, last = ranges[i]
            for count in range(first, last + 1):
                reached = total + count
                if reached + rest_min[i + 1] > hi:
                    break
                if reached + rest_max[i + 1] < lo:
                    continue
                taken = sum(1 << e for e in atoms[i][:count])
                yield from build(i + 1, mask | taken, reached)

        return build(0, 0, 0)


def _certify(H: Poset, images: tuple[LatticeVertex, ...], induced: bool) -> Embedding:
    if not is_embedding(H, images, is_subset, induced):
        raise NotValidatedError("Search produced an assignment that fails pairwise validation")
    return Embedding(pattern=H, images=images, induced=induced)


def find_copy_oracle(
    F: Family,
    n: int,
    H: Poset,
    induced: bool,
    budget: Optional[SearchBudget] = None,
) -> SearchResult:
    """Exhaustive copy search; ABSENT only after the whole tree is closed."""
    if F.n != n:
        raise ParamError(f"Family lives in B_{F.n}, not B_{n}")
    meter = (budget or SearchBudget()).meter()
    search = _CopySearch(F, H, induced, meter)
    try:
        images = search.run()
    except BudgetExhausted:
        logger.info(f"Oracle search budget exhausted after {meter.nodes} nodes")
        return SearchResult(Verdict.INDETERMINATE, nodes_expanded=meter.nodes, elapsed_ms=meter.elapsed() * 1000)
    if images is None:
        return SearchResult(Verdict.ABSENT, nodes_expanded=meter.nodes, elapsed_ms=meter.elapsed() * 1000)
    return SearchResult(
        Verdict.FOUND,
        embedding=_certify(H, images, induced),
        nodes_expanded=meter.nodes,
        elapsed_ms=meter.elapsed() * 1000,
    )


def la_exact(n: int, H: Poset, induced: bool, budget: Optional[SearchBudget] = None) -> LaResult:
    """Largest family of B_n without a copy of H.

    Include-first depth-first search over vertices ordered by distance from
    the middle level. Vertices whose addition would complete a copy are
    dropped from the branch for good, and a branch is cut once the current
    size plus the surviving vertices cannot beat the best found. On budget
    exhaustion the best family so far is returned as a lower bound.
    """
    meter = (budget or SearchBudget()).meter()
    vertices = sorted(range(1 << n), key=lambda v: (abs(v.bit_count() - n / 2), v))
    best: list[LatticeVertex] = []

    def completes_copy(current: list[LatticeVertex], v: LatticeVertex) -> bool:
        family = Family.explicit(n, current + [v])
        search = _CopySearch(family, H, induced, meter)
        return any(search.run(pinned=(x, v)) is not None for x in range(H.element_count))

    def explore(current: list[LatticeVertex], alive: list[LatticeVertex]) -> None:
        nonlocal best
        meter.node()
        if len(current) > len(best):
            best = list(current)
        if len(current) + len(alive) <= len(best) or not alive:
            return
        v, rest = alive[0], alive[1:]
        grown = current + [v]
        explore(grown, [u for u in rest if not completes_copy(grown, u)])
        meter.backtrack()
        explore(current, rest)

    try:
        explore([], [v for v in vertices if not completes_copy([], v)])
    except BudgetExhausted:
        logger.info(f"La search budget exhausted after {meter.nodes} nodes; best so far {len(best)}")
        return LaResult(
            Verdict.INDETERMINATE,
            value=len(best),
            witness=frozenset(best),
            nodes_expanded=meter.nodes,
            elapsed_ms=meter.elapsed() * 1000,
        )
    return LaResult(
        Verdict.FOUND,
        value=len(best),
        witness=frozenset(best),
        nodes_expanded=meter.nodes,
        elapsed_ms=meter.elapsed() * 1000,
    )


def _members_in_band(F: Family, band: Band, cap: int = ZONE_ENUMERATION_CAP) -> list[LatticeVertex]:
    if F.is_explicit:
        return [v for v in F if band.contains(v.bit_count())]
    lo, hi = F.weights()
    weights = [w for w in band.weights(F.n) if lo <= w <= hi]
    size = sum(math.comb(F.n, w) for w in weights)
    if size > cap:
        raise SizeError("family members inside the band", size, cap)
    return [
        v for w in weights
        for v in (sum(1 << e for e in combo) for combo in combinations(range(F.n), w))
        if v in F
    ]


def _chains_from(
    start: Optional[LatticeVertex],
    length: int,
    downward: bool,
    pool: list[LatticeVertex],
    used: set[LatticeVertex],
    allowed: Callable[[LatticeVertex], bool],
    meter: BudgetMeter,
    weight_floor: int,
    weight_ceiling: int,
) -> Iterator[tuple[LatticeVertex, ...]]:
    """Chains of ``length`` pool vertices running away from ``start``."""
    chain: list[LatticeVertex] = []

    def grow(prev: Optional[LatticeVertex]) -> Iterator[tuple[LatticeVertex, ...]]:
        if len(chain) == length:
            yield tuple(chain)
            return
        room = length - len(chain) - 1
        for c in pool:
            if c in used or c in chain:
                continue
            w = c.bit_count()
            if downward and (w - room < weight_floor or (prev is not None and not is_proper_subset(c, prev))):
                continue
            if not downward and (w + room > weight_ceiling or (prev is not None and not is_proper_subset(prev, c))):
                continue
            meter.node()
            if not allowed(c):
                continue
            chain.append(c)
            yield from grow(c)
            chain.pop()
            meter.backtrack()

    return grow(start)


def find_copy_guided(
    F: Family,
    n: int,
    H: Poset,
    budget: Optional[SearchBudget] = None,
    band: Optional[Band] = None,
    rng: Optional[np.random.Generator] = None,
    cap: int = ZONE_ENUMERATION_CAP,
) -> SearchResult:
    """Induced copy of a tree-Hasse poset built by re-attaching removed intervals.

    H is saturated and decomposed down to a k-chain. A k-chain of the banded
    family becomes the image of that chain; each removed interval is then
    attached, in reverse order, as a chain of members below (or above) its
    anchor's image that avoids the forbidden zone of the images not above
    (or below) the anchor. The result is validated pairwise and restricted
    to the original elements. An exhausted search is INDETERMINATE, never ABSENT.

    Raises:
        NotTreeError: If H is not tree-Hasse.
        SizeError: If an oracle family has more than ``cap`` members in the band.
    """
    if not is_tree_hasse(H):
        raise NotTreeError()
    k = height(H)
    if k < 2:
        raise ParamError(f"Guided search needs height >= 2, got {k}")
    band = resolve_band(n, band)
    rng = rng if rng is not None else np.random.default_rng(DEFAULT_SEED)
    meter = (budget or SearchBudget()).meter()

    saturated = saturate(H)
    steps = decompose(saturated)
    final = steps[-1].remaining if steps else saturated
    members = _members_in_band(F, band, cap)
    pool = [members[i] for i in rng.permutation(len(members))]
    if not pool:
        return SearchResult(Verdict.INDETERMINATE, nodes_expanded=0, elapsed_ms=meter.elapsed() * 1000)
    weight_floor = min(v.bit_count() for v in pool)
    weight_ceiling = max(v.bit_count() for v in pool)
    chain_labels = sorted(final.labels, key=lambda label: len(final.above(final.index[label])))

    def attach(state: EmbeddingState) -> Optional[EmbeddingState]:
        if not state.pending:
            return state
        step = state.pending[-1]
        anchor = saturated.index[step.anchor]
        anchor_image = state.assignment[step.anchor]
        if step.direction is IntervalDirection.BELOW:
            side = ZoneSide.BELOW
            others = [img for label, img in state.assignment.items() if not _at_or_above(saturated, anchor, label)]
        else:
            side = ZoneSide.ABOVE
            others = [img for label, img in state.assignment.items() if not _at_or_below(saturated, anchor, label)]

        def allowed(c: LatticeVertex) -> bool:
            return not in_forbidden_zone(c, anchor_image, others, side, band)

        used = set(state.assignment.values())
        for chain in _chains_from(
            anchor_image, len(step.removed), side is ZoneSide.BELOW, pool, used, allowed, meter, weight_floor, weight_ceiling
        ):
            assignment = dict(state.assignment)
            assignment.update(zip(step.removed, chain))
            done = attach(EmbeddingState(step=state.step - 1, assignment=assignment, pending=state.pending[:-1]))
            if done is not None:
                return done
        return None

    try:
        for chain in _chains_from(None, k, True, pool, set(), lambda c: True, meter, weight_floor, weight_ceiling):
            start = EmbeddingState(step=len(steps), assignment=dict(zip(chain_labels, chain)), pending=list(steps))
            done = attach(start)
            if done is None:
                continue
            images = tuple(done.assignment[label] for label in saturated.labels)
            if not is_embedding(saturated, images, is_subset, induced=True):
                logger.warning("Guided assignment failed pairwise validation; continuing the search")
                continue
            embedding = _certify(H, images[:H.element_count], induced=True)
            return SearchResult(
                Verdict.FOUND, embedding=embedding, nodes_expanded=meter.nodes, elapsed_ms=meter.elapsed() * 1000
            )
    except BudgetExhausted:
        logger.info(f"Guided search budget exhausted after {meter.nodes} nodes")
    else:
        logger.info("Guided search closed every branch without a copy; the verdict stays indeterminate")
    return SearchResult(Verdict.INDETERMINATE, nodes_expanded=meter.nodes, elapsed_ms=meter.elapsed() * 1000)


def _at_or_above(P: Poset, anchor: int, label: str) -> bool:
    w = P.index[label]
    return w == anchor or P.less(anchor, w)


def _at_or_below(P: Poset, anchor: int, label: str) -> bool:
    w = P.index[label]
    return w == anchor or P.less(w, anchor)


def construction_avoidance_check(
    n: int,
    H: Poset,
    t: int,
    budget: Optional[SearchBudget] = None,
    cap: int = ZONE_ENUMERATION_CAP,
) -> bool:
    """Whether the t middle levels of B_n avoid H as an induced subposet.

    The levels stay explicit while they fit under ``cap``.

    Raises:
        IndeterminateError: If the oracle search runs out of budget.
    """
    result = find_copy_oracle(middle_levels(n, t, cap), n, H, induced=True, budget=budget)
    if result.verdict is Verdict.INDETERMINATE:
        raise IndeterminateError(result.nodes_expanded)
    return result.verdict is Verdict.ABSENT


def plant_hm_copy(n: int, m: int, rng: np.random.Generator) -> Embedding:
    """A random induced copy of H_m in B_n.

    x_i = R + a_i and y_j = R + {a_1..a_j} + c_j for distinct elements a, c
    and a random base R drawn from the remaining elements.
    """
    if n < 2 * m:
        raise ParamError(f"Planting H_{m} needs n >= {2 * m}, got {n}")
    picked = [int(e) for e in rng.permutation(n)]
    a, c, rest = picked[:m], picked[m:2 * m], picked[2 * m:]
    base = sum(1 << e for e in rest if rng.random() < 0.5)
    xs = [base | 1 << a[i] for i in range(m)]
    ys = [base | sum(1 << e for e in a[:j + 1]) | 1 << c[j] for j in range(m)]
    return _certify(make_named_poset("H_m", m=m), tuple(xs + ys), induced=True)


def hm_certificate(E: Embedding, m: int) -> HmCertificate:
    """Weight spread |y_m| - |x_1| of an induced H_m copy and its intersection chain.

    Raises:
        NotValidatedError: If E is not a certified induced copy of H_m.
    """
    pattern = make_named_poset("H_m", m=m)
    if not E.induced or E.pattern.element_count != 2 * m or E.pattern.strict_less != pattern.strict_less:
        raise NotValidatedError(f"Embedding is not an induced copy of H_{m}")
    if not is_embedding(pattern, E.images, is_subset, induced=True):
        raise NotValidatedError(f"Embedding of H_{m} fails pairwise validation")

    ys = list(E.images[m:])
    spread = ys[-1].bit_count() - E.images[0].bit_count()
    intersections = [reduce(and_, ys[i:]) for i in range(m)]
    return HmCertificate(
        m=m,
        spread=spread,
        holds=spread >= m - 1,
        intersections=tuple(intersections),
        intersections_distinct=len(set(intersections)) == m,
    )
