"""Finite posets: construction, structural analysis, saturation and interval removal."""
import logging
import string
from typing import Callable, Hashable, Iterable, Iterator, Optional, Sequence

import networkx as nx

from forbidden_subposet.core.exceptions import (
    CycleError,
    ElementIndexError,
    NotSaturatedError,
    NotTreeError,
    ParamError,
    BudgetError,
)
from forbidden_subposet.models import (
    DecompositionStep,
    Embedding,
    HasseDiagram,
    IntervalDirection,
    Poset,
    PosetAnalysis,
)


logger = logging.getLogger("forbidden_subposet")


def default_labels(element_count: int) -> tuple[str, ...]:
    if element_count <= len(string.ascii_lowercase):
        return tuple(string.ascii_lowercase[:element_count])
    return tuple(f"p{i + 1}" for i in range(element_count))


def from_relations(
    element_count: int,
    pairs: Iterable[tuple[int, int]],
    labels: Optional[Sequence[str]] = None,
) -> Poset:
    """Build the poset generated by ``pairs`` (u, v) meaning u < v.

    Raises:
        CycleError: If the closure puts some element strictly below itself.
        ElementIndexError: If a pair mentions an index outside the range.
        ParamError: On a non-positive size or bad labels.
    """
    if element_count < 1:
        raise ParamError(f"A poset needs at least one element, got {element_count}")
    labels = tuple(labels) if labels is not None else default_labels(element_count)
    if len(labels) != element_count:
        raise ParamError(f"Expected {element_count} labels, got {len(labels)}")
    if len(set(labels)) != element_count:
        raise ParamError("Labels must be distinct")

    g = nx.DiGraph()
    g.add_nodes_from(range(element_count))
    for u, v in pairs:
        for x in (u, v):
            if not 0 <= x < element_count:
                raise ElementIndexError(x, element_count)
        if u == v:
            raise CycleError(u)
        g.add_edge(u, v)

    if not nx.is_directed_acyclic_graph(g):
        cycle = nx.find_cycle(g)
        raise CycleError(cycle[0][0])

    closure = nx.transitive_closure_dag(g)
    return Poset(element_count=element_count, labels=labels, strict_less=frozenset(closure.edges()))


def _chain(k: int) -> Poset:
    if k < 1:
        raise ParamError(f"chain needs k >= 1, got {k}")
    return from_relations(k, [(i, i + 1) for i in range(k - 1)])


def _fork(k: int) -> Poset:
    if k < 1:
        raise ParamError(f"fork needs k >= 1, got {k}")
    labels = ["A"] + [f"B{i}" for i in range(1, k + 1)]
    return from_relations(k + 1, [(0, i) for i in range(1, k + 1)], labels)


def _complete_bipartite(r: int, s: int) -> Poset:
    if r < 2 or s < 2:
        raise ParamError(f"K_rs needs r, s >= 2, got r={r}, s={s}")
    labels = [f"A{i}" for i in range(1, r + 1)] + [f"B{j}" for j in range(1, s + 1)]
    return from_relations(r + s, [(i, r + j) for i in range(r) for j in range(s)], labels)


def _butterfly() -> Poset:
    return _complete_bipartite(2, 2)


def _staircase(m: int) -> Poset:
    """x_i < y_j exactly when j >= i."""
    if m < 1:
        raise ParamError(f"H_m needs m >= 1, got {m}")
    labels = [f"x{i}" for i in range(1, m + 1)] + [f"y{j}" for j in range(1, m + 1)]
    pairs = [(i, m + j) for i in range(m) for j in range(i, m)]
    return from_relations(2 * m, pairs, labels)


NAMED_POSETS: dict[str, Callable[..., Poset]] = {
    "chain": _chain,
    "fork": _fork,
    "butterfly": _butterfly,
    "K_rs": _complete_bipartite,
    "H_m": _staircase,
}


def make_named_poset(name: str, **params: int) -> Poset:
    """Build a named poset; lower level first, index order within a level.

    chain(k), fork(k), butterfly(), K_rs(r, s), H_m(m).
    """
    builder = NAMED_POSETS.get(name)
    if builder is None:
        raise ParamError(f"Unknown poset name: {name}")
    try:
        return builder(**params)
    except TypeError as e:
        raise ParamError(f"Invalid parameters for {name}: {e}")


def hasse_covers(P: Poset) -> HasseDiagram:
    reduction = nx.transitive_reduction(P.graph)
    return HasseDiagram(element_count=P.element_count, covers=tuple(sorted(reduction.edges())))


def maximal_chains(P: Poset) -> Iterator[tuple[int, ...]]:
    """Every maximal chain, listed bottom to top."""
    hasse = hasse_covers(P)
    up = {u: hasse.upper_covers(u) for u in range(P.element_count)}
    minimal = [u for u in range(P.element_count) if not hasse.lower_covers(u)]

    def walk(path: list[int]) -> Iterator[tuple[int, ...]]:
        nexts = up[path[-1]]
        if not nexts:
            yield tuple(path)
            return
        for v in nexts:
            path.append(v)
            yield from walk(path)
            path.pop()

    for m in minimal:
        yield from walk([m])


def height(P: Poset) -> int:
    return nx.dag_longest_path_length(P.graph) + 1


def is_tree_hasse(P: Poset) -> bool:
    return nx.is_tree(hasse_covers(P).undirected())


def analyze(P: Poset, k: int) -> PosetAnalysis:
    return PosetAnalysis(
        height=height(P),
        tree_hasse=is_tree_hasse(P),
        k_saturated=all(len(chain) == k for chain in maximal_chains(P)),
    )


def restrict(P: Poset, keep: Iterable[int]) -> Poset:
    """Induced subposet on ``keep``; relative index order and labels are preserved."""
    kept = sorted(set(keep))
    renumber = {old: new for new, old in enumerate(kept)}
    less = frozenset((renumber[u], renumber[v]) for u, v in P.strict_less if u in renumber and v in renumber)
    return Poset(element_count=len(kept), labels=tuple(P.labels[i] for i in kept), strict_less=less)


def is_chain(P: Poset) -> bool:
    n = P.element_count
    return len(P.strict_less) == n * (n - 1) // 2


def is_embedding(
    H: Poset,
    images: Sequence[Hashable],
    less_or_equal: Callable[[Hashable, Hashable], bool],
    induced: bool,
) -> bool:
    """Check an image assignment pairwise: injective, order-preserving, and
    order-reflecting when ``induced``."""
    if len(images) != H.element_count or len(set(images)) != H.element_count:
        return False
    for u in range(H.element_count):
        for v in range(H.element_count):
            if u == v:
                continue
            related = less_or_equal(images[u], images[v])
            if H.less(u, v) and not related:
                return False
            if induced and related and not H.less(u, v):
                return False
    return True


def level_from_top(P: Poset) -> dict[int, int]:
    """Cardinality of the longest chain from each element up to a maximal one."""
    hasse = hasse_covers(P)
    levels: dict[int, int] = {}
    for u in reversed(list(nx.topological_sort(P.graph))):
        ups = hasse.upper_covers(u)
        levels[u] = 1 + max((levels[v] for v in ups), default=0)
    return levels


def _level_from_bottom(P: Poset, hasse: HasseDiagram) -> dict[int, int]:
    levels: dict[int, int] = {}
    for u in nx.topological_sort(P.graph):
        levels[u] = 1 + max((levels[v] for v in hasse.lower_covers(u)), default=0)
    return levels


def _saturation_from_levels(
    P: Poset,
    hasse: HasseDiagram,
    levels: dict[int, int],
    k: int,
) -> Poset:
    """Subdivide covers spanning several levels and hang pendant chains under
    minimal and over maximal elements until every level 1..k is reached."""
    labels = list(P.labels)
    taken = set(labels)
    covers: list[tuple[int, int]] = []
    counter = 0

    def fresh() -> int:
        nonlocal counter
        while True:
            counter += 1
            name = f"s{counter}"
            if name not in taken:
                taken.add(name)
                labels.append(name)
                return len(labels) - 1

    def path(lower: int, upper: int, inner: int) -> None:
        prev = lower
        for _ in range(inner):
            node = fresh()
            covers.append((prev, node))
            prev = node
        covers.append((prev, upper))

    for u, v in hasse.covers:
        path(u, v, levels[v] - levels[u] - 1)

    for u in range(P.element_count):
        if not hasse.lower_covers(u) and levels[u] > 1:
            bottom = fresh()
            path(bottom, u, levels[u] - 2)
        if not hasse.upper_covers(u) and levels[u] < k:
            top = fresh()
            path(u, top, k - levels[u] - 1)

    return from_relations(len(labels), covers, labels)


def saturate(P: Poset) -> Poset:
    """Embed a tree-Hasse poset of height k >= 2 into a k-saturated tree-Hasse poset.

    The original elements keep indices 0..|P|-1. Candidate level assignments
    (longest chain from below, then from above) are tried in order; the
    cheapest one whose result passes every postcondition within k*|P| new
    elements is returned.

    Raises:
        NotTreeError: If the Hasse diagram of P is not a tree.
        BudgetError: If no candidate fits the element budget.
    """
    hasse = hasse_covers(P)
    if not nx.is_tree(hasse.undirected()):
        raise NotTreeError()
    k = height(P)
    if k < 2:
        raise ParamError(f"Saturation needs height >= 2, got {k}")
    if analyze(P, k).k_saturated:
        return P

    budget = k * P.element_count
    top_levels = level_from_top(P)
    candidates = [
        _level_from_bottom(P, hasse),
        {u: k + 1 - top_levels[u] for u in range(P.element_count)},
    ]

    best: Optional[Poset] = None
    for levels in candidates:
        result = _saturation_from_levels(P, hasse, levels, k)
        added = result.element_count - P.element_count
        if added > budget:
            logger.debug(f"Saturation candidate adds {added} elements, budget is {budget}")
            continue
        if not _saturation_valid(P, result, k):
            continue
        if best is None or result.element_count < best.element_count:
            best = result

    if best is None:
        raise BudgetError(f"No saturation of height {k} within {budget} new elements")
    return best


def _saturation_valid(P: Poset, result: Poset, k: int) -> bool:
    summary = analyze(result, k)
    if not (summary.k_saturated and summary.tree_hasse):
        return False
    identity = tuple(range(P.element_count))
    return is_embedding(P, identity, lambda a, b: result.less(a, b), induced=True)


def decompose(P: Poset) -> list[DecompositionStep]:
    """Strip leaf chain intervals until a k-chain remains.

    Each step removes I minus its anchor; the remainder stays k-saturated
    with a tree Hasse diagram. The least eligible (leaf index, interval size,
    anchor index) is taken.

    Raises:
        NotTreeError: If the Hasse diagram is not a tree.
        NotSaturatedError: If P is not k-saturated for k = height(P).
    """
    k = height(P)
    summary = analyze(P, k)
    if not summary.tree_hasse:
        raise NotTreeError()
    if not summary.k_saturated:
        raise NotSaturatedError(k)

    steps: list[DecompositionStep] = []
    current = P
    while not is_chain(current):
        step = _next_removal(current, k)
        logger.debug(f"Removing {step.removed} (anchor {step.anchor}, {step.direction.value})")
        steps.append(step)
        current = step.remaining
    return steps


def _chain_interval(P: Poset, low: int, high: int) -> Optional[list[int]]:
    """Elements of [low, high] ordered bottom to top, or None if not a chain."""
    members = [z for z in range(P.element_count) if (z == low or P.less(low, z)) and (z == high or P.less(z, high))]
    members.sort(key=lambda z: len(P.below(z)))
    for a, b in zip(members, members[1:]):
        if not P.less(a, b):
            return None
    return members


def _next_removal(P: Poset, k: int) -> DecompositionStep:
    hasse = hasse_covers(P)
    degree = dict(hasse.undirected().degree())
    candidates = []
    for leaf in sorted(u for u in range(P.element_count) if degree[u] == 1):
        maximal = not hasse.upper_covers(leaf)
        anchors = P.below(leaf) if maximal else P.above(leaf)
        for anchor in anchors:
            low, high = (anchor, leaf) if maximal else (leaf, anchor)
            interval = _chain_interval(P, low, high)
            if interval is None or len(interval) > k:
                continue
            candidates.append((leaf, len(interval), anchor, interval, maximal))

    for leaf, _, anchor, interval, maximal in sorted(candidates, key=lambda c: c[:3]):
        dropped = set(interval) - {anchor}
        remaining = restrict(P, (u for u in range(P.element_count) if u not in dropped))
        summary = analyze(remaining, k)
        if summary.k_saturated and summary.tree_hasse:
            ordered = interval if maximal else list(reversed(interval))  # anchor first
            return DecompositionStep(
                removed_interval=tuple(P.labels[z] for z in ordered),
                anchor=P.labels[anchor],
                leaf=P.labels[leaf],
                direction=IntervalDirection.ABOVE if maximal else IntervalDirection.BELOW,
                remaining=remaining,
            )
    raise ParamError("No removable leaf interval found")


def search_order(H: Poset, first: Optional[int] = None) -> list[int]:
    """Most-constrained-first element order: each next element has the most
    comparabilities to those already placed."""
    n = H.element_count
    degree = [sum(1 for v in range(n) if v != u and H.comparable(u, v)) for u in range(n)]
    if first is None:
        first = max(range(n), key=lambda u: (degree[u], -u))
    order = [first]
    placed = set(order)
    while len(order) < n:
        nxt = max(
            (u for u in range(n) if u not in placed),
            key=lambda u: (sum(1 for v in placed if H.comparable(u, v)), degree[u], -u),
        )
        order.append(nxt)
        placed.add(nxt)
    return order


def find_poset_embedding(G: Poset, H: Poset, induced: bool) -> Optional[Embedding]:
    """Exhaustive backtracking for a copy of H inside G; None is a definitive absence.

    Exponential in the worst case; meant for |H| <= 10.
    """
    order = search_order(H)
    images: dict[int, int] = {}
    used: set[int] = set()

    def consistent(x: int, g: int) -> bool:
        for u, img in images.items():
            if H.less(u, x) and not G.less(img, g):
                return False
            if H.less(x, u) and not G.less(g, img):
                return False
            if induced and not H.comparable(u, x) and G.comparable(img, g):
                return False
        return True

    def extend(depth: int) -> bool:
        if depth == len(order):
            return True
        x = order[depth]
        for g in range(G.element_count):
            if g in used or not consistent(x, g):
                continue
            images[x] = g
            used.add(g)
            if extend(depth + 1):
                return True
            del images[x]
            used.discard(g)
        return False

    if not extend(0):
        return None
    assignment = tuple(images[u] for u in range(H.element_count))
    if not is_embedding(H, assignment, lambda a, b: G.less(a, b), induced):
        return None
    return Embedding(pattern=H, images=assignment, induced=induced)


def poset_to_dict(P: Poset) -> dict:
    """Serialisable form matching the poset file format."""
    return {
        "n": P.element_count,
        "labels": list(P.labels),
        "covers": [list(c) for c in hasse_covers(P).covers],
    }
