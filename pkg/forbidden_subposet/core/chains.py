"""Marked chains: markers on a full chain, the marked-chain count and the density bound."""
import logging
import math
from collections import Counter
from itertools import combinations
from fractions import Fraction
from typing import Iterator, Optional, Union

from config import CHAIN_ENUMERATION_CAP, KCHAIN_FAMILY_CAP
from forbidden_subposet.core.exceptions import ParamError, SizeError
from forbidden_subposet.core.lattice import chains_through_count, enumerate_full_chains, is_proper_subset
from forbidden_subposet.models import DensityReport, Family, FullChain, LatticeVertex, MarkedChain, MarkerHistogram


logger = logging.getLogger("forbidden_subposet")


def markers(M: FullChain, F: Family) -> tuple[LatticeVertex, ...]:
    """Members of F on M, top to bottom; the length is x(M)."""
    return tuple(v for v in M.vertices if v in F)


def marked_chains_on(M: FullChain, F: Family, k: int) -> Iterator[MarkedChain]:
    """Every k-marked chain hosted by M."""
    for Q in combinations(markers(M, F), k):
        yield MarkedChain(host=M, markers=Q)


def lym_sum(F: Family, n: int) -> Fraction:
    """Sum of 1/binom(n, |v|) over the members; the mean of x(M)."""
    return sum((Fraction(1, math.comb(n, v.bit_count())) for v in F), Fraction(0))


def k_chains(F: Family, k: int) -> Iterator[tuple[LatticeVertex, ...]]:
    """Every k-chain of F, top first, by nested descent over members ordered by weight."""
    members = sorted(F, key=lambda v: (-v.bit_count(), v))

    def descend(prefix: list[LatticeVertex], start: int) -> Iterator[tuple[LatticeVertex, ...]]:
        if len(prefix) == k:
            yield tuple(prefix)
            return
        for i in range(start, len(members)):
            v = members[i]
            if prefix and not is_proper_subset(v, prefix[-1]):
                continue
            prefix.append(v)
            yield from descend(prefix, i + 1)
            prefix.pop()

    return descend([], 0)


def count_marked_chains(F: Family, k: int, n: int, cap: int = KCHAIN_FAMILY_CAP) -> int:
    """|L|: the sum of chains_through_count over every k-chain of F.

    Chains are grouped by their lowest vertex, so the sum is accumulated
    weight layer by weight layer without listing each k-chain.

    Raises:
        SizeError: If |F| exceeds ``cap``.
    """
    if k < 1:
        raise ParamError(f"k must be at least 1, got {k}")
    if len(F) > cap:
        raise SizeError("family for k-chain counting", len(F), cap)

    members = sorted(F, key=lambda v: (-v.bit_count(), v))
    weights = [v.bit_count() for v in members]
    # partial[i]: sum over chains of the current length ending at members[i]
    partial = [math.factorial(n - w) for w in weights]
    for _ in range(k - 1):
        extended = [0] * len(members)
        for j, w in enumerate(members):
            total = 0
            for i in range(j):
                if partial[i] and weights[i] > weights[j] and is_proper_subset(w, members[i]):
                    total += partial[i] * math.factorial(weights[i] - weights[j])
            extended[j] = total
        partial = extended
    return sum(p * math.factorial(w) for p, w in zip(partial, weights))


def count_marked_chains_oracle(F: Family, k: int, n: int, cap: int = CHAIN_ENUMERATION_CAP) -> int:
    """Sum of binom(x(M), k) over all n! full chains."""
    if k < 1:
        raise ParamError(f"k must be at least 1, got {k}")
    return sum(math.comb(len(markers(M, F)), k) for M in enumerate_full_chains(n, cap))


def count_marked_chains_by_enumeration(F: Family, k: int, n: int) -> int:
    """Direct sum of chains_through_count over the listed k-chains."""
    return sum(chains_through_count(Q, n) for Q in k_chains(F, k))


def marker_histogram(F: Family, n: int, cap: int = CHAIN_ENUMERATION_CAP) -> MarkerHistogram:
    counts = Counter(len(markers(M, F)) for M in enumerate_full_chains(n, cap))
    return MarkerHistogram(n=n, counts=dict(sorted(counts.items())))


def density_check(
    F: Family,
    k: int,
    epsilon: Union[Fraction, int, str],
    n: int,
    cap: int = KCHAIN_FAMILY_CAP,
    t: Optional[int] = None,
) -> DensityReport:
    """Compare |L| with (eps/k) n! for a family of size at least (k-1+eps) binom(n, n/2).

    The literal bound (eps/k) k! is carried next to it as ``printed_bound``,
    and the hypothesis is also evaluated as (t-1+eps) binom(n, n/2), t
    defaulting to k.
    """
    if k < 2:
        raise ParamError(f"k must be at least 2, got {k}")
    epsilon = Fraction(epsilon)
    if epsilon <= 0:
        raise ParamError(f"epsilon must be positive, got {epsilon}")
    t = k if t is None else t
    if t < 1:
        raise ParamError(f"t must be positive, got {t}")

    threshold = (k - 1 + epsilon) * math.comb(n, n // 2)
    printed_threshold = (t - 1 + epsilon) * math.comb(n, n // 2)
    count = count_marked_chains(F, k, n, cap)
    bound = epsilon / k * math.factorial(n)
    report = DensityReport(
        n=n,
        k=k,
        epsilon=epsilon,
        family_size=len(F),
        threshold=threshold,
        hypothesis_met=len(F) >= threshold,
        count=count,
        bound=bound,
        printed_bound=epsilon / k * math.factorial(k),
        t=t,
        printed_threshold=printed_threshold,
        printed_hypothesis_met=len(F) >= printed_threshold,
        holds=count >= bound,
    )
    logger.debug(f"density n={n} k={k} eps={epsilon}: |F|={len(F)} |L|={count} bound={bound}")
    return report
