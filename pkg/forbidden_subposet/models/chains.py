"""Data models for marked chains and marker statistics."""
from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial

from forbidden_subposet.models.lattice import FullChain, LatticeVertex


@dataclass(frozen=True)
class MarkedChain:
    """A k-marked chain (M, Q): host M plus markers listed top to bottom."""
    host: FullChain
    markers: tuple[LatticeVertex, ...]

    @property
    def k(self) -> int:
        return len(self.markers)

    def marker_at(self, d: int) -> LatticeVertex:
        """The d-th marker from the top (1-based)."""
        return self.markers[d - 1]


@dataclass
class MarkerHistogram:
    """C_i: number of full chains of B_n hosting exactly i family members."""
    n: int
    counts: dict[int, int] = field(default_factory=dict)

    @property
    def total(self) -> int:
        return sum(self.counts.values())

    @property
    def first_moment(self) -> int:
        """Sum of i * C_i."""
        return sum(i * c for i, c in self.counts.items())

    def mean(self) -> Fraction:
        return Fraction(self.first_moment, factorial(self.n))


@dataclass(frozen=True)
class DensityReport:
    """Outcome of the density check.

    ``bound`` is (eps/k) * n!, the value the counting argument derives;
    ``printed_bound`` keeps the literal (eps/k) * k! alongside it, and
    ``printed_threshold`` reads the hypothesis with its own t in place of k.
    """
    n: int
    k: int
    epsilon: Fraction
    family_size: int
    threshold: Fraction  # (k - 1 + eps) * binom(n, floor(n/2))
    hypothesis_met: bool
    count: int
    bound: Fraction
    printed_bound: Fraction
    t: int
    printed_threshold: Fraction  # (t - 1 + eps) * binom(n, floor(n/2))
    printed_hypothesis_met: bool
    holds: bool
