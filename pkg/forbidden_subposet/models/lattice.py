"""Data models for the Boolean lattice: vertices, bands, families and full chains.

A lattice vertex is a plain ``int`` bitmask: bit ``i`` set means ground-set
element ``i + 1`` belongs to the subset.
"""
import math
from dataclasses import dataclass
from enum import Enum
from functools import cached_property
from typing import Callable, Iterator, Optional

LatticeVertex = int


class ChainDirection(Enum):
    """Sublattice a full chain runs through: D(anchor) or U(anchor)."""
    DOWN = "down"
    UP = "up"


class ZoneSide(Enum):
    """Forbidden neighbourhood under (D*) or above (U*) a vertex."""
    BELOW = "below"
    ABOVE = "above"

    @property
    def chain_direction(self) -> ChainDirection:
        return ChainDirection.DOWN if self is ZoneSide.BELOW else ChainDirection.UP


@dataclass(frozen=True)
class Band:
    """Inclusive real interval of admissible weights."""
    lo: float
    hi: float

    def __post_init__(self):
        if self.lo > self.hi:
            raise ValueError(f"Band lower end {self.lo} exceeds upper end {self.hi}")

    def contains(self, weight: int) -> bool:
        return self.lo <= weight <= self.hi

    def weights(self, n: int) -> range:
        """Integer weights 0..n inside the band."""
        first = max(0, math.ceil(self.lo))
        last = min(n, math.floor(self.hi))
        return range(first, last + 1)

    def mirrored(self, n: int) -> "Band":
        """Band seen through complementation v -> [n] minus v."""
        return Band(n - self.hi, n - self.lo)

    @classmethod
    def full(cls, n: int) -> "Band":
        return cls(0.0, float(n))


@dataclass(frozen=True)
class Family:
    """A family of vertices of B_n: explicit members or a membership oracle.

    ``symmetric`` marks families invariant under permutations of the ground
    set (middle levels, weight bands); searches may exploit it.
    """
    n: int
    members: Optional[frozenset[LatticeVertex]] = None
    predicate: Optional[Callable[[LatticeVertex], bool]] = None
    weight_range: Optional[tuple[int, int]] = None
    symmetric: bool = False

    def __post_init__(self):
        if (self.members is None) == (self.predicate is None):
            raise ValueError("A family is either explicit or an oracle, not both")

    @property
    def is_explicit(self) -> bool:
        return self.members is not None

    def __contains__(self, v: LatticeVertex) -> bool:
        if self.members is not None:
            return v in self.members
        if self.weight_range is not None:
            w = v.bit_count()
            if w < self.weight_range[0] or w > self.weight_range[1]:
                return False
        return bool(self.predicate(v))

    def __len__(self) -> int:
        if self.members is None:
            raise TypeError("Oracle families have no size")
        return len(self.members)

    def __iter__(self) -> Iterator[LatticeVertex]:
        if self.members is None:
            raise TypeError("Oracle families cannot be iterated")
        return iter(sorted(self.members, key=lambda v: (v.bit_count(), v)))

    def weights(self) -> tuple[int, int]:
        """Smallest and largest member weight (the hint for oracles)."""
        if self.members is None:
            if self.weight_range is None:
                return (0, self.n)
            return self.weight_range
        if not self.members:
            return (0, -1)
        ws = [v.bit_count() for v in self.members]
        return (min(ws), max(ws))

    @classmethod
    def explicit(cls, n: int, members, symmetric: bool = False) -> "Family":
        return cls(n=n, members=frozenset(members), symmetric=symmetric)

    @classmethod
    def oracle(
        cls,
        n: int,
        predicate: Callable[[LatticeVertex], bool],
        weight_range: Optional[tuple[int, int]] = None,
        symmetric: bool = False,
    ) -> "Family":
        return cls(n=n, predicate=predicate, weight_range=weight_range, symmetric=symmetric)


@dataclass(frozen=True)
class FullChain:
    """A maximal chain of D(anchor) or U(anchor), stored as an element order.

    ``order`` lists 0-based ground-set positions in the order they are removed
    from (DOWN) or added to (UP) the anchor.
    """
    n: int
    anchor: LatticeVertex
    order: tuple[int, ...]
    direction: ChainDirection = ChainDirection.DOWN

    @cached_property
    def vertices(self) -> tuple[LatticeVertex, ...]:
        """Chain vertices listed from the top down."""
        current = self.anchor
        walk = [current]
        if self.direction is ChainDirection.DOWN:
            for e in self.order:
                current &= ~(1 << e)
                walk.append(current)
            return tuple(walk)
        for e in self.order:
            current |= 1 << e
            walk.append(current)
        return tuple(reversed(walk))

    def __len__(self) -> int:
        return len(self.order) + 1
