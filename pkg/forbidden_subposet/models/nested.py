"""Data models for witnesses, bad strings and the nested marked-chain families."""
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Callable, Optional

from forbidden_subposet.models.lattice import Band, FullChain, LatticeVertex, ZoneSide

WitnessKey = tuple[LatticeVertex, int, ZoneSide]
WitnessRule = Callable[[LatticeVertex, int, ZoneSide], Optional[frozenset[LatticeVertex]]]


@dataclass
class WitnessAssignment:
    """Fixed witnesses S_{v,d} (below) and T_{v,d} (above), at most one per key.

    ``rule`` answers keys missing from the table; large-n Monte Carlo runs use
    it instead of an explicit table.
    """
    band: Band
    table: dict[WitnessKey, frozenset[LatticeVertex]] = field(default_factory=dict)
    rule: Optional[WitnessRule] = None

    def fix(self, v: LatticeVertex, d: int, side: ZoneSide, witness: frozenset[LatticeVertex]) -> None:
        key = (v, d, side)
        if key in self.table:
            raise ValueError(f"Witness already fixed for vertex {v:#x}, level {d}, side {side.value}")
        self.table[key] = frozenset(witness)

    def get(self, v: LatticeVertex, d: int, side: ZoneSide) -> Optional[frozenset[LatticeVertex]]:
        found = self.table.get((v, d, side))
        if found is None and self.rule is not None:
            return self.rule(v, d, side)
        return found

    def __len__(self) -> int:
        return len(self.table)

    def is_empty(self) -> bool:
        return not self.table and self.rule is None


@dataclass(frozen=True)
class BadString:
    """Alternating chain x_1, y_1, ..., x_p, y_p of bad vertices and zone hits."""
    side: ZoneSide
    level: int
    vertices: tuple[LatticeVertex, ...] = ()

    @property
    def p(self) -> int:
        return len(self.vertices) // 2

    def pairs(self) -> list[tuple[LatticeVertex, LatticeVertex]]:
        return [(self.vertices[i], self.vertices[i + 1]) for i in range(0, len(self.vertices), 2)]


@dataclass(frozen=True)
class GreedyProfile:
    """Greedy bad string of a chain and the member positions locating it."""
    string: BadString
    profile: tuple[int, ...]


@dataclass(frozen=True)
class ZoneEstimate:
    """Probability estimate with binomial standard error (zero in exact mode)."""
    estimate: float
    stderr: float
    trials: int
    exact: Optional[Fraction] = None


class ChainClass(Enum):
    """Classification of chains with nonempty marker sets."""
    SPARSE_BAD = "C1"  # b(M)/x(M) <= 1/C
    DENSE_BAD = "C2"


@dataclass
class NestedFamilyState:
    """Iteration i of the nested construction."""
    iteration: int
    k: int
    h: int
    markers: dict[FullChain, tuple[LatticeVertex, ...]]
    lower_bad: dict[FullChain, frozenset[LatticeVertex]] = field(default_factory=dict)
    upper_bad: dict[FullChain, frozenset[LatticeVertex]] = field(default_factory=dict)
    classes: dict[FullChain, ChainClass] = field(default_factory=dict)
    witnesses: Optional[WitnessAssignment] = None

    @property
    def C(self) -> int:
        return 4 * self.k * self.h

    def bad(self, chain: FullChain) -> frozenset[LatticeVertex]:
        return self.lower_bad.get(chain, frozenset()) | self.upper_bad.get(chain, frozenset())


@dataclass(frozen=True)
class IterationReport:
    """Counts recorded for one iteration; bounds are reported, not asserted."""
    iteration: int
    marked_count: int
    bound: Fraction  # (eps/k) n! (1 - i/(2h))
    holds: bool
    prose_bound: Fraction  # (eps/k) n! (1 - i/(2k))
    prose_holds: bool
    sparse_chains: int = 0
    dense_chains: int = 0
    sparse_shrink_ok: Optional[bool] = None
    dense_mass: Optional[int] = None
    dense_mass_estimate: Optional[float] = None
    witnesses_fixed: int = 0
