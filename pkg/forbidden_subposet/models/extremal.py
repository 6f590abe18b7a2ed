"""Data models for embedding searches and extremal results."""
import time
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional

from forbidden_subposet.models.lattice import LatticeVertex
from forbidden_subposet.models.poset import DecompositionStep, Embedding


class Verdict(Enum):
    """Outcome of a copy search; INDETERMINATE is never a proof of absence."""
    FOUND = "found"
    ABSENT = "absent"
    INDETERMINATE = "indeterminate"


@dataclass(frozen=True)
class SearchBudget:
    """Limits on a backtracking search; None means unlimited."""
    node_limit: Optional[int] = None
    time_limit: Optional[float] = None
    backtrack_limit: Optional[int] = None

    def __post_init__(self):
        for name in ("node_limit", "time_limit", "backtrack_limit"):
            value = getattr(self, name)
            if value is not None and value < 0:
                raise ValueError(f"{name} must be nonnegative, got {value}")

    def meter(self) -> "BudgetMeter":
        return BudgetMeter(self)


class BudgetExhausted(Exception):
    """Internal signal unwinding a search when its budget runs out."""
    pass


@dataclass
class BudgetMeter:
    """Running counters checked against a SearchBudget."""
    budget: SearchBudget
    nodes: int = 0
    backtracks: int = 0
    started: float = field(default_factory=time.monotonic)

    def node(self) -> None:
        self.nodes += 1
        if self.budget.node_limit is not None and self.nodes > self.budget.node_limit:
            raise BudgetExhausted()
        # the clock is sampled every 1024 nodes
        if self.budget.time_limit is not None and self.nodes & 1023 == 0:
            if self.elapsed() > self.budget.time_limit:
                raise BudgetExhausted()

    def backtrack(self) -> None:
        self.backtracks += 1
        if self.budget.backtrack_limit is not None and self.backtracks > self.budget.backtrack_limit:
            raise BudgetExhausted()

    def elapsed(self) -> float:
        return time.monotonic() - self.started


@dataclass(frozen=True)
class SearchResult:
    """Verdict of a copy search with its certified embedding when found."""
    verdict: Verdict
    embedding: Optional[Embedding] = None
    nodes_expanded: int = 0
    elapsed_ms: float = 0.0

    @property
    def found(self) -> bool:
        return self.verdict is Verdict.FOUND


@dataclass
class EmbeddingState:
    """Guided embedding after step i: image set W_i and the pending removals."""
    step: int
    assignment: dict[str, LatticeVertex]
    pending: list[DecompositionStep]

    @property
    def image_set(self) -> frozenset[LatticeVertex]:
        return frozenset(self.assignment.values())


@dataclass(frozen=True)
class LaResult:
    """Largest H-free family found, or an indeterminate verdict."""
    verdict: Verdict
    value: Optional[int] = None
    witness: Optional[frozenset[LatticeVertex]] = None
    nodes_expanded: int = 0
    elapsed_ms: float = 0.0


@dataclass(frozen=True)
class HmCertificate:
    """Weight spread of an induced staircase copy and its intersection chain."""
    m: int
    spread: int
    holds: bool
    intersections: tuple[LatticeVertex, ...]
    intersections_distinct: bool
