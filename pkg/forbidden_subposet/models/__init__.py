"""Data models for the forbidden-subposet toolkit."""
from .poset import Poset, HasseDiagram, PosetAnalysis, DecompositionStep, Embedding, IntervalDirection
from .lattice import LatticeVertex, Band, Family, FullChain, ChainDirection, ZoneSide
from .chains import MarkedChain, MarkerHistogram, DensityReport
from .nested import (
    WitnessAssignment,
    BadString,
    GreedyProfile,
    ZoneEstimate,
    ChainClass,
    NestedFamilyState,
    IterationReport,
)
from .extremal import (
    Verdict,
    SearchBudget,
    BudgetMeter,
    BudgetExhausted,
    SearchResult,
    EmbeddingState,
    LaResult,
    HmCertificate,
)
from .config import RunConfig

__all__ = [
    "Poset", "HasseDiagram", "PosetAnalysis", "DecompositionStep", "Embedding", "IntervalDirection",
    "LatticeVertex", "Band", "Family", "FullChain", "ChainDirection", "ZoneSide",
    "MarkedChain", "MarkerHistogram", "DensityReport",
    "WitnessAssignment", "BadString", "GreedyProfile", "ZoneEstimate", "ChainClass",
    "NestedFamilyState", "IterationReport",
    "Verdict", "SearchBudget", "BudgetMeter", "BudgetExhausted", "SearchResult", "EmbeddingState",
    "LaResult", "HmCertificate",
    "RunConfig",
]
