"""Data models for finite posets, their Hasse diagrams and embeddings."""
from dataclasses import dataclass
from enum import Enum
from functools import cached_property
from typing import Hashable

import networkx as nx


class IntervalDirection(Enum):
    """Where a removed chain interval hangs relative to its anchor."""
    BELOW = "below"  # I = [v, u], leaf under the anchor
    ABOVE = "above"  # I = [u, v], leaf over the anchor


@dataclass(frozen=True)
class Poset:
    """A finite strict partial order on dense indices 0..element_count-1.

    ``strict_less`` is transitively closed and irreflexive; builders in
    ``core.poset`` guarantee this, the constructor does not re-check it.
    """
    element_count: int
    labels: tuple[str, ...]
    strict_less: frozenset[tuple[int, int]]

    @cached_property
    def graph(self) -> nx.DiGraph:
        """Closed relation as a DAG; edge (u, v) means u < v."""
        g = nx.DiGraph()
        g.add_nodes_from(range(self.element_count))
        g.add_edges_from(self.strict_less)
        return g

    @cached_property
    def index(self) -> dict[str, int]:
        return {label: i for i, label in enumerate(self.labels)}

    def less(self, u: int, v: int) -> bool:
        return (u, v) in self.strict_less

    def comparable(self, u: int, v: int) -> bool:
        return u == v or (u, v) in self.strict_less or (v, u) in self.strict_less

    def above(self, u: int) -> set[int]:
        """Elements strictly greater than u."""
        return set(self.graph.successors(u))

    def below(self, u: int) -> set[int]:
        """Elements strictly less than u."""
        return set(self.graph.predecessors(u))


@dataclass(frozen=True)
class HasseDiagram:
    """Cover relation of a poset: (u, v) means v covers u."""
    element_count: int
    covers: tuple[tuple[int, int], ...]

    def undirected(self) -> nx.Graph:
        g = nx.Graph()
        g.add_nodes_from(range(self.element_count))
        g.add_edges_from(self.covers)
        return g

    def upper_covers(self, u: int) -> list[int]:
        return [b for a, b in self.covers if a == u]

    def lower_covers(self, u: int) -> list[int]:
        return [a for a, b in self.covers if b == u]


@dataclass(frozen=True)
class PosetAnalysis:
    """Structural summary returned by ``analyze``."""
    height: int
    tree_hasse: bool
    k_saturated: bool


@dataclass(frozen=True)
class DecompositionStep:
    """One interval removal H_i -> H_{i+1}; elements are named by label."""
    removed_interval: tuple[str, ...]  # whole chain interval I, ordered from anchor to leaf
    anchor: str
    leaf: str
    direction: IntervalDirection
    remaining: Poset

    @property
    def removed(self) -> tuple[str, ...]:
        """I minus the anchor, ordered from the anchor's neighbour to the leaf."""
        return self.removed_interval[1:]


@dataclass(frozen=True)
class Embedding:
    """Injective image of every element of ``pattern``.

    Images are lattice vertices (int bitmasks) for copies in B_n, or host
    element indices for poset-in-poset embeddings.
    """
    pattern: Poset
    images: tuple[Hashable, ...]
    induced: bool

    def image_of(self, label: str) -> Hashable:
        return self.images[self.pattern.index[label]]

    def as_pairs(self) -> list[tuple[str, Hashable]]:
        return list(zip(self.pattern.labels, self.images))
