"""Custom exceptions for the forbidden-subposet toolkit."""
from typing import Optional


class SubposetError(Exception):
    """Base exception for all toolkit errors."""
    pass


class ParseError(SubposetError):
    """Error parsing a poset file, family file or family spec string."""

    def __init__(self, message: str, line: Optional[int] = None, column: Optional[int] = None):
        self.line = line
        self.column = column
        location = ""
        if line is not None:
            location = f" (line {line}"
            if column is not None:
                location += f", column {column}"
            location += ")"
        super().__init__(f"{message}{location}")


class CycleError(SubposetError):
    """A relation whose transitive closure puts an element below itself."""

    def __init__(self, element: int):
        self.element = element
        super().__init__(f"Relation is not antisymmetric: element {element} lies strictly below itself")


class ElementIndexError(SubposetError, IndexError):
    """Element index outside 0..element_count-1."""

    def __init__(self, index: int, element_count: int):
        self.index = index
        self.element_count = element_count
        super().__init__(f"Element index {index} out of range for {element_count} elements")


class ParamError(SubposetError, ValueError):
    """Invalid parameters for a builder or operation."""
    pass


class NotTreeError(SubposetError):
    """The Hasse diagram is not a tree."""

    def __init__(self, message: str = "Hasse diagram is not a tree"):
        super().__init__(message)


class NotSaturatedError(SubposetError):
    """The poset is not k-saturated."""

    def __init__(self, k: int):
        self.k = k
        super().__init__(f"Poset is not {k}-saturated")


class BudgetError(SubposetError):
    """A bounded construction did not succeed within its element budget."""
    pass


class SizeError(SubposetError):
    """An enumeration would exceed its configured cap."""

    def __init__(self, what: str, size: int, cap: int):
        self.size = size
        self.cap = cap
        super().__init__(f"{what}: {size} exceeds the enumeration cap {cap}")


class WitnessPlacementError(SubposetError):
    """A witness set meets the up-set (below) or down-set (above) of its vertex."""
    pass


class NotChainError(SubposetError):
    """A vertex sequence is not strictly nested."""
    pass


class IncompleteStringError(SubposetError):
    """A bad vertex has no qualifying partner before the chain ends."""

    def __init__(self, position: int):
        self.position = position
        super().__init__(f"Bad member at position {position} has no partner in its forbidden zone")


class NotValidatedError(SubposetError):
    """An embedding lacks induced certification."""
    pass


class IndeterminateError(SubposetError):
    """A search ran out of budget before reaching a verdict."""

    def __init__(self, nodes_expanded: int):
        self.nodes_expanded = nodes_expanded
        super().__init__(f"Search budget exhausted after {nodes_expanded} nodes; verdict indeterminate")


class ReportError(SubposetError):
    """Error writing a report."""
    pass
