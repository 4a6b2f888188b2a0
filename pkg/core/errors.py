"""
Exception hierarchy shared by all planar gap modules
"""
from typing import Any, Optional, Tuple


class PlanarGapError(Exception):
    """Base class for all library errors"""


class InvalidParameterError(PlanarGapError, ValueError):
    """A numeric parameter (h, k, eps, tolerance, ...) is out of range"""


class CapacityExceededError(InvalidParameterError):
    """Requested construction would exceed the configured capacity"""


class SizeLimitError(InvalidParameterError):
    """Input is too large for an exact (enumerative / dense) method"""


class InvalidInputError(PlanarGapError, ValueError):
    """Graph or vector input violates a precondition"""


class DimensionMismatchError(InvalidInputError):
    """Vector length does not match the vertex count"""

    def __init__(self, expected: int, got: int, what: str = "vector"):
        super().__init__(f"{what} has {got} entries, expected {expected}")
        self.expected = expected
        self.got = got


class GraphParseError(InvalidInputError):
    """Malformed serialized graph; `line` is 1-based (None for whole-document errors)"""

    def __init__(self, message: str, line: Optional[int] = None):
        prefix = f"line {line}: " if line is not None else ""
        super().__init__(prefix + message)
        self.line = line


class InvalidMapError(InvalidInputError):
    """Test map is not 1-Lipschitz across some edge"""

    def __init__(self, edge: Tuple[int, int], jump: float):
        super().__init__(f"map changes by {jump:.6g} > 1 across edge {edge[0]}-{edge[1]}")
        self.edge = edge
        self.jump = jump


class InvalidDistributionError(InvalidInputError):
    """Vector is not a probability distribution"""


class ConvergenceError(PlanarGapError, RuntimeError):
    """Iterative solver could not certify its residual; `best` holds the best iterate"""

    def __init__(self, message: str, best: Any = None):
        super().__init__(message)
        self.best = best
