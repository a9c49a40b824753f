"""Exception types shared across the package."""


class StabilityError(Exception):
    """Base class for every error raised by this package."""


class InvalidInput(StabilityError):
    """Malformed or contract-violating input."""


class AsymmetricInput(InvalidInput):
    """Matrix input whose asymmetry exceeds the symmetry tolerance."""


class SelfLoop(InvalidInput):
    """Edge list contains an edge from a node to itself."""


class DuplicateEdge(InvalidInput):
    """Edge list contains the same unordered pair twice."""


class SubsetOutOfRange(InvalidInput):
    """Index subset references nodes outside the matrix or graph."""


class TooLarge(StabilityError):
    """Requested enumeration exceeds the configured size guard."""


class Disconnected(StabilityError):
    """Operation requires a connected graph."""


class NoConvergence(StabilityError):
    """Iterative solver did not reach the residual tolerance."""


class MultipleNegatives(StabilityError):
    """Segment has more than one negative link; the weight bound does not apply."""


class NoNegative(StabilityError):
    """Segment has no negative link to bound."""


class InvalidCut(InvalidInput):
    """Node bipartition is not a valid non-positive cut."""


class NoSuchEdge(InvalidInput):
    """Sign flip references an absent off-diagonal entry."""


class DegenerateB(InvalidInput):
    """Adaptation decay rate is zero; stationary couplings are undefined."""


class BadSubset(InvalidInput):
    """Subset does not have the shape required by the block-matrix reduction."""
