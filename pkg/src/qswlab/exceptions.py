"""Error types shared across the package."""


class QswlabError(Exception):
    """Base class for all package errors."""


class DimensionError(QswlabError, ValueError):
    """Operands have incompatible or invalid dimensions."""


class NumericalError(QswlabError, RuntimeError):
    """An iterative numerical routine failed to converge."""


class IsolatedVertexError(QswlabError, ValueError):
    """Normalized Laplacian requested for a graph with a degree-0 vertex."""


class MultipleSinksError(QswlabError, ValueError):
    """The condensation has more than one sink component."""


class DisconnectedGraphError(QswlabError, ValueError):
    """Operation requires a connected graph."""


class ProbabilityOverflowError(QswlabError, ValueError):
    """A pair probability in the Chung-Lu model exceeds 1."""


class NonOrthogonalColumnsError(QswlabError, ValueError):
    """A per-vertex Lindblad family matrix has non-orthogonal columns."""


class WrongTopologyError(QswlabError, ValueError):
    """The graph does not have the topology required by the operation."""


class DegenerateTopError(QswlabError, ValueError):
    """Top eigenvalue is degenerate; shift-and-rescale undefined."""


class DensityInvariantViolated(QswlabError, RuntimeError):
    """Evolved state drifted beyond density-matrix tolerances."""


class OracleNeverSucceeds(QswlabError, RuntimeError):
    """Geometric measurement schedule exhausted without oracle success."""
