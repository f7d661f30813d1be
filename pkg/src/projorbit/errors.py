"""Exception types shared across the package."""


class ProjOrbitError(Exception):
    """Base class for all errors raised by this package."""


class InvalidMatrix(ProjOrbitError):
    """Input matrix is not a usable projective-group element."""


class InvalidIndex(ProjOrbitError):
    """Root/weight index outside 1..d-1."""


class InvalidInput(ProjOrbitError):
    """Arguments violate an operation's precondition."""


class NumericalFailure(ProjOrbitError):
    """A numerical routine failed to converge or lost all accuracy."""


class DegenerateGap(ProjOrbitError):
    """Singular-value or eigenvalue gap below tolerance; attractor undefined."""


class NotTransverse(ProjOrbitError):
    """Flags fail the required transversality."""


class NotDiscreteCertificate(ProjOrbitError):
    """Ping-pong certificate could not be verified for a generator system."""


class BudgetExceeded(ProjOrbitError):
    """Enumeration exceeded the configured element cap.

    Carries whatever was enumerated so far in ``partial`` so callers can
    flag and persist incomplete output.
    """

    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial


class NotInterior(ProjOrbitError):
    """Point is not in the interior of the convex domain."""


class MultipleSupports(ProjOrbitError):
    """Boundary point has several supporting hyperplanes (polytope corner)."""

    def __init__(self, message, facets=None):
        super().__init__(message)
        self.facets = facets if facets is not None else []


class Unsupported(ProjOrbitError):
    """Operation not available for this domain variant."""


class InsufficientWindow(ProjOrbitError):
    """Profile too small or too narrow for a slope fit."""


class InsufficientScales(ProjOrbitError):
    """Scale range unusable for the box-counting fit."""


class EmptyCover(ProjOrbitError):
    """Shadow cover has no members at the requested level."""


class NoChildrenFound(ProjOrbitError):
    """Bishop-Jones child search exhausted its budget at a node."""

    def __init__(self, message, node=None):
        super().__init__(message)
        self.node = node


class IncompleteTree(ProjOrbitError):
    """Measure construction requires a tree whose every branch reached depth."""


class ConfigError(ProjOrbitError):
    """Malformed or unknown experiment configuration."""
