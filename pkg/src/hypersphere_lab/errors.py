"""Exception types shared across the package.

Exit-code mapping used by the CLI lives in cli.py; library code raises
these and never calls sys.exit.
"""


class HypersphereLabError(Exception):
    """Base class for all package errors."""


class DomainError(HypersphereLabError):
    """Input outside an operation's domain (non-real element, off-sphere point)."""


class PoleError(DomainError):
    """Projection from the north pole, or inversion centered at the point itself."""


class ConductorError(HypersphereLabError):
    """Requested denominator does not divide the field conductor."""


class ResourceError(HypersphereLabError):
    """Configured resource cap exceeded (field degree, interval precision)."""


class DegeneracyError(HypersphereLabError):
    """Rank-deficient input where a unique hypersphere was required."""


class GeneralPositionError(HypersphereLabError):
    """A d+1 subset lies on a common (d-2)-sphere or (d-2)-flat."""

    def __init__(self, witness, message=None):
        self.witness = tuple(witness)
        super().__init__(message or f"general position violated by point indices {self.witness}")


class SpanError(GeneralPositionError):
    """A size-D subset fails to span a hyperplane in R^D."""

    def __init__(self, witness):
        super().__init__(witness, f"points {tuple(witness)} do not span a hyperplane")


class GenerationError(HypersphereLabError):
    """Random resampling budget exhausted while generating a configuration."""


class ConsistencyError(HypersphereLabError):
    """Internal cross-check failed (inexact subset-count division)."""
