"""Typed failure modes.

Every numerically ambiguous situation raises one of these instead of
propagating NaNs or silently rounding the wrong way.
"""


class MerospecError(Exception):
    """Base class for all package errors."""


class ShapeError(MerospecError):
    """Incompatible matrix dimensions."""


class ContourError(MerospecError):
    """A contour-level failure: singularity on the contour, an
    under-resolved phase, or an evaluation failure at a node."""

    def __init__(self, message, node_index=None, node=None):
        super().__init__(message)
        self.node_index = node_index
        self.node = node


class EvaluationAtSpectrumError(MerospecError):
    """A resolvent was requested at (numerically) an eigenvalue."""

    def __init__(self, message, z=None):
        super().__init__(message)
        self.z = z


class NonInvertibleError(MerospecError):
    """Matrix-function value is numerically singular at the given point."""

    def __init__(self, message, z=None):
        super().__init__(message)
        self.z = z


class IntegralityError(MerospecError):
    """A quantity that must be an integer landed too far from one."""


class RankGapError(MerospecError):
    """A rank decision had a singular value too close to the threshold."""


class PoleOrderError(MerospecError):
    """Principal part did not terminate within the allowed depth."""


class FactorizationError(MerospecError):
    """Degeneracy peeling could not proceed (nothing to factor, or the
    step limit was exceeded)."""


class NotRepresentableError(MerospecError):
    """A restricted operator has a multivalued part and admits no matrix."""


class DegenerateTripleError(MerospecError):
    """Boundary-triple data is inconsistent at the requested point."""


class PreconditionError(MerospecError):
    """A documented precondition (isolation disk, resolvent-set membership)
    does not hold for the supplied arguments."""


class ToleranceError(MerospecError):
    """An identity that must hold to stated tolerance exceeded it."""


class ConfigError(MerospecError):
    """Malformed or out-of-bounds harness configuration."""
