"""Exception types shared across the package."""

from __future__ import annotations


class PrankError(Exception):
    """Base class for all package-specific errors."""


class SizeLimitError(PrankError):
    """An exhaustive operation was asked to run past its size guard."""


class UnknownTupleError(PrankError):
    """A tuple id was referenced that the model does not contain."""


class ProbabilityConstraintError(PrankError):
    """A probability (or a sum of sibling probabilities) left its legal range."""


class InvalidTreeError(PrankError):
    """A correlation tree failed structural validation."""


class DegreeBoundExceededError(PrankError):
    """A nested expression expanded past its declared degree bound."""


class ConfigError(PrankError):
    """An approximation configuration is internally inconsistent."""


class MismatchedKError(PrankError):
    """Two top-k lists of different length were compared."""


class UnsupportedModelError(PrankError):
    """The operation is not defined for this correlation model."""


class DegenerateSampleError(PrankError):
    """A training sample carries no usable signal."""


class ShapeError(PrankError):
    """A junction tree does not have the shape the operation requires."""


class InconsistentPotentialsError(PrankError):
    """Clique potentials disagree on a shared separator."""


class ZeroProbabilityError(PrankError):
    """Conditioning on an event of probability zero."""
