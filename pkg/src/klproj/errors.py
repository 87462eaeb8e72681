"""Typed exceptions shared across the package.

Every error carries a stable machine-readable ``code`` (its class name) and an
``exit_code`` used by the command line front end: 2 for input validation
problems, 3 for numerical failures detected during computation.
"""


class KlprojError(Exception):
    """Base class for all library errors."""

    exit_code = 3

    @property
    def code(self) -> str:
        return type(self).__name__


class NonFiniteInput(KlprojError):
    """An input array contains NaN or infinity."""

    exit_code = 2


class DimensionMismatch(KlprojError):
    """Array shapes are inconsistent with each other or with the operation."""

    exit_code = 2


class NonPositiveInput(KlprojError):
    """A quantity that must be strictly positive is zero or negative."""

    exit_code = 2


class InsufficientSamples(KlprojError):
    """Too few samples in a class to estimate the requested quantity."""

    exit_code = 2


class EqualMeans(KlprojError):
    """The operation requires distinct class means."""

    exit_code = 2


class UnequalMeans(KlprojError):
    """The operation requires coinciding class means."""

    exit_code = 2


class IdenticalDistributions(KlprojError):
    """The two classes are numerically indistinguishable; no direction helps."""

    exit_code = 2


class NotPositiveDefinite(KlprojError):
    """A matrix required to be symmetric positive definite is not."""


class RankDeficient(KlprojError):
    """A matrix that must have full (row) rank is numerically rank deficient."""

    exit_code = 2

    def __init__(self, message: str, rank: int | None = None):
        super().__init__(message)
        self.rank = rank


class RankDeficientMeans(KlprojError):
    """Class means are collinear; the requested subspace does not exist."""

    exit_code = 2


class ChannelRankFailure(KlprojError):
    """Could not draw a full-column-rank channel matrix."""


class NumericalError(KlprojError):
    """A computed quantity violates a mathematical guarantee beyond tolerance."""
