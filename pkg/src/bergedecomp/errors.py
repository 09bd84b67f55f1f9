"""Exception types shared across the pipeline."""

from __future__ import annotations

from typing import Any


class DecompositionError(Exception):
    """Base class for every failure raised by the pipeline."""


class InfeasibleInput(DecompositionError, ValueError):
    """The requested lengths violate a necessary condition."""


class SearchExhausted(DecompositionError):
    """A search engine spent its budget without finding a solution.

    ``best`` holds the best partial solution seen, for diagnostics.
    """

    def __init__(self, message: str, best: Any = None):
        super().__init__(message)
        self.best = best


class InstanceTooLarge(DecompositionError, ValueError):
    pass


class InvalidRemoval(DecompositionError, ValueError):
    pass


class SizeMismatch(DecompositionError):
    pass


class SpreadTooLarge(DecompositionError):
    pass


class NoPerfectMatching(DecompositionError):
    """Raised with a Hall violator: ``violator`` is a set of edge instances
    of the multigraph whose joint neighbourhood ``neighbourhood`` is smaller."""

    def __init__(self, message: str, violator: list, neighbourhood_size: int):
        super().__init__(message)
        self.violator = violator
        self.neighbourhood_size = neighbourhood_size


class MissingAssignment(DecompositionError, KeyError):
    pass


class SDRNotFound(DecompositionError):
    pass


class BelowThresholdFailure(DecompositionError):
    """A best-effort run below the guaranteed-success thresholds failed."""

    def __init__(self, message: str, stage: str, certificate: Any = None):
        super().__init__(message)
        self.stage = stage
        self.certificate = certificate
