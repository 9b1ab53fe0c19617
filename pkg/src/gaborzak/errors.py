"""Exception types shared across the package.

Plain ``ValueError`` is used for invalid-argument conditions (bad dimensions,
non-finite input, malformed files); the classes below cover the structured
failure modes that callers are expected to catch and react to.
"""

from __future__ import annotations


class NumericalFailure(RuntimeError):
    """A numerical procedure failed to converge or produced non-finite values."""


class TruncationError(ValueError):
    """Requested lattice-sum truncation cannot meet the tail-bound target.

    Carries ``suggested_k``, the smallest truncation radius whose certified
    tail bound passes.
    """

    def __init__(self, message: str, suggested_k: int):
        super().__init__(message)
        self.suggested_k = suggested_k


class AmbiguousClassification(RuntimeError):
    """A coordinate declared irrational is numerically indistinguishable from
    a small-denominator rational, so the orbit classification cannot be
    trusted.  ``coordinate_index`` names the suspect entry."""

    def __init__(self, message: str, coordinate_index: int):
        super().__init__(message)
        self.coordinate_index = coordinate_index


class InsufficientSupport(ValueError):
    """A sampled window's support radius is too small for the requested
    operation (e.g. decay-bound estimation)."""


class PhaseUndefined(RuntimeError):
    """The phase of a near-zero value was requested along an orbit.

    ``step`` is the orbit index at which the modulus fell below threshold.
    """

    def __init__(self, message: str, step: int):
        super().__init__(message)
        self.step = step


class DegenerateConfigWarning(UserWarning):
    """Configuration contains duplicate time-frequency points; the Gram
    matrix is rank-deficient by construction."""
