"""Exception types shared across the package.

Every error raised by library code derives from DepgapError so callers
(notably the command line front end) can distinguish domain failures
from programming errors.
"""


class DepgapError(Exception):
    """Base class for all errors raised by this package."""


class TooFewSamples(DepgapError):
    """An operation received fewer observations than it requires."""


class ZeroVariance(DepgapError):
    """A statistic that divides by a sample standard deviation met a constant input."""


class ZeroMarginalDensity(DepgapError):
    """A density-gap query point lies outside every kernel window on some axis."""


class DegenerateCurve(DepgapError):
    """A threshold-selection curve is constant on its grid, so no inflection exists."""


class UnknownFamily(DepgapError):
    """A synthetic-data spec names a distribution family that is not registered."""


class UnknownMeasure(DepgapError):
    """A measure tag is not in the registry."""


class ParseError(DepgapError):
    """Malformed input data; carries the offending row and column when known."""

    def __init__(self, message, row=None, column=None):
        loc = ""
        if row is not None:
            loc += f" (row {row}"
            loc += f", column {column})" if column is not None else ")"
        super().__init__(message + loc)
        self.row = row
        self.column = column


class DimensionMismatch(DepgapError):
    """Ingested table rows disagree on length, or paired arrays disagree on shape."""


class ZeroLibrarySize(DepgapError):
    """A counts-per-million transform met a column summing to zero."""
