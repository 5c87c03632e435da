"""Exception hierarchy shared by all gridseed modules.

Every error raised by the library derives from :class:`GridSeedError` so
callers (notably the CLI) can distinguish bad input from internal bugs.
"""


class GridSeedError(Exception):
    """Base class for all gridseed errors."""


# -- topology -----------------------------------------------------------------

class DuplicateBusId(GridSeedError):
    """Two buses share the same id."""


class DanglingBranchEndpoint(GridSeedError):
    """A branch references a bus id that does not exist."""


class SelfLoop(GridSeedError):
    """A branch connects a bus to itself."""


class AllZeroDegrees(GridSeedError):
    """Degree normalization requested over a subset with max degree 0."""


class MissingImpedance(GridSeedError):
    """A branch lacks reactance and no default was allowed."""


# -- statistical models -------------------------------------------------------

class InvalidNetworkSize(GridSeedError):
    """Scaling laws are defined only for network sizes >= 2."""


class EmptyInput(GridSeedError):
    """An operation received an empty vector."""


class NonPositiveMax(GridSeedError):
    """Normalization requires a strictly positive maximum."""


class OutOfRange(GridSeedError):
    """A value fell outside the [0, 1] binning domain."""


class NotADistribution(GridSeedError):
    """Joint table mass is too far from 1 to renormalize."""


class NegativeEntry(GridSeedError):
    """Joint table contains a negative cell."""


class BadEdges(GridSeedError):
    """Bin edges are not ascending within [0, 1]."""


# -- empirical analysis -------------------------------------------------------

class LengthMismatch(GridSeedError):
    """Paired vectors have different lengths."""


class DegenerateInput(GridSeedError):
    """Input has no usable variation (e.g. all-zero degrees)."""


class ConstantVector(GridSeedError):
    """Correlation of a zero-variance vector is undefined."""


class InsufficientPoints(GridSeedError):
    """Too few points to fit the requested model."""


class CollinearSizes(GridSeedError):
    """Fewer than three distinct network sizes; quadratic fit underdetermined."""


# -- assignment ---------------------------------------------------------------

class NoGenerationBuses(GridSeedError):
    """Generation assignment requested on a grid without generation buses."""


class NoLoadBuses(GridSeedError):
    """Load assignment requested on a grid without load buses."""


# -- power flow ---------------------------------------------------------------

class DisconnectedGrid(GridSeedError):
    """DC power flow requires a connected branch graph."""


class SingularSystem(GridSeedError):
    """The reduced susceptance system could not be solved reliably."""


# -- file I/O -----------------------------------------------------------------

class ParseError(GridSeedError):
    """A file could not be parsed; carries the offending location."""

    def __init__(self, message: str, path: str | None = None, line: int | None = None):
        self.path = path
        self.line = line
        where = ""
        if path is not None:
            where = f"{path}:" if line is None else f"{path}:{line}:"
        super().__init__(f"{where} {message}" if where else message)
