"""Exception hierarchy shared by all modules."""


class DkdvError(Exception):
    """Base class for every error raised by the package."""


class UndefinedValuation(DkdvError):
    """Valuation requested for a series that is zero up to truncation."""


class DivisionBySeriesZero(DkdvError, ZeroDivisionError):
    """Inversion of a series with no certified nonzero coefficient."""

    def __init__(self, message: str, coord: tuple[int, int] | None = None):
        super().__init__(message if coord is None else f"{message} at cell {coord}")
        self.coord = coord


class PrecisionExhausted(DkdvError):
    """The truncation budget cannot certify a nonzero term; retry with a larger K."""

    def __init__(self, message: str, coord: tuple[int, int] | None = None):
        super().__init__(message if coord is None else f"{message} at cell {coord}")
        self.coord = coord


class SeedConflict(DkdvError):
    """Two seeds claim the same border site."""


class ScenarioError(DkdvError, ValueError):
    """Malformed scenario description; ``field`` names the offending entry."""

    def __init__(self, field: str, message: str):
        super().__init__(f"{field}: {message}")
        self.field = field


class InconsistentStrip(DkdvError):
    """A strip weight varies across the measured range (range overlaps an interaction)."""


class DegenerateTaishi(DkdvError, ValueError):
    """A taishi with zero total weight."""
