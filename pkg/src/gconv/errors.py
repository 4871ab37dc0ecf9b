"""Error types shared across the package."""


class GconvError(Exception):
    """Base class for errors raised by this package."""


class SpaceMismatchError(GconvError):
    """A point or function was used with a group it does not belong to."""


class DimensionMismatchError(GconvError):
    """Vector or pairing dimensions are incompatible."""


class MeasureFlagError(GconvError):
    """An operation needs an invariance property the measure does not declare."""


class CsvFormatError(GconvError):
    """A signal file failed to parse.  Carries the offending line number."""

    def __init__(self, message: str, line_no: int | None = None):
        if line_no is not None:
            message = "line %d: %s" % (line_no, message)
        super().__init__(message)
        self.line_no = line_no
