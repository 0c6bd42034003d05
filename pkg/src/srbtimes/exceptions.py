"""Exception hierarchy shared by every module of the package."""


class SrbTimesError(Exception):
    """Base class for all package errors."""


class InvalidParameter(SrbTimesError, ValueError):
    pass


class EmptyTimeSet(SrbTimesError, ValueError):
    pass


class EmptyMeasure(SrbTimesError, ValueError):
    pass


class DimensionError(SrbTimesError, ValueError):
    pass


class UnknownSystem(SrbTimesError, KeyError):
    pass


class UnsupportedSystem(SrbTimesError, ValueError):
    pass


class IncompleteInput(SrbTimesError, ValueError):
    pass


class NoHyperbolicTime(SrbTimesError, ValueError):
    pass


class ConfigError(SrbTimesError, ValueError):
    """Raised on malformed experiment configuration; ``path`` names the field."""

    def __init__(self, path, message):
        self.path = path
        super().__init__(f"{path}: {message}")
