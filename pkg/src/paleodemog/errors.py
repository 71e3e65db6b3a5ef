"""Exception types shared across the toolkit."""


class PaleodemogError(Exception):
    """Base class for all toolkit errors."""


class DomainError(PaleodemogError, ValueError):
    """An input value violates an operation's domain contract."""


class InvalidStandardError(PaleodemogError):
    """A life table cannot serve as a logit standard (l(x) hits 0 or 1)."""


class OutOfRangeError(PaleodemogError):
    """A requested life expectancy is outside the reachable range."""


class NoRootError(PaleodemogError):
    """The characteristic equation has no root (e.g. all-zero fertility)."""


class GridMismatchError(PaleodemogError):
    """Two tables or vectors are defined on different age grids."""


class OrderingError(PaleodemogError, ValueError):
    """A series that must be sorted is not."""


class DataFormatError(PaleodemogError):
    """A data file does not match its documented schema."""
