"""Exception types shared across the library."""


class HitSetError(Exception):
    """Base class for library-specific errors."""


class InvalidProbabilityError(HitSetError, ValueError):
    """A probability parameter lies outside its admissible range."""


class DimensionOverflowError(HitSetError):
    """Requested incidence matrix exceeds the memory budget."""


class IndexOutOfRangeError(HitSetError, IndexError):
    """A 1-based row, column, or cardinality index is out of bounds."""


class ParseError(HitSetError, ValueError):
    """Malformed instance file, records file, or config file.

    line and column are 1-based when known, None otherwise.
    """

    def __init__(self, message: str, line=None, column=None):
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f" (line {line}" + (f", column {column}" if column is not None else "") + ")"
        super().__init__(message + where)


class InfeasibleError(HitSetError):
    """No hitting set exists: some subset is empty."""


class TooLargeError(HitSetError):
    """Instance exceeds a solver's size guard; pass the override to force."""


class DomainError(HitSetError, ValueError):
    """Argument outside the mathematical domain of a formula."""


class RegimeViolationError(HitSetError):
    """Quantity is only defined in a different density regime."""


class DegenerateError(HitSetError):
    """Quantity undefined for a degenerate (all-zero) instance."""


class ConfigError(HitSetError, ValueError):
    """Experiment configuration is missing, unparseable, or inconsistent."""


class EmptyInputError(HitSetError):
    """A records file or record list contains no data rows."""
