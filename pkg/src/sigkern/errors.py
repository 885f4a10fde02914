"""Exception hierarchy shared across the package."""


class SigKernError(Exception):
    """Base class for all errors raised by sigkern."""


class DataError(SigKernError, ValueError):
    """Malformed or inconsistent input data."""


class DegenerateSequence(DataError):
    """A sequence is too short for the requested operation."""


class DimensionMismatch(DataError):
    """Inputs with incompatible state or feature dimensions."""


class ParseError(DataError):
    """A CSV file could not be parsed; carries the offending line number."""

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class InvalidParameter(SigKernError, ValueError):
    """A hyperparameter is outside its admissible range."""


class OracleTooLarge(SigKernError, ValueError):
    """Brute-force enumeration would exceed its size guard."""


class FeatureSizeError(SigKernError, MemoryError):
    """A full tensor feature map would exceed its memory guard."""


class NumericDegeneracy(SigKernError, ArithmeticError):
    """A computation has no well-defined numeric answer for this input."""


class NormalizationError(NumericDegeneracy):
    """Normalization by a nonpositive norm or diagonal."""


class DegenerateBandwidth(NumericDegeneracy):
    """The median heuristic produced a zero bandwidth."""


class DegenerateTrajectory(NumericDegeneracy):
    """A generated trajectory has zero 1-variation and cannot be rescaled."""
