"""Exception hierarchy shared across the package."""


class StatemetricError(Exception):
    """Base class for all domain errors raised by this package."""


class NotHermitian(StatemetricError):
    pass


class DimensionMismatch(StatemetricError):
    pass


class NotClosed(StatemetricError):
    """The generator span does not close under commutation."""


class DependentGenerators(StatemetricError):
    """Generators are linearly dependent (or too ill-conditioned to separate)."""


class UnknownGenerator(StatemetricError):
    pass


class MissingParameter(StatemetricError):
    pass


class StepOutOfRange(StatemetricError):
    pass


class PointMismatch(StatemetricError):
    pass


class EmptyGrid(StatemetricError):
    pass


class InsufficientGrid(StatemetricError):
    pass


class DegenerateSection(StatemetricError):
    pass


class SubspaceLeak(StatemetricError):
    pass


class InvalidSpin(StatemetricError):
    pass


class BadNormalization(StatemetricError):
    pass


class TruncationTooSmall(StatemetricError):
    pass


class BadVariant(StatemetricError):
    pass


class UnknownModel(StatemetricError):
    pass


class ManifestError(StatemetricError):
    """Structural problem in a manifest file; message carries the field path."""
