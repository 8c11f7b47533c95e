"""Exception types raised across the package."""


class AInftyError(Exception):
    """Base class; the CLI maps these to exit code 2."""


class CompositionNotZero(AInftyError):
    pass


class NotComposable(AInftyError):
    pass


class ArityExceeded(AInftyError):
    pass


class DegreeMismatch(AInftyError):
    pass


class DifferentialNotSquareZero(AInftyError):
    pass


class NotACycle(AInftyError):
    pass


class NotRepresentableAtLengthK(AInftyError):
    pass


class SubadditivityViolated(AInftyError):
    pass


class SourceTargetMismatch(AInftyError):
    pass


class UnitNotFound(AInftyError):
    pass


class NonTerminating(AInftyError):
    pass


class NotASubcomplex(AInftyError):
    pass


class InvalidModel(AInftyError):
    pass


class MissingCoveringArc(AInftyError):
    pass


class FormatError(AInftyError):
    """Malformed interchange file."""
