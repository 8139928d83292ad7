"""Exception hierarchy shared by all qw1d modules."""


class QW1DError(Exception):
    """Base class for every error raised by qw1d."""


class NonOrthonormal(QW1DError):
    pass


class PhaseConstraintViolation(QW1DError):
    pass


class WindowTooSmall(QW1DError):
    pass


class NotInClass(QW1DError):
    pass


class InternalInconsistency(QW1DError):
    """A built-in self check (gauge identity, tail periodicity) failed."""


class NotUnitState(QW1DError):
    pass


class ClassMismatch(QW1DError):
    pass


class DegenerateParameters(QW1DError):
    """Some radial parameter sits at 0 or 1, outside the uniqueness regime."""


class InvalidWitness(QW1DError):
    pass


class ParseError(QW1DError):
    pass


class ValidationError(QW1DError):
    pass
