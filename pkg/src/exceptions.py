"""
Exceptions
Error hierarchy shared by the library modules and the CLI runner.

InputError subclasses map to exit code 1, InvariantViolation subclasses to exit code 2.
"""


class DesignAnalysisError(Exception):
    """Base class for all analysis errors"""


class InputError(DesignAnalysisError, ValueError):
    """Malformed or unsupported input"""


class InvariantViolation(DesignAnalysisError, AssertionError):
    """An internal consistency check failed"""


# Input errors

class MixedRadicands(InputError):
    """Two irrational quadratic numbers with different radicands met"""


class DesignFormatError(InputError):
    """Design file is structurally malformed"""


class NotSymmetric(InputError):
    pass


class BadDiagonal(InputError):
    pass


class EntryOutOfRange(InputError):
    pass


class DuplicatePoint(InputError):
    pass


class NotUnitVector(InputError):
    pass


class DimensionMismatch(InputError):
    pass


class UnsupportedPolygon(InputError):
    pass


class InadmissibleGeometry(InputError):
    """(rank, degree) is not a projective space over R, C, H or O, nor a sphere"""


class NotTight(InputError):
    """Operation needs a tight design"""


class SchemeNotClosed(InputError):
    """Adjacency classes are not closed under multiplication"""


# Invariant violations

class RankMismatch(InvariantViolation):
    """Closed-form, trace and elimination ranks disagree"""


class BoundViolation(InvariantViolation):
    """Strength exceeds the absolute bound 2s - eps"""


class NonIntegralRank(InvariantViolation):
    """A harmonic dimension Q_i(1) is not a positive integer"""


class IdempotentCheckFailed(InvariantViolation):
    """Orthogonality or completeness of the idempotents failed"""
