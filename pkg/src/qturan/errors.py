"""Exception hierarchy shared by every module of the package."""


class QTuranError(Exception):
    """Base class for all errors raised by qturan."""


class DomainError(QTuranError, ValueError):
    """An argument lies outside the documented domain of a function."""


class OutOfConvergenceDomain(DomainError):
    """The series does not converge at the requested argument."""


class NonTerminating(OutOfConvergenceDomain):
    """A series that only converges when it terminates was given non-terminating parameters."""


class PoleParameter(DomainError):
    """A lower (denominator) parameter makes some Pochhammer factor vanish."""


class BackendError(QTuranError, TypeError):
    """The requested arithmetic backend cannot represent the inputs exactly."""


class NoGeometricBound(QTuranError, ArithmeticError):
    """No eventual term-ratio bound below one could be established within ``n_max`` terms."""


class SeriesOverflow(QTuranError, OverflowError):
    """Terms became non-finite in the floating backend."""


class PrecisionExhausted(QTuranError, ArithmeticError):
    """Cancellation could not be resolved within the maximum working precision."""


class HypothesisViolation(QTuranError, ValueError):
    """Input sequences do not satisfy the hypothesis of the lemma being checked."""
