"""Exception types raised by the qlim routines."""


class QlimError(ValueError):
    """Base class for every error raised by this package."""


class NonFinite(QlimError):
    pass


class NotHermitian(QlimError):
    pass


class NotPSD(QlimError):
    pass


class NotUnitary(QlimError):
    pass


class NotSquare(QlimError):
    pass


class BadConfig(QlimError):
    pass


class BadBinding(QlimError):
    pass


class GaugeResidual(QlimError):
    """The purification pair failed to diagonalise the overlap matrix."""


class SupportMismatch(QlimError):
    """Purifications at the two parameter values span different column spaces."""


class SupportLeak(QlimError):
    """The state derivative has weight outside the support of the state."""


class SingularOutcome(QlimError):
    """A zero-probability outcome carries a nonzero probability derivative.

    The Fisher information contribution of such an outcome diverges, so this
    signals a genuine feature of the measurement rather than a numerical bug.
    """
