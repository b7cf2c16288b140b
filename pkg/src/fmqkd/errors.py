"""Exception types raised by the fmqkd library."""


class FMQKDError(Exception):
    """Base class for all library errors."""


class NotHermitian(FMQKDError, ValueError):
    pass


class NotPSD(FMQKDError, ValueError):
    pass


class DegenerateStateSpace(FMQKDError):
    """The signal states span fewer than three dimensions.

    Raised when the density operator of Alice's ensemble is rank deficient,
    which happens when the encoded-path mirror is perfect.
    """


class NumericalInconsistency(FMQKDError, ArithmeticError):
    pass


class DomainError(FMQKDError, ValueError):
    pass


class ConfigError(FMQKDError, ValueError):
    pass
