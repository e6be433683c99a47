"""Exception hierarchy shared by every module."""


class LatvaError(Exception):
    """Base class."""


class ConfigError(LatvaError, ValueError):
    """Bad user input: malformed literal, wrong dimensions, bad flags."""


class RingMismatchError(LatvaError, ValueError):
    pass


class NotInvertibleError(LatvaError, ArithmeticError):
    pass


class DomainError(LatvaError, ValueError):
    """Argument has the wrong shape for log/exp style expansions."""


class TruncationError(LatvaError):
    """A requested coefficient cannot be certified at the current truncation."""


class DegenerateLatticeError(LatvaError, ValueError):
    pass


class CocycleMismatch(LatvaError):
    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class NotEigenvectorError(LatvaError):
    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness
