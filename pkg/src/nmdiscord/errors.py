"""Exception hierarchy shared by all modules."""


class NMDiscordError(Exception):
    pass


class InvalidStateError(NMDiscordError, ValueError):
    """Matrix is not a valid density operator (or X state) within tolerance."""


class DimensionMismatchError(NMDiscordError, ValueError):
    pass


class DomainError(NMDiscordError, ValueError):
    """Argument outside the domain of the operation (negative time, C > 1, ...)."""


class UnsupportedRegimeError(NMDiscordError, ValueError):
    pass


class IntegrationError(NMDiscordError, RuntimeError):
    """Numerical integration drifted outside its health bounds.

    ``time`` is the recorded time at which the violation was detected.
    """

    def __init__(self, message: str, time: float | None = None):
        super().__init__(message)
        self.time = time
