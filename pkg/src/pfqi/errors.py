"""Exception hierarchy.

``ConfigError`` covers anything wrong with user input documents and maps to
CLI exit code 2; ``DomainError`` covers numerical/physical domain violations
and maps to exit code 3.
"""


class ConfigError(ValueError):
    """Missing field, bad unit or invariant violation in a config document."""

    def __init__(self, field, message):
        self.field = field
        super().__init__(f"{field}: {message}")


class DomainError(ValueError):
    pass


class InvalidSpeedError(DomainError):
    pass


class GalileanRegimeError(DomainError):
    pass


class DegenerateBaselineError(DomainError):
    pass


class NotSpaceLikeError(DomainError):
    pass


class WindowTooLongError(DomainError):
    pass


class TooShortError(DomainError):
    pass


class EpochOutOfRangeError(DomainError):
    pass
