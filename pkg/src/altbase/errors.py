"""Exception types shared across the package."""


class AltBaseError(Exception):
    """Base class for all altbase errors."""


class DomainError(AltBaseError):
    """A point lies outside the domain of the requested transformation."""


class AlphabetError(AltBaseError):
    """A digit exceeds the alphabet bound of its position."""


class SearchTooLarge(AltBaseError):
    """An exhaustive enumeration would exceed the configured size bound."""


class SingularSystem(AltBaseError):
    """The density linear system is singular or too ill-conditioned to trust."""


class TruncationTooShallow(AltBaseError):
    """The requested series truncation depth cannot reach the target accuracy."""


class NotAllowable(AltBaseError):
    """The digit set violates the maximal-gap condition required for expansions."""


class ParseError(AltBaseError):
    """Malformed input expression.

    Carries the 0-based offset of the offending character in ``position``.
    """

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position
