"""Exception types shared across the package.

Predicates in this library return False only for a genuine negative answer.
A malformed or out-of-domain input never returns False; it raises one of the
exceptions below instead.
"""


class ForcelabError(Exception):
    """Base class for every error raised by this package."""


class InputError(ForcelabError, ValueError):
    """A value fails structural validation (unknown label, malformed partition, ...)."""


class PreconditionError(InputError):
    """An operation's stated precondition does not hold for the given input."""


class ConstructionError(ForcelabError):
    """A construction whose output is asserted correct failed its own checks.

    Carries an optional machine-readable certificate describing the failure.
    """

    def __init__(self, message, certificate=None):
        super().__init__(message)
        self.certificate = certificate


class ParseError(ForcelabError):
    """A text-format error with position and a stable diagnostic code."""

    def __init__(self, message, line, column, code):
        super().__init__(f"{line}:{column}: {code}: {message}")
        self.line = line
        self.column = column
        self.code = code
