"""Exception types shared across the library.

``ArgumentError`` flags inputs that are malformed on their face (wrong
shape, negative order, unparsable file).  ``AssumptionError`` flags inputs
that are well formed but fail a mathematical hypothesis discovered during
the computation (not power bounded, range inclusion fails, no positive
definite fixed point).  ``IdentityCheckError`` is reserved for internal
cross-checks of identities that are supposed to hold for every valid
input; seeing one means a bug or a genuinely inconsistent input, never a
routine user error.
"""


class OpslabError(Exception):
    """Base class for all library errors."""


class ArgumentError(OpslabError):
    """Raised when an argument is structurally invalid."""


class AssumptionError(OpslabError):
    """Raised when a mathematical hypothesis fails on otherwise valid input."""


class IdentityCheckError(OpslabError):
    """Raised when an internal identity cross-check fails."""


class MatrixFormatError(ArgumentError):
    """Raised when matrix/conjugation JSON does not match the schema."""
