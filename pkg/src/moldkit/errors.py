"""Exception hierarchy shared by the whole package.

The CLI maps these onto exit codes: InputError -> 2, DomainError -> 1,
ResourceLimitError -> 3. InternalInvariantError signals a broken internal
postcondition and is deliberately not caught anywhere.
"""


class MoldkitError(Exception):
    """Base class for all package errors."""

    code = "error"


class InputError(MoldkitError):
    """Malformed or inconsistent input (mixed fields, bad dimensions, parse errors)."""

    code = "input"


class DomainError(MoldkitError):
    """Input is well-formed but outside the operation's domain."""

    code = "domain"


class SingularMatrixError(DomainError):
    """Inversion of a matrix with zero determinant."""

    code = "singular"


class NotBorelError(DomainError):
    """Operation requires a representation with Borel mold."""

    code = "not_borel"


class UnsupportedCaseError(DomainError):
    """Deliberately unimplemented case (e.g. invariant subspaces of a
    non-parabolic mold over Q)."""

    code = "unsupported"


class WordSearchExhaustedError(DomainError):
    """No word set satisfying the pivot condition was found within the
    configured length bound."""

    code = "word_search_exhausted"

    def __init__(self, max_len):
        super().__init__(
            f"no admissible word set found with words of length <= {max_len}"
        )
        self.max_len = max_len


class UndecidedError(DomainError):
    """Equivalence could not be decided within the configured bounds."""

    code = "undecided"


class ResourceLimitError(MoldkitError):
    """Search space exceeds the configured resource guard."""

    code = "resource_limit"

    def __init__(self, message, search_space):
        super().__init__(message)
        self.search_space = search_space


class InternalInvariantError(MoldkitError):
    """A structural postcondition failed; indicates a bug or malformed mold."""

    code = "internal"
