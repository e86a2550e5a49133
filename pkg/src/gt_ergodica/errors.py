"""Exception types shared across the package.

The command line layer maps these onto process exit codes, so library
code should raise the most specific type that applies rather than a
bare ValueError.
"""

from __future__ import annotations


class GTError(Exception):
    """Base class for all package errors."""


class ParseError(GTError):
    """Raised when textual input (signatures, paths, theta specs) is malformed."""


class DomainError(GTError):
    """Raised when well-formed input violates a mathematical precondition.

    Examples: a non-monotone signature, a path step that fails to
    interlace, a q outside (0, 1), or a tail description that the
    classifier does not admit.
    """


class ContractViolationError(GTError):
    """Raised when an internal cross-check fails.

    These guard identities that must hold exactly (normalizations,
    bijections, determinant factorizations).  Seeing one means a bug,
    not bad user input.
    """
