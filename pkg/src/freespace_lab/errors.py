"""Exception hierarchy.

Every error raised on purpose by the library derives from ``FreespaceError``
(itself a ``ValueError``) and carries a short machine-readable ``code``.
"""

from __future__ import annotations


class FreespaceError(ValueError):
    code = "error"


class InvalidPair(FreespaceError):
    code = "invalid-pair"


class InvalidParameter(FreespaceError):
    code = "invalid-parameter"


class InvalidGallery(FreespaceError):
    code = "invalid-gallery"


class EmptySpace(FreespaceError):
    code = "empty-space"


class SpaceMismatch(FreespaceError):
    code = "space-mismatch"


class TooLarge(FreespaceError):
    code = "too-large"


class DegenerateInput(FreespaceError):
    code = "degenerate-input"


class MalformedInput(FreespaceError):
    """Bad file contents; ``path`` names the offending JSON location."""

    code = "malformed-input"

    def __init__(self, message: str, path: str = "$"):
        super().__init__(f"{path}: {message}")
        self.path = path


class ConsistencyError(AssertionError):
    """An internal cross-check between two independent routes disagreed."""
