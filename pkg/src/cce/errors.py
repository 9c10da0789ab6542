"""Shared exception base class.

Every data/format error raised by this package subclasses :class:`CceError`
so callers (and the CLI exit-code mapping) can catch one type.
"""


class CceError(Exception):
    """Base class for all corpus, glossary, model and matcher errors."""
