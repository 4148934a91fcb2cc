"""Exception types shared across the package.

ConfigError maps to CLI exit code 1, DataError and its subclasses to exit
code 2. Partial grid failures are reported per cell and mapped to exit 3 by
the CLI itself.
"""

from __future__ import annotations


class DomainWordsError(Exception):
    """Base class for all package errors."""


class ConfigError(DomainWordsError):
    """Invalid configuration or unusable combination of options."""


class DataError(DomainWordsError):
    """Input data cannot be ingested or is inconsistent."""


class IngestionError(DataError):
    """Corpus file or document set is malformed."""


class VocabMismatchError(DataError):
    """A model or ranking is bound to a different vocabulary."""


class ModelFormatError(DataError):
    """Embedding model file is truncated or not in the expected format."""


class DegenerateGeometryError(DataError):
    """Hyperplane construction failed (identical centroids)."""


class DivergenceError(DataError):
    """Iterative training produced non-finite values."""
